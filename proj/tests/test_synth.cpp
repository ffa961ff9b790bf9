#include <sstream>

#include "doctest.h"
#include "tiertrace/concentration.hpp"
#include "tiertrace/synth.hpp"
#include "tiertrace/trace.hpp"

using namespace tiertrace;

TEST_CASE("same seed reproduces the identical record sequence") {
  SynthSpec spec;
  spec.seed = 31337;
  spec.duration_s = 45;
  spec.request_rate = 80;
  spec.io_size2_prob = 0.3;
  spec.io_size2_bytes = 16384;
  spec.write_fraction = 0.4;
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(a.records == b.records);
  spec.seed = 31338;
  CHECK(generate(spec).records != a.records);
}

TEST_CASE("degenerate share 1.0 puts every request in the hot macro page") {
  SynthSpec spec;
  spec.seed = 1;
  spec.duration_s = 30;
  spec.request_rate = 40;
  spec.footprint_bytes = 8ull << 30;
  spec.hot_page = 3;
  spec.hot_share = 1.0;
  for (const auto& r : generate(spec).records)
    CHECK(r.offset_bytes / kMacroPageBytes == 3);
}

TEST_CASE("fixed hot page at share 0.9 is judged concentrated in every slice") {
  SynthSpec spec;
  spec.seed = 6;
  spec.duration_s = 150;  // 10 slices
  spec.request_rate = 100;
  spec.footprint_bytes = 16ull << 30;
  spec.hot_page = 5;
  spec.hot_share = 0.9;
  auto slices = slice_page_counts(generate(spec));
  REQUIRE(slices.size() == 10);
  for (const auto& s : slices) {
    REQUIRE(!s.empty());
    auto set = concentrated_pages(s);
    CHECK(set.pages == std::vector<uint64_t>{5});
  }
}

TEST_CASE("step movement with dwell 1 yields the closed-form judgment ratio") {
  SynthSpec spec;
  spec.seed = 12;
  spec.request_rate = 60;
  spec.hot_share = 1.0;
  spec.movement = HotRegionMovement::Step;
  spec.dwell_slices = 1;

  // 20 pages over 20 slices: each page judged in exactly 1 of 20 slices.
  spec.duration_s = 20 * 15;
  spec.footprint_bytes = 20ull << 30;
  auto preds = classify_predictability(slice_page_counts(generate(spec)));
  REQUIRE(preds.size() == 20);
  for (const auto& p : preds) {
    CHECK(p.concentration_judgments == 1);
    CHECK(p.judgment_ratio == doctest::Approx(1.0 / 20.0));
    CHECK(!p.unpredictable);  // 0.05 is not < 0.05
  }

  // 21 pages over 21 slices: ratio 1/21 < 5%, all unpredictable.
  spec.duration_s = 21 * 15;
  spec.footprint_bytes = 21ull << 30;
  auto preds21 = classify_predictability(slice_page_counts(generate(spec)));
  REQUIRE(preds21.size() == 21);
  for (const auto& p : preds21) {
    CHECK(p.judgment_ratio == doctest::Approx(1.0 / 21.0));
    CHECK(p.unpredictable);
  }
}

TEST_CASE("realized hot share tracks the configured share") {
  SynthSpec spec;
  spec.seed = 40;
  spec.duration_s = 60;
  spec.request_rate = 500;
  spec.footprint_bytes = 10ull << 30;
  spec.hot_page = 2;
  spec.hot_share = 0.7;
  auto wl = generate(spec);
  uint64_t hot = 0;
  for (const auto& r : wl.records)
    hot += r.offset_bytes / kMacroPageBytes == 2 ? 1 : 0;
  double realized = static_cast<double>(hot) / static_cast<double>(wl.records.size());
  CHECK(realized == doctest::Approx(0.7).epsilon(0.05));
}

TEST_CASE("random movement draws a deterministic page sequence") {
  SynthSpec spec;
  spec.seed = 55;
  spec.footprint_bytes = 32ull << 30;
  spec.movement = HotRegionMovement::RandomJump;
  spec.dwell_slices = 2;
  CHECK(hot_page_for_slice(spec, 0) == hot_page_for_slice(spec, 1));  // same dwell epoch
  CHECK(hot_page_for_slice(spec, 4) == hot_page_for_slice(spec, 5));
  for (uint64_t s = 0; s < 50; ++s)
    CHECK(hot_page_for_slice(spec, s) < 32);
}

TEST_CASE("invalid specs are rejected") {
  SynthSpec spec;
  spec.hot_share = 0.0;
  CHECK_THROWS_AS((void)generate(spec), InvalidSpec);
  spec = SynthSpec{};
  spec.request_rate = 0;
  CHECK_THROWS_AS((void)generate(spec), InvalidSpec);
  spec = SynthSpec{};
  spec.hot_page = 99;  // beyond the default 4 GiB footprint
  CHECK_THROWS_AS((void)generate(spec), InvalidSpec);
}

TEST_CASE("generated traces round-trip through the default schema") {
  SynthSpec spec;
  spec.seed = 77;
  spec.duration_s = 20;
  spec.request_rate = 25;
  auto wl = generate(spec);
  std::stringstream buf;
  write_trace(buf, wl.records, TraceSchema{});
  auto reparsed = parse_trace_all(buf, TraceSchema{}, true);
  CHECK(reparsed == wl.records);
}
