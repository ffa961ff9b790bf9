// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 12 needs a real full-scale dataset and is skipped unless
// TIERTRACE_DATASET1_DIR points at one.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <unordered_set>
#include <vector>

#include "arc_oracle.hpp"
#include "tiertrace/cache.hpp"
#include "tiertrace/concentration.hpp"
#include "tiertrace/stats.hpp"
#include "tiertrace/synth.hpp"
#include "tiertrace/temporal.hpp"
#include "tiertrace/tiering.hpp"
#include "tiertrace/trace.hpp"

using namespace tiertrace;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& name, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

std::vector<PageAccess> random_trace(uint64_t seed, size_t n, uint64_t distinct) {
  SplitMix64 rng(seed);
  std::vector<PageAccess> out;
  for (size_t i = 0; i < n; ++i) out.push_back({rng.next_below(distinct), Direction::Read});
  return out;
}

// 1. LRU inclusion: hit count non-decreasing in capacity and hit set at c a
// subset of that at c+1, over 100 seeded random traces.
void criterion_1() {
  bool ok = true;
  for (uint64_t seed = 1; seed <= 100 && ok; ++seed) {
    auto trace = random_trace(seed, 1000, 50);
    std::vector<uint8_t> prev, cur;
    uint64_t prev_hits = simulate(trace, {4096, 1, CacheAlgorithm::LRU}, &prev).hits;
    for (uint64_t c = 2; c <= 50 && ok; ++c) {
      uint64_t hits = simulate(trace, {4096, c, CacheAlgorithm::LRU}, &cur).hits;
      if (hits < prev_hits) ok = false;
      for (size_t i = 0; i < trace.size(); ++i) {
        if (prev[i] && !cur[i]) {
          ok = false;
          break;
        }
      }
      prev.swap(cur);
      prev_hits = hits;
    }
  }
  report(1, ok, "LRU inclusion property over 100 random traces");
}

// 2. Cold-miss identity at capacity >= distinct pages.
void criterion_2() {
  bool ok = true;
  for (uint64_t seed = 1; seed <= 20 && ok; ++seed) {
    auto trace = random_trace(seed * 31, 2000, 60);
    std::unordered_set<uint64_t> distinct;
    for (const auto& a : trace) distinct.insert(a.page_id);
    for (auto algo : {CacheAlgorithm::LRU, CacheAlgorithm::ARC}) {
      auto res = simulate(trace, {4096, 60, algo});
      if (res.hits != res.accesses - distinct.size()) ok = false;
    }
  }
  report(2, ok, "cold-miss identity at full capacity");
}

// 3 + 4. ARC oracle equivalence and structural invariants on the same runs.
void criteria_3_4() {
  bool equal = true;
  bool invariants = true;
  for (uint64_t cap : {4ull, 16ull, 64ull}) {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
      auto trace = random_trace(seed * 1000 + cap, 10000, 128);
      ArcCache prod(cap);
      arc_oracle::ArcOracle oracle(cap);
      for (const auto& a : trace) {
        if (prod.access(a.page_id) != oracle.access(a.page_id)) equal = false;
        if (prod.t1_size() + prod.t2_size() > cap) invariants = false;
        if (prod.t1_size() + prod.b1_size() > cap) invariants = false;
        if (prod.t1_size() + prod.t2_size() + prod.b1_size() + prod.b2_size() > 2 * cap)
          invariants = false;
        if (prod.target_t1() > cap) invariants = false;
      }
    }
  }
  report(3, equal, "ARC agrees with pseudocode transcription at capacities {4,16,64}");
  report(4, invariants, "ARC structural invariants at every step");
}

// 5. Concentration recovery from a fixed hot page at share 0.9 over 40 slices.
void criterion_5() {
  SynthSpec spec;
  spec.seed = 905;
  spec.duration_s = 40 * 15;
  spec.request_rate = 200;
  spec.footprint_bytes = 20ull << 30;
  spec.hot_page = 7;
  spec.hot_share = 0.9;
  auto slices = slice_page_counts(generate(spec));
  int exact = 0;
  for (const auto& s : slices) {
    if (!s.empty() && concentrated_pages(s).pages == std::vector<uint64_t>{7}) ++exact;
  }
  auto profile = top_page_share_profile(slices, 1);
  bool ok = slices.size() == 40 && exact >= 38 && profile[0] > 0.88 && profile[0] < 0.92;
  report(5, ok, "hot-page recovery over 40 slices",
         "exact slices=" + std::to_string(exact) +
             ", top-1 share=" + std::to_string(profile[0]));
}

// 6. Predictability boundary at the strict 5% threshold.
void criterion_6() {
  SynthSpec spec;
  spec.seed = 606;
  spec.request_rate = 60;
  spec.hot_share = 1.0;
  spec.movement = HotRegionMovement::Step;
  spec.dwell_slices = 1;

  bool ok = true;
  spec.duration_s = 20 * 15;
  spec.footprint_bytes = 20ull << 30;
  auto preds20 = classify_predictability(slice_page_counts(generate(spec)));
  if (preds20.size() != 20) ok = false;
  for (const auto& p : preds20) {
    if (p.concentration_judgments != 1 || p.unpredictable) ok = false;
  }
  spec.duration_s = 21 * 15;
  spec.footprint_bytes = 21ull << 30;
  auto preds21 = classify_predictability(slice_page_counts(generate(spec)));
  if (preds21.size() != 21) ok = false;
  for (const auto& p : preds21) {
    if (p.concentration_judgments != 1 || !p.unpredictable) ok = false;
  }
  report(6, ok, "judgment ratios 1/20 vs 1/21 flip across the strict 5% threshold");
}

// 7. Half-integration minimality over 1000 random slice-count maps.
void criterion_7() {
  SplitMix64 rng(707);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    SliceCounts slice;
    size_t n = 1 + rng.next_below(30);
    for (size_t i = 0; i < n; ++i) slice.counts[rng.next_below(128)] = 1 + rng.next_below(1000);
    auto set = concentrated_pages(slice);
    if (2 * set.covered_count <= set.total_count) ok = false;
    uint64_t without_last = set.covered_count - slice.counts.at(set.pages.back());
    if (2 * without_last > set.total_count) ok = false;
  }
  report(7, ok, "concentrated-set minimality on 1000 random slices");
}

// 8. Degenerate placements exact; capacity/budget invariants on dynamic runs.
void criterion_8() {
  TierConfig cfg;
  cfg.tier1_capacity_bytes = 2ull << 30;
  cfg.tier1_read_latency_us = cfg.tier1_write_latency_us = 100;
  cfg.tier2_read_latency_us = cfg.tier2_write_latency_us = 5000;
  cfg.migration_bandwidth_bytes_per_s = 256ull << 20;

  bool ok = true;
  std::string detail;
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    SynthSpec spec;
    spec.seed = seed;
    spec.duration_s = 90;
    spec.request_rate = 80;
    spec.footprint_bytes = 6ull << 30;
    spec.hot_share = 0.6 + 0.1 * static_cast<double>(seed % 4);
    spec.write_fraction = 0.25 * static_cast<double>(seed % 3);
    spec.movement = seed % 2 == 0 ? HotRegionMovement::RandomJump : HotRegionMovement::Fixed;
    auto wl = generate(spec);

    TieringOptions all_first;
    all_first.policy = PlacementPolicy::AllFirst;
    auto big = cfg;
    big.tier1_capacity_bytes = 8ull << 30;
    auto first = simulate_tiering({wl}, big, all_first);
    if (first.aggregate.tier1_served_fraction != 1.0) ok = false;
    for (const auto& iv : first.aggregate.intervals) {
      if (iv.requests > 0 && iv.mean_latency_us != 100.0) ok = false;
    }

    TieringOptions all_second;
    all_second.policy = PlacementPolicy::AllSecond;
    auto second = simulate_tiering({wl}, cfg, all_second);
    if (second.aggregate.mean_latency_us != 5000.0 || second.aggregate.bytes_migrated != 0)
      ok = false;

    TieringOptions dynamic;
    dynamic.policy = PlacementPolicy::DynamicPromotion;
    auto dyn = simulate_tiering({wl}, cfg, dynamic);
    int64_t resident = 0;
    for (const auto& iv : dyn.aggregate.intervals) {
      if (iv.promotions + iv.demotions > cfg.budget_units()) ok = false;
      resident += static_cast<int64_t>(iv.promotions) - static_cast<int64_t>(iv.demotions);
      if (resident < 0 ||
          static_cast<uint64_t>(resident) * cfg.promotion_unit_bytes > cfg.tier1_capacity_bytes)
        ok = false;
    }
    if (dyn.aggregate.mean_latency_us < 100.0 || dyn.aggregate.mean_latency_us > 5000.0)
      ok = false;
  }
  report(8, ok, "degenerate placements exact; dynamic runs capacity- and budget-safe");
}

// 9. DynamicPromotion effectiveness on the persistent hot region.
void criterion_9() {
  TierConfig cfg;
  cfg.tier1_capacity_bytes = 1ull << 30;  // one promotion unit
  cfg.tier1_read_latency_us = cfg.tier1_write_latency_us = 100;
  cfg.tier2_read_latency_us = cfg.tier2_write_latency_us = 5000;
  cfg.migration_bandwidth_bytes_per_s = 256ull << 20;

  SynthSpec spec;
  spec.seed = 909;
  spec.duration_s = 10 * 15;
  spec.request_rate = 100;
  spec.footprint_bytes = 8ull << 30;
  spec.hot_page = 2;
  spec.hot_share = 0.9;
  TieringOptions opt;
  opt.policy = PlacementPolicy::DynamicPromotion;
  auto out = simulate_tiering({generate(spec)}, cfg, opt);
  bool ok = out.aggregate.intervals.size() == 10;
  double worst = 1.0;
  for (size_t i = 1; i < out.aggregate.intervals.size(); ++i) {
    const auto& iv = out.aggregate.intervals[i];
    double frac = iv.requests == 0
                      ? 0
                      : static_cast<double>(iv.tier1_requests) / static_cast<double>(iv.requests);
    worst = std::min(worst, frac);
    if (frac < 0.85) ok = false;
  }
  report(9, ok, "tier1-served fraction >= 0.85 after warmup", "worst=" + std::to_string(worst));
}

// 10. Convergence search on the three hand-derived curves.
void criterion_10() {
  auto curve = [](std::vector<std::pair<double, double>> pts) {
    HitRatioCurve c;
    for (auto [f, r] : pts) {
      CacheResult res;
      res.accesses = 1000;
      res.hits = static_cast<uint64_t>(r * 1000);
      res.misses = res.accesses - res.hits;
      c.points.emplace_back(f, res);
    }
    return c;
  };
  auto a = convergence_point(curve({{0.01, 0.10}, {0.05, 0.40}, {0.10, 0.41}}), 2.0);
  auto b = convergence_point(curve({{0.01, 0.15}, {0.05, 0.15}, {0.10, 0.15}}), 2.0);
  auto c = convergence_point(curve({{0.01, 0.10}, {0.05, 0.30}, {0.10, 0.50}}), 2.0);
  bool ok = a.has_value() && *a == 0.05 && b.has_value() && *b == 0.01 && !c.has_value();
  report(10, ok, "convergence points 0.05 / 0.01 / none at epsilon 2pp");
}

// 11. Interval conservation and 30s = pairwise 15s sums on synth traces.
void criterion_11() {
  bool ok = true;
  for (uint64_t seed : {5ull, 6ull, 7ull}) {
    SynthSpec spec;
    spec.seed = seed;
    spec.duration_s = 120;
    spec.request_rate = 53;
    spec.footprint_bytes = 6ull << 30;
    spec.hot_share = 0.5;
    auto wl = generate(spec);
    auto fine = interval_counts(wl, 15);
    auto coarse = interval_counts(wl, 30);
    uint64_t sum = 0;
    for (auto c : fine.counts) sum += c;
    if (sum != wl.records.size()) ok = false;
    for (size_t i = 0; i < coarse.counts.size(); ++i) {
      uint64_t lo = fine.counts[2 * i];
      uint64_t hi = 2 * i + 1 < fine.counts.size() ? fine.counts[2 * i + 1] : 0;
      if (coarse.counts[i] != lo + hi) ok = false;
    }
  }
  report(11, ok, "interval conservation and coarsening");
}

// 12. Optional full-dataset check, driven by TIERTRACE_DATASET1_DIR.
void criterion_12() {
  const char* dir = std::getenv("TIERTRACE_DATASET1_DIR");
  if (dir == nullptr) {
    std::cout << "SKIP criterion 12: set TIERTRACE_DATASET1_DIR to run the dataset check"
              << std::endl;
    return;
  }
  std::map<std::string, WorkloadSummary> partial;
  TraceSchema schema;
  const char* schema_path = std::getenv("TIERTRACE_DATASET1_SCHEMA");
  if (schema_path != nullptr) schema = TraceSchema::from_file(schema_path);
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto in = open_trace_file(entry.path().string());
    (void)parse_trace(*in, schema, [&](const TraceRecord& r) {
      auto& s = partial[r.volume_id];
      s.volume_id = r.volume_id;
      if (r.direction == Direction::Read)
        ++s.read_count;
      else
        ++s.write_count;
      ++s.total_count;
    });
  }
  std::vector<WorkloadSummary> summaries;
  summaries.reserve(partial.size());
  for (auto& [id, s] : partial) summaries.push_back(s);
  auto selected = select_top_workloads(summaries, 0.5, CountMetric::ReadWrite);
  bool ok = summaries.size() == 3088 && selected.size() >= 36 && selected.size() <= 40;
  report(12, ok, "dataset1 discovers 3088 workloads, ~38 selected at 50%",
         std::to_string(summaries.size()) + " workloads, " + std::to_string(selected.size()) +
             " selected");
}

}  // namespace

int main() {
  auto start = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criteria_3_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << " (" << elapsed << " ms)" << std::endl;
  return failures == 0 ? 0 : 1;
}
