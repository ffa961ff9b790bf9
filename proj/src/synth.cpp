#include "tiertrace/synth.hpp"

#include <algorithm>

namespace tiertrace {

void SynthSpec::validate() const {
  if (request_rate < 1) throw InvalidSpec("request_rate must be >= 1");
  if (duration_s < 1) throw InvalidSpec("duration_s must be >= 1");
  if (hot_share <= 0.0 || hot_share > 1.0) throw InvalidSpec("hot_share must be in (0,1]");
  if (footprint_bytes == 0) throw InvalidSpec("footprint_bytes must be positive");
  if (io_size_bytes == 0) throw InvalidSpec("io_size_bytes must be positive");
  if (io_size2_prob < 0.0 || io_size2_prob > 1.0) throw InvalidSpec("io_size2_prob must be in [0,1]");
  if (io_size2_prob > 0.0 && io_size2_bytes == 0)
    throw InvalidSpec("io_size2_bytes must be positive when io_size2_prob > 0");
  if (write_fraction < 0.0 || write_fraction > 1.0)
    throw InvalidSpec("write_fraction must be in [0,1]");
  if (dwell_slices < 1) throw InvalidSpec("dwell_slices must be >= 1");
  if (slice_s < 1) throw InvalidSpec("slice_s must be >= 1");
  if (macro_page_bytes == 0) throw InvalidSpec("macro_page_bytes must be positive");
  uint64_t pages = (footprint_bytes + macro_page_bytes - 1) / macro_page_bytes;
  if (hot_page >= pages) throw InvalidSpec("hot_page lies beyond the footprint");
  uint64_t max_io = io_size2_prob > 0.0 ? std::max(io_size_bytes, io_size2_bytes) : io_size_bytes;
  if (max_io > footprint_bytes) throw InvalidSpec("io size exceeds footprint");
}

uint64_t hot_page_for_slice(const SynthSpec& spec, uint64_t slice_index) {
  uint64_t pages = (spec.footprint_bytes + spec.macro_page_bytes - 1) / spec.macro_page_bytes;
  uint64_t epoch = slice_index / spec.dwell_slices;
  switch (spec.movement) {
    case HotRegionMovement::Fixed:
      return spec.hot_page;
    case HotRegionMovement::Step:
      return (spec.hot_page + epoch) % pages;
    case HotRegionMovement::RandomJump:
      // Closed-form per-epoch draw so the hot-page sequence is independent of
      // the request stream.
      return SplitMix64(spec.seed ^ (epoch + 0x51ed2701ull)).next() % pages;
  }
  return spec.hot_page;
}

Workload generate(const SynthSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  Workload wl;
  wl.volume_id = spec.volume_id;
  const uint64_t n = static_cast<uint64_t>(spec.duration_s) * spec.request_rate;
  wl.records.reserve(n);
  const int64_t slice_us = static_cast<int64_t>(spec.slice_s) * 1000000;

  for (uint64_t i = 0; i < n; ++i) {
    TraceRecord r;
    r.volume_id = spec.volume_id;
    r.timestamp_us = static_cast<int64_t>(i * 1000000ull / spec.request_rate);
    uint64_t slice = static_cast<uint64_t>(r.timestamp_us / slice_us);
    uint64_t hot = hot_page_for_slice(spec, slice);

    r.length_bytes = spec.io_size_bytes;
    if (spec.io_size2_prob > 0.0 && rng.next_unit() < spec.io_size2_prob)
      r.length_bytes = spec.io_size2_bytes;
    r.direction =
        (spec.write_fraction > 0.0 && rng.next_unit() < spec.write_fraction) ? Direction::Write
                                                                             : Direction::Read;

    const uint64_t hot_start = hot * spec.macro_page_bytes;
    const uint64_t hot_end = std::min(hot_start + spec.macro_page_bytes, spec.footprint_bytes);
    const uint64_t hot_len = hot_end - hot_start;
    uint64_t offset;
    if (rng.next_unit() < spec.hot_share || hot_len == spec.footprint_bytes) {
      offset = hot_start + rng.next_below(hot_len);
    } else {
      // Uniform over the footprint minus the hot page.
      uint64_t v = rng.next_below(spec.footprint_bytes - hot_len);
      offset = v < hot_start ? v : v + hot_len;
    }
    // Keep the request inside the footprint and attributed to its page.
    offset -= offset % r.length_bytes;
    if (offset + r.length_bytes > spec.footprint_bytes)
      offset = spec.footprint_bytes - r.length_bytes;
    r.offset_bytes = offset;
    wl.records.push_back(std::move(r));
  }
  return wl;
}

}  // namespace tiertrace
