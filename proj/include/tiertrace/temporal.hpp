#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tiertrace/trace.hpp"

namespace tiertrace {

// Dense per-interval access counts, bucket 0 anchored at the workload's own
// first timestamp.
struct IntervalSeries {
  uint32_t interval_s = 15;
  int64_t origin_ts_us = 0;
  std::vector<uint64_t> counts;
};

// Five-number summary (whiskers are true min/max, not 1.5*IQR).
struct BoxStats {
  double min = 0;
  double lower_quartile = 0;
  double median = 0;
  double upper_quartile = 0;
  double max = 0;
};

class EmptySeries : public std::invalid_argument {
 public:
  EmptySeries() : std::invalid_argument("empty series") {}
};

IntervalSeries interval_counts(const Workload& wl, uint32_t interval_s = 15);

// Quartiles by linear interpolation between closest ranks.
BoxStats box_stats(std::span<const double> values);
BoxStats box_stats(std::span<const uint64_t> values);

}  // namespace tiertrace
