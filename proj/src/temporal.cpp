#include "tiertrace/temporal.hpp"

#include <algorithm>
#include <cmath>

namespace tiertrace {

IntervalSeries interval_counts(const Workload& wl, uint32_t interval_s) {
  if (wl.records.empty()) throw EmptyWorkload();
  if (interval_s == 0) throw std::invalid_argument("interval_s must be >= 1");
  IntervalSeries series;
  series.interval_s = interval_s;
  series.origin_ts_us = wl.records.front().timestamp_us;
  const int64_t width_us = static_cast<int64_t>(interval_s) * 1000000;
  for (const auto& r : wl.records) {
    int64_t idx = (r.timestamp_us - series.origin_ts_us) / width_us;
    if (idx < 0) throw std::invalid_argument("record precedes workload origin (unsorted workload)");
    if (static_cast<size_t>(idx) >= series.counts.size()) series.counts.resize(idx + 1, 0);
    ++series.counts[static_cast<size_t>(idx)];
  }
  return series;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  double pos = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(pos));
  size_t hi = static_cast<size_t>(std::ceil(pos));
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw EmptySeries();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats b;
  b.min = sorted.front();
  b.max = sorted.back();
  b.lower_quartile = quantile(sorted, 0.25);
  b.median = quantile(sorted, 0.5);
  b.upper_quartile = quantile(sorted, 0.75);
  return b;
}

BoxStats box_stats(std::span<const uint64_t> values) {
  std::vector<double> v(values.begin(), values.end());
  return box_stats(std::span<const double>(v));
}

}  // namespace tiertrace
