#include "tiertrace/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tiertrace {

uint64_t footprint(const Workload& wl) {
  if (wl.records.empty()) throw EmptyWorkload();
  uint64_t fp = 0;
  for (const auto& r : wl.records) fp = std::max(fp, r.end_offset());
  return fp;
}

WorkloadSummary summarize(const Workload& wl) {
  if (wl.records.empty()) throw EmptyWorkload();
  WorkloadSummary s;
  s.volume_id = wl.volume_id;
  s.first_ts_us = wl.records.front().timestamp_us;
  s.last_ts_us = wl.records.front().timestamp_us;
  for (const auto& r : wl.records) {
    if (r.direction == Direction::Read) {
      ++s.read_count;
      s.read_bytes += r.length_bytes;
    } else {
      ++s.write_count;
      s.write_bytes += r.length_bytes;
    }
    s.footprint_bytes = std::max(s.footprint_bytes, r.end_offset());
    s.first_ts_us = std::min(s.first_ts_us, r.timestamp_us);
    s.last_ts_us = std::max(s.last_ts_us, r.timestamp_us);
  }
  s.total_count = s.read_count + s.write_count;
  return s;
}

uint64_t metric_count(const WorkloadSummary& s, CountMetric metric) {
  switch (metric) {
    case CountMetric::Read:
      return s.read_count;
    case CountMetric::Write:
      return s.write_count;
    default:
      return s.total_count;
  }
}

std::vector<std::string> select_top_workloads(const std::vector<WorkloadSummary>& summaries,
                                              double fraction, CountMetric metric) {
  if (summaries.empty()) return {};
  std::vector<const WorkloadSummary*> order;
  order.reserve(summaries.size());
  uint64_t grand_total = 0;
  for (const auto& s : summaries) {
    order.push_back(&s);
    grand_total += metric_count(s, metric);
  }
  std::sort(order.begin(), order.end(), [metric](const WorkloadSummary* a, const WorkloadSummary* b) {
    uint64_t ca = metric_count(*a, metric);
    uint64_t cb = metric_count(*b, metric);
    if (ca != cb) return ca > cb;
    return a->volume_id < b->volume_id;
  });

  double target = fraction * static_cast<double>(grand_total);
  std::vector<std::string> selected;
  uint64_t cum = 0;
  for (const auto* s : order) {
    selected.push_back(s->volume_id);
    cum += metric_count(*s, metric);
    if (static_cast<double>(cum) > target) return selected;
  }
  return selected;  // fraction so high no prefix strictly exceeds it
}

std::vector<uint64_t> default_histogram_bounds() {
  return {4096, 8192, 16384, 32768, 65536};
}

SizeHistogram io_size_histogram(const Workload& wl, const std::vector<uint64_t>& bucket_bounds) {
  for (size_t i = 1; i < bucket_bounds.size(); ++i) {
    if (bucket_bounds[i] <= bucket_bounds[i - 1])
      throw std::invalid_argument("bucket bounds must be strictly increasing");
  }
  SizeHistogram h;
  h.bucket_bounds = bucket_bounds;
  h.counts.assign(bucket_bounds.size() + 1, 0);
  for (const auto& r : wl.records) {
    auto it = std::lower_bound(bucket_bounds.begin(), bucket_bounds.end(), r.length_bytes);
    ++h.counts[static_cast<size_t>(it - bucket_bounds.begin())];
  }
  return h;
}

void write_summary_csv_header(std::ostream& out) {
  out << "volume_id,read_count,write_count,total_count,read_bytes,write_bytes,"
         "footprint_bytes,first_ts_us,last_ts_us\n";
}

void write_summary_csv_row(std::ostream& out, const WorkloadSummary& s) {
  out << s.volume_id << ',' << s.read_count << ',' << s.write_count << ',' << s.total_count << ','
      << s.read_bytes << ',' << s.write_bytes << ',' << s.footprint_bytes << ',' << s.first_ts_us
      << ',' << s.last_ts_us << '\n';
}

}  // namespace tiertrace
