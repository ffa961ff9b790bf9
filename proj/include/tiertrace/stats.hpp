#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "tiertrace/trace.hpp"

namespace tiertrace {

struct WorkloadSummary {
  std::string volume_id;
  uint64_t read_count = 0;
  uint64_t write_count = 0;
  uint64_t total_count = 0;
  uint64_t read_bytes = 0;
  uint64_t write_bytes = 0;
  uint64_t footprint_bytes = 0;
  int64_t first_ts_us = 0;
  int64_t last_ts_us = 0;
};

// Which access count drives top-workload selection.
enum class CountMetric { Read, Write, ReadWrite };

struct SizeHistogram {
  // Upper bounds in bytes; one extra open bucket at the end catches the rest.
  std::vector<uint64_t> bucket_bounds;
  std::vector<uint64_t> counts;  // size = bucket_bounds.size() + 1
};

// Furthest byte touched by any request, used as the volume-size proxy.
uint64_t footprint(const Workload& wl);

WorkloadSummary summarize(const Workload& wl);

// Minimal prefix of summaries (sorted descending by metric, ties by volume_id
// ascending) whose cumulative count strictly exceeds fraction * grand total.
// Returns all volumes if no prefix exceeds (fraction = 1.0).
std::vector<std::string> select_top_workloads(const std::vector<WorkloadSummary>& summaries,
                                              double fraction, CountMetric metric);

// Default bounds: 4 KiB .. 64 KiB doubling.
std::vector<uint64_t> default_histogram_bounds();

SizeHistogram io_size_histogram(const Workload& wl, const std::vector<uint64_t>& bucket_bounds);

uint64_t metric_count(const WorkloadSummary& s, CountMetric metric);

void write_summary_csv_header(std::ostream& out);
void write_summary_csv_row(std::ostream& out, const WorkloadSummary& s);

}  // namespace tiertrace
