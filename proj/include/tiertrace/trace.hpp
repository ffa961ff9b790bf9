#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tiertrace {

enum class Direction { Read, Write };

// One block IO request: timestamp, volume, direction, offset, length.
struct TraceRecord {
  int64_t timestamp_us = 0;
  std::string volume_id;
  Direction direction = Direction::Read;
  uint64_t offset_bytes = 0;
  uint64_t length_bytes = 0;

  uint64_t end_offset() const { return offset_bytes + length_bytes; }

  bool operator==(const TraceRecord&) const = default;
};

// The trace of one volume, records ordered by timestamp.
struct Workload {
  std::string volume_id;
  std::vector<TraceRecord> records;
};

enum class TimeUnit { Microseconds, Milliseconds, Seconds };

// Column layout of a delimiter-separated trace file. The default matches
// `timestamp,volume_id,direction,offset,length` with R/W direction tokens.
struct TraceSchema {
  char delimiter = ',';
  int timestamp_col = 0;
  int volume_col = 1;
  int direction_col = 2;
  int offset_col = 3;
  int length_col = 4;
  TimeUnit time_unit = TimeUnit::Microseconds;
  // Multiplier applied to offset and length (512 for sector-addressed traces).
  uint64_t offset_unit_bytes = 1;

  // Throws std::invalid_argument unless all five columns are distinct and
  // non-negative.
  void validate() const;

  // Reads a key=value schema file; unknown keys are rejected.
  static TraceSchema from_file(const std::string& path);
};

class MalformedLine : public std::runtime_error {
 public:
  MalformedLine(uint64_t line, const std::string& why);
  uint64_t line_number;
};

class EmptyWorkload : public std::invalid_argument {
 public:
  EmptyWorkload() : std::invalid_argument("workload has no records") {}
};

struct ParseStats {
  uint64_t lines = 0;
  uint64_t parsed = 0;
  uint64_t malformed = 0;
};

// Streaming parse: calls sink once per well-formed record, in file order.
// Malformed lines are counted (and reported via `errors` when given); under
// strict mode the first malformed line throws MalformedLine instead.
ParseStats parse_trace(std::istream& in, const TraceSchema& schema,
                       const std::function<void(const TraceRecord&)>& sink,
                       bool strict = false,
                       std::vector<std::pair<uint64_t, std::string>>* errors = nullptr);

// Convenience eager form.
std::vector<TraceRecord> parse_trace_all(std::istream& in, const TraceSchema& schema,
                                         bool strict = false, ParseStats* stats = nullptr);

// Partitions records by volume id. Partition is exact (every record lands in
// exactly one workload); each workload is stably sorted by timestamp.
std::map<std::string, Workload> split_by_volume(std::vector<TraceRecord> records);

// Serializes records back through the schema (inverse of parse_trace for
// lossless schemas).
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records,
                 const TraceSchema& schema);

// Opens a trace file for reading; transparently decompresses gzip (.gz).
std::unique_ptr<std::istream> open_trace_file(const std::string& path);

}  // namespace tiertrace
