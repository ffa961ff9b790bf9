#include "tiertrace/trace.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tiertrace {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_u64(const std::string& s, uint64_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

// Timestamps in second/millisecond traces may carry a fractional part.
bool parse_timestamp(const std::string& s, TimeUnit unit, int64_t& out_us) {
  static constexpr std::array<int64_t, 3> factor = {1, 1000, 1000000};
  int64_t f = factor[static_cast<int>(unit)];
  if (s.find('.') == std::string::npos) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return false;
    out_us = v * f;
    return true;
  }
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) return false;
    out_us = static_cast<int64_t>(std::llround(v * static_cast<double>(f)));
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_direction(std::string tok, Direction& out) {
  std::transform(tok.begin(), tok.end(), tok.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (tok == "r" || tok == "read") {
    out = Direction::Read;
    return true;
  }
  if (tok == "w" || tok == "write") {
    out = Direction::Write;
    return true;
  }
  return false;
}

// istream wrapper over zlib's gzFile; reads plain files too (zlib passes
// uncompressed data through).
class GzStreamBuf : public std::streambuf {
 public:
  explicit GzStreamBuf(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw std::runtime_error("cannot open " + path);
    setg(buf_.data(), buf_.data(), buf_.data());
  }
  ~GzStreamBuf() override {
    if (file_ != nullptr) gzclose(file_);
  }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    int n = gzread(file_, buf_.data(), static_cast<unsigned>(buf_.size()));
    if (n <= 0) return traits_type::eof();
    setg(buf_.data(), buf_.data(), buf_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buf_;
};

class GzIStream : public std::istream {
 public:
  explicit GzIStream(const std::string& path) : std::istream(nullptr), buf_(path) {
    rdbuf(&buf_);
  }

 private:
  GzStreamBuf buf_;
};

}  // namespace

MalformedLine::MalformedLine(uint64_t line, const std::string& why)
    : std::runtime_error("line " + std::to_string(line) + ": " + why), line_number(line) {}

void TraceSchema::validate() const {
  std::array<int, 5> cols = {timestamp_col, volume_col, direction_col, offset_col, length_col};
  for (int c : cols) {
    if (c < 0) throw std::invalid_argument("schema: negative column index");
  }
  auto sorted = cols;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("schema: duplicate column index");
  if (offset_unit_bytes == 0) throw std::invalid_argument("schema: offset_unit_bytes must be positive");
}

TraceSchema TraceSchema::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file " + path);
  TraceSchema s;
  std::string line;
  uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("schema file line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto col = [&]() {
      uint64_t v;
      if (!parse_u64(val, v)) throw std::runtime_error("schema key " + key + ": bad column index");
      return static_cast<int>(v);
    };
    if (key == "delimiter") {
      if (val == "comma") s.delimiter = ',';
      else if (val == "tab") s.delimiter = '\t';
      else if (val == "space") s.delimiter = ' ';
      else if (val == "semicolon") s.delimiter = ';';
      else if (val.size() == 1) s.delimiter = val[0];
      else throw std::runtime_error("schema: bad delimiter '" + val + "'");
    } else if (key == "timestamp_col") {
      s.timestamp_col = col();
    } else if (key == "volume_col") {
      s.volume_col = col();
    } else if (key == "direction_col") {
      s.direction_col = col();
    } else if (key == "offset_col") {
      s.offset_col = col();
    } else if (key == "length_col") {
      s.length_col = col();
    } else if (key == "time_unit") {
      if (val == "us") s.time_unit = TimeUnit::Microseconds;
      else if (val == "ms") s.time_unit = TimeUnit::Milliseconds;
      else if (val == "s") s.time_unit = TimeUnit::Seconds;
      else throw std::runtime_error("schema: bad time_unit '" + val + "' (us/ms/s)");
    } else if (key == "offset_unit_bytes") {
      uint64_t v;
      if (!parse_u64(val, v) || v == 0) throw std::runtime_error("schema: bad offset_unit_bytes");
      s.offset_unit_bytes = v;
    } else {
      throw std::runtime_error("schema: unknown key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

ParseStats parse_trace(std::istream& in, const TraceSchema& schema,
                       const std::function<void(const TraceRecord&)>& sink, bool strict,
                       std::vector<std::pair<uint64_t, std::string>>* errors) {
  schema.validate();
  int max_col = std::max({schema.timestamp_col, schema.volume_col, schema.direction_col,
                          schema.offset_col, schema.length_col});
  ParseStats stats;
  std::string line;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++stats.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    fields.clear();
    size_t start = 0;
    while (true) {
      size_t end = line.find(schema.delimiter, start);
      if (end == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, end - start));
      start = end + 1;
    }

    std::string why;
    TraceRecord rec;
    if (static_cast<int>(fields.size()) <= max_col) {
      why = "expected at least " + std::to_string(max_col + 1) + " fields, got " +
            std::to_string(fields.size());
    } else if (!parse_timestamp(trim(fields[schema.timestamp_col]), schema.time_unit,
                                rec.timestamp_us)) {
      why = "bad timestamp '" + fields[schema.timestamp_col] + "'";
    } else if (!parse_direction(trim(fields[schema.direction_col]), rec.direction)) {
      why = "unknown direction token '" + fields[schema.direction_col] + "'";
    } else if (!parse_u64(trim(fields[schema.offset_col]), rec.offset_bytes)) {
      why = "bad offset '" + fields[schema.offset_col] + "'";
    } else if (!parse_u64(trim(fields[schema.length_col]), rec.length_bytes)) {
      why = "bad length '" + fields[schema.length_col] + "'";
    } else if (rec.length_bytes == 0) {
      why = "zero-length request";
    } else {
      rec.offset_bytes *= schema.offset_unit_bytes;
      rec.length_bytes *= schema.offset_unit_bytes;
      if (rec.offset_bytes + rec.length_bytes < rec.offset_bytes) why = "offset+length overflows";
    }

    if (!why.empty()) {
      if (strict) throw MalformedLine(stats.lines, why);
      ++stats.malformed;
      if (errors != nullptr) errors->emplace_back(stats.lines, why);
      continue;
    }
    rec.volume_id = trim(fields[schema.volume_col]);
    ++stats.parsed;
    sink(rec);
  }
  return stats;
}

std::vector<TraceRecord> parse_trace_all(std::istream& in, const TraceSchema& schema, bool strict,
                                         ParseStats* stats) {
  std::vector<TraceRecord> out;
  ParseStats s = parse_trace(
      in, schema, [&out](const TraceRecord& r) { out.push_back(r); }, strict);
  if (stats != nullptr) *stats = s;
  return out;
}

std::map<std::string, Workload> split_by_volume(std::vector<TraceRecord> records) {
  std::map<std::string, Workload> out;
  for (auto& r : records) {
    auto& wl = out[r.volume_id];
    if (wl.records.empty()) wl.volume_id = r.volume_id;
    wl.records.push_back(std::move(r));
  }
  for (auto& [id, wl] : out) {
    std::stable_sort(wl.records.begin(), wl.records.end(),
                     [](const TraceRecord& a, const TraceRecord& b) {
                       return a.timestamp_us < b.timestamp_us;
                     });
  }
  return out;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records,
                 const TraceSchema& schema) {
  schema.validate();
  int max_col = std::max({schema.timestamp_col, schema.volume_col, schema.direction_col,
                          schema.offset_col, schema.length_col});
  static constexpr std::array<int64_t, 3> factor = {1, 1000, 1000000};
  int64_t tf = factor[static_cast<int>(schema.time_unit)];
  std::vector<std::string> fields(static_cast<size_t>(max_col) + 1);
  for (const auto& r : records) {
    for (auto& f : fields) f.clear();
    fields[schema.timestamp_col] = std::to_string(r.timestamp_us / tf);
    fields[schema.volume_col] = r.volume_id;
    fields[schema.direction_col] = r.direction == Direction::Read ? "R" : "W";
    fields[schema.offset_col] = std::to_string(r.offset_bytes / schema.offset_unit_bytes);
    fields[schema.length_col] = std::to_string(r.length_bytes / schema.offset_unit_bytes);
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << schema.delimiter;
      out << fields[i];
    }
    out << '\n';
  }
}

std::unique_ptr<std::istream> open_trace_file(const std::string& path) {
  return std::make_unique<GzIStream>(path);
}

}  // namespace tiertrace
