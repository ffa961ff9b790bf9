#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tiertrace/trace.hpp"

namespace tiertrace {

inline constexpr uint64_t kMacroPageBytes = 1ull << 30;  // 1 GiB

// Per-slice access counts by 1-GiB macro page. Zero-count pages are omitted;
// fully empty slices appear with an empty map.
struct SliceCounts {
  uint64_t slice_index = 0;
  std::map<uint64_t, uint64_t> counts;

  uint64_t total() const;
  bool empty() const { return counts.empty(); }
};

// Minimal descending-count page prefix whose accesses strictly exceed half
// the slice total.
struct ConcentratedSet {
  uint64_t slice_index = 0;
  std::vector<uint64_t> pages;  // descending count, ties by page id ascending
  uint64_t covered_count = 0;
  uint64_t total_count = 0;
};

struct PagePredictability {
  uint64_t macro_page_id = 0;
  uint64_t concentration_judgments = 0;
  double judgment_ratio = 0;
  bool unpredictable = false;
};

class EmptySlice : public std::invalid_argument {
 public:
  EmptySlice() : std::invalid_argument("slice has no accesses") {}
};

class NoActivity : public std::invalid_argument {
 public:
  NoActivity() : std::invalid_argument("no non-empty slices") {}
};

// A request counts toward the macro page containing its starting offset.
// Slices run from the workload's first timestamp; interior empty slices are
// retained.
std::vector<SliceCounts> slice_page_counts(const Workload& wl,
                                           uint64_t macro_page_bytes = kMacroPageBytes,
                                           uint32_t interval_s = 15);

// Average share of the rank-r page across non-empty slices, r = 1..k.
// Slices with fewer than r pages contribute 0 at rank r.
std::vector<double> top_page_share_profile(const std::vector<SliceCounts>& slices, size_t k);

ConcentratedSet concentrated_pages(const SliceCounts& slice);

// Maximal runs of consecutive slices in which a page stays concentrated; one
// run unit is one interval (15 s by default).
std::map<uint64_t, std::vector<uint64_t>> concentration_run_lengths(
    const std::vector<SliceCounts>& slices);

// A page is unpredictable when it is judged concentrated in fewer than
// threshold of the slices. The denominator counts empty slices too unless
// include_empty_slices is false.
std::vector<PagePredictability> classify_predictability(const std::vector<SliceCounts>& slices,
                                                        double threshold = 0.05,
                                                        bool include_empty_slices = true);

}  // namespace tiertrace
