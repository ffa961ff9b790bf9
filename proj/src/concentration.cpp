#include "tiertrace/concentration.hpp"

#include <algorithm>

namespace tiertrace {

uint64_t SliceCounts::total() const {
  uint64_t t = 0;
  for (const auto& [page, n] : counts) t += n;
  return t;
}

std::vector<SliceCounts> slice_page_counts(const Workload& wl, uint64_t macro_page_bytes,
                                           uint32_t interval_s) {
  if (wl.records.empty()) throw EmptyWorkload();
  if (macro_page_bytes == 0) throw std::invalid_argument("macro page size must be positive");
  if (interval_s == 0) throw std::invalid_argument("interval_s must be >= 1");
  const int64_t origin = wl.records.front().timestamp_us;
  const int64_t width_us = static_cast<int64_t>(interval_s) * 1000000;
  std::vector<SliceCounts> slices;
  for (const auto& r : wl.records) {
    int64_t idx = (r.timestamp_us - origin) / width_us;
    if (idx < 0) throw std::invalid_argument("record precedes workload origin (unsorted workload)");
    while (slices.size() <= static_cast<size_t>(idx))
      slices.push_back(SliceCounts{slices.size(), {}});
    ++slices[static_cast<size_t>(idx)].counts[r.offset_bytes / macro_page_bytes];
  }
  return slices;
}

namespace {

// Pages of one slice sorted by count descending, ties by page id ascending.
std::vector<std::pair<uint64_t, uint64_t>> sorted_pages(const SliceCounts& slice) {
  std::vector<std::pair<uint64_t, uint64_t>> pages(slice.counts.begin(), slice.counts.end());
  std::sort(pages.begin(), pages.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return pages;
}

}  // namespace

std::vector<double> top_page_share_profile(const std::vector<SliceCounts>& slices, size_t k) {
  std::vector<double> shares(k, 0.0);
  size_t active = 0;
  for (const auto& slice : slices) {
    if (slice.empty()) continue;
    ++active;
    auto pages = sorted_pages(slice);
    double total = static_cast<double>(slice.total());
    for (size_t r = 0; r < k && r < pages.size(); ++r)
      shares[r] += static_cast<double>(pages[r].second) / total;
  }
  if (active == 0) throw NoActivity();
  for (auto& s : shares) s /= static_cast<double>(active);
  return shares;
}

ConcentratedSet concentrated_pages(const SliceCounts& slice) {
  if (slice.empty()) throw EmptySlice();
  ConcentratedSet set;
  set.slice_index = slice.slice_index;
  set.total_count = slice.total();
  for (const auto& [page, count] : sorted_pages(slice)) {
    set.pages.push_back(page);
    set.covered_count += count;
    if (2 * set.covered_count > set.total_count) break;  // strictly more than half
  }
  return set;
}

std::map<uint64_t, std::vector<uint64_t>> concentration_run_lengths(
    const std::vector<SliceCounts>& slices) {
  // open_runs holds the length of the run ending at the previous slice.
  std::map<uint64_t, std::vector<uint64_t>> runs;
  std::map<uint64_t, uint64_t> open_runs;
  for (const auto& slice : slices) {
    std::map<uint64_t, uint64_t> next_open;
    if (!slice.empty()) {
      for (uint64_t page : concentrated_pages(slice).pages) {
        auto it = open_runs.find(page);
        next_open[page] = it == open_runs.end() ? 1 : it->second + 1;
      }
    }
    for (const auto& [page, len] : open_runs) {
      if (!next_open.contains(page)) runs[page].push_back(len);
    }
    open_runs = std::move(next_open);
  }
  for (const auto& [page, len] : open_runs) runs[page].push_back(len);
  return runs;
}

std::vector<PagePredictability> classify_predictability(const std::vector<SliceCounts>& slices,
                                                        double threshold,
                                                        bool include_empty_slices) {
  if (slices.empty()) throw std::invalid_argument("need at least one slice");
  uint64_t denom = 0;
  std::map<uint64_t, uint64_t> judgments;
  for (const auto& slice : slices) {
    if (slice.empty()) {
      if (include_empty_slices) ++denom;
      continue;
    }
    ++denom;
    for (uint64_t page : concentrated_pages(slice).pages) ++judgments[page];
    for (const auto& [page, n] : slice.counts) judgments.try_emplace(page, 0);
  }
  std::vector<PagePredictability> out;
  for (const auto& [page, count] : judgments) {
    PagePredictability p;
    p.macro_page_id = page;
    p.concentration_judgments = count;
    p.judgment_ratio = denom == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(denom);
    p.unpredictable = p.judgment_ratio < threshold;
    out.push_back(p);
  }
  return out;
}

}  // namespace tiertrace
