#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tiertrace/cache.hpp"
#include "tiertrace/concentration.hpp"
#include "tiertrace/stats.hpp"
#include "tiertrace/trace.hpp"

namespace tiertrace {

struct TierConfig {
  uint64_t tier1_capacity_bytes = 8ull << 30;
  double tier1_read_latency_us = 100;
  double tier1_write_latency_us = 100;
  double tier2_read_latency_us = 5000;
  double tier2_write_latency_us = 5000;
  uint64_t migration_bandwidth_bytes_per_s = 512ull << 20;
  uint32_t decision_interval_s = 15;
  uint64_t promotion_unit_bytes = kMacroPageBytes;

  void validate() const;  // tier1 faster than tier2, positive capacities
  uint64_t capacity_units() const { return tier1_capacity_bytes / promotion_unit_bytes; }
  // Whole promotion units migratable per decision interval.
  uint64_t budget_units() const {
    return migration_bandwidth_bytes_per_s * decision_interval_s / promotion_unit_bytes;
  }
};

enum class PlacementPolicy { AllSecond, AllFirst, DynamicPromotion, MonitoredCache };

class CapacityInfeasible : public std::runtime_error {
 public:
  explicit CapacityInfeasible(const std::string& why) : std::runtime_error(why) {}
};

// One promotion-unit region of one volume.
struct RegionKey {
  std::string volume_id;
  uint64_t page_id = 0;
  auto operator<=>(const RegionKey&) const = default;
};

struct Migration {
  RegionKey region;
  bool promote = true;  // false = demotion to tier2
};

struct IntervalStats {
  uint64_t interval_index = 0;
  uint64_t requests = 0;
  uint64_t tier1_requests = 0;
  double mean_latency_us = 0;
  uint64_t promotions = 0;
  uint64_t demotions = 0;
};

struct TierSimResult {
  uint64_t requests_served = 0;
  uint64_t tier1_requests = 0;
  double tier1_served_fraction = 0;
  double mean_latency_us = 0;
  uint64_t promotions = 0;
  uint64_t demotions = 0;
  uint64_t bytes_migrated = 0;
  std::vector<IntervalStats> intervals;
};

struct TieringOptions {
  PlacementPolicy policy = PlacementPolicy::AllSecond;
  // AllFirst / MonitoredCache pinning beyond capacity: strict mode throws
  // CapacityInfeasible, best-effort pins the hottest regions first.
  bool best_effort = false;
  // MonitoredCache parameters (hit-ratio monitored bypass).
  double cache_low_threshold = 0.20;
  uint32_t cache_consecutive_n = 3;
  double cache_size_fraction = 0.01;
  uint64_t cache_page_size_bytes = 4096;
  std::set<std::string> performance_critical;  // bypass toward tier1 for these
  // Whole-day admission filter; volumes not listed are pinned to tier2.
  // Empty set = no filter.
  std::set<std::string> tier1_eligible;
};

struct TieringOutcome {
  std::map<std::string, TierSimResult> per_workload;
  TierSimResult aggregate;  // aggregate.intervals carries the per-interval series
};

enum class CacheDecision { KeepCache, BypassToFirstTier, BypassToSecondTier };

struct PromotionStepResult {
  std::set<RegionKey> tier1;
  std::vector<Migration> migrations;
};

// Concentration-driven placement update for one finished interval: promote
// the interval's concentrated regions (highest counts first) into tier1,
// evicting the coldest residents, subject to capacity and migration budget.
PromotionStepResult dynamic_promotion_step(
    const std::map<std::string, SliceCounts>& interval_counts,
    const std::set<RegionKey>& current_tier1, const TierConfig& config,
    const std::set<std::string>* eligible = nullptr);

// Bypass rule: all of the last consecutive_n interval hit ratios below
// low_threshold triggers a bypass, toward tier1 for performance-critical
// workloads and toward tier2 otherwise.
CacheDecision monitored_cache_decision(const std::vector<double>& hit_ratio_history,
                                       double low_threshold, uint32_t consecutive_n,
                                       bool performance_critical);

// Volumes eligible for tier1: the top read+write workloads by whole-day count.
std::set<std::string> admission_filter(const std::vector<WorkloadSummary>& summaries,
                                       double fraction);

TieringOutcome simulate_tiering(const std::vector<Workload>& workloads, const TierConfig& config,
                                const TieringOptions& options);

}  // namespace tiertrace
