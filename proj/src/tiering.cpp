#include "tiertrace/tiering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tiertrace {

void TierConfig::validate() const {
  if (tier1_capacity_bytes == 0 || promotion_unit_bytes == 0)
    throw std::invalid_argument("tier config: capacities must be positive");
  if (migration_bandwidth_bytes_per_s == 0)
    throw std::invalid_argument("tier config: migration bandwidth must be positive");
  if (decision_interval_s == 0)
    throw std::invalid_argument("tier config: decision interval must be positive");
  if (tier1_read_latency_us >= tier2_read_latency_us ||
      tier1_write_latency_us >= tier2_write_latency_us)
    throw std::invalid_argument("tier config: tier1 must be faster than tier2");
  if (tier1_read_latency_us <= 0 || tier1_write_latency_us <= 0)
    throw std::invalid_argument("tier config: latencies must be positive");
}

CacheDecision monitored_cache_decision(const std::vector<double>& hit_ratio_history,
                                       double low_threshold, uint32_t consecutive_n,
                                       bool performance_critical) {
  if (hit_ratio_history.empty()) throw std::invalid_argument("empty hit-ratio history");
  if (consecutive_n == 0) throw std::invalid_argument("consecutive_n must be >= 1");
  if (hit_ratio_history.size() < consecutive_n) return CacheDecision::KeepCache;
  for (size_t i = hit_ratio_history.size() - consecutive_n; i < hit_ratio_history.size(); ++i) {
    if (hit_ratio_history[i] >= low_threshold) return CacheDecision::KeepCache;
  }
  return performance_critical ? CacheDecision::BypassToFirstTier
                              : CacheDecision::BypassToSecondTier;
}

std::set<std::string> admission_filter(const std::vector<WorkloadSummary>& summaries,
                                       double fraction) {
  auto selected = select_top_workloads(summaries, fraction, CountMetric::ReadWrite);
  return {selected.begin(), selected.end()};
}

PromotionStepResult dynamic_promotion_step(const std::map<std::string, SliceCounts>& interval_counts,
                                           const std::set<RegionKey>& current_tier1,
                                           const TierConfig& config,
                                           const std::set<std::string>* eligible) {
  config.validate();
  const uint64_t capacity = config.capacity_units();
  if (current_tier1.size() > capacity)
    throw std::invalid_argument("current placement exceeds tier1 capacity");

  auto is_eligible = [&](const std::string& vol) {
    return eligible == nullptr || eligible->contains(vol);
  };
  auto region_count = [&](const RegionKey& r) -> uint64_t {
    auto it = interval_counts.find(r.volume_id);
    if (it == interval_counts.end()) return 0;
    auto cit = it->second.counts.find(r.page_id);
    return cit == it->second.counts.end() ? 0 : cit->second;
  };

  // Candidates: concentrated regions of the finished interval, hottest first.
  std::vector<std::pair<uint64_t, RegionKey>> candidates;
  for (const auto& [vol, slice] : interval_counts) {
    if (slice.empty() || !is_eligible(vol)) continue;
    for (uint64_t page : concentrated_pages(slice).pages)
      candidates.emplace_back(slice.counts.at(page), RegionKey{vol, page});
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  PromotionStepResult result;
  result.tier1 = current_tier1;
  uint64_t budget = config.budget_units();
  for (const auto& [count, region] : candidates) {
    if (budget == 0) break;
    if (result.tier1.contains(region)) continue;
    if (result.tier1.size() < capacity) {
      result.tier1.insert(region);
      result.migrations.push_back({region, true});
      --budget;
      continue;
    }
    // Tier1 full: evict the coldest resident, but only for a hotter candidate
    // and only if the budget covers both moves.
    const RegionKey* victim = nullptr;
    uint64_t victim_count = std::numeric_limits<uint64_t>::max();
    for (const auto& r : result.tier1) {
      uint64_t rc = region_count(r);
      if (rc < victim_count || (rc == victim_count && (victim == nullptr || r < *victim))) {
        victim = &r;
        victim_count = rc;
      }
    }
    if (victim == nullptr || count <= victim_count || budget < 2) break;
    RegionKey evicted = *victim;
    result.tier1.erase(evicted);
    result.migrations.push_back({evicted, false});
    result.tier1.insert(region);
    result.migrations.push_back({region, true});
    budget -= 2;
  }
  return result;
}

namespace {

struct Event {
  size_t workload = 0;
  const TraceRecord* record = nullptr;
};

// Per-workload state for the MonitoredCache policy.
struct CacheMonitor {
  LruCache cache;
  std::vector<double> history;
  uint64_t interval_requests = 0;
  uint64_t interval_hits = 0;
  CacheDecision decision = CacheDecision::KeepCache;
  std::vector<RegionKey> pending_pins;  // regions queued for tier1, hottest first
};

}  // namespace

TieringOutcome simulate_tiering(const std::vector<Workload>& workloads, const TierConfig& config,
                                const TieringOptions& options) {
  config.validate();
  if (workloads.empty()) throw std::invalid_argument("no workloads");
  for (const auto& wl : workloads) {
    if (wl.records.empty()) throw EmptyWorkload();
  }

  const uint64_t unit = config.promotion_unit_bytes;
  const uint64_t capacity = config.capacity_units();
  const int64_t interval_us = static_cast<int64_t>(config.decision_interval_s) * 1000000;

  auto is_eligible = [&](const std::string& vol) {
    return options.tier1_eligible.empty() || options.tier1_eligible.contains(vol);
  };

  // Merge all workloads into one timeline.
  std::vector<Event> events;
  for (size_t i = 0; i < workloads.size(); ++i) {
    for (const auto& r : workloads[i].records) events.push_back({i, &r});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.record->timestamp_us < b.record->timestamp_us;
  });
  const int64_t origin = events.front().record->timestamp_us;

  std::set<RegionKey> tier1;

  // Static placements.
  if (options.policy == PlacementPolicy::AllFirst) {
    std::vector<std::pair<uint64_t, RegionKey>> regions;  // (total accesses, region)
    std::map<RegionKey, uint64_t> totals;
    uint64_t total_units = 0;
    for (const auto& wl : workloads) {
      if (!is_eligible(wl.volume_id)) continue;
      uint64_t units = (footprint(wl) + unit - 1) / unit;
      total_units += units;
      for (uint64_t p = 0; p < units; ++p) totals[{wl.volume_id, p}] = 0;
      for (const auto& r : wl.records) ++totals[{wl.volume_id, r.offset_bytes / unit}];
    }
    if (total_units > capacity && !options.best_effort)
      throw CapacityInfeasible("AllFirst: footprint of " + std::to_string(total_units) +
                               " units exceeds tier1 capacity of " + std::to_string(capacity));
    for (const auto& [region, count] : totals) regions.emplace_back(count, region);
    std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto& [count, region] : regions) {
      if (tier1.size() == capacity) break;
      tier1.insert(region);
    }
  }

  std::vector<CacheMonitor> monitors;
  if (options.policy == PlacementPolicy::MonitoredCache) {
    for (const auto& wl : workloads) {
      uint64_t cap = std::max<uint64_t>(
          1, static_cast<uint64_t>(std::floor(options.cache_size_fraction *
                                              static_cast<double>(footprint(wl)) /
                                              static_cast<double>(options.cache_page_size_bytes))));
      monitors.push_back({LruCache(cap), {}, 0, 0, CacheDecision::KeepCache, {}});
    }
  }

  TieringOutcome out;
  std::vector<TierSimResult> per_wl(workloads.size());
  std::map<std::string, size_t> wl_index;
  for (size_t i = 0; i < workloads.size(); ++i) wl_index[workloads[i].volume_id] = i;
  std::map<std::string, SliceCounts> interval_counts;     // current interval, per volume
  std::map<RegionKey, uint64_t> cumulative_counts;        // for best-effort pin ordering
  IntervalStats istats;
  double interval_latency_sum = 0;
  double total_latency_sum = 0;
  std::vector<double> per_wl_latency_sum(workloads.size(), 0);
  uint64_t interval_index = 0;

  auto serve = [&](const Event& ev) {
    const TraceRecord& r = *ev.record;
    const Workload& wl = workloads[ev.workload];
    RegionKey region{wl.volume_id, r.offset_bytes / unit};
    bool from_tier1 = tier1.contains(region);
    if (options.policy == PlacementPolicy::MonitoredCache && !from_tier1) {
      auto& mon = monitors[ev.workload];
      if (mon.decision == CacheDecision::KeepCache) {
        // A request hits only if every page it touches is resident.
        uint64_t first = r.offset_bytes / options.cache_page_size_bytes;
        uint64_t last = (r.end_offset() - 1) / options.cache_page_size_bytes;
        bool all_hit = true;
        for (uint64_t p = first; p <= last; ++p) all_hit &= mon.cache.access(p);
        ++mon.interval_requests;
        if (all_hit) {
          ++mon.interval_hits;
          from_tier1 = true;  // cache resides on the first tier
        }
      }
    }
    double lat;
    if (from_tier1)
      lat = r.direction == Direction::Read ? config.tier1_read_latency_us
                                           : config.tier1_write_latency_us;
    else
      lat = r.direction == Direction::Read ? config.tier2_read_latency_us
                                           : config.tier2_write_latency_us;

    ++istats.requests;
    istats.tier1_requests += from_tier1 ? 1 : 0;
    interval_latency_sum += lat;
    auto& res = per_wl[ev.workload];
    ++res.requests_served;
    res.tier1_requests += from_tier1 ? 1 : 0;
    per_wl_latency_sum[ev.workload] += lat;
    total_latency_sum += lat;

    auto& slice = interval_counts[wl.volume_id];
    slice.slice_index = interval_index;
    ++slice.counts[region.page_id];
    ++cumulative_counts[region];
  };

  auto record_migration = [&](const Migration& m, TierSimResult& agg) {
    agg.promotions += m.promote ? 1 : 0;
    agg.demotions += m.promote ? 0 : 1;
    istats.promotions += m.promote ? 1 : 0;
    istats.demotions += m.promote ? 0 : 1;
    auto it = wl_index.find(m.region.volume_id);
    if (it != wl_index.end()) {
      auto& res = per_wl[it->second];
      res.promotions += m.promote ? 1 : 0;
      res.demotions += m.promote ? 0 : 1;
    }
  };

  // Placement update at the boundary after `interval_index` finished.
  auto end_interval = [&]() {
    istats.interval_index = interval_index;
    uint64_t budget = config.budget_units();

    if (options.policy == PlacementPolicy::DynamicPromotion) {
      auto step = dynamic_promotion_step(
          interval_counts, tier1, config,
          options.tier1_eligible.empty() ? nullptr : &options.tier1_eligible);
      tier1 = std::move(step.tier1);
      for (const auto& m : step.migrations) record_migration(m, out.aggregate);
    } else if (options.policy == PlacementPolicy::MonitoredCache) {
      for (size_t i = 0; i < workloads.size(); ++i) {
        auto& mon = monitors[i];
        if (mon.decision == CacheDecision::KeepCache && mon.interval_requests > 0) {
          mon.history.push_back(static_cast<double>(mon.interval_hits) /
                                static_cast<double>(mon.interval_requests));
          mon.decision = monitored_cache_decision(
              mon.history, options.cache_low_threshold, options.cache_consecutive_n,
              options.performance_critical.contains(workloads[i].volume_id));
          if (mon.decision == CacheDecision::BypassToFirstTier &&
              is_eligible(workloads[i].volume_id)) {
            uint64_t units = (footprint(workloads[i]) + unit - 1) / unit;
            uint64_t pinned_elsewhere = tier1.size();
            for (const auto& m2 : monitors) pinned_elsewhere += m2.pending_pins.size();
            if (pinned_elsewhere + units > capacity && !options.best_effort)
              throw CapacityInfeasible("MonitoredCache: pinning " + workloads[i].volume_id +
                                       " exceeds tier1 capacity");
            std::vector<std::pair<uint64_t, RegionKey>> order;
            for (uint64_t p = 0; p < units; ++p) {
              RegionKey key{workloads[i].volume_id, p};
              auto it = cumulative_counts.find(key);
              order.emplace_back(it == cumulative_counts.end() ? 0 : it->second, key);
            }
            std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
            for (const auto& [count, key] : order) mon.pending_pins.push_back(key);
          }
        }
        mon.interval_requests = 0;
        mon.interval_hits = 0;
      }
      // Drain pending pins within the migration budget.
      for (auto& mon : monitors) {
        while (!mon.pending_pins.empty() && budget > 0 && tier1.size() < capacity) {
          RegionKey key = mon.pending_pins.front();
          mon.pending_pins.erase(mon.pending_pins.begin());
          if (tier1.insert(key).second) {
            record_migration({key, true}, out.aggregate);
            --budget;
          }
        }
      }
    }

    istats.mean_latency_us =
        istats.requests == 0 ? 0 : interval_latency_sum / static_cast<double>(istats.requests);
    out.aggregate.intervals.push_back(istats);
    istats = IntervalStats{};
    interval_latency_sum = 0;
    interval_counts.clear();
  };

  for (const auto& ev : events) {
    uint64_t idx = static_cast<uint64_t>((ev.record->timestamp_us - origin) / interval_us);
    while (idx > interval_index) {
      end_interval();
      ++interval_index;
    }
    serve(ev);
  }
  end_interval();

  for (size_t i = 0; i < workloads.size(); ++i) {
    auto& res = per_wl[i];
    res.tier1_served_fraction =
        res.requests_served == 0
            ? 0
            : static_cast<double>(res.tier1_requests) / static_cast<double>(res.requests_served);
    res.mean_latency_us = res.requests_served == 0
                              ? 0
                              : per_wl_latency_sum[i] / static_cast<double>(res.requests_served);
    res.bytes_migrated = (res.promotions + res.demotions) * unit;
    out.aggregate.requests_served += res.requests_served;
    out.aggregate.tier1_requests += res.tier1_requests;
    out.per_workload[workloads[i].volume_id] = res;
  }
  out.aggregate.tier1_served_fraction =
      out.aggregate.requests_served == 0
          ? 0
          : static_cast<double>(out.aggregate.tier1_requests) /
                static_cast<double>(out.aggregate.requests_served);
  out.aggregate.mean_latency_us =
      out.aggregate.requests_served == 0
          ? 0
          : total_latency_sum / static_cast<double>(out.aggregate.requests_served);
  out.aggregate.bytes_migrated = (out.aggregate.promotions + out.aggregate.demotions) * unit;
  return out;
}

}  // namespace tiertrace
