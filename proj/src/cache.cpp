#include "tiertrace/cache.hpp"

#include <algorithm>
#include <cmath>

#include "tiertrace/stats.hpp"

namespace tiertrace {

LruCache::LruCache(uint64_t capacity_pages) : capacity_(capacity_pages) {
  if (capacity_ == 0) throw std::invalid_argument("cache capacity must be >= 1");
}

bool LruCache::access(uint64_t page_id) {
  auto it = map_.find(page_id);
  if (it != map_.end()) {
    stack_.splice(stack_.begin(), stack_, it->second);
    return true;
  }
  if (map_.size() == capacity_) {
    map_.erase(stack_.back());
    stack_.pop_back();
  }
  stack_.push_front(page_id);
  map_.emplace(page_id, stack_.begin());
  return false;
}

ArcCache::ArcCache(uint64_t capacity_pages) : c_(capacity_pages) {
  if (c_ == 0) throw std::invalid_argument("cache capacity must be >= 1");
}

void ArcCache::erase_lru(std::list<uint64_t>& list) {
  index_.erase(list.back());
  list.pop_back();
}

void ArcCache::move_to(uint64_t page, Entry& e, List dst) {
  auto& from = e.list == List::T1 ? t1_ : e.list == List::T2 ? t2_ : e.list == List::B1 ? b1_ : b2_;
  auto& to = dst == List::T1 ? t1_ : dst == List::T2 ? t2_ : dst == List::B1 ? b1_ : b2_;
  to.splice(to.begin(), from, e.it);
  e.list = dst;
  e.it = to.begin();
  (void)page;
}

// Evict one resident page to its ghost list. T1's LRU goes to B1 when T1 is
// over its target size p (or exactly at it on a B2 ghost hit); otherwise T2's
// LRU goes to B2.
void ArcCache::replace(bool in_b2) {
  bool evict_t1 = !t1_.empty() && (t1_.size() > p_ || (in_b2 && t1_.size() == p_));
  if (!evict_t1 && t2_.empty()) evict_t1 = !t1_.empty();  // unreachable fallback
  if (evict_t1) {
    uint64_t victim = t1_.back();
    move_to(victim, index_.at(victim), List::B1);
  } else if (!t2_.empty()) {
    uint64_t victim = t2_.back();
    move_to(victim, index_.at(victim), List::B2);
  }
}

bool ArcCache::access(uint64_t page_id) {
  auto it = index_.find(page_id);
  if (it != index_.end() && (it->second.list == List::T1 || it->second.list == List::T2)) {
    move_to(page_id, it->second, List::T2);
    return true;
  }

  if (it != index_.end() && it->second.list == List::B1) {
    uint64_t delta = b1_.size() >= b2_.size() ? 1 : b2_.size() / b1_.size();
    p_ = std::min(p_ + delta, c_);
    replace(false);
    move_to(page_id, it->second, List::T2);
    return false;
  }

  if (it != index_.end()) {  // B2 ghost hit
    uint64_t delta = b2_.size() >= b1_.size() ? 1 : b1_.size() / b2_.size();
    p_ = p_ >= delta ? p_ - delta : 0;
    replace(true);
    move_to(page_id, it->second, List::T2);
    return false;
  }

  uint64_t l1 = t1_.size() + b1_.size();
  if (l1 == c_) {
    if (t1_.size() < c_) {
      erase_lru(b1_);
      replace(false);
    } else {
      erase_lru(t1_);
    }
  } else {
    uint64_t total = l1 + t2_.size() + b2_.size();
    if (total >= c_) {
      if (total == 2 * c_) erase_lru(b2_);
      replace(false);
    }
  }
  t1_.push_front(page_id);
  index_[page_id] = Entry{List::T1, t1_.begin()};
  return false;
}

std::vector<PageAccess> to_page_sequence(const Workload& wl, uint64_t page_size_bytes) {
  if (page_size_bytes == 0 || (page_size_bytes & (page_size_bytes - 1)) != 0)
    throw std::invalid_argument("page size must be a power of two");
  std::vector<PageAccess> out;
  for (const auto& r : wl.records) {
    uint64_t first = r.offset_bytes / page_size_bytes;
    uint64_t last = (r.end_offset() - 1) / page_size_bytes;
    for (uint64_t p = first; p <= last; ++p) out.push_back({p, r.direction});
  }
  return out;
}

CacheResult simulate(const std::vector<PageAccess>& accesses, const CacheConfig& config,
                     std::vector<uint8_t>* hit_flags) {
  CacheResult res;
  res.accesses = accesses.size();
  if (hit_flags != nullptr) {
    hit_flags->clear();
    hit_flags->reserve(accesses.size());
  }
  auto run = [&](auto& cache) {
    for (const auto& a : accesses) {
      bool hit = cache.access(a.page_id);
      res.hits += hit ? 1 : 0;
      if (hit_flags != nullptr) hit_flags->push_back(hit ? 1 : 0);
    }
  };
  if (config.algorithm == CacheAlgorithm::LRU) {
    LruCache cache(config.capacity_pages);
    run(cache);
  } else {
    ArcCache cache(config.capacity_pages);
    run(cache);
  }
  res.misses = res.accesses - res.hits;
  return res;
}

std::vector<double> default_size_fractions() { return {0.01, 0.05, 0.10}; }

HitRatioCurve hit_ratio_curve(const Workload& wl, CacheAlgorithm algorithm,
                              const std::vector<double>& size_fractions,
                              uint64_t page_size_bytes) {
  if (wl.records.empty()) throw EmptyWorkload();
  for (double f : size_fractions) {
    if (f <= 0.0 || f > 1.0) throw std::invalid_argument("size fraction must be in (0,1]");
  }
  auto fractions = size_fractions;
  std::sort(fractions.begin(), fractions.end());
  uint64_t fp = footprint(wl);
  auto accesses = to_page_sequence(wl, page_size_bytes);
  HitRatioCurve curve;
  curve.algorithm = algorithm;
  for (double f : fractions) {
    CacheConfig cfg;
    cfg.page_size_bytes = page_size_bytes;
    cfg.algorithm = algorithm;
    cfg.capacity_pages = std::max<uint64_t>(
        1, static_cast<uint64_t>(std::floor(f * static_cast<double>(fp) /
                                            static_cast<double>(page_size_bytes))));
    curve.points.emplace_back(f, simulate(accesses, cfg));
  }
  return curve;
}

std::optional<double> convergence_point(const HitRatioCurve& curve, double epsilon_pp) {
  if (curve.points.size() < 2) throw std::invalid_argument("curve needs at least 2 points");
  // Candidates exclude the last point: a tail that is still gaining >= epsilon
  // has no convergence point.
  for (size_t i = 0; i + 1 < curve.points.size(); ++i) {
    double base = curve.points[i].second.hit_ratio();
    bool converged = true;
    for (size_t j = i + 1; j < curve.points.size(); ++j) {
      double gain_pp = (curve.points[j].second.hit_ratio() - base) * 100.0;
      if (gain_pp >= epsilon_pp) {
        converged = false;
        break;
      }
    }
    if (converged) return curve.points[i].first;
  }
  return std::nullopt;
}

std::vector<AlgorithmComparison> compare_algorithms(const Workload& wl,
                                                    const std::vector<double>& size_fractions,
                                                    uint64_t page_size_bytes) {
  auto lru = hit_ratio_curve(wl, CacheAlgorithm::LRU, size_fractions, page_size_bytes);
  auto arc = hit_ratio_curve(wl, CacheAlgorithm::ARC, size_fractions, page_size_bytes);
  std::vector<AlgorithmComparison> out;
  for (size_t i = 0; i < lru.points.size(); ++i) {
    AlgorithmComparison c;
    c.size_fraction = lru.points[i].first;
    c.lru = lru.points[i].second;
    c.arc = arc.points[i].second;
    c.preferred = c.arc.hits > c.lru.hits ? CacheAlgorithm::ARC : CacheAlgorithm::LRU;
    out.push_back(c);
  }
  return out;
}

}  // namespace tiertrace
