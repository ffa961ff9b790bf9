#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tiertrace/trace.hpp"

namespace tiertrace {

struct PageAccess {
  uint64_t page_id = 0;
  Direction direction = Direction::Read;
};

enum class CacheAlgorithm { LRU, ARC };

struct CacheConfig {
  uint64_t page_size_bytes = 4096;
  uint64_t capacity_pages = 1;
  CacheAlgorithm algorithm = CacheAlgorithm::LRU;
};

struct CacheResult {
  uint64_t accesses = 0;
  uint64_t hits = 0;
  uint64_t misses = 0;
  double hit_ratio() const {
    return accesses == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(accesses);
  }
};

struct HitRatioCurve {
  CacheAlgorithm algorithm = CacheAlgorithm::LRU;
  // (cache size as fraction of footprint, result), fractions ascending.
  std::vector<std::pair<double, CacheResult>> points;
};

// Classic LRU stack with O(1) lookup.
class LruCache {
 public:
  explicit LruCache(uint64_t capacity_pages);
  bool access(uint64_t page_id);  // true on hit
  uint64_t size() const { return map_.size(); }

 private:
  uint64_t capacity_;
  std::list<uint64_t> stack_;  // MRU at front
  std::unordered_map<uint64_t, std::list<uint64_t>::iterator> map_;
};

// Adaptive Replacement Cache: resident lists T1 (recency) and T2 (frequency),
// ghost lists B1/B2 of evicted page ids, adaptation parameter p. All list
// moves are O(1) via a page->iterator index.
class ArcCache {
 public:
  explicit ArcCache(uint64_t capacity_pages);
  bool access(uint64_t page_id);  // true on hit

  // Structural state, exposed for invariant checks.
  uint64_t t1_size() const { return t1_.size(); }
  uint64_t t2_size() const { return t2_.size(); }
  uint64_t b1_size() const { return b1_.size(); }
  uint64_t b2_size() const { return b2_.size(); }
  uint64_t target_t1() const { return p_; }
  uint64_t capacity() const { return c_; }

 private:
  enum class List : uint8_t { T1, T2, B1, B2 };
  struct Entry {
    List list;
    std::list<uint64_t>::iterator it;
  };

  void replace(bool in_b2);
  void erase_lru(std::list<uint64_t>& list);
  void move_to(uint64_t page, Entry& e, List dst);

  uint64_t c_;
  uint64_t p_ = 0;
  std::list<uint64_t> t1_, t2_, b1_, b2_;  // MRU at front
  std::unordered_map<uint64_t, Entry> index_;
};

// Each request touches every 4-KiB-aligned page it overlaps, ascending within
// the request, preserving request order.
std::vector<PageAccess> to_page_sequence(const Workload& wl, uint64_t page_size_bytes);

// Exact hit/miss accounting. When hit_flags is given it receives one byte per
// access (1 = hit), in access order.
CacheResult simulate(const std::vector<PageAccess>& accesses, const CacheConfig& config,
                     std::vector<uint8_t>* hit_flags = nullptr);

// One simulate run per fraction; capacity = max(1, floor(fraction * footprint
// / page_size)).
HitRatioCurve hit_ratio_curve(const Workload& wl, CacheAlgorithm algorithm,
                              const std::vector<double>& size_fractions,
                              uint64_t page_size_bytes = 4096);

std::vector<double> default_size_fractions();  // {0.01, 0.05, 0.10}

// Smallest fraction whose hit ratio every later point beats by less than
// epsilon_pp percentage points; nullopt when the curve is still gaining at
// its tail.
std::optional<double> convergence_point(const HitRatioCurve& curve, double epsilon_pp = 2.0);

struct AlgorithmComparison {
  double size_fraction = 0;
  CacheResult lru;
  CacheResult arc;
  CacheAlgorithm preferred = CacheAlgorithm::LRU;  // ties prefer LRU
};

std::vector<AlgorithmComparison> compare_algorithms(const Workload& wl,
                                                    const std::vector<double>& size_fractions,
                                                    uint64_t page_size_bytes = 4096);

}  // namespace tiertrace
