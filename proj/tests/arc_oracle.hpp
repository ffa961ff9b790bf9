#pragma once

// Test-only ARC reference written directly from the published pseudocode
// (cases I-IV plus the REPLACE subroutine), using plain vectors and linear
// searches. Deliberately independent of the production implementation.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace arc_oracle {

class ArcOracle {
 public:
  explicit ArcOracle(uint64_t c) : c_(c) {}

  // Returns true on hit. x is the requested page.
  bool access(uint64_t x) {
    // Case I: x in T1 or T2 -> move to MRU of T2.
    if (remove_if_present(t1_, x) || remove_if_present(t2_, x)) {
      t2_.push_back(x);
      return true;
    }
    // Case II: x in B1.
    if (contains(b1_, x)) {
      uint64_t delta = b1_.size() >= b2_.size() ? 1 : b2_.size() / b1_.size();
      p_ = std::min(p_ + delta, c_);
      replace(x);
      remove(b1_, x);
      t2_.push_back(x);
      return false;
    }
    // Case III: x in B2.
    if (contains(b2_, x)) {
      uint64_t delta = b2_.size() >= b1_.size() ? 1 : b1_.size() / b2_.size();
      p_ = p_ >= delta ? p_ - delta : 0;
      replace(x);
      remove(b2_, x);
      t2_.push_back(x);
      return false;
    }
    // Case IV: x is entirely new.
    if (t1_.size() + b1_.size() == c_) {
      if (t1_.size() < c_) {
        b1_.erase(b1_.begin());  // delete LRU of B1
        replace(x);
      } else {
        t1_.erase(t1_.begin());  // cache full of T1: discard its LRU outright
      }
    } else if (t1_.size() + b1_.size() < c_) {
      uint64_t total = t1_.size() + t2_.size() + b1_.size() + b2_.size();
      if (total >= c_) {
        if (total == 2 * c_) b2_.erase(b2_.begin());
        replace(x);
      }
    }
    t1_.push_back(x);
    return false;
  }

  uint64_t t1_size() const { return t1_.size(); }
  uint64_t t2_size() const { return t2_.size(); }
  uint64_t b1_size() const { return b1_.size(); }
  uint64_t b2_size() const { return b2_.size(); }
  uint64_t p() const { return p_; }

 private:
  // LRU at the front of each vector, MRU at the back.
  void replace(uint64_t x) {
    if (!t1_.empty() && (t1_.size() > p_ || (contains(b2_, x) && t1_.size() == p_))) {
      b1_.push_back(t1_.front());
      t1_.erase(t1_.begin());
    } else if (!t2_.empty()) {
      b2_.push_back(t2_.front());
      t2_.erase(t2_.begin());
    } else if (!t1_.empty()) {
      b1_.push_back(t1_.front());
      t1_.erase(t1_.begin());
    }
  }

  static bool contains(const std::vector<uint64_t>& v, uint64_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  }
  static void remove(std::vector<uint64_t>& v, uint64_t x) {
    v.erase(std::find(v.begin(), v.end(), x));
  }
  static bool remove_if_present(std::vector<uint64_t>& v, uint64_t x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it == v.end()) return false;
    v.erase(it);
    return true;
  }

  uint64_t c_;
  uint64_t p_ = 0;
  std::vector<uint64_t> t1_, t2_, b1_, b2_;
};

}  // namespace arc_oracle
