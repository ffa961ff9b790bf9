#pragma once

#include <cstdint>
#include <string>

#include "tiertrace/concentration.hpp"
#include "tiertrace/trace.hpp"

namespace tiertrace {

// Deterministic PRNG (splitmix64). The algorithm is part of the trace-file
// contract: any implementation seeding splitmix64 with the same value must
// reproduce the same synthetic trace byte for byte.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), n >= 1. Modulo bias is negligible for n << 2^64 and
  // keeps the generator trivially portable.
  uint64_t next_below(uint64_t n) { return next() % n; }

 private:
  uint64_t state_;
};

enum class HotRegionMovement { Fixed, Step, RandomJump };

class InvalidSpec : public std::invalid_argument {
 public:
  explicit InvalidSpec(const std::string& why) : std::invalid_argument("synth spec: " + why) {}
};

struct SynthSpec {
  uint64_t seed = 1;
  uint32_t duration_s = 60;
  uint32_t request_rate = 100;  // requests per second
  uint64_t footprint_bytes = 4ull << 30;

  uint64_t hot_page = 0;        // starting macro page of the hot region
  double hot_share = 0.9;       // expected fraction of requests hitting it
  uint32_t dwell_slices = 1;    // slices before the hot region moves
  HotRegionMovement movement = HotRegionMovement::Fixed;

  // IO size distribution: fixed, or two-point when io_size2_prob > 0.
  uint64_t io_size_bytes = 4096;
  double io_size2_prob = 0.0;
  uint64_t io_size2_bytes = 0;

  double write_fraction = 0.0;
  uint32_t slice_s = 15;
  uint64_t macro_page_bytes = kMacroPageBytes;
  std::string volume_id = "synth";

  void validate() const;  // throws InvalidSpec
};

// Hot macro page active during the given slice, per the movement rule.
uint64_t hot_page_for_slice(const SynthSpec& spec, uint64_t slice_index);

Workload generate(const SynthSpec& spec);

}  // namespace tiertrace
