#pragma once

#include <cstdint>
#include <random>

namespace scf {

// Deterministic random source.  The engine is std::mt19937_64 (its output
// sequence is pinned by the standard); every distribution on top is coded
// here by hand because the std::*_distribution algorithms are
// implementation-defined and would break byte-level reproducibility of runs
// across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // uniform in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in (0,1); safe to take logs of
  double uniform_open() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // unbiased integer in [0, n)
  uint64_t below(uint64_t n);

  double normal();             // standard normal, Box-Muller (one value per call)
  double gamma(double shape);  // unit scale, shape > 0, Marsaglia-Tsang

  // Independent substream derived from the original seed; used to keep e.g.
  // the temperature-estimation draws from disturbing the main search stream.
  Rng fork(uint64_t stream) const;

 private:
  uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace scf
