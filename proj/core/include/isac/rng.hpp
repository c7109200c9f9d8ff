#pragma once

#include <cstdint>
#include <random>

#include "isac/types.hpp"

namespace isac {

using Rng = std::mt19937_64;

// Independent named streams derived from one experiment seed. Each Monte Carlo
// trial draws data, noise and targets from its own (stream, trial) generator,
// so results do not depend on how trials are distributed over workers.
enum class Stream : std::uint32_t { data = 1, noise = 2, targets = 3, aux = 4 };

class RngFactory {
 public:
  explicit RngFactory(std::uint64_t seed) : seed_(seed) {}

  Rng stream(Stream s, std::uint64_t trial = 0) const;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

// Circularly-symmetric complex Gaussian CN(0, variance).
cplx complex_normal(Rng& rng, double variance);

double uniform(Rng& rng, double lo, double hi);

}  // namespace isac
