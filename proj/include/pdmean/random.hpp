#pragma once

// Seeded generators for test ensembles. Output depends only on the seed:
// the uniform and normal transforms are implemented here rather than taken
// from <random> distributions, whose algorithms are implementation-defined.

#include <cstdint>
#include <random>
#include <string_view>

#include "pdmean/matrix.hpp"
#include "pdmean/means.hpp"

namespace pdmean {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  std::uint64_t next() { return engine_(); }

  /// Independent stream keyed by (seed, label).
  static Rng derive(std::uint64_t seed, std::string_view label);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Entries i.i.d. complex standard normal.
Matrix random_gaussian(Rng& rng, std::size_t m);
/// Q factor of a complex Gaussian matrix, phases fixed so diag(R) > 0.
Matrix random_unitary(Rng& rng, std::size_t m);
/// Q diag(exp(u)) Q^H, u uniform in [-c, c].
SpdMatrix random_spd(Rng& rng, std::size_t m, double c = 1.5);
/// Random matrix rescaled to operator norm `norm`.
Matrix random_contraction(Rng& rng, std::size_t m, double norm = 1.0);

/// n random SPD matrices with uniform weights, or random positive weights
/// when `random_weights` is set.
Ensemble random_ensemble(Rng& rng, std::size_t m, std::size_t n, double c = 1.5,
                         bool random_weights = false);
/// Simultaneously diagonalizable ensemble (shared eigenbasis).
Ensemble random_commuting_ensemble(Rng& rng, std::size_t m, std::size_t n, double c = 1.5,
                                   bool random_weights = false);

}  // namespace pdmean
