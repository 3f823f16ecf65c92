#pragma once

#include "lyzlab/common.hpp"

#include <cstdint>
#include <random>

namespace lyzlab {

/// Deterministic random source. Gaussian and uniform deviates are produced
/// from the raw 64-bit stream by hand (Box-Muller), so a seed pins the exact
/// byte sequence independently of the standard library's distributions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Derive an independent stream for instance `index` of a sweep.
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0,1).
    double uniform();
    double uniform(double lo, double hi);

    /// Standard normal deviate (Box-Muller, no cached spare).
    double gaussian();

    Vec gaussian_vec(int n);

    /// Uniform direction on S^{n-1}.
    Vec unit_vec(int n);

    /// Random T in GL(n) with |det T| clamped to [det_lo, det_hi] by rescaling.
    Mat gl_matrix(int n, double det_lo, double det_hi);

  private:
    std::mt19937_64 engine_;
};

/// splitmix64 step; used to hash (seed, stream) pairs.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace lyzlab
