#pragma once

#include "lyzlab/common.hpp"
#include "lyzlab/log_concave.hpp"
#include "lyzlab/quadratic_form.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lyzlab::lyz {

enum class Backend { analytic, numeric };

const char* to_string(Backend b);

struct Gamma2Options {
    Backend backend = Backend::analytic;
    int resolution = 0;  // 0: library default for the dimension
    std::uint64_t seed = 0;
    int threads = 0;
};

struct Gamma2Result {
    Mat matrix;          // M with  -log Gamma_{-2}f(x) = x.Mx
    double delta_j;      // delta J(f,f), same backend as the matrix integral
    Backend backend;
    double error_bound;
    std::vector<std::string> flags;

    ellipsoids::QuadraticForm form() const { return ellipsoids::QuadraticForm(matrix); }
};

/// The -2 ellipsoid matrix of f:
///   m_ij = n^2/(8 delta J(f,f)) int (e_i.grad phi)(e_j.grad phi)
///          phi*(grad phi)^{-1} e^{-phi} dy.
/// The analytic backend covers the closed-form families; the numeric backend
/// covers everything and checks phi* > 0 off the origin by sampling.
Gamma2Result gamma2_fn(const logconcave::LogConcaveFn& f, const Gamma2Options& opts = {});

/// J(Gamma_{-2}f) = Gamma(n/2+1) omega_n det(M)^{-1/2}.
double gamma2_total_mass(const ellipsoids::QuadraticForm& m);

/// f o T; family-preserving where possible, grids are resampled.
logconcave::LogConcaveFn compose_affine(const logconcave::LogConcaveFn& f, const Mat& t);

struct IsotropicPosition {
    Mat map;                          // T with T^t M T = I/2
    logconcave::LogConcaveFn moved;   // f o T
};

/// Whitens f so its -2 ellipsoid form becomes I/2.
IsotropicPosition isotropic_position(const logconcave::LogConcaveFn& f,
                                     const Gamma2Options& opts = {});

}  // namespace lyzlab::lyz
