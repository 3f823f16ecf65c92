#pragma once

#include "lyzlab/common.hpp"
#include "lyzlab/log_concave.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace lyzlab::isotropic {

/// Weighted atoms on the unit sphere of R^d.
struct SphericalMeasure {
    int dim = 0;
    std::vector<Vec> atoms;      // unit vectors, |u| = 1 to 1e-12
    std::vector<double> weights; // > 0

    void validate() const;
    double total_mass() const;
};

/// [mu] = sum_k c_k u_k u_k^T.
Mat moment_matrix(const SphericalMeasure& mu);

struct IsotropyCheck {
    bool isotropic = false;
    double residual = 0.0;  // max-norm distance of the moment matrix from I
};

/// [mu] = I within tol; the residual is always reported alongside.
IsotropyCheck is_isotropic(const SphericalMeasure& mu, double tol = 1e-9);

struct BallBartheResult {
    double lhs;    // det sum c_k l_k u_k u_k^T  (via log-det)
    double rhs;    // exp sum c_k log l_k
    double ratio;  // lhs / rhs, computed in the log domain
};

/// det int l(u) u (x) u dmu >= exp int log l dmu for isotropic mu, l > 0.
/// Throws NotIsotropic / NonPositiveWeight.
BallBartheResult ball_barthe(const SphericalMeasure& mu, const std::vector<double>& l,
                             double isotropy_tol = 1e-9);

/// Pushforward of a discrete measure under h; h must land on the sphere.
SphericalMeasure push_forward(const std::function<Vec(const Vec&)>& h,
                              const logconcave::DiscreteMeasure& m);

/// Moment matrix of the pushforward equals the identity within tol.
IsotropyCheck isotropic_embedding_check(const std::function<Vec(const Vec&)>& h,
                                        const logconcave::DiscreteMeasure& m, double tol);

struct LiftedEmbedding {
    std::vector<Vec> atoms;           // hbar(y_k) in S^n subset R^{n+1}
    SphericalMeasure measure;         // atoms weighted by |h|^2 dnu
    IsotropyCheck check;              // residual of the (n+1)-moment matrix
    double neg_log_t_sample = 0.0;    // sup of phi*(y/phi*(y)) over the atoms
};

/// The lift h(y) = (y, (2/n) phi*(y)) normalized to the sphere, weighted by
/// |h|^2 nu with nu = n^2/(4 deltaJ) (phi*)^{-1} mu_f. Requires f in isotropic
/// position (gamma2 form I/2 within tol) and mu_f barycenter at the origin.
LiftedEmbedding lifted_embedding(const logconcave::LogConcaveFn& f, int resolution = 0,
                                 std::uint64_t seed = 0, double position_tol = 3e-3);

/// tau(t) with  int_0^tau(t) e^{-l} dl = (1/sqrt(pi)) int_{-inf}^t e^{-l^2} dl,
/// i.e. tau(t) = -log(erfc(t)/2); finite for every real t. Large t uses the
/// asymptotic expansion of log erfc.
double tau(double t);

/// tau'(t) = e^{-t^2} / (sqrt(pi) erfc(t)/2).
double tau_prime(double t);

/// Test generator: m random atoms whitened until the moment matrix is I
/// within 1e-10.
SphericalMeasure random_isotropic_measure(std::uint64_t seed, int dim, int atom_count);

}  // namespace lyzlab::isotropic
