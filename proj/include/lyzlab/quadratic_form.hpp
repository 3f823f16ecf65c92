#pragma once

#include "lyzlab/common.hpp"
#include "lyzlab/polytope.hpp"

namespace lyzlab::ellipsoids {

/// Symmetric positive-definite matrix A representing the ellipsoid
/// E = {x : x.Ax <= 1} through its squared Minkowski functional
/// ||x||_E^2 = x.Ax.
class QuadraticForm {
  public:
    /// Validates symmetry (1e-12 relative) and positive definiteness
    /// (eigenvalues above 1e-12 * trace); throws NotPositiveDefinite.
    explicit QuadraticForm(Mat a);

    int dimension() const { return static_cast<int>(a_.rows()); }
    const Mat& matrix() const { return a_; }

    double min_eigenvalue() const { return eigenvalues_.minCoeff(); }

    /// A^p via the eigendecomposition (p = -1/2 gives the whitening root).
    Mat power(double p) const;

  private:
    Mat a_;
    Mat eigenvectors_;
    Vec eigenvalues_;
};

/// ||x||_E = sqrt(x.Ax).
double ellipsoid_norm(const QuadraticForm& q, const Vec& x);

/// |E| = omega_n det(A)^{-1/2}.
double ellipsoid_volume(const QuadraticForm& q);

/// The -2 ellipsoid of a polytope: A = (1/|K|) sum_i (a_i/h_i) n_i n_i^T,
/// so that the radial function satisfies rho(u)^{-2} = u.Au.
QuadraticForm lyz_body(const bodies::Polytope& p);

/// The canonical T with T^T A T = I/2, namely A^{-1/2}/sqrt(2).
Mat whitening_map(const QuadraticForm& q);

}  // namespace lyzlab::ellipsoids
