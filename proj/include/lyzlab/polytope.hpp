#pragma once

#include "lyzlab/common.hpp"

#include <cstdint>
#include <vector>

namespace lyzlab::bodies {

/// One facet of a polytope: unit outer normal, (n-1)-measure and support value
/// h = n . x for x on the facet. In dimension 1 the "area" of an endpoint is
/// the counting measure, i.e. 1.
struct Facet {
    Vec normal;
    double area = 0.0;
    double support = 0.0;
};

/// Full-dimensional convex polytope in R^n (n <= 3) containing the origin in
/// its interior. The vertex set is canonical: construction reduces the input
/// to its convex hull, orders the vertices deterministically (2-D:
/// counterclockwise by angle, ties by radius; otherwise lexicographic) and
/// derives the facet data once, so all queries afterwards are pure reads.
class Polytope {
  public:
    /// Builds the hull of `points` and derives facets. Throws
    /// DegenerateSample if the affine hull has dimension < n and
    /// OriginNotInterior if some facet has support value <= 0.
    /// `require_origin_interior = false` skips the latter check; gauge,
    /// radial and polar are undefined on such a body (used internally while
    /// recentering).
    explicit Polytope(std::vector<Vec> points, bool require_origin_interior = true);

    int dimension() const { return dim_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }

    double volume() const { return volume_; }

    /// Largest vertex norm; the scale used by relative tolerances.
    double radius() const { return radius_; }

  private:
    int dim_ = 0;
    std::vector<Vec> vertices_;
    std::vector<Facet> facets_;
    double volume_ = 0.0;
    double radius_ = 0.0;
};

/// h_K(x) = max over vertices of x.v; defined for every x (0 at the origin).
double support(const Polytope& p, const Vec& x);

/// Gauge ||x||_K = max_i (x.n_i)/h_i; equals h_{K^o}(x) and 1/radial for x != 0.
double minkowski_norm(const Polytope& p, const Vec& x);

/// rho_K(x) = max{t >= 0 : t x in K}. Throws ZeroDirection at x = 0.
double radial(const Polytope& p, const Vec& x);

/// Polar body K^o; vertices are the scaled facet normals n_i/h_i.
Polytope polar(const Polytope& p);

/// Volume-weighted centroid via simplicial decomposition.
Vec centroid(const Polytope& p);

/// Volume by simplicial decomposition from the centroid; an independent route
/// used to cross-check the facet-pyramid formula (1/n) sum a_i h_i.
double volume_by_simplices(const Polytope& p);

/// Hull of `vertex_count` i.i.d. points on a spherical shell, recentered so
/// the centroid is the origin. Deterministic per seed. n in {1,2,3}.
Polytope random_body(std::uint64_t seed, int n, int vertex_count);

/// Affine image T K (vertices mapped through T). Throws SingularMap.
Polytope apply_linear(const Mat& t, const Polytope& p);

/// Regular n-simplex with unit circumradius and centroid at the origin.
Polytope regular_simplex(int n);

/// Axis-aligned cube [-1,1]^n.
Polytope cube(int n);

/// Regular m-gon in the plane with unit circumradius, first vertex at (1,0).
Polytope regular_polygon(int m);

/// Dimension of the affine hull of a point set (rank of the centered matrix).
int affine_hull_dimension(const std::vector<Vec>& points, double tol = 1e-9);

}  // namespace lyzlab::bodies
