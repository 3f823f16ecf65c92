#pragma once

#include "lyzlab/common.hpp"
#include "lyzlab/polytope.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace lyzlab::logconcave {

/// Weighted point cloud in R^d.
struct DiscreteMeasure {
    std::vector<Vec> points;
    std::vector<double> weights;

    double total_mass() const;
    Vec barycenter() const;
    void validate() const;  // weights >= 0, equal lengths, finite mass
};

/// Potential sampled on a uniform tensor grid; +infinity outside the box.
/// Discrete convexity is checked along axes and diagonals at construction;
/// violations beyond eps_cvx = 1e-8 set `nonconvex` (the function is still
/// accepted and downstream reports carry the flag).
struct GridPotential {
    Vec origin;                  // coordinates of node (0,...,0)
    Vec spacing;                 // per-axis spacing
    std::vector<int> shape;      // nodes per axis
    std::vector<double> values;  // row-major, last axis fastest
    bool nonconvex = false;
    double convexity_residual = 0.0;

    int dimension() const { return static_cast<int>(shape.size()); }
    std::size_t size() const;
    double coord(int axis, int index) const { return origin[axis] + spacing[axis] * index; }
    double value_at(const std::vector<int>& idx) const;

    void check_convexity();
};

struct Gaussian {
    double scale;  // phi(x) = scale |x|^2
};

struct QuadForm {
    Mat a;  // phi(x) = x.Ax; closure of the Gaussian family under GL(n)
};

struct QuadMinkowski {
    bodies::Polytope body;
    bodies::Polytope body_polar;
    double scale;  // phi(x) = scale ||x||_K^2
};

struct ConeFn {
    bodies::Polytope body;
    bodies::Polytope body_polar;
    double offset;  // phi(x) = ||x||_K - offset
};

/// phi = offset on the body, +infinity outside: the Legendre dual of ConeFn.
struct IndicatorFn {
    bodies::Polytope body;
    bodies::Polytope body_polar;
    double offset;
};

/// Log-concave function f = e^{-phi}, phi convex. The analytic families keep
/// closed forms for everything downstream; Grid covers the rest.
class LogConcaveFn {
  public:
    using Family = std::variant<Gaussian, QuadForm, QuadMinkowski, ConeFn, IndicatorFn, GridPotential>;

    static LogConcaveFn gaussian(int dim, double scale);
    static LogConcaveFn quad_form(Mat a);
    static LogConcaveFn quad_minkowski(bodies::Polytope body, double scale);
    static LogConcaveFn cone(bodies::Polytope body, double offset);
    static LogConcaveFn indicator(bodies::Polytope body, double offset);
    static LogConcaveFn grid(GridPotential g);

    int dimension() const { return dim_; }
    const Family& family() const { return family_; }

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&family_);
    }

    const char* family_name() const;
    bool nonconvex_flag() const;

  private:
    LogConcaveFn(int dim, Family fam) : dim_(dim), family_(std::move(fam)) {}
    int dim_;
    Family family_;
};

/// phi(x); +infinity outside dom(phi).
double potential(const LogConcaveFn& f, const Vec& x);

/// f(x) = e^{-phi(x)}.
double eval(const LogConcaveFn& f, const Vec& x);

/// Gradient of phi where it exists. `ridge_tol` is an absolute distance: a
/// point closer than this to a facet-cone ridge (or the apex of a cone
/// potential) throws NonSmoothPoint so quadrature callers can offset nodes.
Vec gradient(const LogConcaveFn& f, const Vec& x, double ridge_tol = 0.0);

/// Legendre transform: f -> f^o = e^{-phi*}. Analytic families map to
/// analytic families; grids go through the per-axis monotone-slope
/// (convex-envelope) transform onto a slope-range dual box.
LogConcaveFn legendre(const LogConcaveFn& f);

/// J(f): closed forms for the analytic families, tensor quadrature for grids.
double total_mass(const LogConcaveFn& f);

struct GridOptions {
    int resolution = 129;
    double radius = 0.0;  // 0: derive from sampled slopes
};

/// alpha.f (+) beta.g = e^{-(alpha phi* + beta psi*)*}. Closed form for
/// quadratic families and same-body gauge families; otherwise computed on the
/// dual side over a grid.
LogConcaveFn asplund_sum(double alpha, const LogConcaveFn& f, double beta, const LogConcaveFn& g,
                         const GridOptions& opts = {});

struct SurfaceMeasure {
    DiscreteMeasure measure;     // atoms at grad phi(x_k), weights w_k f(x_k)
    double error_bound = 0.0;    // truncation tail + discarded ridge mass
    std::vector<std::string> flags;
};

/// mu_f: pushforward of f(x)dx under grad phi. Midpoint nodes for n <= 3,
/// scrambled low-discrepancy nodes for n in {4,5,6}.
SurfaceMeasure surface_measure(const LogConcaveFn& f, int resolution = 0, std::uint64_t seed = 0,
                               int threads = 0);

/// delta J(f,g) = int psi*(grad phi(x)) f(x) dx; +infinity is a legal value.
/// Uses closed forms where the families allow, otherwise quadrature.
double first_variation(const LogConcaveFn& f, const LogConcaveFn& g);

/// Quadrature-only route (the independent side for cross-checks).
double first_variation_numeric(const LogConcaveFn& f, const LogConcaveFn& g, int resolution = 0,
                               std::uint64_t seed = 0, int threads = 0);

/// Quadrature-only total mass.
double total_mass_numeric(const LogConcaveFn& f, int resolution = 0, std::uint64_t seed = 0,
                          int threads = 0);

/// Truncation radius R such that the mass of e^{-phi} outside [-R,R]^n is
/// below tail_rel * J estimate; from the sampled linear lower bound on phi.
double truncation_radius(const LogConcaveFn& f, double tail_rel = 1e-10);

/// Sample an analytic potential onto a grid (test and CLI helper).
GridPotential sample_grid(const LogConcaveFn& f, double radius, int nodes_per_axis);

/// True when the two bodies have identical canonical vertex lists.
bool same_body(const bodies::Polytope& a, const bodies::Polytope& b, double tol = 1e-12);

}  // namespace lyzlab::logconcave
