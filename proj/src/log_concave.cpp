#include "lyzlab/log_concave.hpp"

#include "integrate_detail.hpp"
#include "lyzlab/quadrature.hpp"
#include "lyzlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lyzlab::logconcave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEpsCvx = 1e-8;
}  // namespace

// ---------------------------------------------------------------------------
// DiscreteMeasure
// ---------------------------------------------------------------------------

double DiscreteMeasure::total_mass() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Vec DiscreteMeasure::barycenter() const {
    if (points.empty()) fail(ErrorKind::SchemaError, "empty measure has no barycenter");
    Vec acc = Vec::Zero(points.front().size());
    double mass = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        acc += weights[i] * points[i];
        mass += weights[i];
    }
    return acc / mass;
}

void DiscreteMeasure::validate() const {
    if (points.size() != weights.size()) fail(ErrorKind::SchemaError, "points/weights length mismatch");
    double mass = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) fail(ErrorKind::SchemaError, "weights must be finite and >= 0");
        mass += w;
    }
    if (!std::isfinite(mass)) fail(ErrorKind::SchemaError, "total mass not finite");
}

// ---------------------------------------------------------------------------
// GridPotential
// ---------------------------------------------------------------------------

std::size_t GridPotential::size() const {
    std::size_t s = 1;
    for (int k : shape) s *= static_cast<std::size_t>(k);
    return s;
}

double GridPotential::value_at(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) flat = flat * shape[a] + idx[a];
    return values[flat];
}

void GridPotential::check_convexity() {
    const int n = dimension();
    // directions: all of {-1,0,1}^n up to sign, excluding zero
    std::vector<std::vector<int>> dirs;
    std::vector<int> d(n, 0);
    const int total = static_cast<int>(std::pow(3, n));
    for (int code = 0; code < total; ++code) {
        int c = code;
        bool nonzero = false, leading_positive = false, decided = false;
        for (int a = 0; a < n; ++a) {
            d[a] = c % 3 - 1;
            c /= 3;
            if (d[a] != 0 && !decided) {
                leading_positive = d[a] > 0;
                decided = true;
            }
            if (d[a] != 0) nonzero = true;
        }
        if (nonzero && leading_positive) dirs.push_back(d);
    }

    double worst = 0.0;
    std::vector<int> idx(n, 0);
    const std::size_t count = size();
    for (std::size_t flat = 0; flat < count; ++flat) {
        std::size_t rem = flat;
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % shape[a]);
            rem /= shape[a];
        }
        for (const auto& dir : dirs) {
            bool ok = true;
            std::size_t up = 0, down = 0;
            for (int a = 0; a < n && ok; ++a) {
                const int iu = idx[a] + dir[a], id = idx[a] - dir[a];
                if (iu < 0 || iu >= shape[a] || id < 0 || id >= shape[a]) ok = false;
                up = up * shape[a] + iu;
                down = down * shape[a] + id;
            }
            if (!ok) continue;
            const double a2 = values[up], b2 = values[down], c2 = values[flat];
            if (!std::isfinite(a2) || !std::isfinite(b2) || !std::isfinite(c2)) continue;
            const double second = a2 + b2 - 2.0 * c2;
            if (second < worst) worst = second;
        }
    }
    convexity_residual = -worst;
    nonconvex = convexity_residual > kEpsCvx;
}

namespace {

// Multilinear interpolation of the grid potential; +inf outside the box or
// when a participating corner is +inf.
double grid_eval(const GridPotential& g, const Vec& x) {
    const int n = g.dimension();
    std::vector<int> base(n);
    std::vector<double> frac(n);
    for (int a = 0; a < n; ++a) {
        const double t = (x[a] - g.origin[a]) / g.spacing[a];
        if (t < 0.0 || t > g.shape[a] - 1) return kInf;
        int i = static_cast<int>(std::floor(t));
        if (i >= g.shape[a] - 1) i = g.shape[a] - 2;
        if (g.shape[a] == 1) i = 0;
        base[a] = i;
        frac[a] = t - i;
    }
    double acc = 0.0;
    const int corners = 1 << n;
    for (int cmask = 0; cmask < corners; ++cmask) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int a = 0; a < n; ++a) {
            const int bit = (cmask >> a) & 1;
            w *= bit ? frac[a] : 1.0 - frac[a];
            flat = flat * g.shape[a] + base[a] + bit;
        }
        if (w == 0.0) continue;
        const double v = g.values[flat];
        if (!std::isfinite(v)) return kInf;
        acc += w * v;
    }
    return acc;
}

double gauge_and_grad(const bodies::Polytope& k, const Vec& x, Vec* grad_out, double* ridge_dist) {
    double best = -kInf, second = -kInf;
    const bodies::Facet* arg = nullptr;
    const bodies::Facet* runner = nullptr;
    for (const bodies::Facet& f : k.facets()) {
        const double v = f.normal.dot(x) / f.support;
        if (v > best) {
            second = best;
            runner = arg;
            best = v;
            arg = &f;
        } else if (v > second) {
            second = v;
            runner = &f;
        }
    }
    if (grad_out) *grad_out = arg->normal / arg->support;
    if (ridge_dist) {
        *ridge_dist = kInf;
        if (runner) {
            const Vec diff = arg->normal / arg->support - runner->normal / runner->support;
            const double dn = diff.norm();
            if (dn > 0.0) *ridge_dist = (best - second) / dn;
        }
    }
    return std::max(best, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

LogConcaveFn LogConcaveFn::gaussian(int dim, double scale) {
    if (scale <= 0.0) fail(ErrorKind::SchemaError, "gaussian scale must be > 0");
    return LogConcaveFn(dim, Gaussian{scale});
}

LogConcaveFn LogConcaveFn::quad_form(Mat a) {
    const int dim = static_cast<int>(a.rows());
    Eigen::SelfAdjointEigenSolver<Mat> eig((a + a.transpose()) / 2.0);
    if (eig.eigenvalues().minCoeff() <= 0.0)
        fail(ErrorKind::NotPositiveDefinite, "quadratic potential must be positive definite");
    return LogConcaveFn(dim, QuadForm{(a + a.transpose()) / 2.0});
}

LogConcaveFn LogConcaveFn::quad_minkowski(bodies::Polytope body, double scale) {
    if (scale <= 0.0) fail(ErrorKind::SchemaError, "quad-minkowski scale must be > 0");
    const int dim = body.dimension();
    bodies::Polytope pol = bodies::polar(body);
    return LogConcaveFn(dim, QuadMinkowski{std::move(body), std::move(pol), scale});
}

LogConcaveFn LogConcaveFn::cone(bodies::Polytope body, double offset) {
    const int dim = body.dimension();
    bodies::Polytope pol = bodies::polar(body);
    return LogConcaveFn(dim, ConeFn{std::move(body), std::move(pol), offset});
}

LogConcaveFn LogConcaveFn::indicator(bodies::Polytope body, double offset) {
    const int dim = body.dimension();
    bodies::Polytope pol = bodies::polar(body);
    return LogConcaveFn(dim, IndicatorFn{std::move(body), std::move(pol), offset});
}

LogConcaveFn LogConcaveFn::grid(GridPotential g) {
    const int dim = g.dimension();
    if (dim < 1 || static_cast<int>(g.origin.size()) != dim || static_cast<int>(g.spacing.size()) != dim)
        fail(ErrorKind::SchemaError, "grid origin/spacing/shape dimensions disagree");
    if (g.values.size() != g.size()) fail(ErrorKind::SchemaError, "grid values length != prod(shape)");
    g.check_convexity();
    return LogConcaveFn(dim, std::move(g));
}

const char* LogConcaveFn::family_name() const {
    struct Visitor {
        const char* operator()(const Gaussian&) const { return "gaussian"; }
        const char* operator()(const QuadForm&) const { return "quad-form"; }
        const char* operator()(const QuadMinkowski&) const { return "quad-minkowski"; }
        const char* operator()(const ConeFn&) const { return "cone"; }
        const char* operator()(const IndicatorFn&) const { return "indicator"; }
        const char* operator()(const GridPotential&) const { return "grid"; }
    };
    return std::visit(Visitor{}, family_);
}

bool LogConcaveFn::nonconvex_flag() const {
    if (const auto* g = as<GridPotential>()) return g->nonconvex;
    return false;
}

// ---------------------------------------------------------------------------
// Pointwise
// ---------------------------------------------------------------------------

double potential(const LogConcaveFn& f, const Vec& x) {
    struct Visitor {
        const Vec& x;
        double operator()(const Gaussian& g) const { return g.scale * x.squaredNorm(); }
        double operator()(const QuadForm& q) const { return x.dot(q.a * x); }
        double operator()(const QuadMinkowski& q) const {
            const double m = bodies::minkowski_norm(q.body, x);
            return q.scale * m * m;
        }
        double operator()(const ConeFn& c) const { return bodies::minkowski_norm(c.body, x) - c.offset; }
        double operator()(const IndicatorFn& i) const {
            return bodies::minkowski_norm(i.body, x) <= 1.0 + 1e-12 ? i.offset : kInf;
        }
        double operator()(const GridPotential& g) const { return grid_eval(g, x); }
    };
    return std::visit(Visitor{x}, f.family());
}

double eval(const LogConcaveFn& f, const Vec& x) { return std::exp(-potential(f, x)); }

Vec gradient(const LogConcaveFn& f, const Vec& x, double ridge_tol) {
    struct Visitor {
        const Vec& x;
        double tol;
        Vec operator()(const Gaussian& g) const { return 2.0 * g.scale * x; }
        Vec operator()(const QuadForm& q) const { return 2.0 * (q.a * x); }
        Vec operator()(const QuadMinkowski& q) const {
            if (x.norm() == 0.0) return Vec::Zero(x.size());
            Vec g;
            double rd;
            const double m = gauge_and_grad(q.body, x, &g, &rd);
            if (rd <= tol) fail(ErrorKind::NonSmoothPoint, "facet-cone ridge");
            return 2.0 * q.scale * m * g;
        }
        Vec operator()(const ConeFn& c) const {
            if (x.norm() <= tol || x.norm() == 0.0)
                fail(ErrorKind::NonSmoothPoint, "cone potential is not smooth at the origin");
            Vec g;
            double rd;
            gauge_and_grad(c.body, x, &g, &rd);
            if (rd <= tol) fail(ErrorKind::NonSmoothPoint, "facet-cone ridge");
            return g;
        }
        Vec operator()(const IndicatorFn& i) const {
            if (bodies::minkowski_norm(i.body, x) < 1.0 - 1e-12) return Vec::Zero(x.size());
            fail(ErrorKind::NonSmoothPoint, "indicator potential is smooth only in the interior");
        }
        Vec operator()(const GridPotential& g) const {
            const int n = g.dimension();
            Vec out(n);
            for (int a = 0; a < n; ++a) {
                Vec xp = x, xm = x;
                xp[a] += g.spacing[a];
                xm[a] -= g.spacing[a];
                const double vp = grid_eval(g, xp), vm = grid_eval(g, xm);
                if (!std::isfinite(vp) || !std::isfinite(vm))
                    fail(ErrorKind::NonSmoothPoint, "central difference leaves the grid box");
                out[a] = (vp - vm) / (2.0 * g.spacing[a]);
            }
            return out;
        }
    };
    return std::visit(Visitor{x, ridge_tol}, f.family());
}

// ---------------------------------------------------------------------------
// Legendre transform
// ---------------------------------------------------------------------------

namespace {

// 1-D discrete conjugate sup_i (x_i y - v_i) on ascending output coords.
// Lower convex envelope of (x_i, v_i), then a monotone pointer sweep; the
// argmax index never decreases as y grows.
void llt_line(const std::vector<double>& xs, const double* vs, std::ptrdiff_t stride,
              const std::vector<double>& ys, double* out, std::ptrdiff_t out_stride) {
    const int m = static_cast<int>(xs.size());
    thread_local std::vector<int> hull;
    hull.clear();
    bool has_neg_inf = false;
    for (int i = 0; i < m; ++i) {
        const double v = vs[i * stride];
        if (v == -kInf) {
            has_neg_inf = true;
            break;
        }
        if (!std::isfinite(v)) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            // keep b only if it lies strictly below chord a-i
            const double lhs = (vs[b * stride] - vs[a * stride]) * (xs[i] - xs[a]);
            const double rhs = (v - vs[a * stride]) * (xs[b] - xs[a]);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }
    const int k = static_cast<int>(ys.size());
    if (has_neg_inf) {
        for (int j = 0; j < k; ++j) out[j * out_stride] = kInf;
        return;
    }
    if (hull.empty()) {
        for (int j = 0; j < k; ++j) out[j * out_stride] = -kInf;
        return;
    }
    std::size_t p = 0;
    for (int j = 0; j < k; ++j) {
        const double y = ys[j];
        while (p + 1 < hull.size() &&
               xs[hull[p + 1]] * y - vs[hull[p + 1] * stride] >= xs[hull[p]] * y - vs[hull[p] * stride])
            ++p;
        out[j * out_stride] = xs[hull[p]] * y - vs[hull[p] * stride];
    }
}

GridPotential legendre_grid(const GridPotential& g) {
    const int n = g.dimension();

    // dual axes span the slope range of the potential along each axis
    Vec dual_origin(n), dual_spacing(n);
    for (int a = 0; a < n; ++a) {
        double lo = kInf, hi = -kInf;
        std::vector<int> idx(n, 0);
        const std::size_t count = g.size();
        for (std::size_t flat = 0; flat < count; ++flat) {
            std::size_t rem = flat;
            for (int b = n - 1; b >= 0; --b) {
                idx[b] = static_cast<int>(rem % g.shape[b]);
                rem /= g.shape[b];
            }
            if (idx[a] + 1 >= g.shape[a]) continue;
            std::size_t up = 0;
            for (int b = 0; b < n; ++b) up = up * g.shape[b] + idx[b] + (b == a ? 1 : 0);
            const double v0 = g.values[flat], v1 = g.values[up];
            if (!std::isfinite(v0) || !std::isfinite(v1)) continue;
            const double s = (v1 - v0) / g.spacing[a];
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        if (!(lo < hi)) {
            lo = -1.0;
            hi = 1.0;
        }
        dual_origin[a] = lo;
        dual_spacing[a] = (hi - lo) / std::max(1, g.shape[a] - 1);
    }

    std::vector<double> work = g.values;
    std::vector<double> next(work.size());

    // per-axis conjugation; intermediate values are negated between stages
    for (int a = 0; a < n; ++a) {
        if (a > 0)
            for (double& v : work) v = -v;

        std::vector<double> xs(g.shape[a]), ys(g.shape[a]);
        for (int i = 0; i < g.shape[a]; ++i) {
            xs[i] = g.coord(a, i);
            ys[i] = dual_origin[a] + dual_spacing[a] * i;
        }

        // iterate over all lines along axis a
        std::size_t inner = 1;
        for (int b = a + 1; b < n; ++b) inner *= g.shape[b];
        std::size_t outer = 1;
        for (int b = 0; b < a; ++b) outer *= g.shape[b];
        const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(inner);

        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t i = 0; i < inner; ++i) {
                const std::size_t base = o * g.shape[a] * inner + i;
                llt_line(xs, work.data() + base, stride, ys, next.data() + base, stride);
            }
        std::swap(work, next);
    }

    GridPotential out;
    out.origin = dual_origin;
    out.spacing = dual_spacing;
    out.shape = g.shape;
    out.values = std::move(work);
    for (double& v : out.values)
        if (v == -kInf) v = kInf;  // unreachable duals: empty sup
    out.check_convexity();
    return out;
}

}  // namespace

LogConcaveFn legendre(const LogConcaveFn& f) {
    struct Visitor {
        int dim;
        LogConcaveFn operator()(const Gaussian& g) const {
            return LogConcaveFn::gaussian(dim, 1.0 / (4.0 * g.scale));
        }
        LogConcaveFn operator()(const QuadForm& q) const {
            return LogConcaveFn::quad_form(q.a.inverse() / 4.0);
        }
        LogConcaveFn operator()(const QuadMinkowski& q) const {
            return LogConcaveFn::quad_minkowski(q.body_polar, 1.0 / (4.0 * q.scale));
        }
        LogConcaveFn operator()(const ConeFn& c) const {
            return LogConcaveFn::indicator(c.body_polar, c.offset);
        }
        LogConcaveFn operator()(const IndicatorFn& i) const {
            return LogConcaveFn::cone(i.body_polar, i.offset);
        }
        LogConcaveFn operator()(const GridPotential& g) const {
            return LogConcaveFn::grid(legendre_grid(g));
        }
    };
    return std::visit(Visitor{f.dimension()}, f.family());
}

// ---------------------------------------------------------------------------
// Total mass
// ---------------------------------------------------------------------------

double total_mass(const LogConcaveFn& f) {
    const int n = f.dimension();
    struct Visitor {
        int n;
        double operator()(const Gaussian& g) const { return std::pow(M_PI / g.scale, n / 2.0); }
        double operator()(const QuadForm& q) const {
            return std::pow(M_PI, n / 2.0) / std::sqrt(q.a.determinant());
        }
        double operator()(const QuadMinkowski& q) const {
            return std::pow(q.scale, -n / 2.0) * std::tgamma(n / 2.0 + 1.0) * q.body.volume();
        }
        double operator()(const ConeFn& c) const {
            return std::exp(c.offset) * std::tgamma(n + 1.0) * c.body.volume();
        }
        double operator()(const IndicatorFn& i) const { return std::exp(-i.offset) * i.body.volume(); }
        double operator()(const GridPotential& g) const {
            // midpoint over cells; the multilinear value at a cell center is
            // the mean of its corners
            std::size_t cells = 1;
            double volume = 1.0;
            for (int a = 0; a < n; ++a) {
                cells *= static_cast<std::size_t>(g.shape[a] - 1);
                volume *= g.spacing[a];
            }
            const int corners = 1 << n;
            double acc = 0.0;
            std::vector<int> idx(n, 0);
            for (std::size_t cell = 0; cell < cells; ++cell) {
                std::size_t rem = cell;
                for (int a = n - 1; a >= 0; --a) {
                    idx[a] = static_cast<int>(rem % (g.shape[a] - 1));
                    rem /= static_cast<std::size_t>(g.shape[a] - 1);
                }
                double mean = 0.0;
                bool finite = true;
                for (int cmask = 0; cmask < corners && finite; ++cmask) {
                    std::size_t flat = 0;
                    for (int a = 0; a < n; ++a) flat = flat * g.shape[a] + idx[a] + ((cmask >> a) & 1);
                    if (!std::isfinite(g.values[flat]))
                        finite = false;
                    else
                        mean += g.values[flat];
                }
                if (finite) acc += std::exp(-mean / corners);
            }
            return acc * volume;
        }
    };
    return std::visit(Visitor{n}, f.family());
}

// ---------------------------------------------------------------------------
// Truncation radius
// ---------------------------------------------------------------------------

namespace {

// e^{-z} sum_{k<n} z^k/k! * (n-1)! / a^n  ==  int_R^inf r^{n-1} e^{-a r} dr
double upper_gamma_tail(int n, double a, double radius) {
    const double z = a * radius;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < n; ++k) {
        term *= z / k;
        sum += term;
    }
    return std::exp(-z) * sum * std::tgamma(n) / std::pow(a, n);
}

}  // namespace

double truncation_radius(const LogConcaveFn& f, double tail_rel) {
    const int n = f.dimension();
    if (const auto* ind = f.as<IndicatorFn>()) return ind->body.radius() * 1.0000001;
    if (const auto* g = f.as<GridPotential>()) {
        double r = 0.0;
        for (int a = 0; a < n; ++a)
            r = std::max({r, std::abs(g->origin[a]), std::abs(g->coord(a, g->shape[a] - 1))});
        return r;
    }

    const double r0 = 8.0;
    Rng rng = Rng::stream(0, 0x74727563);  // fixed stream: the radius is input-deterministic
    const int samples = std::max(64, 32 * n);
    const double phi0 = potential(f, Vec::Zero(n));

    double slope = kInf, inner_max = phi0;
    for (int s = 0; s < samples; ++s) {
        const Vec u = rng.unit_vec(n);
        slope = std::min(slope, (potential(f, r0 * u) - phi0) / r0);
        inner_max = std::max(inner_max, potential(f, 0.25 * u));
    }
    if (!(slope > 1e-8))
        fail(ErrorKind::SchemaError, "potential does not grow: total mass cannot be finite");

    const double j_lb = std::exp(-inner_max) * unit_ball_volume(n) * std::pow(0.25, n);
    const double target = tail_rel * j_lb;
    double radius = r0;
    for (int it = 0; it < 800; ++it) {
        const double tail =
            n * unit_ball_volume(n) * std::exp(-phi0) * upper_gamma_tail(n, slope, radius);
        if (tail <= target) break;
        radius *= 1.05;
    }
    return radius;
}

// ---------------------------------------------------------------------------
// Quadrature drivers
// ---------------------------------------------------------------------------

using detail::NodeEval;
using detail::Plan;
using detail::eval_node;
using detail::make_plan;
using detail::plan_node;

double total_mass_numeric(const LogConcaveFn& f, int resolution, std::uint64_t seed, int threads) {
    const Plan p = make_plan(f, resolution, seed);
    quad::MidpointNodes mid{p.dim, p.radius, p.res};
    std::optional<quad::HaltonNodes> halton;
    if (p.qmc) halton.emplace(p.dim, p.radius, p.count, p.seed);

    auto block = [&](std::int64_t lo, std::int64_t hi, double* acc) {
        for (std::int64_t k = lo; k < hi; ++k) {
            const Vec x = plan_node(p, mid, halton ? &*halton : nullptr, k);
            acc[0] += p.weight * std::exp(-potential(f, x));
        }
    };
    return quad::block_sum(p.count, 1, threads, block)[0];
}

SurfaceMeasure surface_measure(const LogConcaveFn& f, int resolution, std::uint64_t seed, int threads) {
    (void)threads;  // atom collection is sequential; order is part of the contract
    const int n = f.dimension();
    int res = resolution;
    if (res <= 0) res = n <= 2 ? 129 : (n == 3 ? 65 : 0);
    const Plan p = make_plan(f, res, seed);
    quad::MidpointNodes mid{p.dim, p.radius, p.res};
    std::optional<quad::HaltonNodes> halton;
    if (p.qmc) halton.emplace(p.dim, p.radius, p.count, p.seed);

    SurfaceMeasure out;
    double discarded = 0.0;
    NodeEval ev;
    for (std::int64_t k = 0; k < p.count; ++k) {
        const Vec x = plan_node(p, mid, halton ? &*halton : nullptr, k);
        if (!eval_node(f, x, p.cell, ev)) {
            discarded += p.weight * std::exp(-potential(f, x));
            continue;
        }
        if (ev.fx <= 0.0) continue;
        out.measure.points.push_back(ev.grad);
        out.measure.weights.push_back(p.weight * ev.fx);
    }
    out.error_bound = discarded + 1e-10 * total_mass(f);
    if (f.nonconvex_flag()) out.flags.push_back("nonconvex_input");
    return out;
}

double first_variation_numeric(const LogConcaveFn& f, const LogConcaveFn& g, int resolution,
                               std::uint64_t seed, int threads) {
    const LogConcaveFn gd = legendre(g);
    const Plan p = make_plan(f, resolution, seed);
    quad::MidpointNodes mid{p.dim, p.radius, p.res};
    std::optional<quad::HaltonNodes> halton;
    if (p.qmc) halton.emplace(p.dim, p.radius, p.count, p.seed);

    // components: [0] integral, [1] infinite-psi* mass
    auto block = [&](std::int64_t lo, std::int64_t hi, double* acc) {
        NodeEval ev;
        for (std::int64_t k = lo; k < hi; ++k) {
            const Vec x = plan_node(p, mid, halton ? &*halton : nullptr, k);
            if (!eval_node(f, x, p.cell, ev) || ev.fx <= 0.0) continue;
            const double psi = potential(gd, ev.grad);
            if (!std::isfinite(psi)) {
                acc[1] += p.weight * ev.fx;
                continue;
            }
            acc[0] += p.weight * ev.fx * psi;
        }
    };
    const std::vector<double> sums = quad::block_sum(p.count, 2, threads, block);
    if (sums[1] > 1e-9 * total_mass(f)) return kInf;
    return sums[0];
}

double first_variation(const LogConcaveFn& f, const LogConcaveFn& g) {
    const int n = f.dimension();

    // quadratic x quadratic: (1/2) tr(Ag^{-1} Af) pi^{n/2} det(Af)^{-1/2}
    auto quad_matrix = [n](const LogConcaveFn& h) -> std::optional<Mat> {
        if (const auto* ga = h.as<Gaussian>()) return Mat(ga->scale * Mat::Identity(n, n));
        if (const auto* qf = h.as<QuadForm>()) return qf->a;
        return std::nullopt;
    };
    const auto af = quad_matrix(f), ag = quad_matrix(g);
    if (af && ag) {
        const double tr = (ag->inverse() * (*af)).trace();
        return 0.5 * tr * std::pow(M_PI, n / 2.0) / std::sqrt(af->determinant());
    }

    const auto* fq = f.as<QuadMinkowski>();
    const auto* gq = g.as<QuadMinkowski>();
    if (fq && gq && same_body(fq->body, gq->body)) {
        const double cf = fq->scale, cg = gq->scale;
        return (cf / cg) * (n / 2.0) * std::pow(cf, -n / 2.0) * std::tgamma(n / 2.0 + 1.0) *
               fq->body.volume();
    }

    const auto* fc = f.as<ConeFn>();
    const auto* gc = g.as<ConeFn>();
    if (fc && gc && same_body(fc->body, gc->body)) {
        // psi* = offset_g on K-polar and grad phi lies on its boundary
        return gc->offset * std::exp(fc->offset) * std::tgamma(n + 1.0) * fc->body.volume();
    }

    return first_variation_numeric(f, g);
}

// ---------------------------------------------------------------------------
// Asplund sum
// ---------------------------------------------------------------------------

LogConcaveFn asplund_sum(double alpha, const LogConcaveFn& f, double beta, const LogConcaveFn& g,
                         const GridOptions& opts) {
    if (alpha <= 0.0 || beta <= 0.0) fail(ErrorKind::SchemaError, "asplund weights must be > 0");
    if (f.dimension() != g.dimension()) fail(ErrorKind::SchemaError, "dimension mismatch");
    const int n = f.dimension();

    auto quad_matrix = [n](const LogConcaveFn& h) -> std::optional<Mat> {
        if (const auto* ga = h.as<Gaussian>()) return Mat(ga->scale * Mat::Identity(n, n));
        if (const auto* qf = h.as<QuadForm>()) return qf->a;
        return std::nullopt;
    };
    const auto af = quad_matrix(f), ag = quad_matrix(g);
    if (af && ag) {
        const Mat dual = alpha * af->inverse() / 4.0 + beta * ag->inverse() / 4.0;
        const Mat a = dual.inverse() / 4.0;
        const double offdiag = (a - a(0, 0) * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
        if (offdiag <= 1e-12 * std::abs(a(0, 0))) return LogConcaveFn::gaussian(n, a(0, 0));
        return LogConcaveFn::quad_form(a);
    }

    const auto* fq = f.as<QuadMinkowski>();
    const auto* gq = g.as<QuadMinkowski>();
    if (fq && gq && same_body(fq->body, gq->body)) {
        const double q = alpha / (4.0 * fq->scale) + beta / (4.0 * gq->scale);
        return LogConcaveFn::quad_minkowski(fq->body, 1.0 / (4.0 * q));
    }

    const auto* fc = f.as<ConeFn>();
    const auto* gc = g.as<ConeFn>();
    if (fc && gc && same_body(fc->body, gc->body))
        return LogConcaveFn::cone(fc->body, alpha * fc->offset + beta * gc->offset);

    const auto* fi = f.as<IndicatorFn>();
    const auto* gi = g.as<IndicatorFn>();
    if (fi && gi && same_body(fi->body, gi->body)) {
        Mat scale = (alpha + beta) * Mat::Identity(n, n);
        return LogConcaveFn::indicator(bodies::apply_linear(scale, fi->body),
                                       alpha * fi->offset + beta * gi->offset);
    }

    // general route: sample alpha phi* + beta psi* on a dual grid, conjugate back
    const LogConcaveFn fd = legendre(f), gd = legendre(g);
    double radius = opts.radius;
    if (radius <= 0.0) {
        Rng rng = Rng::stream(0, 0x61737067);
        const double r0 = 8.0;
        double slope = 0.0;
        const double pf0 = potential(f, Vec::Zero(n)), pg0 = potential(g, Vec::Zero(n));
        for (int s = 0; s < 128; ++s) {
            const Vec u = rng.unit_vec(n);
            slope = std::max(slope, (potential(f, r0 * u) - pf0) / r0);
            slope = std::max(slope, (potential(g, r0 * u) - pg0) / r0);
        }
        radius = 2.0 * slope + 1.0;
    }

    GridPotential dual;
    dual.origin = Vec::Constant(n, -radius);
    dual.spacing = Vec::Constant(n, 2.0 * radius / (opts.resolution - 1));
    dual.shape.assign(n, opts.resolution);
    dual.values.resize(dual.size());
    std::vector<int> idx(n, 0);
    for (std::size_t flat = 0; flat < dual.values.size(); ++flat) {
        std::size_t rem = flat;
        Vec y(n);
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % opts.resolution);
            rem /= opts.resolution;
        }
        for (int a = 0; a < n; ++a) y[a] = dual.coord(a, idx[a]);
        const double pf = potential(fd, y), pg = potential(gd, y);
        dual.values[flat] =
            std::isfinite(pf) && std::isfinite(pg) ? alpha * pf + beta * pg : kInf;
    }
    dual.check_convexity();
    return legendre(LogConcaveFn::grid(std::move(dual)));
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

GridPotential sample_grid(const LogConcaveFn& f, double radius, int nodes_per_axis) {
    const int n = f.dimension();
    GridPotential g;
    g.origin = Vec::Constant(n, -radius);
    g.spacing = Vec::Constant(n, 2.0 * radius / (nodes_per_axis - 1));
    g.shape.assign(n, nodes_per_axis);
    g.values.resize(g.size());
    std::vector<int> idx(n, 0);
    for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
        std::size_t rem = flat;
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % nodes_per_axis);
            rem /= nodes_per_axis;
        }
        Vec x(n);
        for (int a = 0; a < n; ++a) x[a] = g.coord(a, idx[a]);
        g.values[flat] = potential(f, x);
    }
    g.check_convexity();
    return g;
}

bool same_body(const bodies::Polytope& a, const bodies::Polytope& b, double tol) {
    if (a.dimension() != b.dimension()) return false;
    if (a.vertices().size() != b.vertices().size()) return false;
    for (std::size_t i = 0; i < a.vertices().size(); ++i)
        if ((a.vertices()[i] - b.vertices()[i]).lpNorm<Eigen::Infinity>() > tol) return false;
    return true;
}

}  // namespace lyzlab::logconcave
