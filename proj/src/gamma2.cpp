#include "lyzlab/gamma2.hpp"

#include "integrate_detail.hpp"
#include "lyzlab/quadrature.hpp"
#include "lyzlab/rng.hpp"

#include <cmath>
#include <optional>

namespace lyzlab::lyz {

using logconcave::ConeFn;
using logconcave::Gaussian;
using logconcave::GridPotential;
using logconcave::IndicatorFn;
using logconcave::LogConcaveFn;
using logconcave::QuadForm;
using logconcave::QuadMinkowski;

const char* to_string(Backend b) { return b == Backend::analytic ? "analytic" : "numeric"; }

namespace {

constexpr double kEpsPos = 1e-10;

// Def-level precondition: phi* > 0 away from the origin. Exact for the
// analytic families, sampled over 4096 directions at two radii for grids.
void check_dual_positivity(const LogConcaveFn& f) {
    if (f.as<Gaussian>() || f.as<QuadForm>() || f.as<QuadMinkowski>()) return;
    if (const auto* c = f.as<ConeFn>()) {
        if (c->offset <= kEpsPos)
            fail(ErrorKind::PositivityViolation, "cone offset must be positive (phi* = offset on the polar)");
        return;
    }
    if (const auto* i = f.as<IndicatorFn>()) {
        if (i->offset > 0.0)
            fail(ErrorKind::PositivityViolation, "indicator level exceeds 0: phi* = h_B - offset dips below 0");
        return;
    }
    const int n = f.dimension();
    const LogConcaveFn dual = logconcave::legendre(f);
    const double r = logconcave::truncation_radius(f);
    Rng rng = Rng::stream(0, 0x70687374);  // deterministic probe directions
    for (int s = 0; s < 4096; ++s) {
        const Vec u = rng.unit_vec(n);
        for (double radius : {1e-2 * r, r}) {
            const double v = logconcave::potential(dual, radius * u);
            if (std::isfinite(v) && v <= kEpsPos)
                fail(ErrorKind::PositivityViolation,
                     "phi* <= 0 sampled at radius " + std::to_string(radius));
        }
    }
}

std::optional<Gamma2Result> analytic_gamma2(const LogConcaveFn& f) {
    const int n = f.dimension();
    if (const auto* g = f.as<Gaussian>()) {
        Gamma2Result r;
        r.matrix = g->scale * Mat::Identity(n, n);
        r.delta_j = (n / 2.0) * std::pow(M_PI / g->scale, n / 2.0);
        r.backend = Backend::analytic;
        r.error_bound = 0.0;
        return r;
    }
    if (const auto* q = f.as<QuadForm>()) {
        Gamma2Result r;
        r.matrix = q->a;
        r.delta_j = (n / 2.0) * std::pow(M_PI, n / 2.0) / std::sqrt(q->a.determinant());
        r.backend = Backend::analytic;
        r.error_bound = 0.0;
        return r;
    }
    if (const auto* q = f.as<QuadMinkowski>()) {
        Gamma2Result r;
        r.matrix = q->scale * ellipsoids::lyz_body(q->body).matrix();
        r.delta_j = (n / 2.0) * std::pow(q->scale, -n / 2.0) * std::tgamma(n / 2.0 + 1.0) *
                    q->body.volume();
        r.backend = Backend::analytic;
        r.error_bound = 0.0;
        return r;
    }
    if (const auto* c = f.as<ConeFn>()) {
        Gamma2Result r;
        r.matrix = (n / (8.0 * c->offset * c->offset)) * ellipsoids::lyz_body(c->body).matrix();
        r.delta_j = c->offset * std::exp(c->offset) * std::tgamma(n + 1.0) * c->body.volume();
        r.backend = Backend::analytic;
        r.error_bound = 0.0;
        return r;
    }
    return std::nullopt;
}

Gamma2Result numeric_gamma2(const LogConcaveFn& f, const Gamma2Options& opts) {
    const int n = f.dimension();
    const detail::Plan p = detail::make_plan(f, opts.resolution, opts.seed);
    quad::MidpointNodes mid{p.dim, p.radius, p.res};
    std::optional<quad::HaltonNodes> halton;
    if (p.qmc) halton.emplace(p.dim, p.radius, p.count, p.seed);

    // components: n*(n+1)/2 upper-triangle sums, then delta_j, discarded, mass
    const int tri = n * (n + 1) / 2;
    const int comp = tri + 3;
    auto block = [&](std::int64_t lo, std::int64_t hi, double* acc) {
        detail::NodeEval ev;
        for (std::int64_t k = lo; k < hi; ++k) {
            const Vec x = detail::plan_node(p, mid, halton ? &*halton : nullptr, k);
            if (!detail::eval_node(f, x, p.cell, ev)) {
                acc[tri + 1] += p.weight * std::exp(-logconcave::potential(f, x));
                continue;
            }
            if (ev.fx <= 0.0) continue;
            acc[tri + 2] += p.weight * ev.fx;
            if (ev.fenchel < 1e-300) continue;  // removable singularity at grad phi ~ 0
            const double base = p.weight * ev.fx / ev.fenchel;
            int c = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) acc[c++] += base * ev.grad[i] * ev.grad[j];
            acc[tri] += p.weight * ev.fx * ev.fenchel;
        }
    };
    const std::vector<double> sums = quad::block_sum(p.count, comp, opts.threads, block);

    const double delta_j = sums[tri];
    if (!(delta_j > 0.0)) fail(ErrorKind::PositivityViolation, "delta J(f,f) not positive");
    Mat m(n, n);
    int c = 0;
    const double factor = n * n / (8.0 * delta_j);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m(i, j) = factor * sums[c];
            m(j, i) = m(i, j);
            ++c;
        }

    Gamma2Result r;
    r.matrix = std::move(m);
    r.delta_j = delta_j;
    r.backend = Backend::numeric;
    const double mass = sums[tri + 2];
    r.error_bound = (sums[tri + 1] + 1e-10 * std::max(mass, 1e-300)) / std::max(mass, 1e-300);
    if (f.nonconvex_flag()) r.flags.push_back("nonconvex_input");
    return r;
}

}  // namespace

Gamma2Result gamma2_fn(const LogConcaveFn& f, const Gamma2Options& opts) {
    check_dual_positivity(f);
    if (opts.backend == Backend::analytic) {
        auto r = analytic_gamma2(f);
        if (!r)
            fail(ErrorKind::BackendUnavailable,
                 std::string("no closed form for family '") + f.family_name() + "'");
        return *r;
    }
    return numeric_gamma2(f, opts);
}

double gamma2_total_mass(const ellipsoids::QuadraticForm& m) {
    const int n = m.dimension();
    return std::tgamma(n / 2.0 + 1.0) * unit_ball_volume(n) *
           std::exp(-0.5 * std::log(m.matrix().determinant()));
}

LogConcaveFn compose_affine(const LogConcaveFn& f, const Mat& t) {
    const int n = f.dimension();
    if (t.rows() != n || t.cols() != n) fail(ErrorKind::SingularMap, "map dimension mismatch");
    if (std::abs(t.determinant()) < 1e-14) fail(ErrorKind::SingularMap, "det T ~ 0");

    struct Visitor {
        const Mat& t;
        int n;
        LogConcaveFn operator()(const Gaussian& g) const {
            const Mat gram = t.transpose() * t;
            const double s = gram(0, 0);
            if ((gram - s * Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12 * std::abs(s))
                return LogConcaveFn::gaussian(n, g.scale * s);
            return LogConcaveFn::quad_form(g.scale * gram);
        }
        LogConcaveFn operator()(const QuadForm& q) const {
            return LogConcaveFn::quad_form(t.transpose() * q.a * t);
        }
        LogConcaveFn operator()(const QuadMinkowski& q) const {
            return LogConcaveFn::quad_minkowski(bodies::apply_linear(t.inverse(), q.body), q.scale);
        }
        LogConcaveFn operator()(const ConeFn& c) const {
            return LogConcaveFn::cone(bodies::apply_linear(t.inverse(), c.body), c.offset);
        }
        LogConcaveFn operator()(const IndicatorFn& i) const {
            return LogConcaveFn::indicator(bodies::apply_linear(t.inverse(), i.body), i.offset);
        }
        LogConcaveFn operator()(const GridPotential& g) const {
            // resample phi o T on the preimage bounding box
            const int dim = n;
            Vec lo = Vec::Constant(dim, std::numeric_limits<double>::infinity());
            Vec hi = -lo;
            const Mat tinv = t.inverse();
            const std::size_t corners = std::size_t{1} << dim;
            for (std::size_t mask = 0; mask < corners; ++mask) {
                Vec corner(dim);
                for (int a = 0; a < dim; ++a)
                    corner[a] = (mask >> a) & 1 ? g.coord(a, g.shape[a] - 1) : g.origin[a];
                const Vec pre = tinv * corner;
                lo = lo.cwiseMin(pre);
                hi = hi.cwiseMax(pre);
            }
            GridPotential out;
            out.shape = g.shape;
            out.origin = lo;
            out.spacing = Vec(dim);
            for (int a = 0; a < dim; ++a) out.spacing[a] = (hi[a] - lo[a]) / (g.shape[a] - 1);
            out.values.resize(g.size());
            const LogConcaveFn source = LogConcaveFn::grid(g);
            std::vector<int> idx(dim, 0);
            for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
                std::size_t rem = flat;
                for (int a = dim - 1; a >= 0; --a) {
                    idx[a] = static_cast<int>(rem % g.shape[a]);
                    rem /= g.shape[a];
                }
                Vec x(dim);
                for (int a = 0; a < dim; ++a) x[a] = out.coord(a, idx[a]);
                out.values[flat] = logconcave::potential(source, t * x);
            }
            out.check_convexity();
            return LogConcaveFn::grid(std::move(out));
        }
    };
    return std::visit(Visitor{t, n}, f.family());
}

IsotropicPosition isotropic_position(const LogConcaveFn& f, const Gamma2Options& opts) {
    const Gamma2Result g = gamma2_fn(f, opts);
    const Mat t = ellipsoids::whitening_map(ellipsoids::QuadraticForm(g.matrix));
    return IsotropicPosition{t, compose_affine(f, t)};
}

}  // namespace lyzlab::lyz
