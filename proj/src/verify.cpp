#include "lyzlab/verify.hpp"

#include "lyzlab/isotropic.hpp"
#include "lyzlab/json_io.hpp"
#include "lyzlab/quadratic_form.hpp"
#include "lyzlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lyzlab::verify {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

using logconcave::ConeFn;
using logconcave::Gaussian;
using logconcave::GridPotential;
using logconcave::IndicatorFn;
using logconcave::LogConcaveFn;
using logconcave::QuadForm;
using logconcave::QuadMinkowski;
}  // namespace

bool VerificationReport::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

double lyz_polar_constant(int n) {
    return std::pow(n + 1.0, (n + 1.0) / 2.0) * unit_ball_volume(n) /
           (std::tgamma(n + 1.0) * std::pow(n, n / 2.0));
}

double main_constant(int n) {
    return std::pow(8.0, n / 2.0) * std::pow(n + 1.0, (n + 1.0) / 2.0) *
           std::tgamma(n / 2.0 + 1.0) * unit_ball_volume(n) /
           (std::tgamma(n + 1.0) * std::pow(n, n));
}

// ---------------------------------------------------------------------------
// -log t
// ---------------------------------------------------------------------------

namespace {

// phi*(y / phi*(y)); -inf marks an unusable probe, +inf a point outside
// dom(phi*).
double sup_objective(const LogConcaveFn& dual, const Vec& y) {
    const double ps = logconcave::potential(dual, y);
    if (!std::isfinite(ps)) {
        // y outside dom(phi*): the rescaled point collapses to the origin
        return -kInf;
    }
    if (!(ps > 0.0)) fail(ErrorKind::PositivityViolation, "phi* <= 0 on supp mu_f");
    return logconcave::potential(dual, y / ps);
}

double golden_polish(const LogConcaveFn& dual, Vec y, double best, int iterations) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    const int n = static_cast<int>(y.size());
    const int per_axis = std::max(8, iterations / (2 * n));
    for (int pass = 0; pass < 2; ++pass)
        for (int a = 0; a < n; ++a) {
            const double delta = 0.25 * std::max(std::abs(y[a]), 0.25 * y.norm() + 1e-6);
            double lo = y[a] - delta, hi = y[a] + delta;
            auto at = [&](double v) {
                Vec probe = y;
                probe[a] = v;
                return sup_objective(dual, probe);
            };
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = at(x1), f2 = at(x2);
            for (int it = 0; it < per_axis; ++it) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = at(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = at(x1);
                }
            }
            const double mid = (lo + hi) / 2.0;
            const double fm = at(mid);
            if (fm > best) {
                best = fm;
                y[a] = mid;
            }
        }
    return best;
}

}  // namespace

NegLogT neg_log_t(const LogConcaveFn& f, lyz::Backend backend, int resolution, std::uint64_t seed) {
    // closed forms: the cone family attains the sup at the polar vertices;
    // the quadratic families have supp mu_f reaching the origin, where the
    // objective grows without bound
    if (backend == lyz::Backend::analytic) {
        if (const auto* c = f.as<ConeFn>()) {
            if (c->offset <= 0.0) fail(ErrorKind::PositivityViolation, "phi* = offset <= 0 on the polar");
            if (c->offset >= 1.0) return {c->offset, false};
            return {kInf, false};
        }
        if (f.as<Gaussian>() || f.as<QuadForm>() || f.as<QuadMinkowski>()) return {kInf, true};
        fail(ErrorKind::BackendUnavailable, std::string("no closed form for family '") + f.family_name() + "'");
    }

    const logconcave::LogConcaveFn dual = logconcave::legendre(f);
    const logconcave::SurfaceMeasure mu = logconcave::surface_measure(f, resolution, seed);
    const auto& pts = mu.measure.points;
    if (pts.empty()) fail(ErrorKind::DegenerateSample, "surface measure has no atoms");

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(pts.size());
    double best = -kInf;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (mu.measure.weights[k] <= 0.0) continue;
        const double v = sup_objective(dual, pts[k]);
        if (v == kInf) return {kInf, false};  // candidate left dom(phi*)
        if (v == -kInf) continue;
        scored.emplace_back(v, k);
        best = std::max(best, v);
    }
    if (scored.empty()) fail(ErrorKind::DegenerateSample, "no usable candidates");

    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t top = std::min<std::size_t>(16, scored.size());
    double polished = best;
    for (std::size_t i = 0; i < top; ++i)
        polished = std::max(polished, golden_polish(dual, pts[scored[i].second], scored[i].first, 64));
    if (polished == kInf) return {kInf, false};

    // probe toward the origin along the argmax ray: an increasing objective
    // marks a supremum that the finite sample cannot attain
    const Vec& ystar = pts[scored[0].second];
    bool unbounded = false;
    const double p1 = sup_objective(dual, ystar * 0.5);
    const double p2 = sup_objective(dual, ystar * 0.25);
    if (p1 > polished && (p2 > p1 || p2 == kInf)) unbounded = true;

    return {polished, unbounded};
}

// ---------------------------------------------------------------------------
// level sets
// ---------------------------------------------------------------------------

double level_set_volume(const LogConcaveFn& g, double t) {
    if (!(t > 0.0) || t > 1.0) fail(ErrorKind::InvalidLevel, "t must lie in (0, 1]");
    const double v = -std::log(t);
    const int n = g.dimension();

    if (const auto* ga = g.as<Gaussian>()) return unit_ball_volume(n) * std::pow(v / ga->scale, n / 2.0);
    if (const auto* qf = g.as<QuadForm>())
        return unit_ball_volume(n) * std::pow(v, n / 2.0) / std::sqrt(qf->a.determinant());
    if (const auto* qm = g.as<QuadMinkowski>())
        return qm->body.volume() * std::pow(v / qm->scale, n / 2.0);
    if (const auto* c = g.as<ConeFn>()) {
        const double reach = v + c->offset;
        return reach > 0.0 ? std::pow(reach, n) * c->body.volume() : 0.0;
    }
    if (const auto* i = g.as<IndicatorFn>()) return v >= i->offset ? i->body.volume() : 0.0;

    // grid: cell counting, boundary cells half-weighted
    const auto* gp = g.as<GridPotential>();
    double cell_volume = 1.0;
    std::size_t cells = 1;
    for (int a = 0; a < n; ++a) {
        cell_volume *= gp->spacing[a];
        cells *= static_cast<std::size_t>(gp->shape[a] - 1);
    }
    const int corners = 1 << n;
    double acc = 0.0;
    std::vector<int> idx(n, 0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t rem = cell;
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % (gp->shape[a] - 1));
            rem /= static_cast<std::size_t>(gp->shape[a] - 1);
        }
        int inside = 0;
        for (int cmask = 0; cmask < corners; ++cmask) {
            std::size_t flat = 0;
            for (int a = 0; a < n; ++a) flat = flat * gp->shape[a] + idx[a] + ((cmask >> a) & 1);
            if (gp->values[flat] <= v) ++inside;
        }
        if (inside == corners)
            acc += 1.0;
        else if (inside > 0)
            acc += 0.5;
    }
    return acc * cell_volume;
}

// ---------------------------------------------------------------------------
// checks
// ---------------------------------------------------------------------------

namespace {

bool hypothesis_phi_min_at_origin(const LogConcaveFn& f) {
    const int n = f.dimension();
    const double phi0 = logconcave::potential(f, Vec::Zero(n));
    if (!std::isfinite(phi0)) return false;
    Rng rng = Rng::stream(0, 0x68797068);
    for (int s = 0; s < 64; ++s) {
        const Vec u = rng.unit_vec(n);
        for (double r : {0.25, 1.0, 4.0}) {
            const double v = logconcave::potential(f, r * u);
            if (std::isfinite(v) && v <= phi0) return false;
        }
    }
    return true;
}

double default_tolerance(lyz::Backend backend) {
    return backend == lyz::Backend::analytic ? 1e-6 : 3e-3;
}

}  // namespace

VerificationReport main_check(const LogConcaveFn& f, const CheckOptions& opts) {
    const int n = f.dimension();
    VerificationReport r;
    r.id = "main";
    r.kind = "main";
    r.n = n;
    r.backend = lyz::to_string(opts.backend);
    r.seed = opts.seed;
    r.tolerance = opts.tolerance > 0.0 ? opts.tolerance : default_tolerance(opts.backend);
    r.rhs = main_constant(n);

    lyz::Gamma2Options gopts{opts.backend, opts.resolution, opts.seed, opts.threads};
    const lyz::Gamma2Result gamma = lyz::gamma2_fn(f, gopts);
    const double j_gamma = lyz::gamma2_total_mass(ellipsoids::QuadraticForm(gamma.matrix));
    r.error_bound = gamma.error_bound;
    for (const std::string& flag : gamma.flags) r.flags.push_back(flag);

    if (!hypothesis_phi_min_at_origin(f)) r.flags.push_back("hypothesis_unmet");

    NegLogT nlt = neg_log_t(f, opts.backend, opts.resolution, opts.seed);
    if (nlt.unbounded_near_origin) r.flags.push_back("sup_unbounded_near_origin");
    // e^{-nlt} underflows past ~700: the level parameter is indistinguishable
    // from the infinite-supremum case
    if (std::isfinite(nlt.value) && nlt.value > 700.0) nlt.value = kInf;

    if (!std::isfinite(nlt.value)) {
        r.flags.push_back("infinite_t");
        r.lhs = kInf;
        r.ratio = kInf;
        r.pass = true;  // the inequality is strict in this regime
        return r;
    }

    const double t = std::exp(-nlt.value);
    r.lhs = level_set_volume(logconcave::legendre(f), t) * j_gamma;
    r.ratio = r.lhs / r.rhs;
    r.pass = r.ratio >= 1.0 - r.tolerance;
    return r;
}

VerificationReport lyz_polar_check(const bodies::Polytope& p) {
    VerificationReport r;
    r.id = "lyz_polar";
    r.kind = "lyz_polar";
    r.n = p.dimension();
    r.backend = "analytic";
    r.tolerance = 1e-9;
    r.lhs = bodies::polar(p).volume() * ellipsoids::ellipsoid_volume(ellipsoids::lyz_body(p));
    r.rhs = lyz_polar_constant(p.dimension());
    r.ratio = r.lhs / r.rhs;
    r.pass = r.ratio >= 1.0 - r.tolerance;
    return r;
}

double mahler_product(const bodies::Polytope& p) {
    const auto& verts = p.vertices();
    for (const Vec& v : verts) {
        bool mirrored = false;
        for (const Vec& w : verts)
            if ((v + w).lpNorm<Eigen::Infinity>() <= 1e-9 * std::max(1.0, p.radius())) {
                mirrored = true;
                break;
            }
        if (!mirrored) fail(ErrorKind::NotSymmetric, "vertex set is not closed under negation");
    }
    return p.volume() * bodies::polar(p).volume();
}

VerificationReport mahler_check(const bodies::Polytope& p) {
    VerificationReport r;
    r.id = "mahler";
    r.kind = "mahler";
    r.n = p.dimension();
    r.backend = "analytic";
    r.tolerance = 1e-9;
    r.lhs = mahler_product(p);
    r.rhs = std::pow(4.0, p.dimension()) / std::tgamma(p.dimension() + 1.0);
    r.ratio = r.lhs / r.rhs;
    r.pass = r.ratio >= 1.0 - r.tolerance;
    return r;
}

VerificationReport containment_check(const LogConcaveFn& f, const logconcave::DiscreteMeasure& nu) {
    nu.validate();
    const LogConcaveFn dual = logconcave::legendre(f);

    Vec x0 = Vec::Zero(f.dimension());
    double r_mass = 0.0;
    double sup = -kInf;
    for (std::size_t k = 0; k < nu.points.size(); ++k) {
        if (nu.weights[k] <= 0.0) continue;
        const double ps = logconcave::potential(dual, nu.points[k]);
        if (!std::isfinite(ps)) fail(ErrorKind::PositivityViolation, "phi* infinite on supp nu");
        if (!(ps > 0.0)) fail(ErrorKind::PositivityViolation, "phi* <= 0 on supp nu");
        x0 += nu.weights[k] * nu.points[k] / ps;
        r_mass += nu.weights[k];
        sup = std::max(sup, logconcave::potential(dual, nu.points[k] / ps));
    }

    VerificationReport rep;
    rep.id = "containment";
    rep.kind = "containment";
    rep.n = f.dimension();
    rep.backend = "analytic";
    rep.tolerance = 1e-9;
    rep.lhs = logconcave::potential(dual, x0 / r_mass);  // membership value
    rep.rhs = sup;                                       // -log t
    if (!std::isfinite(sup)) {
        rep.flags.push_back("infinite_t");
        rep.ratio = kInf;
        rep.pass = true;
    } else {
        rep.pass = rep.lhs <= rep.rhs + rep.tolerance * std::max(1.0, std::abs(rep.rhs));
        rep.ratio = rep.lhs > 0.0 ? rep.rhs / rep.lhs : kInf;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// cone diagnostic
// ---------------------------------------------------------------------------

ConeDiagnostic cone_form_diagnostic(const LogConcaveFn& f, double eps_cone) {
    const auto* gp = f.as<GridPotential>();
    if (!gp) fail(ErrorKind::BackendUnavailable, "cone diagnostic expects a grid potential");
    const int n = gp->dimension();
    const double h_max = gp->spacing.maxCoeff();
    if (eps_cone <= 0.0) eps_cone = 10.0 * h_max;

    const double phi0 = logconcave::potential(f, Vec::Zero(n));
    if (!std::isfinite(phi0)) fail(ErrorKind::OriginNotMinimum, "phi(o) not finite");

    std::vector<double> residuals;
    std::vector<int> idx(n, 0);
    const std::size_t count = gp->size();
    for (std::size_t flat = 0; flat < count; ++flat) {
        std::size_t rem = flat;
        bool interior = true;
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % gp->shape[a]);
            rem /= gp->shape[a];
            if (idx[a] == 0 || idx[a] == gp->shape[a] - 1) interior = false;
        }
        const double phi = gp->values[flat];
        if (!std::isfinite(phi)) continue;

        Vec x(n);
        for (int a = 0; a < n; ++a) x[a] = gp->coord(a, idx[a]);
        if (x.norm() > h_max && phi <= phi0)
            fail(ErrorKind::OriginNotMinimum, "phi does not increase away from the origin");
        if (!interior) continue;

        double dot = 0.0;
        bool ok = true;
        for (int a = 0; a < n; ++a) {
            std::size_t up = 0, down = 0;
            for (int b = 0; b < n; ++b) {
                up = up * gp->shape[b] + idx[b] + (b == a ? 1 : 0);
                down = down * gp->shape[b] + idx[b] - (b == a ? 1 : 0);
            }
            const double vp = gp->values[up], vm = gp->values[down];
            if (!std::isfinite(vp) || !std::isfinite(vm)) {
                ok = false;
                break;
            }
            dot += x[a] * (vp - vm) / (2.0 * gp->spacing[a]);
        }
        if (ok) residuals.push_back(dot - phi);
    }
    if (residuals.size() < 8) fail(ErrorKind::DegenerateSample, "too few interior cells");

    std::vector<double> sorted = residuals;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double c = sorted[sorted.size() / 2];

    double max_res = 0.0;
    for (double r : residuals) max_res = std::max(max_res, std::abs(r - c));

    ConeDiagnostic out;
    out.c = c;
    out.max_residual = max_res;
    out.is_cone = max_res <= eps_cone;

    // body estimate from the level set {phi + c <= 1}, sampled along rays
    if (out.is_cone) {
        Rng rng = Rng::stream(0, 0x636f6e65);
        const int rays = n == 2 ? 256 : 512;
        std::vector<Vec> boundary;
        double r_hi_box = 0.0;
        for (int a = 0; a < n; ++a)
            r_hi_box = std::max({r_hi_box, std::abs(gp->origin[a]),
                                 std::abs(gp->coord(a, gp->shape[a] - 1))});
        for (int s = 0; s < rays; ++s) {
            const Vec u = rng.unit_vec(n);
            auto level = [&](double r) { return logconcave::potential(f, r * u) + c - 1.0; };
            double lo = 0.0, hi = r_hi_box;
            if (!(level(hi) > 0.0)) continue;  // level set leaves the grid box
            for (int it = 0; it < 60; ++it) {
                const double mid = (lo + hi) / 2.0;
                (level(mid) > 0.0 ? hi : lo) = mid;
            }
            boundary.push_back((lo + hi) / 2.0 * u);
        }
        if (boundary.size() >= static_cast<std::size_t>(n + 1)) {
            try {
                out.body_estimate.emplace(std::move(boundary));
            } catch (const Error&) {
                // degenerate estimate: leave empty
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

const char* to_string(SweepKind k) {
    switch (k) {
        case SweepKind::main: return "main";
        case SweepKind::lyz_polar: return "lyz_polar";
        case SweepKind::mahler: return "mahler";
        case SweepKind::ball_barthe: return "ball_barthe";
    }
    return "?";
}

SweepResult sweep(SweepKind kind, int count, std::uint64_t seed, int n, const CheckOptions& opts) {
    if (count < 1) fail(ErrorKind::SchemaError, "sweep count must be >= 1");
    SweepResult out;
    out.min_ratio = kInf;

    for (int i = 0; i < count; ++i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        const std::uint64_t instance_seed = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
        VerificationReport rep;
        io::json dump;

        switch (kind) {
            case SweepKind::main: {
                const int verts = n + 2 + static_cast<int>(rng.uniform() * 5);
                LogConcaveFn f = [&]() {
                    switch (i % 4) {
                        case 0:
                            return LogConcaveFn::cone(bodies::random_body(instance_seed, n, verts),
                                                      rng.uniform(1.0, 2.0));
                        case 1:
                            return LogConcaveFn::cone(bodies::random_body(instance_seed, n, verts),
                                                      rng.uniform(0.6, 1.4));
                        case 2:
                            return LogConcaveFn::quad_minkowski(
                                bodies::random_body(instance_seed, n, verts), rng.uniform(0.3, 1.0));
                        default:
                            return LogConcaveFn::gaussian(n, rng.uniform(0.3, 1.0));
                    }
                }();
                CheckOptions co = opts;
                co.seed = instance_seed;
                rep = main_check(f, co);
                dump = io::json{{"kind", "main"}, {"function", io::write_function(f)}};
                break;
            }
            case SweepKind::lyz_polar: {
                const int verts = n + 2 + static_cast<int>(rng.uniform() * 7);
                bodies::Polytope p = bodies::random_body(instance_seed, n, verts);
                rep = lyz_polar_check(p);
                dump = io::json{{"kind", "lyz_polar"}, {"body", io::write_polytope(p)}};
                break;
            }
            case SweepKind::mahler: {
                const int half = n + 1 + static_cast<int>(rng.uniform() * 4);
                std::vector<Vec> pts;
                for (int k = 0; k < half; ++k) {
                    const Vec v = rng.uniform(0.7, 1.3) * rng.unit_vec(n);
                    pts.push_back(v);
                    pts.push_back(-v);
                }
                bodies::Polytope p(std::move(pts));
                rep = mahler_check(p);
                dump = io::json{{"kind", "mahler"}, {"body", io::write_polytope(p)}};
                break;
            }
            case SweepKind::ball_barthe: {
                const int atoms = n + 2 + static_cast<int>(rng.uniform() * 6);
                isotropic::SphericalMeasure mu =
                    isotropic::random_isotropic_measure(instance_seed, n, atoms);
                std::vector<double> l;
                for (std::size_t k = 0; k < mu.atoms.size(); ++k)
                    l.push_back(std::exp(rng.uniform(std::log(0.1), std::log(10.0))));
                const isotropic::BallBartheResult bb = isotropic::ball_barthe(mu, l);
                rep.id = "ball_barthe";
                rep.kind = "ball_barthe";
                rep.n = n;
                rep.backend = "analytic";
                rep.tolerance = 1e-12;
                rep.lhs = bb.lhs;
                rep.rhs = bb.rhs;
                rep.ratio = bb.ratio;
                rep.pass = bb.ratio >= 1.0 - rep.tolerance;
                dump = io::json{{"kind", "ball_barthe"},
                                {"measure", io::write_spherical_measure(mu)},
                                {"l", l}};
                break;
            }
        }

        char idbuf[64];
        std::snprintf(idbuf, sizeof(idbuf), "%s-%03d", to_string(kind), i);
        rep.id = idbuf;
        rep.seed = instance_seed;
        if (std::isfinite(rep.ratio)) out.min_ratio = std::min(out.min_ratio, rep.ratio);
        if (!rep.pass) {
            out.all_pass = false;
            dump["seed"] = instance_seed;
            dump["n"] = n;
            dump["index"] = i;
            out.failure_dumps.push_back(dump.dump(2));
        }
        out.reports.push_back(std::move(rep));
    }
    return out;
}

}  // namespace lyzlab::verify
