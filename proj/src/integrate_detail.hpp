#pragma once

#include "lyzlab/log_concave.hpp"
#include "lyzlab/quadrature.hpp"

#include <cmath>
#include <optional>

// Shared quadrature plumbing for the pushforward-style integrals.
namespace lyzlab::detail {

struct NodeEval {
    double fx = 0.0;
    Vec grad;
    double fenchel = 0.0;  // phi*(grad phi) via  x.grad - phi(x)
};

/// Evaluates f and grad phi at x, shifting by half a cell when x sits within
/// a quarter-cell of a detected ridge. Returns false when no nearby smooth
/// point exists; the caller counts the node's mass as discarded.
inline bool eval_node(const logconcave::LogConcaveFn& f, const Vec& x, double cell, NodeEval& out) {
    const double phi = logconcave::potential(f, x);
    if (!std::isfinite(phi)) {
        out.fx = 0.0;
        return true;
    }
    out.fx = std::exp(-phi);
    const double ridge_tol = cell > 0.0 ? 0.25 * cell : 0.0;
    try {
        out.grad = logconcave::gradient(f, x, ridge_tol);
        out.fenchel = x.dot(out.grad) - phi;
        return true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonSmoothPoint) throw;
    }
    if (cell > 0.0) {
        const int n = static_cast<int>(x.size());
        for (int a = 0; a < n; ++a)
            for (double sign : {1.0, -1.0}) {
                Vec xs = x;
                xs[a] += sign * 0.5 * cell;
                const double ps = logconcave::potential(f, xs);
                if (!std::isfinite(ps)) continue;
                try {
                    out.grad = logconcave::gradient(f, xs, ridge_tol);
                    out.fenchel = xs.dot(out.grad) - ps;
                    return true;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NonSmoothPoint) throw;
                }
            }
    }
    return false;
}

struct Plan {
    int dim = 0;
    double radius = 0.0;
    bool qmc = false;
    int res = 0;
    std::int64_t count = 0;
    double weight = 0.0;
    double cell = 0.0;
    std::uint64_t seed = 0;
};

inline Plan make_plan(const logconcave::LogConcaveFn& f, int resolution, std::uint64_t seed) {
    Plan p;
    p.dim = f.dimension();
    p.radius = logconcave::truncation_radius(f);
    p.seed = seed;
    if (p.dim <= 3) {
        p.res = resolution > 0 ? resolution : quad::default_resolution(p.dim);
        quad::MidpointNodes nodes{p.dim, p.radius, p.res};
        p.count = nodes.count();
        p.weight = nodes.weight();
        p.cell = nodes.cell();
    } else {
        if (p.dim > 6) fail(ErrorKind::SchemaError, "quadrature supports n <= 6");
        p.qmc = true;
        p.count = resolution > 0 ? static_cast<std::int64_t>(resolution) : quad::default_qmc_count();
        quad::HaltonNodes nodes(p.dim, p.radius, p.count, seed);
        p.weight = nodes.weight();
        p.cell = 0.0;
    }
    return p;
}

inline Vec plan_node(const Plan& p, const quad::MidpointNodes& mid, const quad::HaltonNodes* halton,
                     std::int64_t k) {
    return p.qmc ? halton->node(k) : mid.node(k);
}

}  // namespace lyzlab::detail
