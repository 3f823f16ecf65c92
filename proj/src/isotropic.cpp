#include "lyzlab/isotropic.hpp"

#include "lyzlab/gamma2.hpp"
#include "lyzlab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace lyzlab::isotropic {

void SphericalMeasure::validate() const {
    if (atoms.size() != weights.size()) fail(ErrorKind::SchemaError, "atoms/weights length mismatch");
    if (atoms.empty()) fail(ErrorKind::SchemaError, "empty spherical measure");
    for (const Vec& u : atoms) {
        if (static_cast<int>(u.size()) != dim) fail(ErrorKind::SchemaError, "atom dimension mismatch");
        if (std::abs(u.norm() - 1.0) > 1e-12) fail(ErrorKind::NonUnitImage, "atom is not a unit vector");
    }
    for (double w : weights)
        if (!(w > 0.0)) fail(ErrorKind::NonPositiveWeight, "weights must be > 0");
}

double SphericalMeasure::total_mass() const {
    double m = 0.0;
    for (double w : weights) m += w;
    return m;
}

Mat moment_matrix(const SphericalMeasure& mu) {
    Mat m = Mat::Zero(mu.dim, mu.dim);
    for (std::size_t k = 0; k < mu.atoms.size(); ++k)
        m += mu.weights[k] * (mu.atoms[k] * mu.atoms[k].transpose());
    return m;
}

IsotropyCheck is_isotropic(const SphericalMeasure& mu, double tol) {
    const Mat m = moment_matrix(mu);
    const double res = (m - Mat::Identity(mu.dim, mu.dim)).cwiseAbs().maxCoeff();
    return {res <= tol, res};
}

BallBartheResult ball_barthe(const SphericalMeasure& mu, const std::vector<double>& l,
                             double isotropy_tol) {
    mu.validate();
    if (l.size() != mu.atoms.size()) fail(ErrorKind::SchemaError, "one l value per atom required");
    for (double v : l)
        if (!(v > 0.0)) fail(ErrorKind::NonPositiveWeight, "l must be positive");
    const IsotropyCheck iso = is_isotropic(mu, isotropy_tol);
    if (!iso.isotropic)
        fail(ErrorKind::NotIsotropic, "moment residual " + std::to_string(iso.residual));

    Mat m = Mat::Zero(mu.dim, mu.dim);
    double log_rhs = 0.0;
    for (std::size_t k = 0; k < mu.atoms.size(); ++k) {
        m += mu.weights[k] * l[k] * (mu.atoms[k] * mu.atoms[k].transpose());
        log_rhs += mu.weights[k] * std::log(l[k]);
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(m);
    double log_lhs = 0.0;
    for (int i = 0; i < mu.dim; ++i) log_lhs += std::log(std::max(eig.eigenvalues()[i], 1e-300));

    return {std::exp(log_lhs), std::exp(log_rhs), std::exp(log_lhs - log_rhs)};
}

SphericalMeasure push_forward(const std::function<Vec(const Vec&)>& h,
                              const logconcave::DiscreteMeasure& m) {
    m.validate();
    SphericalMeasure out;
    out.atoms.reserve(m.points.size());
    out.weights.reserve(m.points.size());
    for (std::size_t k = 0; k < m.points.size(); ++k) {
        const Vec u = h(m.points[k]);
        if (k == 0) out.dim = static_cast<int>(u.size());
        if (std::abs(u.norm() - 1.0) > 1e-9)
            fail(ErrorKind::NonUnitImage, "|h(x)| = " + std::to_string(u.norm()));
        out.atoms.push_back(u);
        out.weights.push_back(m.weights[k]);
    }
    return out;
}

IsotropyCheck isotropic_embedding_check(const std::function<Vec(const Vec&)>& h,
                                        const logconcave::DiscreteMeasure& m, double tol) {
    // same moment computation, but without the strict weight positivity of
    // SphericalMeasure: pushforwards of quadrature measures may carry zeros
    m.validate();
    Mat acc;
    bool first = true;
    for (std::size_t k = 0; k < m.points.size(); ++k) {
        const Vec u = h(m.points[k]);
        if (first) {
            acc = Mat::Zero(u.size(), u.size());
            first = false;
        }
        if (std::abs(u.norm() - 1.0) > 1e-9)
            fail(ErrorKind::NonUnitImage, "|h(x)| = " + std::to_string(u.norm()));
        acc += m.weights[k] * (u * u.transpose());
    }
    const double res = (acc - Mat::Identity(acc.rows(), acc.cols())).cwiseAbs().maxCoeff();
    return {res <= tol, res};
}

LiftedEmbedding lifted_embedding(const logconcave::LogConcaveFn& f, int resolution,
                                 std::uint64_t seed, double position_tol) {
    const int n = f.dimension();
    lyz::Gamma2Options opts;
    opts.backend = f.as<logconcave::GridPotential>() ? lyz::Backend::numeric : lyz::Backend::analytic;
    opts.resolution = resolution;
    opts.seed = seed;
    const lyz::Gamma2Result g = lyz::gamma2_fn(f, opts);
    const double form_res = (g.matrix - 0.5 * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (form_res > position_tol)
        fail(ErrorKind::NotIsotropicPosition,
             "gamma2 form deviates from I/2 by " + std::to_string(form_res));

    const logconcave::SurfaceMeasure mu = logconcave::surface_measure(f, resolution, seed);
    double mean_norm = 0.0;
    for (std::size_t k = 0; k < mu.measure.points.size(); ++k)
        mean_norm += mu.measure.weights[k] * mu.measure.points[k].norm();
    mean_norm /= std::max(mu.measure.total_mass(), 1e-300);
    const Vec bary = mu.measure.barycenter();
    if (bary.norm() > 1e-3 * std::max(mean_norm, 1e-12))
        fail(ErrorKind::BarycenterOffOrigin, "|barycenter| = " + std::to_string(bary.norm()));

    const logconcave::LogConcaveFn dual = logconcave::legendre(f);
    const double cn = 2.0 / n;

    LiftedEmbedding out;
    out.measure.dim = n + 1;
    double nlt = 0.0;
    for (std::size_t k = 0; k < mu.measure.points.size(); ++k) {
        const Vec& y = mu.measure.points[k];
        const double ps = logconcave::potential(dual, y);
        if (!(ps > 0.0) || !std::isfinite(ps)) continue;  // phi* > 0 a.e. on supp mu_f
        Vec h(n + 1);
        h.head(n) = y;
        h[n] = cn * ps;
        const double h2 = h.squaredNorm();
        const Vec hbar = h / std::sqrt(h2);
        const double nu_w = mu.measure.weights[k] / ps;  // (phi*)^{-1} mu_f
        out.atoms.push_back(hbar);
        out.measure.atoms.push_back(hbar);
        out.measure.weights.push_back(h2 * nu_w);
        const double cand = logconcave::potential(dual, y / ps);
        if (std::isfinite(cand)) nlt = std::max(nlt, cand);
    }
    // normalization n^2/(4 deltaJ) makes nu isotropic in the first n coords
    const double factor = n * n / (4.0 * g.delta_j);
    for (double& w : out.measure.weights) w *= factor;
    out.neg_log_t_sample = nlt;

    const Mat moment = moment_matrix(out.measure);
    const double res = (moment - Mat::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff();
    out.check = {res <= position_tol, res};
    return out;
}

// ---------------------------------------------------------------------------
// tau
// ---------------------------------------------------------------------------

namespace {

// log erfc(t); asymptotic series beyond t = 25 where erfc underflows
double log_erfc(double t) {
    if (t <= 25.0) return std::log(std::erfc(t));
    const double t2 = t * t;
    // erfc(t) ~ e^{-t^2}/(t sqrt(pi)) (1 - 1/(2t^2) + 3/(4t^4) - 15/(8t^6))
    const double series = 1.0 - 0.5 / t2 + 0.75 / (t2 * t2) - 1.875 / (t2 * t2 * t2);
    return -t2 - std::log(t) - 0.5 * std::log(M_PI) + std::log(series);
}

}  // namespace

double tau(double t) { return std::log(2.0) - log_erfc(t); }

double tau_prime(double t) {
    // e^{-t^2} / (sqrt(pi) erfc(t)/2); evaluated in the log domain
    return std::exp(-t * t - 0.5 * std::log(M_PI) + std::log(2.0) - log_erfc(t));
}

// ---------------------------------------------------------------------------
// Generator
// ---------------------------------------------------------------------------

SphericalMeasure random_isotropic_measure(std::uint64_t seed, int dim, int atom_count) {
    if (atom_count < dim + 1) fail(ErrorKind::SchemaError, "need at least dim+1 atoms");
    Rng rng = Rng::stream(seed, 0x69736f74);
    SphericalMeasure mu;
    mu.dim = dim;
    for (int k = 0; k < atom_count; ++k) {
        mu.atoms.push_back(rng.unit_vec(dim));
        mu.weights.push_back(rng.uniform(0.5, 2.0));
    }
    // alternate whitening of atoms (with the induced weight rescale) until
    // the moment matrix reaches the identity
    for (int it = 0; it < 64; ++it) {
        const Mat m = moment_matrix(mu);
        Eigen::SelfAdjointEigenSolver<Mat> eig(m);
        if (eig.eigenvalues().minCoeff() <= 1e-12) {
            // restart with fresh atoms; nearly degenerate draw
            mu.atoms.clear();
            mu.weights.clear();
            for (int k = 0; k < atom_count; ++k) {
                mu.atoms.push_back(rng.unit_vec(dim));
                mu.weights.push_back(rng.uniform(0.5, 2.0));
            }
            continue;
        }
        const double res = (m - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
        if (res < 1e-10) return mu;
        Mat white = Mat::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
            white += std::pow(eig.eigenvalues()[i], -0.5) *
                     (eig.eigenvectors().col(i) * eig.eigenvectors().col(i).transpose());
        for (std::size_t k = 0; k < mu.atoms.size(); ++k) {
            const Vec v = white * mu.atoms[k];
            const double norm = v.norm();
            mu.atoms[k] = v / norm;
            mu.weights[k] *= norm * norm;
        }
    }
    fail(ErrorKind::NotIsotropic, "whitening iteration did not converge");
}

}  // namespace lyzlab::isotropic
