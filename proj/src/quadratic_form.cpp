#include "lyzlab/quadratic_form.hpp"

#include <cmath>

namespace lyzlab::ellipsoids {

QuadraticForm::QuadraticForm(Mat a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() < 1)
        fail(ErrorKind::NotPositiveDefinite, "matrix must be square and nonempty");
    const double scale = std::max(1e-300, a_.cwiseAbs().maxCoeff());
    if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        fail(ErrorKind::NotPositiveDefinite, "matrix not symmetric");
    a_ = ((a_ + a_.transpose()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Mat> eig(a_);
    eigenvalues_ = eig.eigenvalues();
    eigenvectors_ = eig.eigenvectors();
    if (eigenvalues_.minCoeff() <= 1e-12 * a_.trace())
        fail(ErrorKind::NotPositiveDefinite,
             "min eigenvalue " + std::to_string(eigenvalues_.minCoeff()));
}

Mat QuadraticForm::power(double p) const {
    Vec d(eigenvalues_.size());
    for (int i = 0; i < d.size(); ++i) d[i] = std::pow(eigenvalues_[i], p);
    return eigenvectors_ * d.asDiagonal() * eigenvectors_.transpose();
}

double ellipsoid_norm(const QuadraticForm& q, const Vec& x) {
    return std::sqrt(x.dot(q.matrix() * x));
}

double ellipsoid_volume(const QuadraticForm& q) {
    const int n = q.dimension();
    double logdet = 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> eig(q.matrix());
    for (int i = 0; i < n; ++i) logdet += std::log(eig.eigenvalues()[i]);
    return unit_ball_volume(n) * std::exp(-0.5 * logdet);
}

QuadraticForm lyz_body(const bodies::Polytope& p) {
    const int n = p.dimension();
    Mat a = Mat::Zero(n, n);
    for (const bodies::Facet& f : p.facets()) {
        if (f.support <= 0.0) fail(ErrorKind::OriginNotInterior, "facet with h <= 0");
        a += (f.area / f.support) * (f.normal * f.normal.transpose());
    }
    a /= p.volume();
    return QuadraticForm(std::move(a));
}

Mat whitening_map(const QuadraticForm& q) {
    return q.power(-0.5) / std::sqrt(2.0);
}

}  // namespace lyzlab::ellipsoids
