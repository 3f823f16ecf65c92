#include "lyzlab/quadratic_form.hpp"
#include "lyzlab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace lyzlab;
using namespace lyzlab::ellipsoids;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Mat random_spd(Rng& rng, int n) {
    const Mat t = rng.gl_matrix(n, 0.2, 5.0);
    return t.transpose() * t + 0.05 * Mat::Identity(n, n);
}

}  // namespace

TEST_CASE("ellipsoid norm") {
    const QuadraticForm id(Mat::Identity(2, 2));
    Vec x(2);
    x << 1, 0;
    CHECK(ellipsoid_norm(id, x) == doctest::Approx(1.0));
    const QuadraticForm half(0.5 * Mat::Identity(2, 2));
    CHECK(ellipsoid_norm(half, x) == doctest::Approx(1.0 / std::sqrt(2.0)));
    const QuadraticForm aniso(diag2(4, 1));
    Vec y(2);
    y << 1, 1;
    CHECK(ellipsoid_norm(aniso, y) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("ellipsoid volume") {
    CHECK(ellipsoid_volume(QuadraticForm(Mat::Identity(2, 2))) == doctest::Approx(M_PI));
    CHECK(ellipsoid_volume(QuadraticForm(0.25 * Mat::Identity(2, 2))) == doctest::Approx(4.0 * M_PI));
    CHECK(ellipsoid_volume(QuadraticForm(diag2(1, 4))) == doctest::Approx(M_PI / 2.0));
    CHECK_THROWS_AS(QuadraticForm(diag2(1, -1)), Error);
    CHECK_THROWS_AS(QuadraticForm(diag2(1, 0)), Error);
}

TEST_CASE("-2 ellipsoid of bodies") {
    SUBCASE("square gives the unit disc") {
        const Mat a = lyz_body(bodies::cube(2)).matrix();
        CHECK((a - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("polygon limit to the ball") {
        // inscribed regular m-gons converge to B^2, whose -2 ellipsoid is itself
        double prev = 1e9;
        for (int m : {8, 16, 32, 64}) {
            const Mat a = lyz_body(bodies::regular_polygon(m)).matrix();
            const double dev = (a - Mat::Identity(2, 2)).cwiseAbs().maxCoeff();
            CHECK(dev < prev);
            prev = dev;
        }
        CHECK(prev < 1e-3);
    }

    SUBCASE("GL covariance: form of T K is T^{-t} A T^{-1}") {
        Rng rng(17);
        for (int rep = 0; rep < 20; ++rep) {
            const int n = 2 + rep % 2;
            const bodies::Polytope p = bodies::random_body(700 + rep, n, n + 5);
            const Mat t = rng.gl_matrix(n, 0.1, 10.0);
            const Mat lhs = lyz_body(bodies::apply_linear(t, p)).matrix();
            const Mat ti = t.inverse();
            const Mat rhs = ti.transpose() * lyz_body(p).matrix() * ti;
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() <
                  1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
        }
    }

    SUBCASE("radial identity and positivity on random bodies") {
        Rng rng(19);
        for (int rep = 0; rep < 8; ++rep) {
            const int n = 1 + rep % 3;
            const bodies::Polytope p = bodies::random_body(800 + rep, n, n + 4);
            const QuadraticForm q = lyz_body(p);
            CHECK(q.min_eigenvalue() > 0.0);
            for (int k = 0; k < 100; ++k) {
                const Vec u = rng.unit_vec(n);
                // rho(u)^{-2} = u.Au  <=>  rho(u) = (u.Au)^{-1/2}
                const double rho = std::pow(u.dot(q.matrix() * u), -0.5);
                CHECK(rho == doctest::Approx(1.0 / ellipsoid_norm(q, u)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("whitening map") {
    CHECK((whitening_map(QuadraticForm(0.5 * Mat::Identity(3, 3))) - Mat::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK((whitening_map(QuadraticForm(2.0 * Mat::Identity(2, 2))) - 0.5 * Mat::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    // eigendecomposition oracle: T^t A T = I/2 for random SPD A
    Rng rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 1 + rep % 3;
        const Mat a = random_spd(rng, n);
        const Mat t = whitening_map(QuadraticForm(a));
        CHECK((t.transpose() * a * t - 0.5 * Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
}
