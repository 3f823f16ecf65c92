#include "lyzlab/rng.hpp"

#include <cmath>

namespace lyzlab {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0xa0761d6478bd642fULL * (index + 1));
    std::uint64_t derived = splitmix64(state);
    derived ^= splitmix64(state) << 1;
    return Rng(derived);
}

double Rng::uniform() {
    // 53 high bits -> [0,1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vec Rng::gaussian_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
}

Vec Rng::unit_vec(int n) {
    Vec v = gaussian_vec(n);
    double norm = v.norm();
    while (norm < 1e-12) {
        v = gaussian_vec(n);
        norm = v.norm();
    }
    return v / norm;
}

Mat Rng::gl_matrix(int n, double det_lo, double det_hi) {
    Mat t(n, n);
    double det = 0.0;
    do {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t(i, j) = gaussian();
        det = t.determinant();
    } while (std::abs(det) < 1e-6);
    const double target = uniform(det_lo, det_hi);
    t *= std::pow(target / std::abs(det), 1.0 / n);
    return t;
}

}  // namespace lyzlab
