#include "lyzlab/quadrature.hpp"

#include "lyzlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace lyzlab::quad {

namespace {
constexpr std::int64_t kBlock = 16384;

std::vector<double> fold(const std::vector<std::vector<double>>& partials, std::size_t lo,
                         std::size_t hi, int components) {
    if (hi - lo == 1) return partials[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<double> left = fold(partials, lo, mid, components);
    const std::vector<double> right = fold(partials, mid, hi, components);
    for (int c = 0; c < components; ++c) left[c] += right[c];
    return left;
}
}  // namespace

std::vector<double> block_sum(std::int64_t count, int components, int threads,
                              const std::function<void(std::int64_t, std::int64_t, double*)>& block_fn) {
    const std::int64_t nblocks = std::max<std::int64_t>(1, (count + kBlock - 1) / kBlock);
    std::vector<std::vector<double>> partials(nblocks, std::vector<double>(components, 0.0));

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp<int>(nthreads, 1, static_cast<int>(nblocks));

    auto worker = [&](int tid) {
        for (std::int64_t b = tid; b < nblocks; b += nthreads) {
            const std::int64_t begin = b * kBlock;
            const std::int64_t end = std::min(count, begin + kBlock);
            if (begin < end) block_fn(begin, end, partials[b].data());
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (std::thread& t : pool) t.join();
    }
    return fold(partials, 0, partials.size(), components);
}

std::int64_t MidpointNodes::count() const {
    std::int64_t c = 1;
    for (int i = 0; i < dim; ++i) c *= res;
    return c;
}

double MidpointNodes::weight() const { return std::pow(cell(), dim); }

Vec MidpointNodes::node(std::int64_t k) const {
    Vec x(dim);
    const double h = cell();
    for (int i = dim - 1; i >= 0; --i) {
        const std::int64_t idx = k % res;
        k /= res;
        x[i] = -radius + (idx + 0.5) * h;
    }
    return x;
}

HaltonNodes::HaltonNodes(int d, double r, std::int64_t n, std::uint64_t seed)
    : dim(d), radius(r), count_(n) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    Rng rng = Rng::stream(seed, 0x71756d63);  // "qmc"
    for (int i = 0; i < dim; ++i) {
        const int b = primes[i];
        bases_.push_back(b);
        std::vector<int> perm(b);
        std::iota(perm.begin(), perm.end(), 0);
        // Fisher-Yates keeping 0 fixed so the radical inverse stays in [0,1).
        for (int j = b - 1; j > 1; --j) {
            const int k = 1 + static_cast<int>(rng.uniform() * j);
            std::swap(perm[j], perm[std::min(k, j)]);
        }
        perms_.push_back(std::move(perm));
    }
}

double HaltonNodes::weight() const { return std::pow(2.0 * radius, dim) / static_cast<double>(count_); }

Vec HaltonNodes::node(std::int64_t k) const {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) {
        const int b = bases_[i];
        const auto& perm = perms_[i];
        double inv = 1.0 / b, u = 0.0;
        std::int64_t m = k + 1;  // skip the origin point
        while (m > 0) {
            u += perm[m % b] * inv;
            m /= b;
            inv /= b;
        }
        x[i] = -radius + 2.0 * radius * u;
    }
    return x;
}

int default_resolution(int dim) { return dim <= 3 ? 129 : 0; }

std::int64_t default_qmc_count() { return std::int64_t{1} << 20; }

}  // namespace lyzlab::quad
