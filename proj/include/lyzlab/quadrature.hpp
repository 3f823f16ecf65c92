#pragma once

#include "lyzlab/common.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace lyzlab::quad {

/// Deterministic blocked reduction: the index space is cut into fixed blocks,
/// each block is accumulated sequentially, and block sums are combined in a
/// pairwise tree. The result is bit-identical for any thread count.
///
/// `block_fn(begin, end, acc)` accumulates components for nodes in
/// [begin, end) into acc[0..components).
std::vector<double> block_sum(std::int64_t count, int components, int threads,
                              const std::function<void(std::int64_t, std::int64_t, double*)>& block_fn);

/// Tensor-product midpoint nodes on [-radius, radius]^dim; node k is the
/// center of cell k, so lattice-aligned ridges through nodes are avoided.
struct MidpointNodes {
    int dim;
    double radius;
    int res;  // nodes per axis

    std::int64_t count() const;
    double cell() const { return 2.0 * radius / res; }
    double weight() const;
    Vec node(std::int64_t k) const;
};

/// Scrambled Halton nodes on [-radius, radius]^dim (random digit permutations
/// per axis, seeded).
struct HaltonNodes {
    HaltonNodes(int dim, double radius, std::int64_t count, std::uint64_t seed);

    int dim;
    double radius;
    std::int64_t count_;

    std::int64_t count() const { return count_; }
    double weight() const;
    Vec node(std::int64_t k) const;

  private:
    std::vector<std::vector<int>> perms_;  // one digit permutation per axis
    std::vector<int> bases_;
};

int default_resolution(int dim);           // 129 for n <= 3
std::int64_t default_qmc_count();          // 2^20 for n in {4,5,6}

}  // namespace lyzlab::quad
