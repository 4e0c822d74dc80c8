#pragma once

// Random generation specs shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "idinf/canonical.hpp"
#include "idinf/rng.hpp"

namespace support {

using idinf::IrreducibleFactor;
using idinf::SplitMix64;
using idinf::SummandInvariant;

inline int pick(SplitMix64& rng, int n) {
    return std::min(n - 1, static_cast<int>(rng.uniform() * n));
}

// Roots come from a grid so that distinct factors stay well separated; two
// factors closer than the root tolerance are one factor as far as any
// floating-point method can tell.
inline IrreducibleFactor random_factor(SplitMix64& rng) {
    const double pi = std::numbers::pi;
    switch (pick(rng, 4)) {
        case 0: {
            const double r = 1.5 + 0.25 * pick(rng, 11);
            return IrreducibleFactor::real(pick(rng, 2) ? r : -r);
        }
        case 1:
            return IrreducibleFactor::real(pick(rng, 2) ? 1.0 : -1.0);
        case 2: {
            const double rho = 1.5 + 0.5 * pick(rng, 4);
            const double theta = pi * (1 + pick(rng, 5)) / 6.0;
            return IrreducibleFactor::complex_pair(rho * std::cos(theta), rho * std::sin(theta));
        }
        default: {
            const double theta = pi * (1 + pick(rng, 5)) / 6.0;
            return IrreducibleFactor::complex_pair(std::cos(theta), std::sin(theta));
        }
    }
}

// Up to three distinct factors, each with one or more summands of random
// height n <= max_n, total dimension <= max_dim (at least one summand).
inline std::vector<SummandInvariant> random_invariants(SplitMix64& rng, int max_dim, int max_n = 4) {
    std::vector<IrreducibleFactor> pool;
    const int factors = 1 + pick(rng, 3);
    while (static_cast<int>(pool.size()) < factors) {
        const auto p = random_factor(rng);
        const bool dup = std::any_of(pool.begin(), pool.end(), [&](const IrreducibleFactor& q) {
            return q.kind == p.kind && std::abs(q.root() - p.root()) < 1e-9;
        });
        if (!dup) pool.push_back(p);
    }
    std::vector<SummandInvariant> out;
    int dim = 0;
    const int target = 2 + pick(rng, max_dim - 1);
    for (int guard = 0; guard < 64 && dim < target; ++guard) {
        SummandInvariant inv{pool[static_cast<std::size_t>(pick(rng, factors))], 1 + pick(rng, max_n)};
        if (dim + inv.dimension() > max_dim) continue;
        out.push_back(inv);
        dim += inv.dimension();
    }
    if (out.empty()) out.push_back({IrreducibleFactor::real(2.0), 1});
    return out;
}

inline idinf::GenerationSpec random_spec(std::uint64_t seed, int max_dim, double cond_bound = 100.0) {
    auto rng = SplitMix64::substream(seed, 0xC0FFEE);
    idinf::GenerationSpec spec;
    spec.invariants = random_invariants(rng, max_dim);
    spec.seed = seed;
    spec.cond_bound = cond_bound;
    return spec;
}

}  // namespace support

namespace support {

inline idinf::GeneratorPair canonical_generators(const std::vector<SummandInvariant>& invs) {
    const auto sum = idinf::canonical_sum(invs);
    return {sum.a, sum.b, sum.a.inverse()};
}

// Generators of the canonical sum carried over by S: (S a S^{-1}, S b S^{-1}).
inline idinf::GeneratorPair conjugated(const std::vector<SummandInvariant>& invs, const idinf::RealMatrix& S) {
    const auto sum = idinf::canonical_sum(invs);
    const idinf::RealMatrix S_inv = S.inverse();
    const idinf::RealMatrix a = S * sum.a * S_inv;
    return {a, S * sum.b * S_inv, a.inverse()};
}

inline idinf::RealMatrix random_orthogonal(std::uint64_t seed, idinf::Index n) {
    auto rng = SplitMix64::substream(seed, 99);
    idinf::RealMatrix G(n, n);
    for (idinf::Index i = 0; i < n; ++i)
        for (idinf::Index j = 0; j < n; ++j) G(i, j) = rng.symmetric();
    Eigen::HouseholderQR<idinf::RealMatrix> qr(G);
    return qr.householderQ() * idinf::RealMatrix::Identity(n, n);
}

}  // namespace support
