#pragma once

#include <cstdint>
#include <vector>

#include "idinf/decompose.hpp"
#include "idinf/matlin.hpp"
#include "idinf/pairalg.hpp"

namespace idinf {

/// Matrices of one indecomposable in its standard basis:
/// a_c = blockdiag(A, A^{-1}), b_c = [[0, -I], [I, 0]], J2 = b_c, J1 = -a_c b_c.
struct CanonicalModel {
    SummandInvariant invariant;
    RealMatrix A;
    RealMatrix A_inv;
    RealMatrix a_c;
    RealMatrix b_c;
    RealMatrix J1;
    RealMatrix J2;
};

/// Jordan block (Real) or real Jordan block with D = [[e, -f], [f, e]] (ComplexPair).
RealMatrix jordan_block(const SummandInvariant& inv);

/// Closed-form inverse of jordan_block(inv), an (block) upper-triangular
/// Toeplitz matrix with entries (-1)^k r^{-(k+1)} resp. (-1)^k D^{-(k+1)}.
/// On the unit circle D^{-1} is taken as D^T exactly.
RealMatrix jordan_block_inverse(const SummandInvariant& inv, double unit_tol = 1e-6);

CanonicalModel canonical_model(const SummandInvariant& inv);

/// Direct sum of canonical models in the given order.
struct CanonicalSum {
    RealMatrix a;
    RealMatrix b;
    RealMatrix J1;
    RealMatrix J2;
};
CanonicalSum canonical_sum(const std::vector<SummandInvariant>& invariants);

/// Representative of the pair {p, p~}: |root| > 1 unless self-dual, f > 0.
SummandInvariant normalize_invariant(const IrreducibleFactor& factor, int n,
                                     const TolerancePolicy& tol = {});

/// Normalizes every entry and sorts with invariant_less.
std::vector<SummandInvariant> normalize_invariants(std::vector<SummandInvariant> invariants,
                                                   const TolerancePolicy& tol = {});

bool is_irreducible(const SummandInvariant& inv);

/// Multiset equality: same kinds and n, roots within root_rel.
bool same_invariants(const std::vector<SummandInvariant>& x, const std::vector<SummandInvariant>& y,
                     const TolerancePolicy& tol);
bool is_isomorphic(const DecompositionReport& r1, const DecompositionReport& r2,
                   const TolerancePolicy& tol);

/// Report for the canonical direct sum itself (S = I).
DecompositionReport canonical_report(const std::vector<SummandInvariant>& invariants,
                                     const TolerancePolicy& tol = {});

struct GenerationSpec {
    std::vector<SummandInvariant> invariants;
    std::uint64_t seed = 0;
    double cond_bound = 100.0;
    int max_draws = 64;
};

struct GeneratedPair {
    ComplexStructurePair pair;
    RealMatrix S;
    std::vector<SummandInvariant> invariants;  // normalized and sorted ground truth
    double cond_S = 1.0;
    int draws = 0;
};

/// Conjugates the canonical direct sum by a random S with cond(S) <= cond_bound.
///
/// S = (I + 0.75 G / sqrt(d)) diag(s): G is filled row by row with SplitMix64
/// draws uniform on [-1, 1), then the column scales s_i are drawn uniform on
/// [1, cond_bound^{1/4}]. Draws with cond(S) > cond_bound are rejected. S, its
/// inverse and the conjugation use correctly rounded operations in a fixed
/// order, so the output is bit-reproducible across IEEE-754 platforms; only
/// a draw whose cond(S) ties the bound to rounding could be judged differently.
GeneratedPair generate(const GenerationSpec& spec);

/// J = f^{-1} (a_c - e I) for a unit-circle quaternion model with n = 1.
RealMatrix quaternion_J(const CanonicalModel& model, const TolerancePolicy& tol = {});

}  // namespace idinf
