#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idinf/decompose.hpp"
#include "idinf/matlin.hpp"
#include "idinf/pairalg.hpp"

namespace idinf {

struct VerificationSummary {
    bool pass = false;
    double cond_S = 0.0;
    double bound = 0.0;               // residual_rel * cond(S)
    double conjugation_a = 0.0;
    double conjugation_b = 0.0;
    double invariance = 0.0;          // worst per-summand J1/J2 leak out of span(B)
    double canonical_mismatch = 0.0;  // canonical_a/b vs models rebuilt from the invariants
    double relation = 0.0;
    double relation_b2 = 0.0;
    std::vector<std::string> failures;
};

/// Recomputes every residual of `report` against `pair` from scratch.
/// Summand column blocks are located from the invariant dimensions.
VerificationSummary verify_report(const ComplexStructurePair& pair, const DecompositionReport& report,
                                  const TolerancePolicy& tol = {});

struct CommutantBasis {
    Index dim = 0;
    std::vector<RealMatrix> elements;  // orthonormal in the Frobenius inner product
};

/// Basis of {X : Xa = aX, Xb = bX} from the kernel of the stacked Kronecker
/// operator. Cost grows like dim^6; intended for dim <= ~24.
CommutantBasis commutant(const GeneratorPair& g, const TolerancePolicy& tol = {});

struct SplitVerdict {
    bool found = false;
    int trial = -1;  // 0-based trial that produced the projector
    RealMatrix projector;
    Index rank = 0;
    double idempotence = 0.0;  // ||P^2 - P||_F
    double commute_a = 0.0;    // ||Pa - aP||_F / ||a||_F
    double commute_b = 0.0;
};

/// Randomized search for a nontrivial idempotent in the commutant.
///
/// Each trial draws M = sum c_i X_i with c_i from SplitMix64::substream(seed,
/// trial), clusters its eigenvalues (a conjugate pair is one cluster) and, when
/// there are at least two clusters, builds the spectral projector onto one of
/// them. A projector is reported only if it passes the certificate
/// ||P^2 - P|| <= 1e-8, ||Pa - aP|| <= 1e-8 ||a||, ||Pb - bP|| <= 1e-8 ||b||,
/// 0 < rank P < dim. NoSplitFound is evidence of indecomposability, not proof.
SplitVerdict split_attempt(const GeneratorPair& g, std::uint64_t seed, int trials,
                           const TolerancePolicy& tol = {});

/// Same search over a precomputed commutant basis.
SplitVerdict split_attempt(const GeneratorPair& g, const CommutantBasis& basis, std::uint64_t seed,
                           int trials, const TolerancePolicy& tol = {});

}  // namespace idinf
