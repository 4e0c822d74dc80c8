#include "idinf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "idinf/canonical.hpp"
#include "idinf/error.hpp"
#include "idinf/rng.hpp"
#include "idinf/spectral.hpp"

namespace idinf {

namespace {

constexpr double kProjectorTol = 1e-8;

void check(VerificationSummary& s, const char* name, double value, double bound) {
    if (!(value <= bound)) {
        std::ostringstream msg;
        msg << name << " = " << value << " exceeds " << bound;
        s.failures.push_back(msg.str());
    }
}

// Real basis of the generalized eigenspace of m for one cluster.
RealMatrix primary_component(const RealMatrix& m, const IrreducibleFactor& p, const TolerancePolicy& tol) {
    const RealMatrix F = p.evaluate(m);
    const auto stairs = staircase(F, tol, factor_scale(p, spectral_norm(m)));
    return stairs.basis(stairs.levels());
}

}  // namespace

VerificationSummary verify_report(const ComplexStructurePair& pair, const DecompositionReport& report,
                                  const TolerancePolicy& tol) {
    const Index dim = pair.dim;
    if (report.S.rows() != dim || report.S.cols() != dim || report.canonical_a.rows() != dim ||
        report.canonical_a.cols() != dim || report.canonical_b.rows() != dim ||
        report.canonical_b.cols() != dim) {
        throw Error(ErrorCode::DimensionMismatch, "report matrices do not match the pair dimension " +
                                                      std::to_string(dim));
    }
    Index covered = 0;
    for (const auto& inv : report.invariants) covered += inv.dimension();
    if (covered != dim) {
        throw Error(ErrorCode::DimensionMismatch, "report invariants cover " + std::to_string(covered) +
                                                      " dimensions, pair has " + std::to_string(dim));
    }

    VerificationSummary s;
    const GeneratorPair g{pair.J1 * pair.J2, pair.J2, RealMatrix()};
    s.cond_S = condition_number(report.S);
    s.bound = tol.residual_rel * s.cond_S;
    if (!std::isfinite(s.cond_S) || s.cond_S * std::numeric_limits<double>::epsilon() > 1e-2) {
        s.failures.push_back("S is numerically singular");
        s.pass = false;
        return s;
    }
    const RealMatrix S_inv = report.S.partialPivLu().inverse();
    s.conjugation_a = (S_inv * g.a * report.S - report.canonical_a).norm() / g.a.norm();
    s.conjugation_b = (S_inv * g.b * report.S - report.canonical_b).norm() / g.b.norm();

    const auto rebuilt = canonical_sum(report.invariants);
    s.canonical_mismatch = std::max((rebuilt.a - report.canonical_a).norm() / rebuilt.a.norm(),
                                    (rebuilt.b - report.canonical_b).norm() / rebuilt.b.norm());

    Index col = 0;
    for (const auto& inv : report.invariants) {
        const RealMatrix B = report.S.middleCols(col, inv.dimension());
        col += inv.dimension();
        Eigen::HouseholderQR<RealMatrix> qr(B);
        const RealMatrix Q = qr.householderQ() * RealMatrix::Identity(dim, B.cols());
        for (const RealMatrix* J : {&pair.J1, &pair.J2}) {
            const RealMatrix JB = (*J) * B;
            const double leak = (JB - Q * (Q.transpose() * JB)).norm() / (J->norm() * B.norm());
            s.invariance = std::max(s.invariance, leak);
        }
    }

    const RealMatrix a_inv = g.a.partialPivLu().inverse();
    const auto rel = relation_residuals(GeneratorPair{g.a, g.b, a_inv});
    s.relation = rel.rel;
    s.relation_b2 = rel.b2;

    check(s, "conjugation_a", s.conjugation_a, s.bound);
    check(s, "conjugation_b", s.conjugation_b, s.bound);
    check(s, "invariance", s.invariance, s.bound);
    check(s, "canonical_mismatch", s.canonical_mismatch, tol.residual_rel);
    check(s, "relation", s.relation, tol.residual_rel * condition_number(g.a));
    check(s, "relation_b2", s.relation_b2, tol.residual_rel);
    s.pass = s.failures.empty();
    return s;
}

CommutantBasis commutant(const GeneratorPair& g, const TolerancePolicy& tol) {
    const Index n = g.dim();
    const Index nn = n * n;
    const RealMatrix I = RealMatrix::Identity(n, n);
    // column-major vec: vec(aX) = (I (x) a) vec X, vec(Xa) = (a^T (x) I) vec X
    RealMatrix op = RealMatrix::Zero(2 * nn, nn);
    const RealMatrix* gens[2] = {&g.a, &g.b};
    for (int t = 0; t < 2; ++t) {
        const RealMatrix& m = *gens[t];
        auto block = op.middleRows(t * nn, nn);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                // (a^T (x) I): block (i, j) = a(j, i) * I;  (I (x) a): block (i, i) = a
                block.block(i * n, j * n, n, n) += m(j, i) * I;
                if (i == j) block.block(i * n, j * n, n, n) -= m;
            }
        }
    }
    const auto ker = nullspace(op, tol);
    CommutantBasis out;
    out.dim = ker.basis.cols();
    for (Index k = 0; k < ker.basis.cols(); ++k) {
        out.elements.push_back(Eigen::Map<const RealMatrix>(ker.basis.col(k).data(), n, n));
    }
    return out;
}

SplitVerdict split_attempt(const GeneratorPair& g, std::uint64_t seed, int trials, const TolerancePolicy& tol) {
    return split_attempt(g, commutant(g, tol), seed, trials, tol);
}

SplitVerdict split_attempt(const GeneratorPair& g, const CommutantBasis& basis, std::uint64_t seed,
                           int trials, const TolerancePolicy& tol) {
    if (trials < 1) throw Error(ErrorCode::InvalidInput, "split_attempt needs at least one trial");
    const Index n = g.dim();
    SplitVerdict verdict;
    if (basis.elements.empty()) return verdict;
    for (int trial = 0; trial < trials; ++trial) {
        auto rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(trial));
        RealMatrix M = RealMatrix::Zero(n, n);
        for (const auto& X : basis.elements) M += rng.symmetric() * X;

        std::vector<IrreducibleFactor> clusters;
        try {
            clusters = spectral_factors(M, tol);
        } catch (const Error&) {
            continue;  // e.g. a zero eigenvalue cluster; redraw
        }
        if (clusters.size() < 2) continue;

        std::vector<RealMatrix> parts;
        Index total = 0;
        for (const auto& p : clusters) {
            parts.push_back(primary_component(M, p, tol));
            total += parts.back().cols();
        }
        if (total != n) continue;
        for (std::size_t pick = 0; pick < parts.size(); ++pick) {
            RealMatrix T(n, n);
            Index col = 0;
            T.middleCols(col, parts[pick].cols()) = parts[pick];
            col += parts[pick].cols();
            for (std::size_t j = 0; j < parts.size(); ++j) {
                if (j == pick) continue;
                T.middleCols(col, parts[j].cols()) = parts[j];
                col += parts[j].cols();
            }
            const Index k = parts[pick].cols();
            if (!(condition_number(T) < 1e12)) continue;
            const RealMatrix T_inv = T.partialPivLu().inverse();
            const RealMatrix P = T.leftCols(k) * T_inv.topRows(k);
            const double idem = (P * P - P).norm();
            const double ca = (P * g.a - g.a * P).norm() / g.a.norm();
            const double cb = (P * g.b - g.b * P).norm() / g.b.norm();
            if (idem <= kProjectorTol && ca <= kProjectorTol && cb <= kProjectorTol && k > 0 && k < n) {
                verdict.found = true;
                verdict.trial = trial;
                verdict.projector = P;
                verdict.rank = k;
                verdict.idempotence = idem;
                verdict.commute_a = ca;
                verdict.commute_b = cb;
                return verdict;
            }
        }
    }
    return verdict;
}

}  // namespace idinf
