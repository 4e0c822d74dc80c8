#include "idinf/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "idinf/error.hpp"
#include "idinf/rng.hpp"

namespace idinf {

namespace {

bool on_unit_circle(const IrreducibleFactor& p, double tol) {
    return std::abs(p.modulus() - 1.0) <= tol;
}

RealMatrix rotation_block(double e, double f) {
    RealMatrix D(2, 2);
    D << e, -f, f, e;
    return D;
}

void require_valid(const SummandInvariant& inv) {
    const auto& p = inv.factor;
    bool ok = inv.n >= 1;
    if (p.kind == FactorKind::Real) {
        ok = ok && std::isfinite(p.r) && p.r != 0.0;
    } else {
        ok = ok && std::isfinite(p.e) && std::isfinite(p.f) && p.f > 0.0;
    }
    if (!ok) throw Error(ErrorCode::InvalidSpec, "invalid summand invariant");
}

// Fixed-order scalar kernels for generate(). Eigen's products and
// factorizations pick their summation order by SIMD width, which would make
// generated files differ between machines.
RealMatrix ordered_product(const RealMatrix& x, const RealMatrix& y) {
    RealMatrix out(x.rows(), y.cols());
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index j = 0; j < y.cols(); ++j) {
            double acc = 0.0;
            for (Index k = 0; k < x.cols(); ++k) acc += x(i, k) * y(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

// Gauss-Jordan with partial pivoting.
RealMatrix ordered_inverse(RealMatrix m) {
    const Index n = m.rows();
    RealMatrix inv = RealMatrix::Identity(n, n);
    for (Index k = 0; k < n; ++k) {
        Index piv = k;
        for (Index i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        }
        if (m(piv, k) == 0.0) throw Error(ErrorCode::SingularMatrix, "singular change of basis");
        if (piv != k) {
            for (Index j = 0; j < n; ++j) {
                std::swap(m(k, j), m(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        }
        const double d = m(k, k);
        for (Index j = 0; j < n; ++j) {
            m(k, j) /= d;
            inv(k, j) /= d;
        }
        for (Index i = 0; i < n; ++i) {
            if (i == k || m(i, k) == 0.0) continue;
            const double f = m(i, k);
            for (Index j = 0; j < n; ++j) {
                m(i, j) -= f * m(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

}  // namespace

RealMatrix jordan_block(const SummandInvariant& inv) {
    require_valid(inv);
    const int n = inv.n;
    if (inv.factor.kind == FactorKind::Real) {
        RealMatrix A = RealMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            A(i, i) = inv.factor.r;
            if (i + 1 < n) A(i, i + 1) = 1.0;
        }
        return A;
    }
    RealMatrix A = RealMatrix::Zero(2 * n, 2 * n);
    const RealMatrix D = rotation_block(inv.factor.e, inv.factor.f);
    for (int i = 0; i < n; ++i) {
        A.block(2 * i, 2 * i, 2, 2) = D;
        if (i + 1 < n) A.block(2 * i, 2 * i + 2, 2, 2).setIdentity();
    }
    return A;
}

RealMatrix jordan_block_inverse(const SummandInvariant& inv, double unit_tol) {
    require_valid(inv);
    const int n = inv.n;
    if (inv.factor.kind == FactorKind::Real) {
        RealMatrix Ainv = RealMatrix::Zero(n, n);
        const double rinv = 1.0 / inv.factor.r;
        double term = rinv;  // (-1)^k r^{-(k+1)}
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i + k < n; ++i) Ainv(i, i + k) = term;
            term *= -rinv;
        }
        return Ainv;
    }
    const auto& p = inv.factor;
    RealMatrix Dinv = rotation_block(p.e, p.f).transpose();
    if (!on_unit_circle(p, unit_tol)) Dinv /= p.e * p.e + p.f * p.f;
    RealMatrix Ainv = RealMatrix::Zero(2 * n, 2 * n);
    RealMatrix term = Dinv;  // (-1)^k D^{-(k+1)}
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i + k < n; ++i) Ainv.block(2 * i, 2 * (i + k), 2, 2) = term;
        term = -(term * Dinv);
    }
    return Ainv;
}

CanonicalModel canonical_model(const SummandInvariant& inv) {
    CanonicalModel m;
    m.invariant = inv;
    m.invariant.factor.multiplicity = 1;
    m.A = jordan_block(inv);
    m.A_inv = jordan_block_inverse(inv);
    const Index half = m.A.rows();
    const Index dim = 2 * half;
    m.a_c = RealMatrix::Zero(dim, dim);
    m.a_c.topLeftCorner(half, half) = m.A;
    m.a_c.bottomRightCorner(half, half) = m.A_inv;
    m.b_c = RealMatrix::Zero(dim, dim);
    m.b_c.topRightCorner(half, half) = -RealMatrix::Identity(half, half);
    m.b_c.bottomLeftCorner(half, half) = RealMatrix::Identity(half, half);
    m.J2 = m.b_c;
    // J1 = a b^{-1} = -a b = [[0, A], [-A^{-1}, 0]]
    m.J1 = RealMatrix::Zero(dim, dim);
    m.J1.topRightCorner(half, half) = m.A;
    m.J1.bottomLeftCorner(half, half) = -m.A_inv;
    return m;
}

CanonicalSum canonical_sum(const std::vector<SummandInvariant>& invariants) {
    std::vector<RealMatrix> a, b, j1, j2;
    for (const auto& inv : invariants) {
        auto m = canonical_model(inv);
        a.push_back(std::move(m.a_c));
        b.push_back(std::move(m.b_c));
        j1.push_back(std::move(m.J1));
        j2.push_back(std::move(m.J2));
    }
    return {block_diagonal(a), block_diagonal(b), block_diagonal(j1), block_diagonal(j2)};
}

SummandInvariant normalize_invariant(const IrreducibleFactor& factor, int n, const TolerancePolicy& tol) {
    SummandInvariant inv;
    inv.n = n;
    inv.factor = factor;
    if (factor.kind == FactorKind::ComplexPair) inv.factor.f = std::abs(factor.f);
    if (!on_unit_circle(inv.factor, tol.root_rel) && inv.factor.modulus() < 1.0) {
        inv.factor = reciprocal_partner(inv.factor);
    }
    inv.factor.multiplicity = 1;
    return inv;
}

std::vector<SummandInvariant> normalize_invariants(std::vector<SummandInvariant> invariants,
                                                   const TolerancePolicy& tol) {
    for (auto& inv : invariants) inv = normalize_invariant(inv.factor, inv.n, tol);
    std::stable_sort(invariants.begin(), invariants.end(), invariant_less);
    return invariants;
}

bool is_irreducible(const SummandInvariant& inv) { return inv.n == 1; }

bool same_invariants(const std::vector<SummandInvariant>& x, const std::vector<SummandInvariant>& y,
                     const TolerancePolicy& tol) {
    if (x.size() != y.size()) return false;
    std::vector<bool> used(y.size(), false);
    for (const auto& inv : x) {
        bool found = false;
        for (std::size_t j = 0; j < y.size() && !found; ++j) {
            if (!used[j] && y[j].n == inv.n && roots_match(inv.factor, y[j].factor, tol.root_rel)) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool is_isomorphic(const DecompositionReport& r1, const DecompositionReport& r2,
                   const TolerancePolicy& tol) {
    return same_invariants(r1.invariants, r2.invariants, tol);
}

DecompositionReport canonical_report(const std::vector<SummandInvariant>& invariants,
                                     const TolerancePolicy& tol) {
    DecompositionReport report;
    report.invariants = normalize_invariants(invariants, tol);
    // Each summand contributes p^n and its reciprocal partner to the spectrum of a.
    std::vector<IrreducibleFactor> factors;
    auto add = [&](IrreducibleFactor f, int mult) {
        for (auto& g : factors) {
            if (roots_match(g, f, tol.root_rel)) {
                g.multiplicity += mult;
                return;
            }
        }
        f.multiplicity = mult;
        factors.push_back(f);
    };
    for (const auto& inv : report.invariants) {
        add(inv.factor, inv.n);
        add(reciprocal_partner(inv.factor), inv.n);
    }
    report.classes = reciprocal_classes(factors, tol);

    const auto sum = canonical_sum(report.invariants);
    const Index dim = sum.a.rows();
    report.S = RealMatrix::Identity(dim, dim);
    report.canonical_a = sum.a;
    report.canonical_b = sum.b;
    Index col = 0;
    for (const auto& inv : report.invariants) {
        Summand s;
        s.invariant = inv;
        s.basis = report.S.middleCols(col, inv.dimension());
        s.generator_w = s.basis.col(inv.dimension() / 2 - inv.factor.degree());
        col += inv.dimension();
        report.summands.push_back(std::move(s));
    }
    GeneratorPair g{sum.a, sum.b, inverse(sum.a, tol)};
    const auto rel = relation_residuals(g);
    report.residuals.relation = rel.rel;
    report.residuals.relation_b2 = rel.b2;
    return report;
}

GeneratedPair generate(const GenerationSpec& spec) {
    if (spec.invariants.empty()) throw Error(ErrorCode::InvalidSpec, "generation spec has no invariants");
    if (!(spec.cond_bound > 1.0) || !std::isfinite(spec.cond_bound)) {
        throw Error(ErrorCode::InvalidSpec, "cond_bound must be a finite number > 1");
    }
    if (spec.max_draws < 1) throw Error(ErrorCode::InvalidSpec, "max_draws must be positive");
    for (const auto& inv : spec.invariants) require_valid(inv);

    GeneratedPair out;
    out.invariants = normalize_invariants(spec.invariants);
    const auto sum = canonical_sum(out.invariants);
    const Index dim = sum.a.rows();

    SplitMix64 rng(spec.seed);
    const double mix = 0.75 / std::sqrt(static_cast<double>(dim));
    const double max_scale = std::sqrt(std::sqrt(spec.cond_bound));
    for (int draw = 1; draw <= spec.max_draws; ++draw) {
        RealMatrix S(dim, dim);
        for (Index i = 0; i < dim; ++i) {
            for (Index j = 0; j < dim; ++j) S(i, j) = (i == j ? 1.0 : 0.0) + mix * rng.symmetric();
        }
        for (Index j = 0; j < dim; ++j) S.col(j) *= 1.0 + rng.uniform() * (max_scale - 1.0);
        const double cond = condition_number(S);
        if (!(cond <= spec.cond_bound)) continue;
        const RealMatrix S_inv = ordered_inverse(S);
        out.S = S;
        out.cond_S = cond;
        out.draws = draw;
        out.pair = validate_pair(ordered_product(ordered_product(S, sum.J1), S_inv),
                                 ordered_product(ordered_product(S, sum.J2), S_inv), TolerancePolicy{});
        return out;
    }
    std::ostringstream msg;
    msg << "no draw out of " << spec.max_draws << " reached cond(S) <= " << spec.cond_bound;
    throw Error(ErrorCode::CondBoundUnreachable, msg.str());
}

RealMatrix quaternion_J(const CanonicalModel& model, const TolerancePolicy& tol) {
    const auto& p = model.invariant.factor;
    if (p.kind != FactorKind::ComplexPair || model.invariant.n != 1 || !on_unit_circle(p, tol.root_rel)) {
        throw Error(ErrorCode::NotQuaternionCase,
                    "quaternion structure needs a unit-circle complex pair with n = 1");
    }
    RealMatrix J = model.a_c;
    J.diagonal().array() -= p.e;
    return J / p.f;
}

}  // namespace idinf
