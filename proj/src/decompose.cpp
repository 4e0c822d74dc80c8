#include "idinf/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "idinf/canonical.hpp"
#include "idinf/error.hpp"

namespace idinf {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Smallest admissible sigma_min / sigma_max for column-normalised sets that
// must be independent in a quotient.
constexpr double kIndependenceFloor = 1e-7;
// Pair partners with a relative residual at least this large are accepted on
// the first pass over candidates.
constexpr double kComfortablePair = 0.1;

template <typename Scalar>
Mat<Scalar> orthonormal_columns(const Mat<Scalar>& m) {
    if (m.cols() == 0) return Mat<Scalar>(m.rows(), 0);
    Eigen::HouseholderQR<Mat<Scalar>> qr(m);
    return qr.householderQ() * Mat<Scalar>::Identity(m.rows(), m.cols());
}

template <typename Scalar>
void require_independent(const Mat<Scalar>& images, int level) {
    if (images.cols() == 0) return;
    if (images.cols() > images.rows()) {
        throw Error(ErrorCode::NumericalFailure,
                    "level " + std::to_string(level) + ": more chain images than quotient dimensions");
    }
    Mat<Scalar> normalized = images;
    for (Index j = 0; j < normalized.cols(); ++j) {
        const double nj = normalized.col(j).norm();
        if (nj == 0.0) {
            throw Error(ErrorCode::NumericalFailure,
                        "level " + std::to_string(level) + ": a chain image vanishes in the quotient");
        }
        normalized.col(j) /= nj;
    }
    Eigen::JacobiSVD<Mat<Scalar>> svd(normalized);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < kIndependenceFloor * sv(0)) {
        std::ostringstream msg;
        msg << "level " << level << ": chain images are numerically dependent in the quotient"
            << " (sigma ratio " << sv(sv.size() - 1) / sv(0) << ")";
        throw Error(ErrorCode::NumericalFailure, msg.str());
    }
}

template <typename Scalar>
void append_column(Mat<Scalar>& U, const Vec<Scalar>& v) {
    U.conservativeResize(Eigen::NoChange, U.cols() + 1);
    U.col(U.cols() - 1) = v;
}

template <typename Scalar>
Vec<Scalar> residual_against(const Mat<Scalar>& U, const Vec<Scalar>& v) {
    if (U.cols() == 0) return v;
    Vec<Scalar> r = v - U * (U.adjoint() * v);
    return r - U * (U.adjoint() * r);  // second pass keeps orthogonality at rounding level
}

// Threshold a fresh axis must clear: some axis always reaches sqrt(remaining/dim).
double pick_floor(Index remaining, Index dim) {
    return 0.5 * std::sqrt(static_cast<double>(remaining) / static_cast<double>(dim));
}

template <typename Scalar>
Vec<Scalar> chain_vector(const Mat<Scalar>& N, Vec<Scalar> v, int steps) {
    for (int s = 0; s < steps; ++s) v = N * v;
    return v;
}

double unit_normalizer(const RealMatrix& basis) {
    const double fro = basis.norm();
    return fro > 0.0 ? std::sqrt(static_cast<double>(basis.cols())) / fro : 1.0;
}

SummandInvariant class_invariant(const ReciprocalClass& cls, int n) {
    SummandInvariant inv;
    inv.factor = cls.p;
    inv.factor.multiplicity = 1;
    inv.n = n;
    return inv;
}

Summand real_summand(const GeneratorPair& g, const RealMatrix& N, const ReciprocalClass& cls,
                     const RealVector& w, int n) {
    const Index dim = g.dim();
    RealMatrix side(dim, n);
    RealVector v = w;
    // e_i = N^{n-i} w, so the last column is w and the first is N^{n-1} w
    for (int i = n - 1; i >= 0; --i) {
        side.col(i) = v;
        if (i > 0) v = N * v;
    }
    Summand s;
    s.invariant = class_invariant(cls, n);
    s.basis.resize(dim, 2 * n);
    s.basis << side, g.b * side;
    const double scale = unit_normalizer(s.basis);
    s.basis *= scale;
    s.generator_w = w * scale;
    return s;
}

Summand complex_summand(const GeneratorPair& g, const ComplexMatrix& N, const ReciprocalClass& cls,
                        const ComplexVector& z, int n) {
    const Index dim = g.dim();
    RealMatrix side(dim, 2 * n);
    ComplexVector v = z;
    // z_i = N^{n-i} z with N = a - c; x_i = Re z_i, y_i = -Im z_i gives the
    // real Jordan block with D = [[e, -f], [f, e]] and identity superdiagonal.
    for (int i = n - 1; i >= 0; --i) {
        side.col(2 * i) = v.real();
        side.col(2 * i + 1) = -v.imag();
        if (i > 0) v = N * v;
    }
    Summand s;
    s.invariant = class_invariant(cls, n);
    s.basis.resize(dim, 4 * n);
    s.basis << side, g.b * side;
    const double scale = unit_normalizer(s.basis);
    s.basis *= scale;
    s.generator_w = side.col(2 * n - 2) * scale;
    return s;
}

template <typename Scalar>
void require_dimension(const Staircase<Scalar>& stairs, Index expected, const ReciprocalClass& cls) {
    if (stairs.total() != expected) {
        std::ostringstream msg;
        msg << "generalized eigenspace for root " << cls.p.root() << " has dimension "
            << stairs.total() << ", expected " << expected
            << " (tolerances may be too tight or too loose for this input)";
        throw Error(ErrorCode::NumericalFailure, msg.str());
    }
}

std::vector<Summand> split_real_kind(const GeneratorPair& g, const ReciprocalClass& cls,
                                     const TolerancePolicy& tol, bool pairs) {
    RealMatrix N = g.a;
    N.diagonal().array() -= cls.p.r;
    const auto stairs = staircase(N, tol, spectral_norm(g.a) + std::abs(cls.p.r));
    require_dimension(stairs, cls.p.multiplicity, cls);

    QuotientBuilder<double> builder;
    if (pairs) {
        const RealMatrix& b = g.b;
        builder = [&b](const QuotientSpace<double>& q, const RealMatrix& existing) {
            return extend_b_pairs<double>(
                q, existing, [&b](const RealVector& v) -> RealVector { return b * v; },
                ScalarMode::Real);
        };
    } else {
        builder = [](const QuotientSpace<double>& q, const RealMatrix& existing) {
            return extend_plain<double>(q, existing);
        };
    }
    std::vector<Summand> out;
    for (const auto& level : select_generators<double>(stairs, N, builder, tol)) {
        for (const auto& w : level.generators) out.push_back(real_summand(g, N, cls, w, level.level));
    }
    return out;
}

std::vector<Summand> split_complex_kind(const GeneratorPair& g, const ReciprocalClass& cls,
                                        const TolerancePolicy& tol, bool pairs) {
    const Complex c = cls.p.root();
    ComplexMatrix N = g.a.cast<Complex>();
    N.diagonal().array() -= c;
    const auto stairs = staircase(N, tol, spectral_norm(g.a) + std::abs(c));
    require_dimension(stairs, cls.p.multiplicity, cls);

    QuotientBuilder<Complex> builder;
    if (pairs) {
        const ComplexMatrix bc = g.b.cast<Complex>();
        builder = [bc](const QuotientSpace<Complex>& q, const ComplexMatrix& existing) {
            return extend_b_pairs<Complex>(
                q, existing,
                [&bc](const ComplexVector& z) -> ComplexVector { return (bc * z).conjugate(); },
                ScalarMode::Complex);
        };
    } else {
        builder = [](const QuotientSpace<Complex>& q, const ComplexMatrix& existing) {
            return extend_plain<Complex>(q, existing);
        };
    }
    std::vector<Summand> out;
    for (const auto& level : select_generators<Complex>(stairs, N, builder, tol)) {
        for (const auto& z : level.generators) {
            out.push_back(complex_summand(g, N, cls, z, level.level));
        }
    }
    return out;
}

}  // namespace

bool invariant_less(const SummandInvariant& x, const SummandInvariant& y) {
    const auto& p = x.factor;
    const auto& q = y.factor;
    if (p.kind != q.kind) return p.kind == FactorKind::Real;
    if (p.kind == FactorKind::Real) {
        if (p.r != q.r) return p.r < q.r;
    } else {
        if (p.e != q.e) return p.e < q.e;
        if (p.f != q.f) return p.f < q.f;
    }
    return x.n > y.n;
}

template <typename Scalar>
typename QuotientSpace<Scalar>::Vector QuotientSpace<Scalar>::coordinates(const Vector& v) const {
    if (lower.cols() == 0) return complement.adjoint() * v;
    const auto lifted = least_norm_solve(lower, v, tol);
    return complement.adjoint() * (v - lower * lifted.x);
}

template struct QuotientSpace<double>;
template struct QuotientSpace<Complex>;

template <typename Scalar>
std::vector<LevelGenerators<Scalar>> select_generators(const Staircase<Scalar>& flag,
                                                       const Mat<Scalar>& nilpotent,
                                                       const QuotientBuilder<Scalar>& builder,
                                                       const TolerancePolicy& tol) {
    struct Head {
        int level;
        Vec<Scalar> v;
    };
    std::vector<Head> heads;
    std::vector<LevelGenerators<Scalar>> out;
    for (int k = flag.levels(); k >= 1; --k) {
        QuotientSpace<Scalar> q{flag.basis(k - 1), flag.complements[static_cast<std::size_t>(k - 1)], tol};
        Mat<Scalar> images(q.dim(), static_cast<Index>(heads.size()));
        for (std::size_t j = 0; j < heads.size(); ++j) {
            images.col(static_cast<Index>(j)) =
                q.coordinates(chain_vector<Scalar>(nilpotent, heads[j].v, heads[j].level - k));
        }
        require_independent(images, k);
        Completion<Scalar> done = builder(q, images);
        if (images.cols() + static_cast<Index>(done.heads.size()) != q.dim()) {
            throw Error(ErrorCode::NumericalFailure,
                        "level " + std::to_string(k) + ": quotient basis completion is incomplete");
        }
        for (auto& h : done.heads) heads.push_back({k, std::move(h)});
        if (!done.generators.empty()) out.push_back({k, std::move(done.generators)});
    }
    return out;
}

template std::vector<LevelGenerators<double>> select_generators<double>(
    const Staircase<double>&, const RealMatrix&, const QuotientBuilder<double>&, const TolerancePolicy&);
template std::vector<LevelGenerators<Complex>> select_generators<Complex>(
    const Staircase<Complex>&, const ComplexMatrix&, const QuotientBuilder<Complex>&,
    const TolerancePolicy&);

template <typename Scalar>
Completion<Scalar> extend_plain(const QuotientSpace<Scalar>& quotient, const Mat<Scalar>& existing) {
    const Index dim = quotient.dim();
    Mat<Scalar> U = orthonormal_columns<Scalar>(existing);
    Completion<Scalar> out;
    Index remaining = dim - U.cols();
    while (remaining > 0) {
        bool picked = false;
        for (Index j = 0; j < dim && !picked; ++j) {
            Vec<Scalar> v = residual_against<Scalar>(U, Vec<Scalar>::Unit(dim, j));
            const double res = v.norm();
            if (res < pick_floor(remaining, dim)) continue;
            v /= res;
            append_column<Scalar>(U, v);
            Vec<Scalar> w = quotient.lift(v);
            out.heads.push_back(w);
            out.generators.push_back(std::move(w));
            picked = true;
        }
        if (!picked) throw Error(ErrorCode::NumericalFailure, "quotient completion found no fresh axis");
        --remaining;
    }
    return out;
}

template Completion<double> extend_plain<double>(const QuotientSpace<double>&, const RealMatrix&);
template Completion<Complex> extend_plain<Complex>(const QuotientSpace<Complex>&, const ComplexMatrix&);

template <typename Scalar>
Completion<Scalar> extend_b_pairs(const QuotientSpace<Scalar>& quotient, const Mat<Scalar>& existing,
                                  const std::function<Vec<Scalar>(const Vec<Scalar>&)>& beta,
                                  ScalarMode mode) {
    const Index dim = quotient.dim();
    Mat<Scalar> U = orthonormal_columns<Scalar>(existing);
    Index remaining = dim - U.cols();
    if (remaining % 2 != 0) {
        throw Error(ErrorCode::NumericalFailure,
                    std::string("b-pair completion needs an even number of missing ") +
                        (mode == ScalarMode::Real ? "real" : "complex") + " dimensions");
    }
    Completion<Scalar> out;
    while (remaining > 0) {
        struct Candidate {
            Vec<Scalar> v, partner, w, bw;
            double ratio = -1.0;
        };
        Candidate best;
        for (Index j = 0; j < dim; ++j) {
            Vec<Scalar> v = residual_against<Scalar>(U, Vec<Scalar>::Unit(dim, j));
            const double res = v.norm();
            if (res < pick_floor(remaining, dim)) continue;
            v /= res;
            Vec<Scalar> w = quotient.lift(v);
            Vec<Scalar> bw = beta(w);
            const Vec<Scalar> bq = quotient.coordinates(bw);
            Vec<Scalar> t = residual_against<Scalar>(U, bq);
            t -= v * v.dot(t);
            const double bq_norm = bq.norm();
            const double ratio = bq_norm > 0.0 ? t.norm() / bq_norm : 0.0;
            if (ratio > best.ratio) best = {v, t, std::move(w), std::move(bw), ratio};
            if (ratio >= kComfortablePair) break;
        }
        if (best.ratio < kIndependenceFloor) {
            throw Error(ErrorCode::NumericalFailure,
                        "b-pair completion: partner is numerically dependent on the current span");
        }
        append_column<Scalar>(U, best.v);
        append_column<Scalar>(U, Vec<Scalar>(best.partner / best.partner.norm()));
        out.generators.push_back(best.w);
        out.heads.push_back(std::move(best.w));
        out.heads.push_back(std::move(best.bw));
        remaining -= 2;
    }
    return out;
}

template Completion<double> extend_b_pairs<double>(const QuotientSpace<double>&, const RealMatrix&,
                                                   const std::function<RealVector(const RealVector&)>&,
                                                   ScalarMode);
template Completion<Complex> extend_b_pairs<Complex>(
    const QuotientSpace<Complex>&, const ComplexMatrix&,
    const std::function<ComplexVector(const ComplexVector&)>&, ScalarMode);

std::vector<Summand> split_distinct(const GeneratorPair& g, const ReciprocalClass& cls,
                                    const TolerancePolicy& tol) {
    if (cls.self_dual) throw Error(ErrorCode::InvalidInput, "split_distinct needs a class with p != p~");
    return cls.p.kind == FactorKind::Real ? split_real_kind(g, cls, tol, false)
                                          : split_complex_kind(g, cls, tol, false);
}

std::vector<Summand> split_selfdual_real(const GeneratorPair& g, const ReciprocalClass& cls,
                                         const TolerancePolicy& tol) {
    if (!cls.self_dual || cls.p.kind != FactorKind::Real) {
        throw Error(ErrorCode::InvalidInput, "split_selfdual_real needs p = t - r with r = +-1");
    }
    return split_real_kind(g, cls, tol, true);
}

std::vector<Summand> split_selfdual_complex(const GeneratorPair& g, const ReciprocalClass& cls,
                                            const TolerancePolicy& tol) {
    if (!cls.self_dual || cls.p.kind != FactorKind::ComplexPair) {
        throw Error(ErrorCode::InvalidInput, "split_selfdual_complex needs a unit-circle complex pair");
    }
    return split_complex_kind(g, cls, tol, true);
}

DecompositionReport decompose(const GeneratorPair& g, const TolerancePolicy& tol,
                              const DecomposeOptions& options) {
    tol.validate();
    DecompositionReport report;
    const auto factors = spectral_factors(g.a, tol);
    report.classes = reciprocal_classes(factors, tol, &report.warnings);

    for (const auto& cls : report.classes) {
        std::vector<Summand> parts;
        if (!cls.self_dual) {
            parts = split_distinct(g, cls, tol);
        } else if (cls.p.kind == FactorKind::Real) {
            parts = split_selfdual_real(g, cls, tol);
        } else {
            parts = split_selfdual_complex(g, cls, tol);
        }
        for (auto& s : parts) report.summands.push_back(std::move(s));
    }
    std::stable_sort(report.summands.begin(), report.summands.end(),
                     [](const Summand& x, const Summand& y) { return invariant_less(x.invariant, y.invariant); });

    const Index dim = g.dim();
    Index cols = 0;
    for (const auto& s : report.summands) cols += s.basis.cols();
    if (cols != dim) {
        throw Error(ErrorCode::NumericalFailure, "summands span " + std::to_string(cols) +
                                                     " dimensions, expected " + std::to_string(dim));
    }
    report.S.resize(dim, dim);
    std::vector<RealMatrix> a_blocks, b_blocks;
    Index col = 0;
    for (const auto& s : report.summands) {
        report.S.middleCols(col, s.basis.cols()) = s.basis;
        col += s.basis.cols();
        report.invariants.push_back(s.invariant);
        const auto model = canonical_model(s.invariant);
        a_blocks.push_back(model.a_c);
        b_blocks.push_back(model.b_c);
    }
    report.canonical_a = block_diagonal(a_blocks);
    report.canonical_b = block_diagonal(b_blocks);

    report.residuals.cond_S = condition_number(report.S);
    RealMatrix S_inv;
    try {
        S_inv = inverse(report.S, tol);
    } catch (const Error& e) {
        throw Error(ErrorCode::NumericalFailure, std::string("summand bases are not independent: ") + e.what());
    }
    report.residuals.conjugation_a = (S_inv * g.a * report.S - report.canonical_a).norm() / g.a.norm();
    report.residuals.conjugation_b = (S_inv * g.b * report.S - report.canonical_b).norm() / g.b.norm();
    const auto rel = relation_residuals(g);
    report.residuals.relation = rel.rel;
    report.residuals.relation_b2 = rel.b2;
    if (report.residuals.cond_S > options.cond_bound) {
        std::ostringstream msg;
        msg << "IllConditionedBasis: cond(S) = " << report.residuals.cond_S << " exceeds "
            << options.cond_bound;
        report.warnings.push_back(msg.str());
    }
    return report;
}

}  // namespace idinf
