#include "idinf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "idinf/error.hpp"

namespace idinf {

namespace {

// Linkage radius for the first clustering pass. Perturbed Jordan blocks of
// size n spread their eigenvalues by roughly (eps * cond)^(1/n), which for the
// block sizes met in practice stays well inside this radius.
constexpr double kCoarseRadius = 0.05;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Staircase<Scalar> staircase_impl(const Mat<Scalar>& F, const TolerancePolicy& tol, double reference,
                                 int max_levels) {
    const Index n = F.rows();
    Staircase<Scalar> out;
    if (n == 0) return out;
    const double fnorm = spectral_norm(F);
    const double ref = reference > 0.0 ? reference : fnorm;
    if (ref == 0.0) {
        out.complements.push_back(Mat<Scalar>::Identity(n, n));
        out.dims.push_back(n);
        return out;
    }
    const int limit = max_levels < 0 ? static_cast<int>(n) : max_levels;
    // W is an orthonormal basis of V_{k-1}^perp. A new level solves
    // (I - P_{k-1}) F W y = 0 on the complement only, so the fresh kernel
    // vectors C = W y come out orthogonal to the flag, and the SVD's leading
    // right singular vectors give the next W for free.
    Mat<Scalar> B(n, 0);
    Mat<Scalar> W = Mat<Scalar>::Identity(n, n);
    const double cut = tol.rank_threshold(n, n) * ref;
    while (out.levels() < limit && W.cols() > 0) {
        const Mat<Scalar> M = (F - B * (B.adjoint() * F)) * W;
        const auto dec = svd(M, Eigen::ComputeFullV);
        Index rank = 0;
        for (Index i = 0; i < dec.singular_values.size(); ++i) {
            if (dec.singular_values(i) > cut) ++rank;
        }
        const Index grow = W.cols() - rank;
        if (grow <= 0) break;
        Mat<Scalar> C = W * dec.V.rightCols(grow);
        C -= B * (B.adjoint() * C);
        Eigen::HouseholderQR<Mat<Scalar>> qr(C);
        C = qr.householderQ() * Mat<Scalar>::Identity(n, grow);
        W = W * dec.V.leftCols(rank);
        Mat<Scalar> next(n, B.cols() + grow);
        next << B, C;
        B = std::move(next);
        out.complements.push_back(std::move(C));
        out.dims.push_back(B.cols());
    }
    return out;
}

double upper_modulus(Complex z) { return std::max(1.0, std::abs(z)); }

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

class SpectrumClusterer {
public:
    SpectrumClusterer(const RealMatrix& m, const TolerancePolicy& tol)
        : m_(m), tol_(tol), scale_(spectral_norm(m)) {
        Eigen::EigenSolver<RealMatrix> es(m, false);
        if (es.info() != Eigen::Success) {
            throw Error(ErrorCode::NumericalFailure, "eigenvalue iteration did not converge");
        }
        eig_ = es.eigenvalues();
    }

    std::vector<IrreducibleFactor> run() {
        std::vector<Index> all(static_cast<std::size_t>(eig_.size()));
        std::iota(all.begin(), all.end(), Index{0});
        refine(all, kCoarseRadius);
        return std::move(out_);
    }

private:
    void refine(const std::vector<Index>& members, double radius) {
        UnionFind uf(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                const Complex x = eig_(members[i]);
                const Complex y = eig_(members[j]);
                const double scale = std::max(1.0, std::min(std::abs(x), std::abs(y)));
                if (std::abs(x - y) <= radius * scale) uf.unite(i, j);
            }
        }
        std::vector<std::vector<Index>> groups;
        std::vector<std::size_t> slot(members.size(), members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            const std::size_t root = uf.find(i);
            if (slot[root] == members.size()) {
                slot[root] = groups.size();
                groups.emplace_back();
            }
            groups[slot[root]].push_back(members[i]);
        }
        for (const auto& group : groups) accept_or_split(group, radius);
    }

    void accept_or_split(const std::vector<Index>& group, double radius) {
        bool upper = false, lower = false, axis = false;
        Complex sum = 0.0;
        for (Index i : group) {
            const double im = eig_(i).imag();
            upper |= im > 0.0;
            lower |= im < 0.0;
            axis |= im == 0.0;
            sum += eig_(i);
        }
        if (lower && !upper && !axis) return;  // mirror image of an upper cluster
        const bool is_real = lower || axis;
        const int count = static_cast<int>(group.size());
        const Complex mean = sum / static_cast<double>(count);
        const double reference = scale_ + std::abs(mean);

        Index found = 0;
        if (is_real) {
            RealMatrix F = m_;
            F.diagonal().array() -= mean.real();
            found = staircase(F, tol_, reference, count + 1).total();
        } else {
            // Real form: ker p(m)^k has twice the complex dimension.
            const auto p = IrreducibleFactor::complex_pair(mean.real(), mean.imag());
            const Index total = staircase(p.evaluate(m_), tol_, factor_scale(p, scale_), count + 1).total();
            found = total % 2 == 0 ? total / 2 : -1;
        }
        if (found != count && radius * 0.1 >= tol_.root_rel && count > 1) {
            refine(group, radius * 0.1);
            return;
        }
        out_.push_back(is_real ? IrreducibleFactor::real(mean.real(), count)
                               : IrreducibleFactor::complex_pair(mean.real(), mean.imag(), count));
    }

    const RealMatrix& m_;
    TolerancePolicy tol_;
    double scale_;
    ComplexVector eig_;
    std::vector<IrreducibleFactor> out_;
};

void sort_factors(std::vector<IrreducibleFactor>& factors) {
    std::sort(factors.begin(), factors.end(), [](const auto& x, const auto& y) {
        if (x.kind != y.kind) return x.kind == FactorKind::Real;
        if (x.kind == FactorKind::Real) return x.r > y.r;
        if (x.e != y.e) return x.e > y.e;
        return x.f > y.f;
    });
}

void check_nonzero_roots(const std::vector<IrreducibleFactor>& factors, const TolerancePolicy& tol) {
    for (const auto& p : factors) {
        if (p.modulus() <= tol.root_rel) {
            std::ostringstream msg;
            msg << "root of modulus " << p.modulus() << " is numerically zero";
            throw Error(ErrorCode::ZeroRoot, msg.str());
        }
    }
}

IrreducibleFactor snap_to_unit(IrreducibleFactor p) {
    if (p.kind == FactorKind::Real) {
        p.r = p.r < 0.0 ? -1.0 : 1.0;
    } else {
        const double mod = std::hypot(p.e, p.f);
        p.e /= mod;
        p.f /= mod;
    }
    return p;
}

}  // namespace

Complex RealPoly::evaluate(Complex t) const {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

IrreducibleFactor IrreducibleFactor::real(double r, int multiplicity) {
    IrreducibleFactor p;
    p.kind = FactorKind::Real;
    p.r = r;
    p.multiplicity = multiplicity;
    return p;
}

IrreducibleFactor IrreducibleFactor::complex_pair(double e, double f, int multiplicity) {
    IrreducibleFactor p;
    p.kind = FactorKind::ComplexPair;
    p.e = e;
    p.f = std::abs(f);
    p.multiplicity = multiplicity;
    return p;
}

Complex IrreducibleFactor::root() const {
    return kind == FactorKind::Real ? Complex(r, 0.0) : Complex(e, f);
}

double IrreducibleFactor::modulus() const { return std::abs(root()); }

RealPoly IrreducibleFactor::poly() const {
    if (kind == FactorKind::Real) return RealPoly{{-r, 1.0}};
    return RealPoly{{e * e + f * f, -2.0 * e, 1.0}};
}

RealMatrix IrreducibleFactor::evaluate(const RealMatrix& a) const {
    RealMatrix out;
    if (kind == FactorKind::Real) {
        out = a;
        out.diagonal().array() -= r;
    } else {
        out = a * a - 2.0 * e * a;
        out.diagonal().array() += e * e + f * f;
    }
    return out;
}

template <typename Scalar>
typename Staircase<Scalar>::Matrix Staircase<Scalar>::basis(int k) const {
    const Index n = complements.empty() ? 0 : complements.front().rows();
    Matrix out(n, k == 0 ? 0 : dims[static_cast<std::size_t>(k - 1)]);
    Index col = 0;
    for (int i = 0; i < k; ++i) {
        const auto& c = complements[static_cast<std::size_t>(i)];
        out.middleCols(col, c.cols()) = c;
        col += c.cols();
    }
    return out;
}

template struct Staircase<double>;
template struct Staircase<Complex>;

Staircase<double> staircase(const RealMatrix& F, const TolerancePolicy& tol, double reference,
                            int max_levels) {
    return staircase_impl<double>(F, tol, reference, max_levels);
}

Staircase<Complex> staircase(const ComplexMatrix& F, const TolerancePolicy& tol, double reference,
                             int max_levels) {
    return staircase_impl<Complex>(F, tol, reference, max_levels);
}

double factor_scale(const IrreducibleFactor& p, double a_norm) {
    if (p.kind == FactorKind::Real) return a_norm + std::abs(p.r);
    return a_norm * a_norm + 2.0 * std::abs(p.e) * a_norm + p.e * p.e + p.f * p.f;
}

RealPoly char_poly(const RealMatrix& a) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "char_poly of a non-square matrix");
    }
    const Index n = a.rows();
    std::vector<Complex> c(static_cast<std::size_t>(n + 1), 0.0);
    c[0] = 1.0;
    if (n > 0) {
        Eigen::EigenSolver<RealMatrix> es(a, false);
        const ComplexVector ev = es.eigenvalues();
        // multiply by (t - lambda) one root at a time; c holds ascending coefficients
        for (Index k = 0; k < n; ++k) {
            for (Index j = k + 1; j > 0; --j) {
                c[static_cast<std::size_t>(j)] =
                    c[static_cast<std::size_t>(j - 1)] - ev(k) * c[static_cast<std::size_t>(j)];
            }
            c[0] = -ev(k) * c[0];
        }
    }
    RealPoly out;
    out.coeffs.reserve(c.size());
    for (const Complex& z : c) out.coeffs.push_back(z.real());
    return out;
}

std::vector<IrreducibleFactor> irreducible_factors(const RealPoly& q, const TolerancePolicy& tol) {
    if (q.coeffs.empty() || q.coeffs.back() == 0.0) {
        throw Error(ErrorCode::InvalidInput, "polynomial must have a nonzero leading coefficient");
    }
    const int d = q.degree();
    if (d == 0) return {};
    const double lead = q.coeffs.back();
    double cmax = 0.0;
    for (double c : q.coeffs) cmax = std::max(cmax, std::abs(c / lead));
    if (std::abs(q.coeffs.front() / lead) <= std::numeric_limits<double>::epsilon() * cmax) {
        throw Error(ErrorCode::ZeroRoot, "constant term vanishes: t divides the polynomial");
    }
    RealMatrix companion = RealMatrix::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -q.coeffs[static_cast<std::size_t>(i)] / lead;
    auto factors = spectral_factors(companion, tol);
    return factors;
}

std::vector<IrreducibleFactor> spectral_factors(const RealMatrix& m, const TolerancePolicy& tol) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "spectrum of a non-square matrix");
    }
    require_finite(m, "matrix");
    if (m.rows() == 0) return {};
    auto factors = SpectrumClusterer(m, tol).run();
    check_nonzero_roots(factors, tol);
    sort_factors(factors);
    return factors;
}

IrreducibleFactor reciprocal_partner(const IrreducibleFactor& p) {
    if (p.kind == FactorKind::Real) {
        if (p.r == 0.0) throw Error(ErrorCode::ZeroRoot, "t has no reciprocal partner");
        return IrreducibleFactor::real(1.0 / p.r, p.multiplicity);
    }
    const double m2 = p.e * p.e + p.f * p.f;
    if (m2 == 0.0) throw Error(ErrorCode::ZeroRoot, "t^2 has no reciprocal partner");
    // 1/c = conj(c)/|c|^2; the conjugate pair is stored with f > 0
    return IrreducibleFactor::complex_pair(p.e / m2, p.f / m2, p.multiplicity);
}

bool roots_match(const IrreducibleFactor& x, const IrreducibleFactor& y, double rel) {
    if (x.kind != y.kind) return false;
    const double scale = std::max(upper_modulus(x.root()), upper_modulus(y.root()));
    return std::abs(x.root() - y.root()) <= rel * scale;
}

std::vector<ReciprocalClass> reciprocal_classes(const std::vector<IrreducibleFactor>& factors,
                                                const TolerancePolicy& tol,
                                                std::vector<std::string>* warnings) {
    std::vector<ReciprocalClass> classes;
    std::vector<bool> used(factors.size(), false);
    std::vector<std::size_t> leftovers;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (used[i]) continue;
        const IrreducibleFactor& p = factors[i];
        used[i] = true;
        if (std::abs(p.modulus() - 1.0) <= tol.root_rel) {
            ReciprocalClass cls;
            cls.p = snap_to_unit(p);
            cls.p_tilde = cls.p;
            cls.self_dual = true;
            cls.total_multiplicity = p.multiplicity;
            classes.push_back(cls);
            continue;
        }
        const IrreducibleFactor want = reciprocal_partner(p);
        std::size_t match = factors.size();
        for (std::size_t j = 0; j < factors.size(); ++j) {
            if (!used[j] && roots_match(want, factors[j], tol.root_rel)) {
                match = j;
                break;
            }
        }
        if (match == factors.size()) {
            leftovers.push_back(i);
            continue;
        }
        const IrreducibleFactor& q = factors[match];
        if (q.multiplicity != p.multiplicity) {
            std::ostringstream msg;
            msg << "factor with root " << p.root() << " has multiplicity " << p.multiplicity
                << " but its reciprocal has multiplicity " << q.multiplicity;
            throw Error(ErrorCode::UnpairedFactor, msg.str());
        }
        used[match] = true;
        const bool p_big = p.modulus() > 1.0;
        const IrreducibleFactor& big = p_big ? p : q;
        const IrreducibleFactor mirrored = reciprocal_partner(p_big ? q : p);
        IrreducibleFactor rep = big;
        // both cluster means estimate the same root; average them
        if (rep.kind == FactorKind::Real) {
            rep.r = 0.5 * (big.r + mirrored.r);
        } else {
            rep.e = 0.5 * (big.e + mirrored.e);
            rep.f = 0.5 * (big.f + mirrored.f);
        }
        ReciprocalClass cls;
        cls.p = rep;
        cls.p_tilde = reciprocal_partner(rep);
        cls.self_dual = false;
        cls.total_multiplicity = p.multiplicity + q.multiplicity;
        classes.push_back(cls);
    }

    // Near-unit stragglers whose reciprocals landed in a different cluster:
    // merge toward the self-dual class on the circle.
    const double band = std::sqrt(tol.root_rel);
    for (std::size_t idx : leftovers) {
        const IrreducibleFactor& p = factors[idx];
        if (std::abs(p.modulus() - 1.0) > band) {
            std::ostringstream msg;
            msg << "factor with root " << p.root() << " (multiplicity " << p.multiplicity
                << ") has no reciprocal partner";
            throw Error(ErrorCode::UnpairedFactor, msg.str());
        }
        const IrreducibleFactor snapped = snap_to_unit(p);
        auto it = std::find_if(classes.begin(), classes.end(), [&](const ReciprocalClass& c) {
            return c.self_dual && roots_match(c.p, snapped, band);
        });
        if (it == classes.end()) {
            ReciprocalClass cls;
            cls.p = snapped;
            cls.p_tilde = snapped;
            cls.self_dual = true;
            cls.total_multiplicity = p.multiplicity;
            classes.push_back(cls);
        } else {
            it->total_multiplicity += p.multiplicity;
        }
        if (warnings) {
            std::ostringstream msg;
            msg << "root " << p.root() << " lies within " << band
                << " of the unit circle without an exact reciprocal; merged into a self-dual class";
            warnings->push_back(msg.str());
        }
    }
    for (auto& cls : classes) {
        cls.p.multiplicity = cls.self_dual ? cls.total_multiplicity : cls.total_multiplicity / 2;
        cls.p_tilde.multiplicity = cls.p.multiplicity;
    }
    return classes;
}

Filtration filtration(const GeneratorPair& g, const ReciprocalClass& cls, const TolerancePolicy& tol) {
    Filtration out;
    out.cls = cls;
    const RealMatrix F = cls.p.evaluate(g.a);
    const auto stairs = staircase(F, tol, factor_scale(cls.p, spectral_norm(g.a)));
    out.n_max = stairs.levels();
    out.level_dims = stairs.dims;
    for (int k = 1; k <= stairs.levels(); ++k) out.level_bases.push_back(stairs.basis(k));
    return out;
}

}  // namespace idinf
