#pragma once

#include <string>
#include <vector>

#include "idinf/matlin.hpp"
#include "idinf/pairalg.hpp"

namespace idinf {

/// Polynomial with ascending-degree coefficients: coeffs[i] multiplies t^i.
struct RealPoly {
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex evaluate(Complex t) const;
};

enum class FactorKind { Real, ComplexPair };

/// A monic irreducible real factor: t - r, or (t - c)(t - conj c) with c = e + i f, f > 0.
struct IrreducibleFactor {
    FactorKind kind = FactorKind::Real;
    double r = 0.0;
    double e = 0.0;
    double f = 0.0;
    int multiplicity = 1;

    static IrreducibleFactor real(double r, int multiplicity = 1);
    static IrreducibleFactor complex_pair(double e, double f, int multiplicity = 1);

    int degree() const { return kind == FactorKind::Real ? 1 : 2; }
    /// r, or the root in the upper half plane.
    Complex root() const;
    double modulus() const;
    RealPoly poly() const;
    /// p(a) evaluated directly as a - rI or a^2 - 2e a + (e^2 + f^2) I.
    RealMatrix evaluate(const RealMatrix& a) const;
};

struct ReciprocalClass {
    IrreducibleFactor p;        // representative; |root| > 1 unless self-dual
    IrreducibleFactor p_tilde;  // reciprocal partner (equal to p when self-dual)
    bool self_dual = false;
    int total_multiplicity = 0;  // multiplicity(p) + multiplicity(p~), or multiplicity(p) if self-dual
};

/// Nested orthonormal bases of V_k = ker F^k, stored as mutually orthogonal
/// blocks: V_k = span[complements[0], ..., complements[k-1]].
template <typename Scalar>
struct Staircase {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    std::vector<Matrix> complements;
    std::vector<Index> dims;  // d_1 < d_2 < ... (cumulative)

    int levels() const { return static_cast<int>(complements.size()); }
    Index total() const { return dims.empty() ? 0 : dims.back(); }
    /// Orthonormal basis of V_k (k = 0 gives an empty basis).
    Matrix basis(int k) const;
};

struct Filtration {
    ReciprocalClass cls;
    int n_max = 0;
    std::vector<Index> level_dims;         // real dimensions d_1..d_n of ker p(a)^k
    std::vector<RealMatrix> level_bases;   // orthonormal, nested
};

/// Monic characteristic polynomial of a, expanded from its eigenvalues.
RealPoly char_poly(const RealMatrix& a);

/// Factors the polynomial over the reals via the eigenvalues of its companion matrix.
std::vector<IrreducibleFactor> irreducible_factors(const RealPoly& q, const TolerancePolicy& tol);

/// Factors the characteristic polynomial of m by clustering m's own eigenvalues.
///
/// Clusters start from a coarse linkage radius and are accepted only when the
/// generalized eigenspace at the cluster mean has the cluster's size; failing
/// clusters are re-split with a radius ten times smaller, down to root_rel.
std::vector<IrreducibleFactor> spectral_factors(const RealMatrix& m, const TolerancePolicy& tol);

IrreducibleFactor reciprocal_partner(const IrreducibleFactor& p);

/// Pairs each factor with its reciprocal. Factors that are not self-dual and
/// have no partner but sit within sqrt(root_rel) of the unit circle are merged
/// into a self-dual class and a warning is appended.
std::vector<ReciprocalClass> reciprocal_classes(const std::vector<IrreducibleFactor>& factors,
                                                const TolerancePolicy& tol,
                                                std::vector<std::string>* warnings = nullptr);

/// Kernel flag of ker F, ker F^2, ... computed by the staircase recursion
/// V_k = ker((I - P_{k-1}) F), which avoids forming powers of F.
///
/// Rank decisions are relative to `reference` (the scale of the data F was
/// built from); a non-positive value falls back to ||F||.
Staircase<double> staircase(const RealMatrix& F, const TolerancePolicy& tol, double reference = 0.0,
                            int max_levels = -1);
Staircase<Complex> staircase(const ComplexMatrix& F, const TolerancePolicy& tol,
                             double reference = 0.0, int max_levels = -1);

/// Scale used for rank decisions on p(a): an upper bound for ||p(a)|| built from ||a||.
double factor_scale(const IrreducibleFactor& p, double a_norm);

/// Filtration of p(a) for the class representative p.
Filtration filtration(const GeneratorPair& g, const ReciprocalClass& cls, const TolerancePolicy& tol);

bool roots_match(const IrreducibleFactor& x, const IrreducibleFactor& y, double rel);

}  // namespace idinf
