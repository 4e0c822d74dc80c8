#pragma once

#include <functional>
#include <string>
#include <vector>

#include "idinf/matlin.hpp"
#include "idinf/pairalg.hpp"
#include "idinf/spectral.hpp"

namespace idinf {

/// Label (p, n) of one indecomposable summand R[t]/(p^n) + b R[t]/(p^n).
/// `factor.multiplicity` is not meaningful here and is kept at 1.
struct SummandInvariant {
    IrreducibleFactor factor;
    int n = 1;

    int dimension() const { return 2 * factor.degree() * n; }
};

/// Strict weak order used for reports: Real before ComplexPair, then root key
/// ascending (r, or (e, f)), then n descending.
bool invariant_less(const SummandInvariant& x, const SummandInvariant& y);

struct Summand {
    SummandInvariant invariant;
    RealVector generator_w;
    /// 2 deg(p) n columns: the a-side in Jordan (or real Jordan) order, then b
    /// applied to the a-side in the same order.
    RealMatrix basis;
};

struct ReportResiduals {
    double cond_S = 1.0;
    double conjugation_a = 0.0;  // ||S^{-1} a S - canonical_a||_F / ||a||_F
    double conjugation_b = 0.0;
    double relation = 0.0;       // ||b a b^{-1} - a^{-1}||_F / ||a^{-1}||_F
    double relation_b2 = 0.0;
};

struct DecompositionReport {
    std::vector<Summand> summands;
    std::vector<SummandInvariant> invariants;  // sorted, one entry per summand
    std::vector<ReciprocalClass> classes;
    RealMatrix S;
    RealMatrix canonical_a;
    RealMatrix canonical_b;
    ReportResiduals residuals;
    std::vector<std::string> warnings;
};

struct DecomposeOptions {
    double cond_bound = 1e8;  // larger cond(S) attaches an IllConditionedBasis warning
};

DecompositionReport decompose(const GeneratorPair& g, const TolerancePolicy& tol = {},
                              const DecomposeOptions& options = {});

std::vector<Summand> split_distinct(const GeneratorPair& g, const ReciprocalClass& cls,
                                    const TolerancePolicy& tol);
std::vector<Summand> split_selfdual_real(const GeneratorPair& g, const ReciprocalClass& cls,
                                         const TolerancePolicy& tol);
std::vector<Summand> split_selfdual_complex(const GeneratorPair& g, const ReciprocalClass& cls,
                                            const TolerancePolicy& tol);

/// V_k / V_{k-1} for a nested orthonormal flag: `lower` spans V_{k-1} and
/// `complement` is an orthonormal basis of its orthogonal complement in V_k.
template <typename Scalar>
struct QuotientSpace {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Matrix lower;
    Matrix complement;
    TolerancePolicy tol;

    Index dim() const { return complement.cols(); }
    /// Coordinates of the coset v + V_{k-1}, read off its least-norm representative.
    Vector coordinates(const Vector& v) const;
    Vector lift(const Vector& coords) const { return complement * coords; }
};

/// Output of a quotient completion step. `generators` start new summands;
/// `heads` are every new chain head (for b-pair modes this includes the
/// partner b w of each generator w).
template <typename Scalar>
struct Completion {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    std::vector<Vector> generators;
    std::vector<Vector> heads;
};

template <typename Scalar>
using QuotientBuilder = std::function<Completion<Scalar>(
    const QuotientSpace<Scalar>&,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& existing_coords)>;

template <typename Scalar>
struct LevelGenerators {
    int level = 0;
    std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> generators;
};

/// Top-down generator selection over the filtration of a nilpotent action N.
/// At level k the images N^{i-k} w of every earlier chain head must be
/// independent in V_k / V_{k-1}; `builder` completes them to a quotient basis
/// and its completions become the level-k generators.
template <typename Scalar>
std::vector<LevelGenerators<Scalar>> select_generators(
    const Staircase<Scalar>& flag,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& nilpotent,
    const QuotientBuilder<Scalar>& builder, const TolerancePolicy& tol);

enum class ScalarMode { Real, Complex };

/// Completes an independent set to a quotient basis by plain greedy choice
/// over the quotient's coordinate axes (index order).
template <typename Scalar>
Completion<Scalar> extend_plain(const QuotientSpace<Scalar>& quotient,
                                const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& existing);

/// Completes a pair-closed independent set to a basis of pairs {v, beta v}.
/// `beta` acts on ambient vectors of V_k: b itself in Real mode, and the
/// conjugate-linear map z -> conj(b z) in Complex mode.
template <typename Scalar>
Completion<Scalar> extend_b_pairs(
    const QuotientSpace<Scalar>& quotient,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& existing,
    const std::function<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& beta,
    ScalarMode mode);

}  // namespace idinf
