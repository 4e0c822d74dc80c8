#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "idinf/canonical.hpp"
#include "idinf/error.hpp"
#include "idinf/spectral.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace idinf;

namespace {

RealPoly poly(std::vector<double> c) { return RealPoly{std::move(c)}; }

void check_coeffs(const RealPoly& p, const std::vector<double>& expected, double tol = 1e-12) {
    REQUIRE(p.coeffs.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(p.coeffs[i] - expected[i]) < tol);
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidInput;
}

const TolerancePolicy tol;

}  // namespace

TEST_CASE("char_poly fixtures") {
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 0.5;
    check_coeffs(char_poly(d), {1, -2.5, 1});
    check_coeffs(char_poly(-RealMatrix::Identity(2, 2)), {1, 2, 1});
    const auto q = canonical_model({IrreducibleFactor::complex_pair(0.6, 0.8), 1});
    // (t^2 - 1.2t + 1)^2 = t^4 - 2.4t^3 + 3.44t^2 - 2.4t + 1
    check_coeffs(char_poly(q.a_c), {1, -2.4, 3.44, -2.4, 1});
}

TEST_CASE("char_poly agrees with Faddeev-LeVerrier") {
    for (int seed = 0; seed < 10; ++seed) {
        const auto spec = support::random_spec(seed, 12);
        const auto gp = generate(spec);
        const RealMatrix a = gp.pair.J1 * gp.pair.J2;
        const auto ours = char_poly(a).coeffs;
        const auto ref = oracle::faddeev_leverrier(a);
        REQUIRE(ours.size() == ref.size());
        double scale = 0;
        for (double c : ref) scale = std::max(scale, std::abs(c));
        for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(ours[i] - ref[i]) <= 1e-8 * scale);
    }
}

TEST_CASE("irreducible_factors fixtures") {
    auto f = irreducible_factors(poly({1, -2.5, 1}), tol);
    REQUIRE(f.size() == 2);
    CHECK(f[0].kind == FactorKind::Real);
    CHECK(f[0].r == doctest::Approx(2.0));
    CHECK(f[1].r == doctest::Approx(0.5));
    CHECK(f[0].multiplicity == 1);

    f = irreducible_factors(poly({1, -2.4, 3.44, -2.4, 1}), tol);
    REQUIRE(f.size() == 1);
    CHECK(f[0].kind == FactorKind::ComplexPair);
    CHECK(f[0].e == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(f[0].f == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(f[0].multiplicity == 2);

    f = irreducible_factors(poly({1, 2, 1}), tol);
    REQUIRE(f.size() == 1);
    CHECK(f[0].r == doctest::Approx(-1.0));
    CHECK(f[0].multiplicity == 2);

    CHECK(code_of([] { irreducible_factors(poly({0, 1, 1}), tol); }) == ErrorCode::ZeroRoot);
}

TEST_CASE("spectral_factors on a defective matrix keeps the Jordan cluster together") {
    const auto g = support::conjugated({{IrreducibleFactor::real(2.0), 4}}, support::random_orthogonal(1, 8) * 3.0);
    const auto f = spectral_factors(g.a, tol);
    REQUIRE(f.size() == 2);
    CHECK(f[0].r == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f[0].multiplicity == 4);
    CHECK(f[1].r == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("reciprocal_partner") {
    auto p = reciprocal_partner(IrreducibleFactor::real(2.0));
    CHECK(p.r == 0.5);
    p = reciprocal_partner(IrreducibleFactor::real(-1.0));
    CHECK(p.r == -1.0);
    p = reciprocal_partner(IrreducibleFactor::complex_pair(0.0, 2.0));
    CHECK(p.kind == FactorKind::ComplexPair);
    CHECK(std::abs(p.e) < 1e-15);
    CHECK(p.f == doctest::Approx(0.5));
    CHECK(code_of([] { reciprocal_partner(IrreducibleFactor::real(0.0)); }) == ErrorCode::ZeroRoot);
}

TEST_CASE("reciprocal_classes") {
    auto c = reciprocal_classes({IrreducibleFactor::real(2.0), IrreducibleFactor::real(0.5)}, tol);
    REQUIRE(c.size() == 1);
    CHECK_FALSE(c[0].self_dual);
    CHECK(c[0].p.r == doctest::Approx(2.0));
    CHECK(c[0].p_tilde.r == doctest::Approx(0.5));
    CHECK(c[0].total_multiplicity == 2);

    c = reciprocal_classes({IrreducibleFactor::real(-1.0, 2)}, tol);
    REQUIRE(c.size() == 1);
    CHECK(c[0].self_dual);
    CHECK(c[0].total_multiplicity == 2);

    CHECK(code_of([] { reciprocal_classes({IrreducibleFactor::real(2.0)}, tol); }) == ErrorCode::UnpairedFactor);
    CHECK(code_of([] {
              reciprocal_classes({IrreducibleFactor::real(2.0, 2), IrreducibleFactor::real(0.5, 1)}, tol);
          }) == ErrorCode::UnpairedFactor);
}

TEST_CASE("near-unit leftovers are merged with a warning") {
    std::vector<std::string> warnings;
    // 3e-4 off the circle: outside root_rel, inside sqrt(root_rel), no partner.
    const auto d = reciprocal_classes({IrreducibleFactor::real(1.0003, 2)}, tol, &warnings);
    REQUIRE(d.size() == 1);
    CHECK(d[0].self_dual);
    CHECK_FALSE(warnings.empty());
}

TEST_CASE("filtration fixtures") {
    SUBCASE("canonical r=1, n=2") {
        const auto g = support::canonical_generators({{IrreducibleFactor::real(1.0), 2}});
        const auto cls = reciprocal_classes(spectral_factors(g.a, tol), tol);
        REQUIRE(cls.size() == 1);
        const auto f = filtration(g, cls[0], tol);
        CHECK(f.n_max == 2);
        CHECK(f.level_dims == std::vector<Index>{2, 4});
    }
    SUBCASE("canonical r=2, n=1") {
        const auto g = support::canonical_generators({{IrreducibleFactor::real(2.0), 1}});
        const auto cls = reciprocal_classes(spectral_factors(g.a, tol), tol);
        const auto f = filtration(g, cls.at(0), tol);
        CHECK(f.level_dims == std::vector<Index>{1});
    }
    SUBCASE("quaternion c = 0.6+0.8i") {
        const auto g = support::canonical_generators({{IrreducibleFactor::complex_pair(0.6, 0.8), 1}});
        const auto cls = reciprocal_classes(spectral_factors(g.a, tol), tol);
        const auto f = filtration(g, cls.at(0), tol);
        CHECK(f.level_dims == std::vector<Index>{4});
    }
}

TEST_CASE("filtration bases are nested and annihilated") {
    const std::vector<SummandInvariant> invs{{IrreducibleFactor::real(-1.0), 3}, {IrreducibleFactor::real(-1.0), 1}};
    const auto g = support::conjugated(invs, support::random_orthogonal(4, 8));
    const auto cls = reciprocal_classes(spectral_factors(g.a, tol), tol);
    const auto f = filtration(g, cls.at(0), tol);
    CHECK(f.level_dims == std::vector<Index>{4, 6, 8});
    const RealMatrix F = cls[0].p.evaluate(g.a);
    RealMatrix power = F;
    for (std::size_t k = 0; k < f.level_bases.size(); ++k) {
        CHECK((power * f.level_bases[k]).norm() < 1e-10);
        if (k > 0) {
            const RealMatrix& lo = f.level_bases[k - 1];
            const RealMatrix& hi = f.level_bases[k];
            CHECK((lo - hi * (hi.transpose() * lo)).norm() < 1e-12);
        }
        power = power * F;
    }
}

TEST_CASE("staircase matches oracle nullities of powers") {
    RealMatrix N = RealMatrix::Zero(5, 5);
    N(0, 1) = N(1, 2) = N(3, 4) = 1.0;  // Jordan type (3, 2)
    const auto st = staircase(N, tol);
    CHECK(st.dims == std::vector<Index>{2, 4, 5});
    RealMatrix P = RealMatrix::Identity(5, 5);
    for (int k = 1; k <= 3; ++k) {
        P = P * N;
        CHECK(5 - oracle::gauss_rank(P) == st.dims[k - 1]);
    }
    CHECK(staircase(N, tol, 0.0, 1).dims == std::vector<Index>{2});
}

TEST_CASE("roots_match and factor helpers") {
    CHECK(roots_match(IrreducibleFactor::real(2.0), IrreducibleFactor::real(2.0 + 1e-8), 1e-6));
    CHECK_FALSE(roots_match(IrreducibleFactor::real(2.0), IrreducibleFactor::real(2.1), 1e-6));
    CHECK_FALSE(roots_match(IrreducibleFactor::real(1.0), IrreducibleFactor::complex_pair(1.0, 1e-9), 1e-6));
    const auto q = IrreducibleFactor::complex_pair(1.0, 2.0);
    CHECK(q.degree() == 2);
    CHECK(q.modulus() == doctest::Approx(std::sqrt(5.0)));
    check_coeffs(q.poly(), {5, -2, 1});
    CHECK(std::abs(q.poly().evaluate(q.root())) < 1e-14);
}
