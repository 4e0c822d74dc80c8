#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "idinf/error.hpp"
#include "idinf/io.hpp"
#include "support.hpp"

using namespace idinf;
using io::json;

namespace {

const TolerancePolicy tol;

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("matrices round-trip bit-exactly through text") {
    auto rng = SplitMix64::substream(2, 0);
    RealMatrix m(3, 4);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 4; ++j) m(i, j) = rng.symmetric() * std::pow(10.0, 20 * rng.symmetric());
    m(0, 0) = -0.0;
    m(1, 1) = std::numeric_limits<double>::denorm_min();
    const RealMatrix back = io::matrix_from_json(json::parse(io::dump(io::matrix_to_json(m))), "m");
    CHECK(back == m);
    CHECK(std::signbit(back(0, 0)));
}

TEST_CASE("matrix parsing rejects malformed input") {
    CHECK(code_of([] { io::matrix_from_json(json::parse("[[1, 2], [3]]"), "m"); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { io::matrix_from_json(json::parse("[[1, \"x\"]]"), "m"); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { io::matrix_from_json(json::parse("{\"a\": 1}"), "m"); }) == ErrorCode::InvalidInput);
    CHECK(io::matrix_from_json(json::parse("[]"), "m").size() == 0);
}

TEST_CASE("pair files") {
    const auto sum = canonical_sum({{IrreducibleFactor::real(2.0), 1}});
    const io::PairFile p{2, sum.J1, sum.J2};
    const auto back = io::pair_from_json(json::parse(io::dump(io::pair_to_json(p))));
    CHECK(back.dim == 2);
    CHECK(back.J1 == p.J1);
    CHECK(back.J2 == p.J2);
    CHECK(code_of([] { io::pair_from_json(json::parse(R"({"dim": 4, "J1": [[0,-1],[1,0]], "J2": [[0,-1],[1,0]]})")); }) ==
          ErrorCode::DimensionMismatch);
    CHECK(code_of([] { io::pair_from_json(json::parse(R"({"J1": [], "J2": []})")); }) == ErrorCode::InvalidInput);
}

TEST_CASE("invariant lists group runs and expand counts") {
    const std::vector<SummandInvariant> invs{{IrreducibleFactor::real(-1.0), 2},
                                             {IrreducibleFactor::real(-1.0), 2},
                                             {IrreducibleFactor::real(-1.0), 1},
                                             {IrreducibleFactor::complex_pair(0.6, 0.8), 1}};
    const json j = io::invariants_to_json(invs);
    REQUIRE(j.size() == 3);
    CHECK(j[0]["count"] == 2);
    CHECK(j[0]["kind"] == "real");
    CHECK(j[2]["kind"] == "complex");
    const auto back = io::invariants_from_json(j);
    REQUIRE(back.size() == 4);
    CHECK(back[1].n == 2);
    CHECK(back[3].factor.f == 0.8);
    // n and count default to 1
    CHECK(io::invariants_from_json(json::parse(R"([{"kind":"real","r":2}])")).at(0).n == 1);
    CHECK(code_of([] { io::invariants_from_json(json::parse(R"([{"kind":"quux","r":2}])")); }) ==
          ErrorCode::InvalidInput);
    CHECK(code_of([] { io::invariants_from_json(json::parse(R"([{"kind":"real","r":2,"n":0}])")); }) ==
          ErrorCode::InvalidInput);
}

TEST_CASE("reports round-trip bit-exactly") {
    const auto spec = support::random_spec(21, 24);
    const auto gp = generate(spec);
    const auto report = decompose(generators(gp.pair), tol);
    const std::string text = io::dump(io::report_to_json(report));
    const auto back = io::report_from_json(json::parse(text));
    CHECK(back.S == report.S);
    CHECK(back.canonical_a == report.canonical_a);
    CHECK(back.canonical_b == report.canonical_b);
    REQUIRE(back.invariants.size() == report.invariants.size());
    for (std::size_t i = 0; i < back.invariants.size(); ++i) {
        CHECK(back.invariants[i].factor.r == report.invariants[i].factor.r);
        CHECK(back.invariants[i].factor.e == report.invariants[i].factor.e);
        CHECK(back.invariants[i].factor.f == report.invariants[i].factor.f);
        CHECK(back.invariants[i].n == report.invariants[i].n);
        CHECK(back.summands[i].basis == report.summands[i].basis);
        CHECK(back.summands[i].generator_w == report.summands[i].generator_w);
    }
    REQUIRE(back.classes.size() == report.classes.size());
    for (std::size_t i = 0; i < back.classes.size(); ++i) {
        CHECK(back.classes[i].self_dual == report.classes[i].self_dual);
        CHECK(back.classes[i].total_multiplicity == report.classes[i].total_multiplicity);
    }
    CHECK(back.residuals.cond_S == report.residuals.cond_S);
    CHECK(back.residuals.relation == report.residuals.relation);
    CHECK(io::dump(io::report_to_json(back)) == text);
}

TEST_CASE("report fields") {
    const auto report = canonical_report({{IrreducibleFactor::real(2.0), 1}}, tol);
    const json j = io::report_to_json(report);
    CHECK(j["tool_version"] == io::kToolVersion);
    CHECK(j["invariants"] == json::parse(R"([{"kind":"real","r":2.0,"n":1,"count":1,"self_dual":false}])"));
    for (const char* key : {"relation", "conjugation_a", "conjugation_b", "cond_S"}) CHECK(j["residuals"].contains(key));
}

TEST_CASE("generation specs") {
    const auto spec = io::spec_from_json(
        json::parse(R"({"invariants":[{"kind":"real","r":-1,"n":2}],"seed":11,"cond_bound":50})"));
    CHECK(spec.seed == 11);
    CHECK(spec.cond_bound == 50.0);
    CHECK(spec.invariants.at(0).n == 2);
    CHECK(code_of([] { io::spec_from_json(json::parse(R"({"seed":1})")); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { io::spec_from_json(json::parse(R"({"invariants":[{"kind":"real"}]})")); }) ==
          ErrorCode::InvalidSpec);
    CHECK(code_of([] { io::spec_from_json(json::parse(R"({"invariants":[],"seed":-3})")); }) ==
          ErrorCode::InvalidSpec);
}

TEST_CASE("missing files are input errors") {
    CHECK(code_of([] { io::read_file("/nonexistent/idinf/file.json"); }) == ErrorCode::InvalidInput);
}
