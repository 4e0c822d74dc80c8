#include "idinf/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "idinf/error.hpp"

namespace idinf::io {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidInput, msg); }

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) bad(where + ": missing field \"" + key + "\"");
    return j.at(key);
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) bad(what + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(what + ": not finite");
    return v;
}

int positive_int(const json& j, const std::string& what) {
    if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 1'000'000) {
        bad(what + ": expected a positive integer");
    }
    return j.get<int>();
}

bool same_bits(const SummandInvariant& x, const SummandInvariant& y) {
    return x.factor.kind == y.factor.kind && x.n == y.n && x.factor.r == y.factor.r &&
           x.factor.e == y.factor.e && x.factor.f == y.factor.f;
}

json factor_fields(const IrreducibleFactor& p) {
    json j;
    if (p.kind == FactorKind::Real) {
        j["kind"] = "real";
        j["r"] = p.r;
    } else {
        j["kind"] = "complex";
        j["e"] = p.e;
        j["f"] = p.f;
    }
    return j;
}

IrreducibleFactor factor_from_json(const json& j, const std::string& where) {
    const json& kind = field(j, "kind", where);
    if (kind == "real") return IrreducibleFactor::real(number(field(j, "r", where), where + ".r"));
    if (kind == "complex") {
        const double f = number(field(j, "f", where), where + ".f");
        if (f == 0.0) bad(where + ": complex factor needs f != 0");
        return IrreducibleFactor::complex_pair(number(field(j, "e", where), where + ".e"), f);
    }
    bad(where + ": kind must be \"real\" or \"complex\"");
}

}  // namespace

json matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) bad(what + ": expected an array of rows");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = rows == 0 ? 0 : (j[0].is_array() ? static_cast<Index>(j[0].size()) : -1);
    if (cols < 0) bad(what + ": expected an array of rows");
    RealMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) bad(what + ": ragged rows");
        for (Index k = 0; k < cols; ++k) {
            m(i, k) = number(row[static_cast<std::size_t>(k)], what);
        }
    }
    return m;
}

json pair_to_json(const PairFile& p) {
    return json{{"dim", p.dim}, {"J1", matrix_to_json(p.J1)}, {"J2", matrix_to_json(p.J2)}};
}

PairFile pair_from_json(const json& j) {
    PairFile p;
    const json& dim = field(j, "dim", "pair");
    if (!dim.is_number_integer() || dim.get<long long>() < 0) bad("pair.dim: expected a count");
    p.dim = dim.get<Index>();
    p.J1 = matrix_from_json(field(j, "J1", "pair"), "J1");
    p.J2 = matrix_from_json(field(j, "J2", "pair"), "J2");
    for (const RealMatrix* m : {&p.J1, &p.J2}) {
        if (m->rows() != p.dim || m->cols() != p.dim) {
            throw Error(ErrorCode::DimensionMismatch,
                        "pair matrices must be " + std::to_string(p.dim) + "x" + std::to_string(p.dim));
        }
    }
    return p;
}

json invariant_to_json(const SummandInvariant& inv, int count) {
    json j = factor_fields(inv.factor);
    j["n"] = inv.n;
    j["count"] = count;
    return j;
}

json invariants_to_json(const std::vector<SummandInvariant>& invariants,
                        const std::vector<ReciprocalClass>& classes) {
    json out = json::array();
    for (std::size_t i = 0; i < invariants.size();) {
        std::size_t k = i + 1;
        while (k < invariants.size() && same_bits(invariants[i], invariants[k])) ++k;
        json entry = invariant_to_json(invariants[i], static_cast<int>(k - i));
        if (!classes.empty()) {
            bool self_dual = false;
            for (const auto& cls : classes) {
                if (cls.p.kind == invariants[i].factor.kind && roots_match(cls.p, invariants[i].factor, 0.0)) {
                    self_dual = cls.self_dual;
                }
            }
            entry["self_dual"] = self_dual;
        }
        out.push_back(std::move(entry));
        i = k;
    }
    return out;
}

std::vector<SummandInvariant> invariants_from_json(const json& j) {
    if (!j.is_array()) bad("invariants: expected an array");
    std::vector<SummandInvariant> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "invariants[" + std::to_string(i) + "]";
        SummandInvariant inv;
        inv.factor = factor_from_json(j[i], where);
        inv.n = j[i].contains("n") ? positive_int(j[i]["n"], where + ".n") : 1;
        const int count = j[i].contains("count") ? positive_int(j[i]["count"], where + ".count") : 1;
        out.insert(out.end(), static_cast<std::size_t>(count), inv);
    }
    return out;
}

json class_to_json(const ReciprocalClass& cls) {
    json j = factor_fields(cls.p);
    j["self_dual"] = cls.self_dual;
    j["multiplicity"] = cls.total_multiplicity;
    return j;
}

ReciprocalClass class_from_json(const json& j) {
    ReciprocalClass cls;
    cls.p = factor_from_json(j, "class");
    const json& sd = field(j, "self_dual", "class");
    if (!sd.is_boolean()) bad("class.self_dual: expected a boolean");
    cls.self_dual = sd.get<bool>();
    cls.total_multiplicity = positive_int(field(j, "multiplicity", "class"), "class.multiplicity");
    if (!cls.self_dual && cls.total_multiplicity % 2 != 0) bad("class.multiplicity: odd for a reciprocal pair");
    cls.p.multiplicity = cls.self_dual ? cls.total_multiplicity : cls.total_multiplicity / 2;
    cls.p_tilde = cls.self_dual ? cls.p : reciprocal_partner(cls.p);
    return cls;
}

json report_to_json(const DecompositionReport& report) {
    json classes = json::array();
    for (const auto& cls : report.classes) classes.push_back(class_to_json(cls));
    const auto& r = report.residuals;
    return json{
        {"tool_version", kToolVersion},
        {"dim", report.S.rows()},
        {"invariants", invariants_to_json(report.invariants, report.classes)},
        {"classes", classes},
        {"S", matrix_to_json(report.S)},
        {"canonical_a", matrix_to_json(report.canonical_a)},
        {"canonical_b", matrix_to_json(report.canonical_b)},
        {"residuals",
         {{"relation", r.relation},
          {"relation_b2", r.relation_b2},
          {"conjugation_a", r.conjugation_a},
          {"conjugation_b", r.conjugation_b},
          {"cond_S", r.cond_S}}},
        {"warnings", report.warnings},
    };
}

DecompositionReport report_from_json(const json& j) {
    DecompositionReport report;
    report.invariants = invariants_from_json(field(j, "invariants", "report"));
    const json& classes = field(j, "classes", "report");
    if (!classes.is_array()) bad("report.classes: expected an array");
    for (const auto& c : classes) report.classes.push_back(class_from_json(c));
    report.S = matrix_from_json(field(j, "S", "report"), "S");
    report.canonical_a = matrix_from_json(field(j, "canonical_a", "report"), "canonical_a");
    report.canonical_b = matrix_from_json(field(j, "canonical_b", "report"), "canonical_b");
    const json& res = field(j, "residuals", "report");
    report.residuals.relation = number(field(res, "relation", "residuals"), "residuals.relation");
    report.residuals.conjugation_a = number(field(res, "conjugation_a", "residuals"), "residuals.conjugation_a");
    report.residuals.conjugation_b = number(field(res, "conjugation_b", "residuals"), "residuals.conjugation_b");
    report.residuals.cond_S = number(field(res, "cond_S", "residuals"), "residuals.cond_S");
    if (res.contains("relation_b2")) report.residuals.relation_b2 = number(res["relation_b2"], "residuals.relation_b2");
    if (j.contains("warnings")) {
        if (!j["warnings"].is_array()) bad("report.warnings: expected an array");
        for (const auto& w : j["warnings"]) {
            if (!w.is_string()) bad("report.warnings: expected strings");
            report.warnings.push_back(w.get<std::string>());
        }
    }

    const Index dim = report.S.rows();
    if (report.S.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "report.S is not square");
    Index col = 0;
    for (const auto& inv : report.invariants) {
        if (col + inv.dimension() > dim) {
            throw Error(ErrorCode::DimensionMismatch, "report invariants exceed the dimension of S");
        }
        Summand s;
        s.invariant = inv;
        s.basis = report.S.middleCols(col, inv.dimension());
        s.generator_w = s.basis.col(inv.dimension() / 2 - inv.factor.degree());
        report.summands.push_back(std::move(s));
        col += inv.dimension();
    }
    return report;
}

GenerationSpec spec_from_json(const json& j) {
    GenerationSpec spec;
    try {
        spec.invariants = invariants_from_json(field(j, "invariants", "spec"));
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidSpec, e.what());
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
            throw Error(ErrorCode::InvalidSpec, "spec.seed: expected a non-negative integer");
        }
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("cond_bound")) {
        if (!j["cond_bound"].is_number()) throw Error(ErrorCode::InvalidSpec, "spec.cond_bound: expected a number");
        spec.cond_bound = j["cond_bound"].get<double>();
    }
    if (j.contains("max_draws")) {
        if (!j["max_draws"].is_number_integer() || j["max_draws"].get<long long>() < 1) {
            throw Error(ErrorCode::InvalidSpec, "spec.max_draws: expected a positive integer");
        }
        spec.max_draws = j["max_draws"].get<int>();
    }
    return spec;
}

json truth_to_json(const json& spec, const GeneratedPair& generated) {
    return json{
        {"tool_version", kToolVersion},
        {"spec", spec},
        {"seed", spec.value("seed", std::uint64_t{0})},
        {"invariants", invariants_to_json(generated.invariants)},
        {"pair", pair_to_json({generated.pair.dim, generated.pair.J1, generated.pair.J2})},
        {"S", matrix_to_json(generated.S)},
        {"cond_S", generated.cond_S},
        {"draws", generated.draws},
    };
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad("cannot write " + path);
    out << text;
    if (!out) bad("write failed for " + path);
}

}  // namespace idinf::io
