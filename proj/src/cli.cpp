#include "idinf/cli.hpp"

#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "idinf/canonical.hpp"
#include "idinf/decompose.hpp"
#include "idinf/error.hpp"
#include "idinf/io.hpp"
#include "idinf/pairalg.hpp"
#include "idinf/verify.hpp"

namespace idinf {

namespace {

using io::json;

struct Options {
    TolerancePolicy tol;
    std::string pair_path;
    std::string other_path;
    std::string report_path;
    std::string spec_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    double cond_bound = DecomposeOptions{}.cond_bound;
};

void add_tolerance_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--rank-rel", o.tol.rank_rel, "relative threshold for numerical rank decisions");
    cmd->add_option("--root-rel", o.tol.root_rel, "relative tolerance for matching roots");
    cmd->add_option("--residual-rel", o.tol.residual_rel, "relative bound for residual checks");
}

void emit(std::ostream& out, const json& j, const std::string& path = {}) {
    if (path.empty() || path == "-") {
        out << io::dump(j);
    } else {
        io::write_file(path, io::dump(j));
    }
}

json read_input(const std::string& path) {
    if (path == "-") {
        try {
            return json::parse(std::cin);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::InvalidInput, std::string("stdin: ") + e.what());
        }
    }
    return io::read_file(path);
}

ComplexStructurePair load_pair(const std::string& path, const TolerancePolicy& tol) {
    const auto file = io::pair_from_json(read_input(path));
    return validate_pair(file.J1, file.J2, tol);
}

DecompositionReport decompose_pair(const ComplexStructurePair& pair, const Options& o) {
    return decompose(generators(pair, o.tol), o.tol, DecomposeOptions{o.cond_bound});
}

int cmd_decompose(const Options& o, std::ostream& out) {
    const auto report = decompose_pair(load_pair(o.pair_path, o.tol), o);
    emit(out, io::report_to_json(report), o.out_path);
    return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
    json spec_json = read_input(o.spec_path);
    if (o.seed) spec_json["seed"] = *o.seed;
    const auto spec = io::spec_from_json(spec_json);
    const auto generated = generate(spec);
    const json pair = io::pair_to_json({generated.pair.dim, generated.pair.J1, generated.pair.J2});
    emit(out, pair, o.out_path);
    if (!o.out_path.empty() && o.out_path != "-") {
        io::write_file(o.out_path + ".truth.json", io::dump(io::truth_to_json(spec_json, generated)));
    }
    return kExitOk;
}

int cmd_isotest(const Options& o, std::ostream& out) {
    const auto ra = decompose_pair(load_pair(o.pair_path, o.tol), o);
    const auto rb = decompose_pair(load_pair(o.other_path, o.tol), o);
    out << io::dump(json{{"isomorphic", is_isomorphic(ra, rb, o.tol)},
                         {"invariantsA", io::invariants_to_json(ra.invariants, ra.classes)},
                         {"invariantsB", io::invariants_to_json(rb.invariants, rb.classes)}});
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const auto pair = load_pair(o.pair_path, o.tol);
    const auto report = io::report_from_json(read_input(o.report_path));
    const auto s = verify_report(pair, report, o.tol);
    out << io::dump(json{{"verdict", s.pass ? "PASS" : "FAIL"},
                         {"cond_S", s.cond_S},
                         {"bound", s.bound},
                         {"conjugation_a", s.conjugation_a},
                         {"conjugation_b", s.conjugation_b},
                         {"invariance", s.invariance},
                         {"canonical_mismatch", s.canonical_mismatch},
                         {"relation", s.relation},
                         {"relation_b2", s.relation_b2},
                         {"failures", s.failures}});
    return s.pass ? kExitOk : kExitVerifyFail;
}

int cmd_canonical(const Options& o, std::ostream& out) {
    const json in = read_input(o.spec_path);
    std::vector<SummandInvariant> invariants;
    try {
        invariants = io::invariants_from_json(in.is_array() ? in : in.at("invariants"));
    } catch (const json::out_of_range&) {
        throw Error(ErrorCode::InvalidInput, "expected an invariant list or an object with \"invariants\"");
    }
    if (invariants.empty()) throw Error(ErrorCode::InvalidInput, "empty invariant list");
    for (auto& inv : invariants) inv = normalize_invariant(inv.factor, inv.n, o.tol);

    const auto sum = canonical_sum(invariants);
    json blocks = json::array();
    for (const auto& inv : invariants) {
        const auto m = canonical_model(inv);
        blocks.push_back(json{{"invariant", io::invariant_to_json(inv)},
                              {"A", io::matrix_to_json(m.A)},
                              {"A_inv", io::matrix_to_json(m.A_inv)}});
    }
    emit(out,
         json{{"dim", sum.a.rows()},
              {"J1", io::matrix_to_json(sum.J1)},
              {"J2", io::matrix_to_json(sum.J2)},
              {"a", io::matrix_to_json(sum.a)},
              {"b", io::matrix_to_json(sum.b)},
              {"invariants", io::invariants_to_json(invariants)},
              {"blocks", blocks}},
         o.out_path);
    return kExitOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::CondBoundUnreachable: return kExitGeneration;
        case ErrorCode::NumericalFailure: return kExitInternal;
        default: return kExitInput;
    }
}

void report_error(std::ostream& out, const std::string& name, const std::string& message) {
    out << io::dump(json{{"error", name}, {"message", message}});
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decompose pairs of real complex structures into indecomposable summands", "idinf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", io::kToolVersion);
    Options o;

    auto* dec = app.add_subcommand("decompose", "decompose a pair file and print the report");
    dec->add_option("pair", o.pair_path, "pair file (- for stdin)")->required();
    dec->add_option("-o,--output", o.out_path, "write the report here instead of stdout");
    dec->add_option("--cond-bound", o.cond_bound, "warn when cond(S) exceeds this");
    add_tolerance_flags(dec, o);

    auto* gen = app.add_subcommand("generate", "generate a random pair with prescribed invariants");
    gen->add_option("spec", o.spec_path, "spec file {invariants, seed, cond_bound}")->required();
    gen->add_option("-o,--output", o.out_path, "pair file; a ground-truth sidecar <out>.truth.json is written next to it");
    gen->add_option("--seed", o.seed, "override the spec seed");

    auto* iso = app.add_subcommand("isotest", "test two pair files for isomorphism");
    iso->add_option("first", o.pair_path)->required();
    iso->add_option("second", o.other_path)->required();
    add_tolerance_flags(iso, o);

    auto* ver = app.add_subcommand("verify", "recheck a report against its pair file");
    ver->add_option("pair", o.pair_path)->required();
    ver->add_option("report", o.report_path)->required();
    add_tolerance_flags(ver, o);

    auto* can = app.add_subcommand("canonical", "emit canonical matrices for an invariant list");
    can->add_option("invariants", o.spec_path, "invariant list or spec file")->required();
    can->add_option("-o,--output", o.out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << io::kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitInput;
    }

    try {
        o.tol.validate();
        if (dec->parsed()) return cmd_decompose(o, out);
        if (gen->parsed()) return cmd_generate(o, out);
        if (iso->parsed()) return cmd_isotest(o, out);
        if (ver->parsed()) return cmd_verify(o, out);
        return cmd_canonical(o, out);
    } catch (const Error& e) {
        report_error(out, error_name(e.code()), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        report_error(out, "InternalError", e.what());
        return kExitInternal;
    }
}

}  // namespace idinf
