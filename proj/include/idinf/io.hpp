#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "idinf/canonical.hpp"
#include "idinf/decompose.hpp"
#include "idinf/matlin.hpp"

namespace idinf::io {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Row-major nested array.
json matrix_to_json(const RealMatrix& m);
/// Rejects ragged, non-numeric or non-finite input with InvalidInput; `what` names the field.
RealMatrix matrix_from_json(const json& j, const std::string& what);

struct PairFile {
    Index dim = 0;
    RealMatrix J1;
    RealMatrix J2;
};

json pair_to_json(const PairFile& p);
/// Shape checks only; complex-structure validation is left to validate_pair.
PairFile pair_from_json(const json& j);

json invariant_to_json(const SummandInvariant& inv, int count = 1);
/// Groups runs of bitwise-identical consecutive invariants into one entry with a count.
json invariants_to_json(const std::vector<SummandInvariant>& invariants,
                        const std::vector<ReciprocalClass>& classes = {});
/// Accepts {"kind":"real","r",n,count} and {"kind":"complex","e","f",n,count};
/// n and count default to 1. Entries are expanded, not normalized.
std::vector<SummandInvariant> invariants_from_json(const json& j);

json class_to_json(const ReciprocalClass& cls);
ReciprocalClass class_from_json(const json& j);

json report_to_json(const DecompositionReport& report);
/// Inverse of report_to_json. Summand bases are re-sliced from the columns of S.
DecompositionReport report_from_json(const json& j);

GenerationSpec spec_from_json(const json& j);

/// Ground-truth record written next to a generated pair file.
json truth_to_json(const json& spec, const GeneratedPair& generated);

json read_file(const std::string& path);
/// Pretty-printed with a trailing newline; doubles use the shortest exact representation.
std::string dump(const json& j);
void write_file(const std::string& path, const std::string& text);

}  // namespace idinf::io
