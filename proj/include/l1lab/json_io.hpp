#pragma once

// JSON forms of every report and input type, and the flat CSV layouts.
// Non-finite reals are written as the strings "inf" / "-inf".

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "l1lab/gf2_designs.hpp"
#include "l1lab/hypercube.hpp"
#include "l1lab/lambda_analysis.hpp"
#include "l1lab/lemma_lab.hpp"
#include "l1lab/operators_l1.hpp"
#include "l1lab/separation_lab.hpp"

namespace l1lab {

inline constexpr const char* kSchemaVersion = "l1lab-report/1";

using json = nlohmann::ordered_json;

void to_json(json& j, const Provenance& v);
void from_json(const json& j, Provenance& v);
void to_json(json& j, const CharacterFamily& v);
void from_json(const json& j, CharacterFamily& v);
void to_json(json& j, const IndependenceResult& v);
void from_json(const json& j, IndependenceResult& v);
void to_json(json& j, const HypercubeFunction& v);
void from_json(const json& j, HypercubeFunction& v);
void to_json(json& j, const LambdaReport& v);
void from_json(const json& j, LambdaReport& v);
void to_json(json& j, const SignSearchResult& v);
void from_json(const json& j, SignSearchResult& v);
void to_json(json& j, const LemmaCertificate& v);
void from_json(const json& j, LemmaCertificate& v);
void to_json(json& j, const OptimalityReport& v);
void from_json(const json& j, OptimalityReport& v);
void to_json(json& j, const SurvivorAnalysis& v);
void from_json(const json& j, SurvivorAnalysis& v);
void to_json(json& j, const CoverageStrategy& v);
void from_json(const json& j, CoverageStrategy& v);
void to_json(json& j, const CoverageInstance& v);
void from_json(const json& j, CoverageInstance& v);
void to_json(json& j, const ExponentFit& v);
void from_json(const json& j, ExponentFit& v);
void to_json(json& j, const SeparationReport& v);
void from_json(const json& j, SeparationReport& v);

json measure_to_json(const AtomicMeasureSpace& space);
AtomicMeasureSpace measure_from_json(const json& j);
/// {"source": measure, "target": measure, "matrix": [[row], ...]}; with only
/// "matrix", both spaces are uniform hypercubes sized by the matrix.
json operator_to_json(const L1Operator& op);
L1Operator operator_from_json(const json& j);

/// {"schema": ..., "command": command, "report": payload}.
json envelope(const std::string& command, json payload);
/// Checks the schema string and returns the payload.
const json& open_envelope(const json& j);

/// CSV with a `schema` comment line and the column order of schema/report_schema.md.
void write_csv(std::ostream& out, const CharacterFamily& v);
void write_csv(std::ostream& out, const LambdaReport& v);
void write_csv(std::ostream& out, const LemmaCertificate& v);
void write_csv(std::ostream& out, const OptimalityReport& v);
void write_csv(std::ostream& out, const SeparationReport& v);

}  // namespace l1lab
