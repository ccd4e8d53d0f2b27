// JSON serialization: model and dag files, verdicts, implication and suite
// reports, lab findings.
//
// Model file:
//   { "variables": [{"name": .., "domain": [..]}, ..],
//     "targets":   [..],
//     "regimes":   [{"assignment": {target: value-or-null, ..},
//                    "probs": [row-major joint]}, ..] }
// null encodes the idle state; row-major order follows the declared
// variable and domain order exactly.
//
// Dag file:
//   { "nodes": [..], "targets": [..], "edges": [[from, to], ..],
//     "order": [topological node order] }
#pragma once

#include <string>

#include "json.hpp"

#include "eciv/consistency.hpp"
#include "eciv/dag.hpp"
#include "eciv/gcomp.hpp"
#include "eciv/lab.hpp"
#include "eciv/model.hpp"

namespace eciv {

using Json = nlohmann::ordered_json;

Json model_to_json(const MultiRegimeModel& model);
MultiRegimeModel model_from_json(const Json& j);  // throws Error on malformed input

Json dag_to_json(const AugmentedDAG& dag);
AugmentedDAG dag_from_json(const Json& j);

Json table_to_json(const DistributionTable& table);
Json regime_to_json(const MultiRegimeModel& model, const RegimeAssignment& r);
Json verdict_to_json(const MultiRegimeModel& model, const Verdict& verdict);
Json implication_to_json(const MultiRegimeModel& model, const ImplicationReport& report);
Json suite_report_to_json(const SuiteReport& report);
Json identification_to_json(const IdentificationReport& report);
Json vi_finding_to_json(const ViFinding& finding);
Json markov_gap_to_json(const MarkovGapFinding& finding);
Json contextual_to_json(const ContextualDemoReport& report);

MultiRegimeModel load_model(const std::string& path);  // throws Error
AugmentedDAG load_dag(const std::string& path);
void save_json(const std::string& path, const Json& j);

}  // namespace eciv
