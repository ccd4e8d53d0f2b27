// Numerical semantics of ECI statements over a multi-regime model.
#pragma once

#include "eciv/model.hpp"
#include "eciv/statement.hpp"

namespace eciv {

// Holds iff for every conditioning context (stochastic values with positive
// probability; fixed indicator terms pinned; quantified conditioning
// indicators ranging over their mode's values) the conditional distribution
// of the left set is identical, within tol in total variation, across all
// assignments of the indicator group. Vacuous when no context has positive
// probability. A Fails verdict carries the two differing contexts and
// tables.
//
// Null conditioning events are skipped silently. Quantified contexts whose
// regime the model does not carry are skipped and reported through
// Verdict::missing_regimes; pinning a regime the model lacks therefore
// yields a Vacuous verdict with the reference recorded, not a crash.
// Name-resolution problems throw Error.
Verdict evaluate(const MultiRegimeModel& model, const ECIStatement& stmt, double tol = 1e-9);

// Convenience: parse then evaluate.
Verdict evaluate(const MultiRegimeModel& model, const std::string& stmt_text, double tol = 1e-9);

}  // namespace eciv
