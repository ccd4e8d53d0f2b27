// Two-stage sequential g-computation: assemble the interventional response
// distribution from idle-regime conditionals and verify it against the
// model's own interventional regime, together with the decision-theoretic
// identification condition it rests on.
#pragma once

#include <optional>
#include <string>

#include "eciv/model.hpp"

namespace eciv {

// Four variables in declaration order (X0, Z, X1, Y); the model's targets
// are exactly {X0, X1}. Query values are domain labels of X0 and X1.
struct SequentialProblem {
    MultiRegimeModel model;
    std::string x0_var, z_var, x1_var, y_var;
    std::string x0_value, x1_value;
};

// Builds a problem from a conforming model; throws Error when the model
// does not have the (X0, Z, X1, Y) shape or the values are out of domain.
SequentialProblem sequential_problem(MultiRegimeModel model, const std::string& x0_value,
                                     const std::string& x1_value);

struct GFormulaResult {
    std::optional<DistributionTable> dist;  // over Y; set iff ok
    std::string undefined_context;          // the null conditioning event otherwise

    bool ok() const { return dist.has_value(); }
};

// sum_z P(z | x0, idle) * P(y | x0, z, x1, idle). Pure idle-regime
// computation; an undefined conditional is reported, not thrown.
GFormulaResult g_formula(const SequentialProblem& problem);

// Under the regime (F(X0)=x0, F(X1)=x1), the conditional of Y given X0 must
// not depend on X0's value. Undefined contexts are skipped; all-null gives
// Vacuous.
Verdict check_corrected_condition(const SequentialProblem& problem, double tol = 1e-9);

struct IdentificationReport {
    DistributionTable g_dist;       // g-formula output
    DistributionTable regime_dist;  // marginal of Y under the interventional regime
    double distance = 0.0;          // total variation
    bool pass = false;
};

// Total-variation distance between the g-formula output and the true
// interventional margin. Throws Error when the regime is absent or the
// g-formula is undefined.
IdentificationReport verify_identification(const SequentialProblem& problem, double tol = 1e-9);

}  // namespace eciv
