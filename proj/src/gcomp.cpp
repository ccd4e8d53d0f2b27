#include "eciv/gcomp.hpp"

#include <algorithm>

namespace eciv {

namespace {

RegimeAssignment query_regime(const SequentialProblem& problem) {
    const auto& model = problem.model;
    RegimeAssignment r(model.targets.size(), kIdle);
    auto set_value = [&](const std::string& var, const std::string& value) {
        int slot = model.target_index(var);
        int vpos = model.var_index(var);
        const auto& domain = model.variables[static_cast<std::size_t>(vpos)].domain;
        auto it = std::find(domain.begin(), domain.end(), value);
        if (it == domain.end()) throw Error("value '" + value + "' not in domain of " + var);
        r[static_cast<std::size_t>(slot)] = static_cast<int>(it - domain.begin());
    };
    set_value(problem.x0_var, problem.x0_value);
    set_value(problem.x1_var, problem.x1_value);
    return r;
}

std::string context_label(const Assignment& given) {
    std::string s;
    for (std::size_t i = 0; i < given.size(); ++i) {
        if (i) s += ", ";
        s += given[i].first + "=" + given[i].second;
    }
    return s;
}

}  // namespace

SequentialProblem sequential_problem(MultiRegimeModel model, const std::string& x0_value,
                                     const std::string& x1_value) {
    if (model.variables.size() != 4)
        throw Error("sequential problem needs exactly four variables (X0, Z, X1, Y)");
    if (model.targets.size() != 2)
        throw Error("sequential problem needs exactly two targets (X0, X1)");
    SequentialProblem problem;
    problem.x0_var = model.variables[0].name;
    problem.z_var = model.variables[1].name;
    problem.x1_var = model.variables[2].name;
    problem.y_var = model.variables[3].name;
    if (model.targets[0] != problem.x0_var || model.targets[1] != problem.x1_var)
        throw Error("targets must be the first and third declared variables");
    problem.model = std::move(model);
    problem.x0_value = x0_value;
    problem.x1_value = x1_value;
    query_regime(problem);  // validates the values
    return problem;
}

GFormulaResult g_formula(const SequentialProblem& problem) {
    const auto& model = problem.model;
    RegimeAssignment idle = model.idle_regime();
    GFormulaResult result;

    Assignment x0_given{{problem.x0_var, problem.x0_value}};
    auto z_dist = conditional(model, idle, {problem.z_var}, x0_given);
    if (!z_dist) {
        result.undefined_context = context_label(x0_given) + " has probability zero in the idle regime";
        return result;
    }

    const auto& zdecl = z_dist->vars[0];
    DistributionTable out;
    out.vars = {model.variables[static_cast<std::size_t>(model.var_index(problem.y_var))]};
    out.probs.assign(out.vars[0].domain.size(), 0.0);

    for (std::size_t zi = 0; zi < zdecl.domain.size(); ++zi) {
        double pz = z_dist->probs[zi];
        if (pz <= 0.0) continue;
        Assignment given{{problem.x0_var, problem.x0_value},
                         {problem.z_var, zdecl.domain[zi]},
                         {problem.x1_var, problem.x1_value}};
        auto y_dist = conditional(model, idle, {problem.y_var}, given);
        if (!y_dist) {
            result.undefined_context = context_label(given) + " has probability zero in the idle regime";
            return result;
        }
        for (std::size_t yi = 0; yi < out.probs.size(); ++yi) out.probs[yi] += pz * y_dist->probs[yi];
    }
    double sum = 0.0;
    for (double p : out.probs) sum += p;
    if (sum > 0.0) {
        for (double& p : out.probs) p /= sum;
    }
    result.dist = std::move(out);
    return result;
}

Verdict check_corrected_condition(const SequentialProblem& problem, double tol) {
    RegimeAssignment regime = query_regime(problem);
    if (!problem.model.has_regime(regime))
        throw Error("model lacks the regime " + regime_label(problem.model, regime));
    return check_ci(problem.model, regime, {problem.y_var}, {problem.x0_var}, {}, tol);
}

IdentificationReport verify_identification(const SequentialProblem& problem, double tol) {
    RegimeAssignment regime = query_regime(problem);
    if (!problem.model.has_regime(regime))
        throw Error("model lacks the regime " + regime_label(problem.model, regime));

    GFormulaResult g = g_formula(problem);
    if (!g.ok()) throw Error("g-formula undefined: " + g.undefined_context);

    IdentificationReport report;
    report.g_dist = *g.dist;
    report.regime_dist = marginal(problem.model, regime, {problem.y_var});
    report.distance = total_variation(report.g_dist, report.regime_dist);
    report.pass = report.distance <= tol;
    return report;
}

}  // namespace eciv
