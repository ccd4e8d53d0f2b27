#include "eciv/io.hpp"

#include <algorithm>
#include <fstream>

namespace eciv {

namespace {

const Json& field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(std::string("missing field: ") + key);
    return *it;
}

}  // namespace

Json model_to_json(const MultiRegimeModel& model) {
    Json j;
    j["variables"] = Json::array();
    for (const auto& v : model.variables) j["variables"].push_back({{"name", v.name}, {"domain", v.domain}});
    j["targets"] = model.targets;
    j["regimes"] = Json::array();
    for (const auto& [key, table] : model.regimes) {
        Json entry;
        entry["assignment"] = regime_to_json(model, key);
        entry["probs"] = table.probs;
        j["regimes"].push_back(std::move(entry));
    }
    return j;
}

MultiRegimeModel model_from_json(const Json& j) {
    MultiRegimeModel model;
    if (!j.is_object()) throw Error("model file must hold a JSON object");
    for (const auto& v : field(j, "variables")) {
        VariableDecl decl;
        decl.name = field(v, "name").get<std::string>();
        for (const auto& d : field(v, "domain")) decl.domain.push_back(d.get<std::string>());
        model.variables.push_back(std::move(decl));
    }
    for (const auto& t : field(j, "targets")) model.targets.push_back(t.get<std::string>());

    for (const auto& entry : field(j, "regimes")) {
        const Json& assignment = field(entry, "assignment");
        RegimeAssignment key(model.targets.size(), kIdle);
        for (std::size_t t = 0; t < model.targets.size(); ++t) {
            auto it = assignment.find(model.targets[t]);
            if (it == assignment.end())
                throw Error("regime assignment misses target " + model.targets[t]);
            if (it->is_null()) continue;
            const auto& decl = model.target_decl(static_cast<int>(t));
            std::string value = it->get<std::string>();
            auto pos = std::find(decl.domain.begin(), decl.domain.end(), value);
            if (pos == decl.domain.end())
                throw Error("regime value '" + value + "' not in domain of " + model.targets[t]);
            key[t] = static_cast<int>(pos - decl.domain.begin());
        }
        DistributionTable table;
        table.vars = model.variables;
        for (const auto& p : field(entry, "probs")) table.probs.push_back(p.get<double>());
        if (!model.regimes.emplace(std::move(key), std::move(table)).second)
            throw Error("duplicate regime assignment in model file");
    }
    return model;
}

Json dag_to_json(const AugmentedDAG& dag) {
    Json j;
    j["nodes"] = dag.nodes;
    j["targets"] = dag.targets;
    j["edges"] = Json::array();
    for (const auto& [from, to] : dag.edges) j["edges"].push_back(Json::array({from, to}));
    j["order"] = dag.nodes;
    return j;
}

AugmentedDAG dag_from_json(const Json& j) {
    AugmentedDAG dag;
    if (!j.is_object()) throw Error("dag file must hold a JSON object");
    std::vector<std::string> nodes;
    for (const auto& n : field(j, "nodes")) nodes.push_back(n.get<std::string>());
    if (j.contains("order")) {
        for (const auto& n : j["order"]) dag.nodes.push_back(n.get<std::string>());
        auto sorted_a = nodes, sorted_b = dag.nodes;
        std::sort(sorted_a.begin(), sorted_a.end());
        std::sort(sorted_b.begin(), sorted_b.end());
        if (sorted_a != sorted_b) throw Error("dag order must be a permutation of the nodes");
    } else {
        dag.nodes = nodes;
    }
    for (const auto& t : field(j, "targets")) dag.targets.push_back(t.get<std::string>());
    for (const auto& e : field(j, "edges")) {
        if (!e.is_array() || e.size() != 2) throw Error("each edge must be a [from, to] pair");
        dag.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return dag;
}

Json table_to_json(const DistributionTable& table) {
    Json j;
    j["vars"] = Json::array();
    for (const auto& v : table.vars) j["vars"].push_back(v.name);
    j["probs"] = table.probs;
    return j;
}

Json regime_to_json(const MultiRegimeModel& model, const RegimeAssignment& r) {
    Json j = Json::object();
    for (std::size_t t = 0; t < model.targets.size() && t < r.size(); ++t) {
        if (r[t] == kIdle) {
            j[model.targets[t]] = nullptr;
        } else {
            j[model.targets[t]] = model.target_decl(static_cast<int>(t)).domain[static_cast<std::size_t>(r[t])];
        }
    }
    return j;
}

namespace {

Json context_to_json(const MultiRegimeModel& model, const ContextRef& ctx) {
    Json j;
    j["regime"] = regime_to_json(model, ctx.regime);
    Json given = Json::object();
    for (const auto& [var, value] : ctx.given) given[var] = value;
    j["given"] = std::move(given);
    return j;
}

}  // namespace

Json verdict_to_json(const MultiRegimeModel& model, const Verdict& verdict) {
    Json j;
    j["outcome"] = outcome_label(verdict.outcome);
    j["statement"] = verdict.detail;
    j["contexts"] = verdict.contexts;
    j["comparisons"] = verdict.comparisons;
    j["max_discrepancy"] = verdict.max_discrepancy;
    if (verdict.witness) {
        const Witness& w = *verdict.witness;
        Json wj;
        wj["lhs"] = context_to_json(model, w.lhs);
        wj["rhs"] = context_to_json(model, w.rhs);
        wj["lhs_table"] = table_to_json(w.lhs_table);
        wj["rhs_table"] = table_to_json(w.rhs_table);
        wj["discrepancy"] = w.discrepancy;
        wj["detail"] = w.detail;
        j["witness"] = std::move(wj);
    }
    if (!verdict.missing_regimes.empty()) {
        Json missing = Json::array();
        for (const auto& r : verdict.missing_regimes) missing.push_back(regime_to_json(model, r));
        j["missing_regimes"] = std::move(missing);
    }
    return j;
}

Json implication_to_json(const MultiRegimeModel& model, const ImplicationReport& report) {
    Json j;
    j["lemma"] = lemma_id_name(report.id);
    j["binding"] = binding_label(report.binding);
    j["premise"] = verdict_to_json(model, report.premise);
    j["conclusion"] = verdict_to_json(model, report.conclusion);
    j["premise_statements"] = report.premise_statements;
    j["conclusion_statements"] = report.conclusion_statements;
    j["implication_ok"] = report.implication_ok;
    j["variation_independent"] = report.variation_independent;
    if (report.induction_agrees) j["induction_agrees"] = *report.induction_agrees;
    return j;
}

Json suite_report_to_json(const SuiteReport& report) {
    Json j;
    j["generator"] = report.config.kind == GeneratorConfig::Kind::Structural ? "structural" : "random";
    j["shape"] = {{"num_vars", report.config.shape.num_vars},
                  {"num_targets", report.config.shape.num_targets},
                  {"max_domain", report.config.shape.max_domain},
                  {"edge_prob", report.config.shape.edge_prob}};
    j["seed"] = report.seed;
    j["trials"] = report.trials;
    j["tol"] = report.tol;
    Json lemmas = Json::object();
    for (const auto& [id, counts] : report.lemmas) {
        lemmas[lemma_id_name(id)] = {{"instances", counts.instances},
                                     {"premise_holds", counts.premise_holds},
                                     {"premise_vacuous", counts.premise_vacuous},
                                     {"premise_fails", counts.premise_fails},
                                     {"conclusion_holds", counts.conclusion_holds},
                                     {"implication_failures", counts.implication_failures}};
    }
    j["lemmas"] = std::move(lemmas);
    Json failures = Json::array();
    for (const auto& f : report.failures) {
        failures.push_back({{"trial", f.trial},
                            {"trial_seed", f.trial_seed},
                            {"lemma", lemma_id_name(f.id)},
                            {"binding", f.binding},
                            {"premise", f.premise_detail},
                            {"conclusion", f.conclusion_detail},
                            {"discrepancy", f.discrepancy},
                            {"variation_independent", f.variation_independent}});
    }
    j["failures"] = std::move(failures);
    return j;
}

Json identification_to_json(const IdentificationReport& report) {
    Json j;
    j["g_formula"] = table_to_json(report.g_dist);
    j["regime_marginal"] = table_to_json(report.regime_dist);
    j["distance"] = report.distance;
    j["pass"] = report.pass;
    return j;
}

Json vi_finding_to_json(const ViFinding& finding) {
    Json j;
    j["kind"] = "variation_independence_counterexample";
    j["model"] = model_to_json(finding.model);
    j["certificate"] = {{"lemma", lemma_id_name(finding.report.id)},
                        {"binding", binding_label(finding.binding)},
                        {"trial", finding.trial},
                        {"trial_seed", finding.trial_seed},
                        {"variation_independent", finding.report.variation_independent},
                        {"premise", verdict_to_json(finding.model, finding.report.premise)},
                        {"conclusion", verdict_to_json(finding.model, finding.report.conclusion)}};
    return j;
}

Json markov_gap_to_json(const MarkovGapFinding& finding) {
    Json j;
    j["kind"] = "markov_gap_counterexample";
    j["model"] = model_to_json(finding.model);
    j["dag"] = dag_to_json(finding.dag);
    Json markov = Json::array();
    for (const auto& v : finding.markov_verdicts) markov.push_back(verdict_to_json(finding.model, v));
    j["certificate"] = {{"node", finding.node},
                        {"statement", finding.statement},
                        {"trial", finding.trial},
                        {"trial_seed", finding.trial_seed},
                        {"statement_verdict", verdict_to_json(finding.model, finding.statement_verdict)},
                        {"local_markov", std::move(markov)}};
    return j;
}

Json contextual_to_json(const ContextualDemoReport& report) {
    Json j;
    j["kind"] = "contextual_independence_demo";
    j["model"] = model_to_json(report.flag_model);
    j["checked"] = verdict_to_json(report.flag_model, report.checked_verdict);
    j["full"] = verdict_to_json(report.flag_model, report.full_verdict);
    j["tracking_checked_given_t"] = outcome_label(report.tracking_checked_given_t.outcome);
    j["detached_checked"] = outcome_label(report.detached_checked.outcome);
    j["constant_checked"] = outcome_label(report.constant_checked.outcome);
    j["constant_full"] = outcome_label(report.constant_full.outcome);
    j["demonstrated"] = report.demonstrated;
    return j;
}

MultiRegimeModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read model file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("model file " + path + ": " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const std::exception& e) {
        throw Error("model file " + path + ": " + e.what());
    }
}

AugmentedDAG load_dag(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read dag file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("dag file " + path + ": " + e.what());
    }
    try {
        return dag_from_json(j);
    } catch (const std::exception& e) {
        throw Error("dag file " + path + ": " + e.what());
    }
}

void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace eciv
