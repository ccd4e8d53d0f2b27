// eciv command line: load models and dags, evaluate statements, run the
// consistency and lemma suites, g-computation, and the lab searches.
//
// Exit codes: 0 holds/pass, 1 fails or counterexample found, 2 usage or
// input error, 3 vacuous or nothing found.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eciv/consistency.hpp"
#include "eciv/dag.hpp"
#include "eciv/evaluate.hpp"
#include "eciv/gcomp.hpp"
#include "eciv/io.hpp"
#include "eciv/lab.hpp"
#include "eciv/model.hpp"
#include "eciv/statement.hpp"
#include "eciv/structural.hpp"

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;
constexpr int kVacuous = 3;

struct Options {
    std::string model_path;
    std::string dag_path;
    std::string statement;
    std::string lemma;
    std::string target;
    std::string x0, x1;
    std::string search = "vi";
    std::string generator = "structural";
    std::string format = "text";
    std::vector<std::string> x, y, z;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    long trials = 200;
    long budget = 100000;
    bool restricted = false;

    bool structured() const { return format == "structured"; }
};

int verdict_exit(const eciv::Verdict& v) {
    switch (v.outcome) {
        case eciv::Outcome::Holds: return kHolds;
        case eciv::Outcome::Fails: return kFails;
        case eciv::Outcome::Vacuous: return kVacuous;
    }
    return kUsage;
}

void print_verdict_text(const eciv::MultiRegimeModel& model, const eciv::Verdict& v) {
    std::cout << eciv::outcome_label(v.outcome);
    if (!v.detail.empty()) std::cout << ": " << v.detail;
    std::cout << "\n";
    if (v.witness) {
        const auto& w = *v.witness;
        std::cout << "  witness discrepancy " << w.discrepancy << "\n";
        std::cout << "  lhs context: " << eciv::regime_label(model, w.lhs.regime);
        for (const auto& [var, value] : w.lhs.given) std::cout << ", " << var << "=" << value;
        std::cout << "\n  rhs context: " << eciv::regime_label(model, w.rhs.regime);
        for (const auto& [var, value] : w.rhs.given) std::cout << ", " << var << "=" << value;
        std::cout << "\n";
    }
    if (!v.missing_regimes.empty()) {
        std::cout << "  skipped " << v.missing_regimes.size()
                  << " absent regime(s); the model is not variation independent\n";
    }
}

int cmd_validate(const Options& opt) {
    eciv::MultiRegimeModel model = eciv::load_model(opt.model_path);
    auto diagnostics = eciv::validate_model(model);
    if (opt.structured()) {
        eciv::Json j = eciv::Json::array();
        for (const auto& d : diagnostics)
            j.push_back({{"code", d.code}, {"location", d.location}, {"message", d.message}});
        std::cout << j.dump(2) << "\n";
    } else if (diagnostics.empty()) {
        std::cout << "ok: model satisfies all invariants\n";
    } else {
        for (const auto& d : diagnostics)
            std::cout << d.code << " at " << d.location << ": " << d.message << "\n";
    }
    return diagnostics.empty() ? kHolds : kFails;
}

int cmd_eval(const Options& opt) {
    eciv::MultiRegimeModel model = eciv::load_model(opt.model_path);
    eciv::ECIStatement stmt = eciv::parse_statement(opt.statement);
    eciv::Verdict v = eciv::evaluate(model, stmt, opt.tol);
    if (opt.structured()) {
        std::cout << eciv::verdict_to_json(model, v).dump(2) << "\n";
    } else {
        print_verdict_text(model, v);
    }
    return verdict_exit(v);
}

int cmd_dc(const Options& opt) {
    eciv::MultiRegimeModel model = eciv::load_model(opt.model_path);
    if (opt.target.empty()) throw eciv::Error("dc needs --target");
    eciv::Verdict v = eciv::check_distributional_consistency(model, opt.target, opt.tol);
    v.detail = "distributional consistency of " + opt.target;
    if (opt.structured()) {
        std::cout << eciv::verdict_to_json(model, v).dump(2) << "\n";
    } else {
        print_verdict_text(model, v);
    }
    return verdict_exit(v);
}

int cmd_lemma(const Options& opt) {
    eciv::MultiRegimeModel model = eciv::load_model(opt.model_path);
    auto id = eciv::lemma_id_from_string(opt.lemma);
    if (!id) throw eciv::Error("unknown lemma id: " + opt.lemma);
    std::optional<eciv::AugmentedDAG> dag;
    if (!opt.dag_path.empty()) dag = eciv::load_dag(opt.dag_path);

    auto bindings = eciv::enumerate_bindings(model, *id, dag ? &*dag : nullptr);
    if (bindings.empty()) {
        std::cout << "no admissible bindings (dag-based lemmas need --dag)\n";
        return kVacuous;
    }
    long failures = 0, premise_holds = 0;
    eciv::Json items = eciv::Json::array();
    for (const auto& binding : bindings) {
        auto report = eciv::check_lemma(model, *id, binding, opt.tol);
        if (report.premise.holds()) ++premise_holds;
        if (!report.implication_ok) ++failures;
        if (opt.structured()) {
            items.push_back(eciv::implication_to_json(model, report));
        } else if (!report.implication_ok) {
            std::cout << "implication failure at " << eciv::binding_label(binding) << " (conclusion "
                      << report.conclusion.detail << ")\n";
        }
    }
    if (opt.structured()) {
        eciv::Json j;
        j["lemma"] = opt.lemma;
        j["bindings"] = static_cast<long>(bindings.size());
        j["premise_holds"] = premise_holds;
        j["implication_failures"] = failures;
        j["reports"] = std::move(items);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << opt.lemma << ": " << bindings.size() << " bindings, " << premise_holds
                  << " with premises holding, " << failures << " implication failures\n";
    }
    if (failures > 0) return kFails;
    return premise_holds > 0 ? kHolds : kVacuous;
}

int cmd_suite(const Options& opt) {
    eciv::GeneratorConfig config;
    config.kind = opt.generator == "random" ? eciv::GeneratorConfig::Kind::Random
                                            : eciv::GeneratorConfig::Kind::Structural;
    std::vector<eciv::LemmaId> ids;
    if (opt.lemma.empty() || opt.lemma == "all") {
        ids.assign(std::begin(eciv::kAllLemmaIds), std::end(eciv::kAllLemmaIds));
    } else {
        auto id = eciv::lemma_id_from_string(opt.lemma);
        if (!id) throw eciv::Error("unknown lemma id: " + opt.lemma);
        ids.push_back(*id);
    }
    auto report = eciv::run_suite(config, ids, static_cast<int>(opt.trials), opt.seed, opt.tol);
    if (opt.structured()) {
        std::cout << eciv::suite_report_to_json(report).dump(2) << "\n";
    } else {
        for (const auto& [id, counts] : report.lemmas) {
            std::cout << eciv::lemma_id_name(id) << ": instances=" << counts.instances
                      << " premise_holds=" << counts.premise_holds
                      << " vacuous=" << counts.premise_vacuous
                      << " failures=" << counts.implication_failures << "\n";
        }
        std::cout << "total implication failures: " << report.total_implication_failures() << "\n";
    }
    return report.total_implication_failures() == 0 ? kHolds : kFails;
}

int cmd_dsep(const Options& opt) {
    eciv::AugmentedDAG dag = eciv::load_dag(opt.dag_path);
    auto diagnostics = eciv::validate_dag(dag);
    if (!diagnostics.empty())
        throw eciv::Error("invalid dag: " + diagnostics.front().location + ": " + diagnostics.front().message);
    bool separated = eciv::d_separated(dag, opt.x, opt.y, opt.z);
    if (opt.structured()) {
        eciv::Json j;
        j["x"] = opt.x;
        j["y"] = opt.y;
        j["z"] = opt.z;
        j["d_separated"] = separated;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (separated ? "d-separated" : "d-connected") << "\n";
    }
    return separated ? kHolds : kFails;
}

int cmd_markov(const Options& opt) {
    eciv::MultiRegimeModel model = eciv::load_model(opt.model_path);
    eciv::AugmentedDAG dag = eciv::load_dag(opt.dag_path);
    auto verdicts = eciv::verify_local_markov(model, dag, opt.tol);
    long holds = 0, fails = 0;
    eciv::Json items = eciv::Json::array();
    for (const auto& v : verdicts) {
        if (v.holds()) ++holds;
        if (v.fails()) ++fails;
        if (opt.structured()) {
            items.push_back(eciv::verdict_to_json(model, v));
        } else {
            std::cout << eciv::outcome_label(v.outcome) << ": " << v.detail << "\n";
        }
    }
    if (opt.structured()) {
        eciv::Json j;
        j["statements"] = static_cast<long>(verdicts.size());
        j["holds"] = holds;
        j["fails"] = fails;
        j["verdicts"] = std::move(items);
        std::cout << j.dump(2) << "\n";
    }
    if (fails > 0) return kFails;
    return holds > 0 ? kHolds : kVacuous;
}

int cmd_gcomp(const Options& opt) {
    eciv::MultiRegimeModel model = eciv::load_model(opt.model_path);
    auto problem = eciv::sequential_problem(std::move(model), opt.x0, opt.x1);
    auto report = eciv::verify_identification(problem, opt.tol);
    auto condition = eciv::check_corrected_condition(problem, opt.tol);
    if (opt.structured()) {
        eciv::Json j = eciv::identification_to_json(report);
        j["corrected_condition"] = eciv::verdict_to_json(problem.model, condition);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "g-formula distribution over " << problem.y_var << ":";
        for (double p : report.g_dist.probs) std::cout << " " << p;
        std::cout << "\nregime marginal:";
        for (double p : report.regime_dist.probs) std::cout << " " << p;
        std::cout << "\ndistance " << report.distance << (report.pass ? " (pass)" : " (fail)") << "\n";
        std::cout << "corrected condition: " << eciv::outcome_label(condition.outcome) << "\n";
    }
    return report.pass && !condition.fails() ? kHolds : kFails;
}

int cmd_lab(const Options& opt) {
    eciv::SearchConfig config;
    config.budget = opt.budget;
    config.seed = opt.seed;
    config.tol = opt.tol;
    config.restrict_variation_independent = opt.restricted;
    if (!opt.lemma.empty()) {
        auto id = eciv::lemma_id_from_string(opt.lemma);
        if (!id) throw eciv::Error("unknown lemma id: " + opt.lemma);
        config.lemma = *id;
    }

    if (opt.search == "vi") {
        auto finding = eciv::search_vi_counterexample(config);
        if (!finding) {
            std::cout << (opt.structured() ? "{\"kind\": \"not_found\"}" : "not found within budget")
                      << "\n";
            return kVacuous;
        }
        if (opt.structured()) {
            std::cout << eciv::vi_finding_to_json(*finding).dump(2) << "\n";
        } else {
            std::cout << "counterexample found at trial " << finding->trial << " ("
                      << eciv::binding_label(finding->binding) << "), conclusion discrepancy "
                      << (finding->report.conclusion.witness ? finding->report.conclusion.witness->discrepancy
                                                             : 0.0)
                      << "\n";
        }
        return kFails;
    }
    if (opt.search == "markov-gap") {
        auto finding = eciv::search_markov_gap(config);
        if (!finding) {
            std::cout << (opt.structured() ? "{\"kind\": \"not_found\"}" : "not found within budget")
                      << "\n";
            return kVacuous;
        }
        if (opt.structured()) {
            std::cout << eciv::markov_gap_to_json(*finding).dump(2) << "\n";
        } else {
            std::cout << "counterexample found at trial " << finding->trial << ": " << finding->statement
                      << " fails while every local Markov statement holds\n";
        }
        return kFails;
    }
    if (opt.search == "fathand") {
        auto result = eciv::build_fat_hand_model();
        eciv::Verdict ignorability = eciv::evaluate(result.model, "Y _||_ F(T) | T", 1e-12);
        bool separated = eciv::d_separated(result.dag, {eciv::indicator_name("T")}, {"Y"}, {"T"});
        if (opt.structured()) {
            eciv::Json j;
            j["kind"] = "fat_hand";
            j["model"] = eciv::model_to_json(result.model);
            j["dag"] = eciv::dag_to_json(result.dag);
            j["ignorability"] = eciv::verdict_to_json(result.model, ignorability);
            j["d_separated_given_t"] = separated;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "ignorability " << eciv::outcome_label(ignorability.outcome)
                      << "; F(T) and Y d-separated given T: " << (separated ? "yes" : "no") << "\n";
        }
        return ignorability.holds() && !separated ? kHolds : kFails;
    }
    if (opt.search == "contextual") {
        auto report = eciv::contextual_demo();
        if (opt.structured()) {
            std::cout << eciv::contextual_to_json(report).dump(2) << "\n";
        } else {
            std::cout << "checked statement " << eciv::outcome_label(report.checked_verdict.outcome)
                      << ", full statement " << eciv::outcome_label(report.full_verdict.outcome) << "\n";
        }
        return report.demonstrated ? kHolds : kFails;
    }
    throw eciv::Error("unknown search: " + opt.search + " (vi, markov-gap, fathand, contextual)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification tool for multi-regime models and extended conditional independence"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", opt.tol, "numerical tolerance (default 1e-9)");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--format", opt.format, "output format: text or structured")
            ->check(CLI::IsMember({"text", "structured"}));
    };

    CLI::App* validate = app.add_subcommand("validate", "check model file invariants");
    validate->add_option("--model", opt.model_path)->required();
    add_common(validate);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a statement against a model");
    eval->add_option("--model", opt.model_path)->required();
    eval->add_option("--stmt", opt.statement, "statement, e.g. \"Y _||_ F(T) | T\"")->required();
    add_common(eval);

    CLI::App* dc = app.add_subcommand("dc", "check distributional consistency for one target");
    dc->add_option("--model", opt.model_path)->required();
    dc->add_option("--target", opt.target)->required();
    add_common(dc);

    CLI::App* lemma = app.add_subcommand("lemma", "check one lemma over all admissible bindings");
    lemma->add_option("--model", opt.model_path)->required();
    lemma->add_option("--lemma", opt.lemma, "lemma id, e.g. L3_PROMOTE")->required();
    lemma->add_option("--dag", opt.dag_path, "dag file (needed for the dag-based lemmas)");
    add_common(lemma);

    CLI::App* suite = app.add_subcommand("suite", "run the lemma suite over generated models");
    suite->add_option("--trials", opt.trials, "number of generated models");
    suite->add_option("--lemma", opt.lemma, "lemma id or 'all'");
    suite->add_option("--generator", opt.generator, "structural or random")
        ->check(CLI::IsMember({"structural", "random"}));
    add_common(suite);

    CLI::App* dsep = app.add_subcommand("dsep", "d-separation query on a dag");
    dsep->add_option("--dag", opt.dag_path)->required();
    dsep->add_option("--x", opt.x, "first node set")->required()->delimiter(',');
    dsep->add_option("--y", opt.y, "second node set")->required()->delimiter(',');
    dsep->add_option("--z", opt.z, "conditioning node set")->delimiter(',');
    add_common(dsep);

    CLI::App* markov = app.add_subcommand("markov", "verify the local Markov statements of a dag");
    markov->add_option("--model", opt.model_path)->required();
    markov->add_option("--dag", opt.dag_path)->required();
    add_common(markov);

    CLI::App* gcomp = app.add_subcommand("gcomp", "two-stage g-computation identification check");
    gcomp->add_option("--model", opt.model_path)->required();
    gcomp->add_option("--x0", opt.x0, "value for the first treatment")->required();
    gcomp->add_option("--x1", opt.x1, "value for the second treatment")->required();
    add_common(gcomp);

    CLI::App* lab = app.add_subcommand("lab", "counterexample searches and demonstrations");
    lab->add_option("--search", opt.search, "vi, markov-gap, fathand, or contextual")->required();
    lab->add_option("--trials", opt.budget, "search budget");
    lab->add_option("--lemma", opt.lemma, "targeted lemma for the vi search");
    lab->add_flag("--restricted", opt.restricted,
                  "sample only variation-independent consistent models");
    add_common(lab);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (eval->parsed()) return cmd_eval(opt);
        if (dc->parsed()) return cmd_dc(opt);
        if (lemma->parsed()) return cmd_lemma(opt);
        if (suite->parsed()) return cmd_suite(opt);
        if (dsep->parsed()) return cmd_dsep(opt);
        if (markov->parsed()) return cmd_markov(opt);
        if (gcomp->parsed()) return cmd_gcomp(opt);
        if (lab->parsed()) return cmd_lab(opt);
    } catch (const eciv::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
