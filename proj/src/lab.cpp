#include "eciv/lab.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "eciv/evaluate.hpp"
#include "eciv/rng.hpp"
#include "eciv/structural.hpp"

namespace eciv {

namespace {

std::vector<VariableDecl> binary_vars(int targets, int extras) {
    std::vector<VariableDecl> vars;
    for (int i = 0; i < targets; ++i) vars.push_back({"T" + std::to_string(i + 1), {"0", "1"}});
    for (int i = 0; i < extras; ++i) vars.push_back({"Y" + std::to_string(i + 1), {"0", "1"}});
    return vars;
}

std::vector<double> random_joint(Rng& rng, std::size_t cells) {
    std::vector<double> probs(cells);
    double sum = 0.0;
    for (double& p : probs) {
        p = 0.05 + 0.95 * rng.uniform();
        sum += p;
    }
    for (double& p : probs) p /= sum;
    return probs;
}

// One sampled candidate: a shared base joint on a (possibly) non-product
// regime set, with one fully-set regime reshuffled on its unpinned cells.
struct Candidate {
    MultiRegimeModel model;
    bool perturbed = false;
};

std::optional<Candidate> sample_candidate(const SearchConfig& config, std::uint64_t trial_seed) {
    Rng rng(trial_seed);
    auto vars = binary_vars(config.num_targets, config.extra_vars);
    std::vector<std::string> targets;
    for (int i = 0; i < config.num_targets; ++i) targets.push_back(vars[static_cast<std::size_t>(i)].name);

    auto all_regimes = full_product_regimes(vars, targets);
    std::vector<RegimeAssignment> present = all_regimes;
    RegimeAssignment idle(targets.size(), kIdle);

    if (!config.restrict_variation_independent) {
        std::vector<RegimeAssignment> removable;
        for (const auto& r : all_regimes) {
            if (r != idle) removable.push_back(r);
        }
        int remove = 1 + rng.uniform_int(3);
        std::set<RegimeAssignment> removed;
        for (int k = 0; k < remove; ++k)
            removed.insert(removable[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(removable.size())))]);
        present.clear();
        for (const auto& r : all_regimes) {
            if (!removed.count(r)) present.push_back(r);
        }
    }

    // Perturbation site: a fully-set regime that is still present.
    std::vector<RegimeAssignment> fully_set;
    for (const auto& r : present) {
        if (std::none_of(r.begin(), r.end(), [](int v) { return v == kIdle; })) fully_set.push_back(r);
    }
    if (fully_set.empty()) return std::nullopt;
    RegimeAssignment rho = fully_set[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(fully_set.size())))];

    std::vector<double> base = random_joint(rng, table_cells(vars));

    // Cells pinned by a single-indicator consistency pair against a present
    // neighbour: the slice where that target's variable equals the set value.
    std::vector<std::pair<std::size_t, int>> pins;  // (variable position, pinned value)
    for (std::size_t t = 0; t < targets.size(); ++t) {
        RegimeAssignment neighbour = rho;
        neighbour[t] = kIdle;
        if (std::find(present.begin(), present.end(), neighbour) != present.end())
            pins.emplace_back(t, rho[t]);  // targets occupy the first variable positions
    }

    std::vector<std::size_t> free_cells;
    std::vector<int> values;
    for (std::size_t cell = 0; cell < base.size(); ++cell) {
        decode_cell(vars, cell, values);
        bool pinned = false;
        for (const auto& [vpos, val] : pins) {
            if (values[vpos] == val) {
                pinned = true;
                break;
            }
        }
        if (!pinned) free_cells.push_back(cell);
    }

    Candidate candidate;
    candidate.model.variables = vars;
    candidate.model.targets = targets;
    for (const auto& r : present) {
        DistributionTable table;
        table.vars = vars;
        table.probs = base;
        candidate.model.regimes.emplace(r, std::move(table));
    }

    if (free_cells.size() >= 2) {
        double free_mass = 0.0;
        for (std::size_t cell : free_cells) free_mass += base[cell];
        auto reshuffle = random_joint(rng, free_cells.size());
        auto& probs = candidate.model.regimes[rho].probs;
        for (std::size_t k = 0; k < free_cells.size(); ++k) probs[free_cells[k]] = free_mass * reshuffle[k];
        candidate.perturbed = true;
    }
    return candidate;
}

StructuralSpec tracking_response_spec() {
    // T a fair coin; Y follows the received value of T with response rates
    // 0.2 and 0.8.
    StructuralSpec spec;
    spec.variables = {{"T", {"0", "1"}}, {"Y", {"0", "1"}}};
    spec.targets = {"T"};
    spec.parents = {{}, {0}};
    spec.cpt = {{0.5, 0.5}, {0.8, 0.2, 0.2, 0.8}};
    return spec;
}

MultiRegimeModel flag_response_model(const std::string& t_name, const std::string& m_name,
                                     const std::string& y_name, double y_idle, double y_set) {
    MultiRegimeModel model;
    model.variables = {{t_name, {"0", "1"}}, {m_name, {"0", "1"}}, {y_name, {"0", "1"}}};
    model.targets = {t_name};

    auto table_for = [&](double y_on) {
        DistributionTable table;
        table.vars = model.variables;
        table.probs.resize(8);
        std::vector<int> values;
        for (std::size_t cell = 0; cell < 8; ++cell) {
            decode_cell(model.variables, cell, values);
            double p = 0.25;  // T and M independent fair coins
            p *= values[2] == 1 ? y_on : (1.0 - y_on);
            table.probs[cell] = p;
        }
        return table;
    };

    model.regimes.emplace(RegimeAssignment{kIdle}, table_for(y_idle));
    model.regimes.emplace(RegimeAssignment{0}, table_for(y_set));
    model.regimes.emplace(RegimeAssignment{1}, table_for(y_set));
    return model;
}

}  // namespace

std::optional<ViFinding> search_vi_counterexample(const SearchConfig& config) {
    if (config.budget < 1) throw Error("search budget must be >= 1");
    if (config.num_targets < 1) throw Error("search needs at least one target");
    Rng root(config.seed);

    for (long trial = 0; trial < config.budget; ++trial) {
        std::uint64_t trial_seed = root.fork(static_cast<std::uint64_t>(trial) + 1);
        auto candidate = sample_candidate(config, trial_seed);
        if (!candidate || !candidate->perturbed) continue;

        const MultiRegimeModel& model = candidate->model;
        for (const auto& binding : enumerate_bindings(model, config.lemma, nullptr)) {
            ImplicationReport report = check_lemma(model, config.lemma, binding, config.tol);
            if (report.implication_ok) continue;
            if (report.conclusion.witness &&
                report.conclusion.witness->discrepancy < config.min_discrepancy)
                continue;
            // Certify by replaying the full check before reporting.
            ImplicationReport replay = check_lemma(model, config.lemma, binding, config.tol);
            if (replay.implication_ok) continue;
            ViFinding finding;
            finding.model = model;
            finding.binding = binding;
            finding.report = std::move(replay);
            finding.trial = trial;
            finding.trial_seed = trial_seed;
            return finding;
        }
    }
    return std::nullopt;
}

std::optional<MarkovGapFinding> search_markov_gap(const SearchConfig& config) {
    if (config.budget < 1) throw Error("search budget must be >= 1");
    Rng root(config.seed);

    StructuralShape shape;
    shape.num_vars = config.num_vars;
    shape.num_targets = config.num_targets;
    shape.max_domain = 2;
    shape.edge_prob = config.edge_prob;

    for (long trial = 0; trial < config.budget; ++trial) {
        std::uint64_t trial_seed = root.fork(static_cast<std::uint64_t>(trial) + 1);
        StructuralSpec spec = random_structural_spec(shape, trial_seed);
        if (spec.targets.empty()) continue;
        MultiRegimeModel model = generate_structural_model(spec);
        AugmentedDAG dag = dag_of(spec);

        for (const auto& node : dag.nodes) {
            if (dag.is_target(node)) continue;
            ECIStatement stmt = unconditioned_nonparent_statement(dag, node);
            if (stmt.group.empty()) continue;
            Verdict v = evaluate(model, stmt, config.tol);
            if (!v.fails() || !v.witness || v.witness->discrepancy <= config.min_discrepancy) continue;

            // Certify: every local Markov statement must hold, and the gap
            // must reproduce on replay.
            std::vector<Verdict> markov = verify_local_markov(model, dag, config.tol);
            bool all_hold = std::all_of(markov.begin(), markov.end(),
                                        [](const Verdict& m) { return m.holds(); });
            if (!all_hold) continue;
            Verdict replay = evaluate(model, stmt, config.tol);
            if (!replay.fails()) continue;

            MarkovGapFinding finding;
            finding.model = std::move(model);
            finding.dag = std::move(dag);
            finding.node = node;
            finding.statement = format_statement(stmt);
            finding.statement_verdict = std::move(replay);
            finding.markov_verdicts = std::move(markov);
            finding.trial = trial;
            finding.trial_seed = trial_seed;
            return finding;
        }
    }
    return std::nullopt;
}

FatHandResult build_fat_hand_model(const FatHandParams& params) {
    auto check01 = [](double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error("fat-hand parameters must be probabilities");
    };
    check01(params.h_prob);
    for (double p : params.t_given_h) check01(p);
    for (const auto& row : params.y_given_ht)
        for (double p : row) check01(p);

    StructuralSpec spec;
    spec.variables = {{"H", {"0", "1"}}, {"T", {"0", "1"}}, {"Y", {"0", "1"}}};
    spec.targets = {"T"};
    spec.parents = {{}, {0}, {0, 1}};
    spec.cpt.resize(3);
    spec.cpt[0] = {1.0 - params.h_prob, params.h_prob};
    spec.cpt[1] = {1.0 - params.t_given_h[0], params.t_given_h[0],
                   1.0 - params.t_given_h[1], params.t_given_h[1]};
    for (int h = 0; h < 2; ++h) {
        for (int t = 0; t < 2; ++t) {
            double p = params.y_given_ht[h][t];
            spec.cpt[2].push_back(1.0 - p);
            spec.cpt[2].push_back(p);
        }
    }
    // The response reads the intention value of T, never the received one.
    spec.read_intention = {{}, {false}, {false, true}};

    FatHandResult result;
    result.model = generate_structural_model(spec);
    result.dag = dag_of(spec);
    return result;
}

ContextualDemoReport contextual_demo(const ContextualDemoParams& params) {
    if (!(params.y_idle >= 0.0 && params.y_idle <= 1.0 && params.y_set >= 0.0 && params.y_set <= 1.0))
        throw Error("contextual demo parameters must be probabilities");

    ContextualDemoReport report;
    report.flag_model = flag_response_model("T", "M", "Y", params.y_idle, params.y_set);
    report.checked_verdict = evaluate(report.flag_model, "Y _||_ F(T)! | M");
    report.full_verdict = evaluate(report.flag_model, "Y _||_ F(T) | M");

    MultiRegimeModel tracking = generate_structural_model(tracking_response_spec());
    report.tracking_checked_given_t = evaluate(tracking, "Y _||_ F(T)! | T");

    StructuralSpec detached = tracking_response_spec();
    detached.parents[1] = {};            // Y ignores T entirely
    detached.cpt[1] = {0.6, 0.4};
    MultiRegimeModel detached_model = generate_structural_model(detached);
    report.detached_checked = evaluate(detached_model, "Y _||_ F(T)! | T");

    MultiRegimeModel constant = flag_response_model("T", "M", "Y", 1.0, 1.0);
    report.constant_checked = evaluate(constant, "Y _||_ F(T)! | M");
    report.constant_full = evaluate(constant, "Y _||_ F(T) | M");

    report.demonstrated = report.checked_verdict.holds() && report.full_verdict.fails();
    return report;
}

}  // namespace eciv
