// Negative results and illustrative constructions: the variation-independence
// counterexample search, the search for a model that satisfies every local
// Markov statement while the unconditioned non-parent statement fails, the
// graph-unfaithful fat-hand model, and the contextual-independence demo.
#pragma once

#include <cstdint>
#include <optional>

#include "eciv/consistency.hpp"
#include "eciv/dag.hpp"
#include "eciv/model.hpp"

namespace eciv {

struct SearchConfig {
    long budget = 100000;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    LemmaId lemma = LemmaId::L3_PROMOTE;  // targeted lemma for the VI search
    // When set, only variation-independent, distributionally consistent
    // models are sampled; the targeted implication is a theorem there and
    // the search is expected to come back empty.
    bool restrict_variation_independent = false;
    double min_discrepancy = 1e-3;  // reject weaker conclusion failures
    int num_targets = 2;            // binary targets
    int extra_vars = 1;             // binary non-target variables
    int num_vars = 4;               // Markov non-implication search shape
    double edge_prob = 0.6;
};

struct ViFinding {
    MultiRegimeModel model;
    LemmaBinding binding;
    ImplicationReport report;  // premise holds, conclusion fails
    long trial = 0;
    std::uint64_t trial_seed = 0;
};

// Rejection sampling over non-product regime subsets. Tables keep the
// single-indicator consistency pairs intact by construction (a shared base
// joint, with one fully-set regime reshuffled on the cells no present
// neighbour pins), so candidates are filtered only on the lemma's own
// premise and conclusion; every finding is re-certified through check_lemma
// before it is returned. Deterministic in the seed.
std::optional<ViFinding> search_vi_counterexample(const SearchConfig& config);

struct MarkovGapFinding {
    MultiRegimeModel model;
    AugmentedDAG dag;
    std::string node;
    std::string statement;          // the failing unconditioned statement
    Verdict statement_verdict;      // Fails with the certified discrepancy
    std::vector<Verdict> markov_verdicts;  // every local Markov statement holds
    long trial = 0;
    std::uint64_t trial_seed = 0;
};

// Searches random structural models for a node whose unconditioned
// non-parent statement fails even though every local Markov statement of
// the dag holds. Certified by replaying all statements before returning.
std::optional<MarkovGapFinding> search_markov_gap(const SearchConfig& config);

struct FatHandParams {
    double h_prob = 0.4;                         // P(H=1)
    double t_given_h[2] = {0.3, 0.8};            // P(T=1 | H=h)
    double y_given_ht[2][2] = {{0.1, 0.6},       // P(Y=1 | H=h, T=t), T read as intention
                               {0.4, 0.9}};
};

struct FatHandResult {
    MultiRegimeModel model;
    AugmentedDAG dag;
};

// A model whose response reads the intention value of T, never the received
// one: "Y _||_ F(T) | T" holds exactly, while on the dag (H -> T <- F(T),
// H -> Y, T -> Y) the path F(T) -> T <- H -> Y is open given T, so
// d-separation cannot certify it. Distributional consistency still holds.
FatHandResult build_fat_hand_model(const FatHandParams& params = {});

struct ContextualDemoParams {
    double y_idle = 0.3;  // P(Y=1) in the idle regime
    double y_set = 0.7;   // P(Y=1) under any non-idle intervention
};

struct ContextualDemoReport {
    MultiRegimeModel flag_model;        // Y responds to whether an intervention occurred
    Verdict checked_verdict;            // Y _||_ F(T)! | M : holds
    Verdict full_verdict;               // Y _||_ F(T)  | M : fails
    Verdict tracking_checked_given_t;   // structural model where Y tracks the set value: fails
    Verdict detached_checked;           // structural model where Y ignores T: holds
    Verdict constant_checked;           // constant response: holds
    Verdict constant_full;              // constant response: holds
    bool demonstrated = false;          // checked holds and full fails
};

ContextualDemoReport contextual_demo(const ContextualDemoParams& params = {});

}  // namespace eciv
