// Distributional consistency and the lemma suite: the defining equality, its
// decomposition, the subset extension with its induction chain, the checked
// -> full promotion lemmas, and the backward-induction family over a dag.
// Each lemma is a premise/conclusion pair evaluated numerically; an
// implication failure means the premises hold while the conclusion fails.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eciv/dag.hpp"
#include "eciv/model.hpp"
#include "eciv/structural.hpp"

namespace eciv {

// The joint of (everything else, B = b) under F(B)=b must match its value
// under F(B)=idle, for every b and every assignment of the remaining
// indicators. On non-variation-independent models, context pairs whose
// regimes are absent are skipped and reported via missing_regimes.
Verdict check_distributional_consistency(const MultiRegimeModel& model, const std::string& target,
                                         double tol = 1e-9);

// The same equality with a whole target subset set to b versus all idle.
Verdict check_dc_subset(const MultiRegimeModel& model, const std::vector<std::string>& targets,
                        double tol = 1e-9);

// The induction chain behind the subset extension: indicators are idled one
// at a time (last declared first) and each single step is checked. Agrees
// with check_dc_subset whenever the single-target equality holds.
Verdict check_dc_subset_stepwise(const MultiRegimeModel& model, const std::vector<std::string>& targets,
                                 double tol = 1e-9);

struct DcDecomposition {
    Verdict response_invariance;   // conditional of the rest given B=b matches
    Verdict value_match;           // P(B=b) matches between F(B)=b and idle
    Verdict full_invariance;       // B _||_ F(B) | F(rest): all values, not just b
};

// The defining equality is equivalent to the first two verdicts jointly;
// the third is strictly stronger than the second unless B is binary.
DcDecomposition decompose_dc(const MultiRegimeModel& model, const std::string& target,
                             double tol = 1e-9);

// Conditioned variant used by the conditioning lemma: the conditional of
// everything else given (B=b, W=w) matches between F(B)=b and idle.
Verdict check_conditioned_dc(const MultiRegimeModel& model, const std::vector<std::string>& targets,
                             const std::vector<std::string>& w, double tol = 1e-9);

enum class LemmaId {
    DC_DEF,
    DC_PAIR,
    EQ2_STRONG,
    L1_SUBSET,
    L2_CONDITION,
    L3_PROMOTE,
    C1_JOINT,
    C2_CHECKED_CONTEXT,
    L4_COND_PROMOTE,
    L5_INDUCTION,
    C3_INTERLEAVE,
    L6_PARENT_REDUCE,
};

inline constexpr LemmaId kAllLemmaIds[] = {
    LemmaId::DC_DEF,          LemmaId::DC_PAIR,      LemmaId::EQ2_STRONG,
    LemmaId::L1_SUBSET,       LemmaId::L2_CONDITION, LemmaId::L3_PROMOTE,
    LemmaId::C1_JOINT,        LemmaId::C2_CHECKED_CONTEXT, LemmaId::L4_COND_PROMOTE,
    LemmaId::L5_INDUCTION,    LemmaId::C3_INTERLEAVE, LemmaId::L6_PARENT_REDUCE,
};

const char* lemma_id_name(LemmaId id);
std::optional<LemmaId> lemma_id_from_string(const std::string& name);

// Free sets of one lemma instance. b/d/checked_context name targets; w/y
// name stochastic variables; node and dag drive the dag-based lemmas.
struct LemmaBinding {
    std::vector<std::string> b;
    std::vector<std::string> d;
    std::vector<std::string> checked_context;
    std::vector<std::string> w;
    std::vector<std::string> y;
    std::string node;
    std::optional<AugmentedDAG> dag;
};

std::string binding_label(const LemmaBinding& binding);

struct ImplicationReport {
    LemmaId id = LemmaId::DC_DEF;
    LemmaBinding binding;
    Verdict premise;     // conjunction over all premise parts
    Verdict conclusion;  // conjunction over all conclusion parts
    bool implication_ok = true;
    bool variation_independent = true;
    std::optional<bool> induction_agrees;  // L1_SUBSET only
    std::vector<std::string> premise_statements;
    std::vector<std::string> conclusion_statements;
};

// Evaluates one lemma instance. Distributional consistency of the model is
// part of every premise whose lemma assumes it. Throws Error on malformed
// bindings (including a missing dag where one is required).
ImplicationReport check_lemma(const MultiRegimeModel& model, LemmaId id, const LemmaBinding& binding,
                              double tol = 1e-9);

// Every admissible binding for a lemma on a model, enumerated exhaustively
// over target subsets; companion stochastic sets are capped at two extra
// variables to keep suites at desk scale. Dag-based lemmas yield bindings
// only when a dag is supplied.
std::vector<LemmaBinding> enumerate_bindings(const MultiRegimeModel& model, LemmaId id,
                                             const AugmentedDAG* dag);

struct GeneratorConfig {
    enum class Kind { Structural, Random };
    Kind kind = Kind::Structural;
    StructuralShape shape;
};

struct LemmaCounts {
    long instances = 0;
    long premise_holds = 0;
    long premise_vacuous = 0;
    long premise_fails = 0;
    long conclusion_holds = 0;
    long implication_failures = 0;
};

struct SuiteFailure {
    int trial = 0;
    std::uint64_t trial_seed = 0;
    LemmaId id = LemmaId::DC_DEF;
    std::string binding;
    std::string premise_detail;
    std::string conclusion_detail;
    double discrepancy = 0.0;
    bool variation_independent = true;
};

struct SuiteReport {
    GeneratorConfig config;
    std::uint64_t seed = 0;
    int trials = 0;
    double tol = 1e-9;
    std::vector<std::pair<LemmaId, LemmaCounts>> lemmas;
    std::vector<SuiteFailure> failures;

    long total_implication_failures() const;
};

// Generates one model per trial (seeded per trial), checks every listed
// lemma over all its bindings, and aggregates. Deterministic in seed.
// Throws Error when trials < 1 or the lemma list is empty.
SuiteReport run_suite(const GeneratorConfig& config, const std::vector<LemmaId>& ids, int trials,
                      std::uint64_t seed, double tol = 1e-9);

}  // namespace eciv
