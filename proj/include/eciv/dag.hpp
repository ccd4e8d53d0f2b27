// Augmented DAGs: stochastic nodes in a declared topological order plus one
// founder indicator node per intervention target, each with a single edge
// into its target. Supplies d-separation, the local Markov statement
// families used by the backward-induction lemmas, and expansion of a
// structural spec into a multi-regime model.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eciv/model.hpp"
#include "eciv/statement.hpp"
#include "eciv/structural.hpp"

namespace eciv {

struct AugmentedDAG {
    std::vector<std::string> nodes;    // stochastic, listed in topological order
    std::vector<std::string> targets;  // subset of nodes; indicator F(t) implied per target
    // Edges between stochastic nodes. Entries may also name indicators
    // ("F(t)"); the implied indicator edge F(t) -> t is always present and
    // need not be listed.
    std::vector<std::pair<std::string, std::string>> edges;

    int node_index(const std::string& name) const;
    bool is_target(const std::string& name) const;
    std::vector<int> parents_of(int node) const;  // stochastic parents, by node index
};

inline std::string indicator_name(const std::string& target) { return "F(" + target + ")"; }

std::vector<Diagnostic> validate_dag(const AugmentedDAG& dag);

// Standard d-separation over stochastic and indicator nodes. X, Y, Z are
// disjoint node-name sets; indicator nodes are named "F(t)". Throws Error on
// unknown or overlapping names.
bool d_separated(const AugmentedDAG& dag, const std::vector<std::string>& x,
                 const std::vector<std::string>& y, const std::vector<std::string>& z);

// --- statement builders -------------------------------------------------
// Targets in node order are A_1..A_k; Z_r is A_r together with every node
// preceding it; pre(i)/pa(i) are the predecessors/parents of node i.

// Z_r _||_ F(A_r)! | all other indicators checked. The local Markov premise
// for target block r (1-based).
ECIStatement local_markov_target(const AugmentedDAG& dag, int r);

// W_i _||_ checked indicators of non-parent predecessors | pre(i), checked
// parent indicators, checked later indicators. The per-node local Markov
// premise for a non-target node.
ECIStatement local_markov_node(const AugmentedDAG& dag, const std::string& node);

// Z_r _||_ F(A_r..A_k) | earlier indicators checked. The backward-induction
// conclusion for block r.
ECIStatement tail_irrelevance(const AugmentedDAG& dag, int r);

// (W_i, pre(i)) _||_ indicators at or after i | earlier indicators checked.
ECIStatement node_tail_irrelevance(const AugmentedDAG& dag, const std::string& node);

// W_i _||_ indicators after i | pre(i), all earlier indicators checked.
ECIStatement conditioned_tail_irrelevance(const AugmentedDAG& dag, const std::string& node);

// W_i _||_ all non-parent indicators | pre(i), checked parent indicators.
ECIStatement parent_reduction(const AugmentedDAG& dag, const std::string& node);

// W_i _||_ checked non-parent predecessor indicators | checked parent
// indicators -- without conditioning on pre(i). Not implied by the local
// Markov statements; counterexample-search target.
ECIStatement unconditioned_nonparent_statement(const AugmentedDAG& dag, const std::string& node);

// The full local Markov family: one statement per target block, plus the
// per-node statement for each non-target node. Empty when there are no
// targets.
std::vector<ECIStatement> local_markov_statements(const AugmentedDAG& dag);

// Evaluates each local Markov statement against the model. Model variables
// must cover the dag nodes and the target sets must agree.
std::vector<Verdict> verify_local_markov(const MultiRegimeModel& model, const AugmentedDAG& dag,
                                         double tol = 1e-9);

// The dag a structural spec induces: its parent edges plus one indicator
// per target.
AugmentedDAG dag_of(const StructuralSpec& spec);

// Expansion of a structural spec through the received-value switch; the
// idle regime is the spec's unintervened joint and intention-variable
// marginals agree across regimes.
MultiRegimeModel expand_itt(const StructuralSpec& spec);

struct IndepTriple {
    std::string x;
    std::string y;
    std::vector<std::string> z;
};

// All d-separated triples with singleton stochastic x and y (x before y in
// node order) and stochastic conditioning sets up to the given size.
// Deterministic and duplicate-free. Statements about indicators are decided
// semantically, not read off the graph, so they are not enumerated here.
std::vector<IndepTriple> implied_independencies(const AugmentedDAG& dag, int max_conditioning);

// Checks one triple against a model: ordinary conditional independence in
// every regime the model carries.
Verdict verify_triple(const MultiRegimeModel& model, const IndepTriple& triple, double tol = 1e-9);

}  // namespace eciv
