// Discrete multi-regime probability models: a family of joint distributions
// over a fixed variable set, indexed by assignments of intervention
// indicators (idle or a fixed value per target).
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eciv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VariableDecl {
    std::string name;
    std::vector<std::string> domain;  // value labels, size >= 2

    bool operator==(const VariableDecl&) const = default;
};

// Indicator state inside a regime key: kIdle or an index into the target's
// domain. A regime assignment lists one state per model target, in target
// declaration order.
inline constexpr int kIdle = -1;
using RegimeAssignment = std::vector<int>;

// Stochastic assignment by name, used at API boundaries and in witnesses.
using Assignment = std::vector<std::pair<std::string, std::string>>;

struct DistributionTable {
    std::vector<VariableDecl> vars;
    std::vector<double> probs;  // row-major: first variable slowest, last fastest

    std::size_t size() const { return probs.size(); }
};

std::size_t table_cells(const std::vector<VariableDecl>& vars);
std::size_t cell_index(const std::vector<VariableDecl>& vars, const std::vector<int>& values);
void decode_cell(const std::vector<VariableDecl>& vars, std::size_t index, std::vector<int>& values);

// Total variation distance between two tables over the same variable list.
double total_variation(const DistributionTable& a, const DistributionTable& b);

struct MultiRegimeModel {
    std::vector<VariableDecl> variables;
    std::vector<std::string> targets;  // subset of variable names, declaration order
    std::map<RegimeAssignment, DistributionTable> regimes;

    int var_index(const std::string& name) const;     // -1 if absent
    int target_index(const std::string& name) const;  // -1 if absent
    const VariableDecl& target_decl(int target) const;
    RegimeAssignment idle_regime() const;
    bool has_regime(const RegimeAssignment& r) const;
    const DistributionTable& regime_table(const RegimeAssignment& r) const;  // throws Error
};

// Human-readable regime label, e.g. "F(T)=1, F(S)=idle".
std::string regime_label(const MultiRegimeModel& model, const RegimeAssignment& r);

struct Diagnostic {
    std::string code;      // e.g. "normalization", "idle-regime-absent"
    std::string location;  // variable / regime the problem was found in
    std::string message;
};

// Empty iff all model invariants hold. Never throws; problems come back as
// diagnostics.
std::vector<Diagnostic> validate_model(const MultiRegimeModel& model);

// True iff the regime key set is the full Cartesian product of
// {idle} + domain over the declared targets.
bool is_variation_independent(const MultiRegimeModel& model);

// Exact marginal of `vars` (canonicalized to declaration order) in one
// regime. Throws Error for unknown regimes or variable names.
DistributionTable marginal(const MultiRegimeModel& model, const RegimeAssignment& regime,
                           const std::vector<std::string>& vars);

// Exact conditional of `target_vars` given a stochastic assignment; nullopt
// when the conditioning event has probability zero. Throws Error when the
// two variable sets overlap or a name is unknown.
std::optional<DistributionTable> conditional(const MultiRegimeModel& model,
                                             const RegimeAssignment& regime,
                                             const std::vector<std::string>& target_vars,
                                             const Assignment& given);

enum class Outcome { Holds, Fails, Vacuous };

std::string outcome_label(Outcome o);

// One side of a failed comparison: the regime plus the stochastic
// conditioning values under which the differing table was computed.
struct ContextRef {
    RegimeAssignment regime;
    Assignment given;
};

struct Witness {
    ContextRef lhs;
    ContextRef rhs;
    DistributionTable lhs_table;
    DistributionTable rhs_table;
    double discrepancy = 0.0;
    std::string detail;
};

struct Verdict {
    Outcome outcome = Outcome::Vacuous;
    std::optional<Witness> witness;
    long contexts = 0;     // positive-probability contexts visited
    long comparisons = 0;  // table comparisons performed
    double max_discrepancy = 0.0;
    // Regimes a quantified context referred to but the model does not carry
    // (possible on non-variation-independent models). Reported, never
    // silently dropped.
    std::vector<RegimeAssignment> missing_regimes;
    std::string detail;

    bool holds() const { return outcome == Outcome::Holds; }
    bool fails() const { return outcome == Outcome::Fails; }
    bool vacuous() const { return outcome == Outcome::Vacuous; }
};

// Ordinary conditional independence X _||_ Y | Z inside a single regime,
// decided by comparing the conditional tables of X across values of (Y | Z)
// in total variation. X, Y, Z must be disjoint.
Verdict check_ci(const MultiRegimeModel& model, const RegimeAssignment& regime,
                 const std::vector<std::string>& x, const std::vector<std::string>& y,
                 const std::vector<std::string>& z, double tol = 1e-9);

}  // namespace eciv
