#include "eciv/evaluate.hpp"

#include <algorithm>
#include <set>

namespace eciv {

namespace {

struct QuantifiedIndicator {
    int target_slot;          // index into model.targets
    std::vector<int> values;  // kIdle and/or domain indices
};

// Iterates the Cartesian product of small value lists.
class ProductIter {
public:
    explicit ProductIter(const std::vector<std::vector<int>>& axes) : axes_(axes), pos_(axes.size(), 0) {
        for (const auto& a : axes_) {
            if (a.empty()) {
                done_ = true;
                return;
            }
        }
    }

    bool done() const { return done_; }

    int value(std::size_t axis) const { return axes_[axis][static_cast<std::size_t>(pos_[axis])]; }

    void advance() {
        for (std::size_t i = axes_.size(); i-- > 0;) {
            if (++pos_[i] < static_cast<int>(axes_[i].size())) return;
            pos_[i] = 0;
        }
        done_ = true;
    }

private:
    const std::vector<std::vector<int>>& axes_;
    std::vector<int> pos_;
    bool done_ = false;
};

}  // namespace

Verdict evaluate(const MultiRegimeModel& model, const ECIStatement& stmt, double tol) {
    // Resolve the left set.
    std::vector<int> left;
    for (const auto& name : stmt.left) {
        int v = model.var_index(name);
        if (v < 0) throw Error("unknown variable: " + name);
        left.push_back(v);
    }
    std::sort(left.begin(), left.end());
    if (std::adjacent_find(left.begin(), left.end()) != left.end())
        throw Error("left set lists a variable twice");

    // Resolve the stochastic conditioning set.
    std::vector<int> given;
    for (const auto& name : stmt.given_vars) {
        int v = model.var_index(name);
        if (v < 0) throw Error("unknown variable: " + name);
        if (std::binary_search(left.begin(), left.end(), v))
            throw Error("variable on both sides of the statement: " + name);
        given.push_back(v);
    }
    std::sort(given.begin(), given.end());
    given.erase(std::unique(given.begin(), given.end()), given.end());

    // Resolve indicator terms; every target lands in exactly one role.
    enum class Role { Unset, Group, Given };
    std::vector<Role> role(model.targets.size(), Role::Unset);
    std::vector<QuantifiedIndicator> group_axes;
    std::vector<QuantifiedIndicator> given_axes;

    auto target_slot = [&](const std::string& name) {
        int t = model.target_index(name);
        if (t < 0) throw Error("not an intervention target: " + name);
        if (role[static_cast<std::size_t>(t)] != Role::Unset)
            throw Error("indicator mentioned twice: F(" + name + ")");
        return t;
    };

    for (const auto& term : stmt.group) {
        if (term.mode != IndicatorMode::Full && term.mode != IndicatorMode::Checked)
            throw Error("group indicators must be plain or checked: F(" + term.target + ")");
        int t = target_slot(term.target);
        role[static_cast<std::size_t>(t)] = Role::Group;
        QuantifiedIndicator q;
        q.target_slot = t;
        const auto& decl = model.target_decl(t);
        if (term.mode == IndicatorMode::Full) q.values.push_back(kIdle);
        for (std::size_t k = 0; k < decl.domain.size(); ++k) q.values.push_back(static_cast<int>(k));
        group_axes.push_back(std::move(q));
    }

    for (const auto& term : stmt.given_indicators) {
        int t = target_slot(term.target);
        role[static_cast<std::size_t>(t)] = Role::Given;
        QuantifiedIndicator q;
        q.target_slot = t;
        const auto& decl = model.target_decl(t);
        switch (term.mode) {
            case IndicatorMode::Full:
                q.values.push_back(kIdle);
                [[fallthrough]];
            case IndicatorMode::Checked:
                for (std::size_t k = 0; k < decl.domain.size(); ++k) q.values.push_back(static_cast<int>(k));
                break;
            case IndicatorMode::FixedIdle:
                q.values.push_back(kIdle);
                break;
            case IndicatorMode::FixedValue: {
                auto it = std::find(decl.domain.begin(), decl.domain.end(), term.value);
                if (it == decl.domain.end())
                    throw Error("value '" + term.value + "' not in domain of " + term.target);
                q.values.push_back(static_cast<int>(it - decl.domain.begin()));
                break;
            }
        }
        given_axes.push_back(std::move(q));
    }

    // Unmentioned targets are implicitly pinned idle.
    for (std::size_t t = 0; t < model.targets.size(); ++t) {
        if (role[t] != Role::Unset) continue;
        QuantifiedIndicator q;
        q.target_slot = static_cast<int>(t);
        q.values.push_back(kIdle);
        given_axes.push_back(std::move(q));
    }

    std::vector<std::string> left_names;
    for (int v : left) left_names.push_back(model.variables[static_cast<std::size_t>(v)].name);

    std::vector<VariableDecl> given_decls;
    for (int v : given) given_decls.push_back(model.variables[static_cast<std::size_t>(v)]);

    std::vector<std::vector<int>> given_axis_values, group_axis_values;
    for (const auto& q : given_axes) given_axis_values.push_back(q.values);
    for (const auto& q : group_axes) group_axis_values.push_back(q.values);

    Verdict verdict;
    std::set<RegimeAssignment> missing;

    std::vector<int> wvals;
    for (ProductIter ctx(given_axis_values); !ctx.done(); ctx.advance()) {
        RegimeAssignment regime(model.targets.size(), kIdle);
        for (std::size_t i = 0; i < given_axes.size(); ++i)
            regime[static_cast<std::size_t>(given_axes[i].target_slot)] = ctx.value(i);

        for (std::size_t wc = 0; wc < table_cells(given_decls); ++wc) {
            decode_cell(given_decls, wc, wvals);
            Assignment wass;
            for (std::size_t k = 0; k < given_decls.size(); ++k)
                wass.emplace_back(given_decls[k].name, given_decls[k].domain[static_cast<std::size_t>(wvals[k])]);

            std::optional<DistributionTable> ref;
            ContextRef ref_ctx;
            for (ProductIter grp(group_axis_values); !grp.done(); grp.advance()) {
                RegimeAssignment full = regime;
                for (std::size_t i = 0; i < group_axes.size(); ++i)
                    full[static_cast<std::size_t>(group_axes[i].target_slot)] = grp.value(i);
                if (!model.has_regime(full)) {
                    missing.insert(full);
                    continue;
                }
                auto table = conditional(model, full, left_names, wass);
                if (!table) continue;  // zero-probability conditioning event
                ++verdict.contexts;
                if (!ref) {
                    ref = std::move(table);
                    ref_ctx = {full, wass};
                    continue;
                }
                ++verdict.comparisons;
                double d = total_variation(*ref, *table);
                verdict.max_discrepancy = std::max(verdict.max_discrepancy, d);
                if (d > tol && !verdict.witness) {
                    Witness w;
                    w.lhs = ref_ctx;
                    w.rhs = {full, wass};
                    w.lhs_table = *ref;
                    w.rhs_table = *table;
                    w.discrepancy = d;
                    w.detail = format_statement(stmt);
                    verdict.witness = std::move(w);
                    verdict.outcome = Outcome::Fails;
                }
            }
            if (verdict.fails()) break;
        }
        if (verdict.fails()) break;
    }

    verdict.missing_regimes.assign(missing.begin(), missing.end());
    if (!verdict.fails()) verdict.outcome = verdict.contexts > 0 ? Outcome::Holds : Outcome::Vacuous;
    verdict.detail = format_statement(stmt);
    return verdict;
}

Verdict evaluate(const MultiRegimeModel& model, const std::string& stmt_text, double tol) {
    return evaluate(model, parse_statement(stmt_text), tol);
}

}  // namespace eciv
