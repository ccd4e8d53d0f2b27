#include "eciv/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace eciv {

namespace {

constexpr double kSumTol = 1e-12;

std::vector<int> resolve_vars(const MultiRegimeModel& model, const std::vector<std::string>& names) {
    std::vector<int> idx;
    idx.reserve(names.size());
    for (const auto& name : names) {
        int i = model.var_index(name);
        if (i < 0) throw Error("unknown variable: " + name);
        idx.push_back(i);
    }
    return idx;
}

}  // namespace

std::size_t table_cells(const std::vector<VariableDecl>& vars) {
    std::size_t n = 1;
    for (const auto& v : vars) n *= v.domain.size();
    return n;
}

std::size_t cell_index(const std::vector<VariableDecl>& vars, const std::vector<int>& values) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        idx = idx * vars[i].domain.size() + static_cast<std::size_t>(values[i]);
    }
    return idx;
}

void decode_cell(const std::vector<VariableDecl>& vars, std::size_t index, std::vector<int>& values) {
    values.resize(vars.size());
    for (std::size_t i = vars.size(); i-- > 0;) {
        std::size_t d = vars[i].domain.size();
        values[i] = static_cast<int>(index % d);
        index /= d;
    }
}

double total_variation(const DistributionTable& a, const DistributionTable& b) {
    if (a.probs.size() != b.probs.size()) throw Error("total_variation: table shapes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.probs.size(); ++i) s += std::abs(a.probs[i] - b.probs[i]);
    return 0.5 * s;
}

int MultiRegimeModel::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int MultiRegimeModel::target_index(const std::string& name) const {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] == name) return static_cast<int>(i);
    }
    return -1;
}

const VariableDecl& MultiRegimeModel::target_decl(int target) const {
    int v = var_index(targets.at(static_cast<std::size_t>(target)));
    if (v < 0) throw Error("target is not a declared variable: " + targets[static_cast<std::size_t>(target)]);
    return variables[static_cast<std::size_t>(v)];
}

RegimeAssignment MultiRegimeModel::idle_regime() const {
    return RegimeAssignment(targets.size(), kIdle);
}

bool MultiRegimeModel::has_regime(const RegimeAssignment& r) const {
    return regimes.find(r) != regimes.end();
}

const DistributionTable& MultiRegimeModel::regime_table(const RegimeAssignment& r) const {
    auto it = regimes.find(r);
    if (it == regimes.end()) throw Error("unknown regime: " + regime_label(*this, r));
    return it->second;
}

std::string regime_label(const MultiRegimeModel& model, const RegimeAssignment& r) {
    std::ostringstream out;
    for (std::size_t t = 0; t < model.targets.size() && t < r.size(); ++t) {
        if (t) out << ", ";
        out << "F(" << model.targets[t] << ")=";
        if (r[t] == kIdle) {
            out << "idle";
        } else {
            const auto& decl = model.target_decl(static_cast<int>(t));
            if (r[t] >= 0 && static_cast<std::size_t>(r[t]) < decl.domain.size())
                out << decl.domain[static_cast<std::size_t>(r[t])];
            else
                out << "#" << r[t];
        }
    }
    return out.str();
}

std::string outcome_label(Outcome o) {
    switch (o) {
        case Outcome::Holds: return "holds";
        case Outcome::Fails: return "fails";
        case Outcome::Vacuous: return "vacuous";
    }
    return "?";
}

std::vector<Diagnostic> validate_model(const MultiRegimeModel& model) {
    std::vector<Diagnostic> out;
    std::set<std::string> seen;
    for (const auto& v : model.variables) {
        if (!seen.insert(v.name).second)
            out.push_back({"duplicate-variable", v.name, "variable name declared twice"});
        if (v.domain.size() < 2)
            out.push_back({"domain-size", v.name, "domain must list at least two values"});
        std::set<std::string> vals(v.domain.begin(), v.domain.end());
        if (vals.size() != v.domain.size())
            out.push_back({"duplicate-domain-value", v.name, "domain values must be unique"});
    }
    std::set<std::string> tseen;
    for (const auto& t : model.targets) {
        if (model.var_index(t) < 0)
            out.push_back({"unknown-target", t, "target is not a declared variable"});
        if (!tseen.insert(t).second)
            out.push_back({"duplicate-target", t, "target declared twice"});
    }
    if (!out.empty()) return out;  // shape is broken; regime checks would misfire

    if (!model.has_regime(model.idle_regime()))
        out.push_back({"idle-regime-absent", "regimes", "the all-idle regime must be present"});

    std::size_t cells = table_cells(model.variables);
    for (const auto& [key, table] : model.regimes) {
        std::string where = regime_label(model, key);
        if (key.size() != model.targets.size()) {
            out.push_back({"regime-key-arity", where, "regime key must assign every target"});
            continue;
        }
        bool key_ok = true;
        for (std::size_t t = 0; t < key.size(); ++t) {
            const auto& decl = model.target_decl(static_cast<int>(t));
            if (key[t] != kIdle && (key[t] < 0 || static_cast<std::size_t>(key[t]) >= decl.domain.size())) {
                out.push_back({"regime-key-value", where, "indicator value outside the target's domain"});
                key_ok = false;
            }
        }
        if (!key_ok) continue;
        if (!table.vars.empty() && table.vars != model.variables) {
            out.push_back({"table-variables", where, "table must range over the model variables in declaration order"});
            continue;
        }
        if (table.probs.size() != cells) {
            out.push_back({"table-size", where, "probability array length does not match the joint domain"});
            continue;
        }
        double sum = 0.0;
        bool neg = false;
        for (double p : table.probs) {
            if (p < -kSumTol) neg = true;
            sum += p;
        }
        if (neg) out.push_back({"negative-entry", where, "probabilities must be non-negative"});
        if (std::abs(sum - 1.0) > kSumTol)
            out.push_back({"normalization", where, "probabilities must sum to 1"});
    }
    return out;
}

bool is_variation_independent(const MultiRegimeModel& model) {
    std::size_t product = 1;
    for (std::size_t t = 0; t < model.targets.size(); ++t) {
        product *= model.target_decl(static_cast<int>(t)).domain.size() + 1;
    }
    if (model.regimes.size() != product) return false;
    for (const auto& [key, table] : model.regimes) {
        if (key.size() != model.targets.size()) return false;
    }
    return true;
}

DistributionTable marginal(const MultiRegimeModel& model, const RegimeAssignment& regime,
                           const std::vector<std::string>& vars) {
    const DistributionTable& joint = model.regime_table(regime);
    std::vector<int> keep = resolve_vars(model, vars);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    DistributionTable out;
    for (int i : keep) out.vars.push_back(model.variables[static_cast<std::size_t>(i)]);
    out.probs.assign(table_cells(out.vars), 0.0);

    std::vector<int> values;
    std::vector<int> sub(keep.size());
    for (std::size_t cell = 0; cell < joint.probs.size(); ++cell) {
        decode_cell(model.variables, cell, values);
        for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = values[static_cast<std::size_t>(keep[k])];
        out.probs[cell_index(out.vars, sub)] += joint.probs[cell];
    }
    double sum = 0.0;
    for (double p : out.probs) sum += p;
    if (sum > 0.0) {
        for (double& p : out.probs) p /= sum;
    }
    return out;
}

std::optional<DistributionTable> conditional(const MultiRegimeModel& model,
                                             const RegimeAssignment& regime,
                                             const std::vector<std::string>& target_vars,
                                             const Assignment& given) {
    const DistributionTable& joint = model.regime_table(regime);
    std::vector<int> keep = resolve_vars(model, target_vars);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    std::vector<std::pair<int, int>> pinned;  // (var index, value index)
    for (const auto& [name, value] : given) {
        int v = model.var_index(name);
        if (v < 0) throw Error("unknown variable: " + name);
        const auto& decl = model.variables[static_cast<std::size_t>(v)];
        auto it = std::find(decl.domain.begin(), decl.domain.end(), value);
        if (it == decl.domain.end()) throw Error("value '" + value + "' not in domain of " + name);
        if (std::find(keep.begin(), keep.end(), v) != keep.end())
            throw Error("variable appears on both sides of the conditional: " + name);
        pinned.emplace_back(v, static_cast<int>(it - decl.domain.begin()));
    }

    DistributionTable out;
    for (int i : keep) out.vars.push_back(model.variables[static_cast<std::size_t>(i)]);
    out.probs.assign(table_cells(out.vars), 0.0);

    std::vector<int> values;
    std::vector<int> sub(keep.size());
    double mass = 0.0;
    for (std::size_t cell = 0; cell < joint.probs.size(); ++cell) {
        decode_cell(model.variables, cell, values);
        bool match = true;
        for (const auto& [v, val] : pinned) {
            if (values[static_cast<std::size_t>(v)] != val) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        mass += joint.probs[cell];
        for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = values[static_cast<std::size_t>(keep[k])];
        out.probs[cell_index(out.vars, sub)] += joint.probs[cell];
    }
    if (mass <= 0.0) return std::nullopt;
    for (double& p : out.probs) p /= mass;
    return out;
}

Verdict check_ci(const MultiRegimeModel& model, const RegimeAssignment& regime,
                 const std::vector<std::string>& x, const std::vector<std::string>& y,
                 const std::vector<std::string>& z, double tol) {
    std::vector<int> xi = resolve_vars(model, x);
    std::vector<int> yi = resolve_vars(model, y);
    std::vector<int> zi = resolve_vars(model, z);
    {
        std::set<int> all(xi.begin(), xi.end());
        for (int v : yi)
            if (!all.insert(v).second) throw Error("check_ci: sets must be disjoint");
        for (int v : zi)
            if (!all.insert(v).second) throw Error("check_ci: sets must be disjoint");
    }

    std::vector<VariableDecl> zdecl, ydecl;
    for (int v : zi) zdecl.push_back(model.variables[static_cast<std::size_t>(v)]);
    for (int v : yi) ydecl.push_back(model.variables[static_cast<std::size_t>(v)]);

    auto label = [&](const std::vector<int>& idx, const std::vector<int>& vals) {
        Assignment a;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const auto& decl = model.variables[static_cast<std::size_t>(idx[k])];
            a.emplace_back(decl.name, decl.domain[static_cast<std::size_t>(vals[k])]);
        }
        return a;
    };

    Verdict verdict;
    std::vector<int> zvals, yvals;
    for (std::size_t zc = 0; zc < table_cells(zdecl); ++zc) {
        decode_cell(zdecl, zc, zvals);
        Assignment zass = label(zi, zvals);

        std::optional<DistributionTable> ref;
        Assignment ref_given;
        for (std::size_t yc = 0; yc < table_cells(ydecl); ++yc) {
            decode_cell(ydecl, yc, yvals);
            Assignment given = zass;
            Assignment ygiven = label(yi, yvals);
            given.insert(given.end(), ygiven.begin(), ygiven.end());
            auto table = conditional(model, regime, x, given);
            if (!table) continue;  // zero-probability row
            ++verdict.contexts;
            if (!ref) {
                ref = std::move(table);
                ref_given = given;
                continue;
            }
            ++verdict.comparisons;
            double d = total_variation(*ref, *table);
            verdict.max_discrepancy = std::max(verdict.max_discrepancy, d);
            if (d > tol) {
                std::string xs;
                for (std::size_t k = 0; k < x.size(); ++k) xs += (k ? "," : "") + x[k];
                Witness w;
                w.lhs = {regime, ref_given};
                w.rhs = {regime, given};
                w.lhs_table = *ref;
                w.rhs_table = *table;
                w.discrepancy = d;
                w.detail = "conditional of {" + xs + "} differs across values of the second set";
                verdict.witness = std::move(w);
                verdict.outcome = Outcome::Fails;
                return verdict;
            }
        }
    }
    verdict.outcome = verdict.contexts > 0 ? Outcome::Holds : Outcome::Vacuous;
    return verdict;
}

}  // namespace eciv
