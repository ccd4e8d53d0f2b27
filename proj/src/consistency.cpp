#include "eciv/consistency.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "eciv/evaluate.hpp"
#include "eciv/rng.hpp"

namespace eciv {

namespace {

struct TargetSplit {
    std::vector<int> b_slots;      // slots of the named subset, in target order
    std::vector<int> other_slots;  // remaining target slots
    std::vector<int> b_varpos;     // variable positions of the subset
};

TargetSplit split_targets(const MultiRegimeModel& model, const std::vector<std::string>& subset) {
    TargetSplit split;
    std::set<int> chosen;
    for (const auto& name : subset) {
        int slot = model.target_index(name);
        if (slot < 0) throw Error("not an intervention target: " + name);
        if (!chosen.insert(slot).second) throw Error("target listed twice: " + name);
    }
    if (chosen.empty()) throw Error("target subset must not be empty");
    for (std::size_t t = 0; t < model.targets.size(); ++t) {
        if (chosen.count(static_cast<int>(t)))
            split.b_slots.push_back(static_cast<int>(t));
        else
            split.other_slots.push_back(static_cast<int>(t));
    }
    for (int slot : split.b_slots) split.b_varpos.push_back(model.var_index(model.targets[static_cast<std::size_t>(slot)]));
    return split;
}

// Iterates assignments of the remaining indicators: idle plus every domain
// value per slot.
class ContextIter {
public:
    ContextIter(const MultiRegimeModel& model, const std::vector<int>& slots) : slots_(slots) {
        for (int slot : slots_) sizes_.push_back(static_cast<int>(model.target_decl(slot).domain.size()));
        values_.assign(slots_.size(), kIdle);
        done_ = false;
    }

    bool done() const { return done_; }

    void apply(RegimeAssignment& regime) const {
        for (std::size_t i = 0; i < slots_.size(); ++i) regime[static_cast<std::size_t>(slots_[i])] = values_[i];
    }

    void advance() {
        for (std::size_t i = slots_.size(); i-- > 0;) {
            if (++values_[i] < sizes_[i]) return;
            values_[i] = kIdle;
        }
        done_ = true;
    }

private:
    std::vector<int> slots_;
    std::vector<int> sizes_;
    std::vector<int> values_;
    bool done_ = false;
};

// Iterates joint values of the subset's domains.
class ValueIter {
public:
    ValueIter(const MultiRegimeModel& model, const std::vector<int>& slots) {
        for (int slot : slots) sizes_.push_back(static_cast<int>(model.target_decl(slot).domain.size()));
        values_.assign(slots.size(), 0);
    }

    bool done() const { return done_; }
    const std::vector<int>& values() const { return values_; }

    void advance() {
        for (std::size_t i = values_.size(); i-- > 0;) {
            if (++values_[i] < sizes_[i]) return;
            values_[i] = 0;
        }
        done_ = true;
    }

private:
    std::vector<int> sizes_;
    std::vector<int> values_;
    bool done_ = false;
};

struct SliceDiff {
    double max_diff = 0.0;
    std::size_t cell = 0;
};

// Max absolute difference between two regime joints over the cells where
// the listed variables take the listed values.
SliceDiff compare_slice(const MultiRegimeModel& model, const DistributionTable& a,
                        const DistributionTable& b, const std::vector<int>& varpos,
                        const std::vector<int>& vals) {
    SliceDiff diff;
    std::vector<int> values;
    for (std::size_t cell = 0; cell < a.probs.size(); ++cell) {
        decode_cell(model.variables, cell, values);
        bool match = true;
        for (std::size_t k = 0; k < varpos.size(); ++k) {
            if (values[static_cast<std::size_t>(varpos[k])] != vals[k]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        double d = std::abs(a.probs[cell] - b.probs[cell]);
        if (d > diff.max_diff) {
            diff.max_diff = d;
            diff.cell = cell;
        }
    }
    return diff;
}

std::string slice_label(const MultiRegimeModel& model, const std::vector<int>& varpos,
                        const std::vector<int>& vals) {
    std::ostringstream out;
    for (std::size_t k = 0; k < varpos.size(); ++k) {
        if (k) out << ", ";
        const auto& decl = model.variables[static_cast<std::size_t>(varpos[k])];
        out << decl.name << "=" << decl.domain[static_cast<std::size_t>(vals[k])];
    }
    return out.str();
}

void record_missing(Verdict& verdict, std::set<RegimeAssignment>& seen, const RegimeAssignment& r) {
    if (seen.insert(r).second) verdict.missing_regimes.push_back(r);
}

Verdict dc_subset_impl(const MultiRegimeModel& model, const std::vector<std::string>& subset,
                       double tol, bool stepwise) {
    TargetSplit split = split_targets(model, subset);
    Verdict verdict;
    std::set<RegimeAssignment> missing;

    for (ContextIter ctx(model, split.other_slots); !ctx.done(); ctx.advance()) {
        for (ValueIter bv(model, split.b_slots); !bv.done(); bv.advance()) {
            const std::vector<int>& b = bv.values();

            // Chain of regimes from all-set to all-idle; the direct check
            // uses only the endpoints.
            std::size_t steps = stepwise ? split.b_slots.size() : 1;
            bool absent = false;
            std::vector<RegimeAssignment> chain;
            for (std::size_t j = 0; j <= (stepwise ? split.b_slots.size() : 1); ++j) {
                std::size_t set_count = stepwise ? (split.b_slots.size() - j) : (j == 0 ? split.b_slots.size() : 0);
                RegimeAssignment r(model.targets.size(), kIdle);
                ctx.apply(r);
                for (std::size_t k = 0; k < split.b_slots.size(); ++k)
                    r[static_cast<std::size_t>(split.b_slots[k])] = k < set_count ? b[k] : kIdle;
                chain.push_back(std::move(r));
            }
            for (const auto& r : chain) {
                if (!model.has_regime(r)) {
                    record_missing(verdict, missing, r);
                    absent = true;
                }
            }
            if (absent) continue;

            ++verdict.contexts;
            for (std::size_t j = 0; j < steps; ++j) {
                const DistributionTable& hi = model.regime_table(chain[j]);
                const DistributionTable& lo = model.regime_table(chain[j + 1]);
                ++verdict.comparisons;
                SliceDiff diff = compare_slice(model, hi, lo, split.b_varpos, b);
                verdict.max_discrepancy = std::max(verdict.max_discrepancy, diff.max_diff);
                if (diff.max_diff > tol) {
                    Witness w;
                    w.lhs = {chain[j], {}};
                    w.rhs = {chain[j + 1], {}};
                    w.lhs_table = hi;
                    w.rhs_table = lo;
                    w.discrepancy = diff.max_diff;
                    w.detail = "joint mass differs on the cells with " + slice_label(model, split.b_varpos, b);
                    verdict.witness = std::move(w);
                    verdict.outcome = Outcome::Fails;
                    return verdict;
                }
            }
        }
    }
    verdict.outcome = verdict.contexts > 0 ? Outcome::Holds : Outcome::Vacuous;
    return verdict;
}

std::vector<std::string> complement_vars(const MultiRegimeModel& model,
                                         const std::vector<std::string>& excluded) {
    std::vector<std::string> out;
    for (const auto& v : model.variables) {
        if (std::find(excluded.begin(), excluded.end(), v.name) == excluded.end()) out.push_back(v.name);
    }
    return out;
}

Verdict combine_conjunction(const std::vector<Verdict>& parts) {
    Verdict out;
    out.outcome = Outcome::Holds;
    out.detail = parts.empty() ? "(no premise)" : "";
    bool any_vacuous = false;
    std::set<RegimeAssignment> missing;
    for (const auto& p : parts) {
        out.contexts += p.contexts;
        out.comparisons += p.comparisons;
        out.max_discrepancy = std::max(out.max_discrepancy, p.max_discrepancy);
        for (const auto& r : p.missing_regimes) {
            if (missing.insert(r).second) out.missing_regimes.push_back(r);
        }
        if (p.fails() && !out.fails()) {
            out.outcome = Outcome::Fails;
            out.witness = p.witness;
            out.detail = p.detail;
        } else if (p.vacuous()) {
            any_vacuous = true;
        }
    }
    if (!out.fails() && any_vacuous) out.outcome = Outcome::Vacuous;
    return out;
}

IndicatorTerm term(const std::string& target, IndicatorMode mode) { return {target, mode, ""}; }

// left _||_ group-B (checked or full), group-D full | checked context,
// every remaining indicator conditioned over all of its values.
ECIStatement promotion_statement(const MultiRegimeModel& model, const std::vector<std::string>& left,
                                 const std::vector<std::string>& b, bool b_checked,
                                 const std::vector<std::string>& d,
                                 const std::vector<std::string>& checked_ctx,
                                 const std::vector<std::string>& given_vars) {
    ECIStatement stmt;
    stmt.left = left;
    for (const auto& t : b) stmt.group.push_back(term(t, b_checked ? IndicatorMode::Checked : IndicatorMode::Full));
    for (const auto& t : d) stmt.group.push_back(term(t, IndicatorMode::Full));
    stmt.given_vars = given_vars;
    for (const auto& t : checked_ctx) stmt.given_indicators.push_back(term(t, IndicatorMode::Checked));
    for (const auto& t : model.targets) {
        bool mentioned = std::find(b.begin(), b.end(), t) != b.end() ||
                         std::find(d.begin(), d.end(), t) != d.end() ||
                         std::find(checked_ctx.begin(), checked_ctx.end(), t) != checked_ctx.end();
        if (!mentioned) stmt.given_indicators.push_back(term(t, IndicatorMode::Full));
    }
    return stmt;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw Error("malformed binding: " + message);
}

void require_targets(const MultiRegimeModel& model, const std::vector<std::string>& names) {
    for (const auto& n : names) require(model.target_index(n) >= 0, "not a target: " + n);
}

void require_vars(const MultiRegimeModel& model, const std::vector<std::string>& names) {
    for (const auto& n : names) require(model.var_index(n) >= 0, "not a variable: " + n);
}

bool contains_all(const std::vector<std::string>& haystack, const std::vector<std::string>& needles) {
    for (const auto& n : needles) {
        if (std::find(haystack.begin(), haystack.end(), n) == haystack.end()) return false;
    }
    return true;
}

bool disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& n : a) {
        if (std::find(b.begin(), b.end(), n) != b.end()) return false;
    }
    return true;
}

const AugmentedDAG& require_dag(const MultiRegimeModel& model, const LemmaBinding& binding) {
    require(binding.dag.has_value(), "this lemma needs a dag with a topological order");
    const AugmentedDAG& dag = *binding.dag;
    std::set<std::string> mt(model.targets.begin(), model.targets.end());
    std::set<std::string> dt(dag.targets.begin(), dag.targets.end());
    require(mt == dt, "model and dag disagree on the target set");
    for (const auto& n : dag.nodes) require(model.var_index(n) >= 0, "model lacks dag node " + n);
    return dag;
}

}  // namespace

Verdict check_distributional_consistency(const MultiRegimeModel& model, const std::string& target,
                                         double tol) {
    return dc_subset_impl(model, {target}, tol, false);
}

Verdict check_dc_subset(const MultiRegimeModel& model, const std::vector<std::string>& targets,
                        double tol) {
    return dc_subset_impl(model, targets, tol, false);
}

Verdict check_dc_subset_stepwise(const MultiRegimeModel& model, const std::vector<std::string>& targets,
                                 double tol) {
    return dc_subset_impl(model, targets, tol, true);
}

DcDecomposition decompose_dc(const MultiRegimeModel& model, const std::string& target, double tol) {
    TargetSplit split = split_targets(model, {target});
    const VariableDecl& decl = model.target_decl(split.b_slots[0]);
    std::vector<std::string> rest = complement_vars(model, {target});

    DcDecomposition out;
    std::set<RegimeAssignment> missing_resp, missing_val;

    for (ContextIter ctx(model, split.other_slots); !ctx.done(); ctx.advance()) {
        RegimeAssignment r0(model.targets.size(), kIdle);
        ctx.apply(r0);
        RegimeAssignment r1 = r0;
        for (std::size_t b = 0; b < decl.domain.size(); ++b) {
            r1[static_cast<std::size_t>(split.b_slots[0])] = static_cast<int>(b);
            if (!model.has_regime(r0) || !model.has_regime(r1)) {
                if (!model.has_regime(r0)) {
                    record_missing(out.response_invariance, missing_resp, r0);
                    record_missing(out.value_match, missing_val, r0);
                }
                if (!model.has_regime(r1)) {
                    record_missing(out.response_invariance, missing_resp, r1);
                    record_missing(out.value_match, missing_val, r1);
                }
                continue;
            }
            Assignment given{{target, decl.domain[b]}};

            // Response part: the conditional of everything else given B=b.
            auto c1 = conditional(model, r1, rest, given);
            auto c0 = conditional(model, r0, rest, given);
            if (c1 && c0) {
                ++out.response_invariance.contexts;
                ++out.response_invariance.comparisons;
                double d = total_variation(*c1, *c0);
                out.response_invariance.max_discrepancy =
                    std::max(out.response_invariance.max_discrepancy, d);
                if (d > tol && !out.response_invariance.fails()) {
                    Witness w;
                    w.lhs = {r1, given};
                    w.rhs = {r0, given};
                    w.lhs_table = *c1;
                    w.rhs_table = *c0;
                    w.discrepancy = d;
                    w.detail = "conditional of the remaining variables given " + target + "=" + decl.domain[b];
                    out.response_invariance.witness = std::move(w);
                    out.response_invariance.outcome = Outcome::Fails;
                }
            }

            // Value part: the probability of B=b itself.
            DistributionTable m1 = marginal(model, r1, {target});
            DistributionTable m0 = marginal(model, r0, {target});
            ++out.value_match.contexts;
            ++out.value_match.comparisons;
            double d = std::abs(m1.probs[b] - m0.probs[b]);
            out.value_match.max_discrepancy = std::max(out.value_match.max_discrepancy, d);
            if (d > tol && !out.value_match.fails()) {
                Witness w;
                w.lhs = {r1, {}};
                w.rhs = {r0, {}};
                w.lhs_table = m1;
                w.rhs_table = m0;
                w.discrepancy = d;
                w.detail = "P(" + target + "=" + decl.domain[b] + ") shifts when its own indicator is set to that value";
                out.value_match.witness = std::move(w);
                out.value_match.outcome = Outcome::Fails;
            }
        }
    }
    if (!out.response_invariance.fails())
        out.response_invariance.outcome =
            out.response_invariance.contexts > 0 ? Outcome::Holds : Outcome::Vacuous;
    if (!out.value_match.fails())
        out.value_match.outcome = out.value_match.contexts > 0 ? Outcome::Holds : Outcome::Vacuous;

    ECIStatement eq2 = promotion_statement(model, {target}, {target}, false, {}, {}, {});
    out.full_invariance = evaluate(model, eq2, tol);
    return out;
}

Verdict check_conditioned_dc(const MultiRegimeModel& model, const std::vector<std::string>& targets,
                             const std::vector<std::string>& w, double tol) {
    TargetSplit split = split_targets(model, targets);
    require_vars(model, w);
    for (const auto& name : w)
        require(std::find(targets.begin(), targets.end(), name) == targets.end(),
                "conditioning set overlaps the target subset: " + name);

    std::vector<std::string> excluded = targets;
    excluded.insert(excluded.end(), w.begin(), w.end());
    std::vector<std::string> rest = complement_vars(model, excluded);

    std::vector<VariableDecl> wdecls;
    for (const auto& name : w) wdecls.push_back(model.variables[static_cast<std::size_t>(model.var_index(name))]);

    Verdict verdict;
    std::set<RegimeAssignment> missing;
    std::vector<int> wvals;

    for (ContextIter ctx(model, split.other_slots); !ctx.done(); ctx.advance()) {
        RegimeAssignment r0(model.targets.size(), kIdle);
        ctx.apply(r0);
        for (ValueIter bv(model, split.b_slots); !bv.done(); bv.advance()) {
            RegimeAssignment r1 = r0;
            for (std::size_t k = 0; k < split.b_slots.size(); ++k)
                r1[static_cast<std::size_t>(split.b_slots[k])] = bv.values()[k];
            if (!model.has_regime(r0) || !model.has_regime(r1)) {
                if (!model.has_regime(r0)) record_missing(verdict, missing, r0);
                if (!model.has_regime(r1)) record_missing(verdict, missing, r1);
                continue;
            }
            for (std::size_t wc = 0; wc < table_cells(wdecls); ++wc) {
                decode_cell(wdecls, wc, wvals);
                Assignment given;
                for (std::size_t k = 0; k < split.b_slots.size(); ++k) {
                    const auto& decl = model.target_decl(split.b_slots[k]);
                    given.emplace_back(decl.name, decl.domain[static_cast<std::size_t>(bv.values()[k])]);
                }
                for (std::size_t k = 0; k < wdecls.size(); ++k)
                    given.emplace_back(wdecls[k].name, wdecls[k].domain[static_cast<std::size_t>(wvals[k])]);

                auto c1 = conditional(model, r1, rest, given);
                auto c0 = conditional(model, r0, rest, given);
                if (!c1 || !c0) continue;
                ++verdict.contexts;
                ++verdict.comparisons;
                double d = total_variation(*c1, *c0);
                verdict.max_discrepancy = std::max(verdict.max_discrepancy, d);
                if (d > tol) {
                    Witness witness;
                    witness.lhs = {r1, given};
                    witness.rhs = {r0, given};
                    witness.lhs_table = *c1;
                    witness.rhs_table = *c0;
                    witness.discrepancy = d;
                    witness.detail = "conditional of the remaining variables differs under the set regime";
                    verdict.witness = std::move(witness);
                    verdict.outcome = Outcome::Fails;
                    return verdict;
                }
            }
        }
    }
    verdict.outcome = verdict.contexts > 0 ? Outcome::Holds : Outcome::Vacuous;
    return verdict;
}

const char* lemma_id_name(LemmaId id) {
    switch (id) {
        case LemmaId::DC_DEF: return "DC_DEF";
        case LemmaId::DC_PAIR: return "DC_PAIR";
        case LemmaId::EQ2_STRONG: return "EQ2_STRONG";
        case LemmaId::L1_SUBSET: return "L1_SUBSET";
        case LemmaId::L2_CONDITION: return "L2_CONDITION";
        case LemmaId::L3_PROMOTE: return "L3_PROMOTE";
        case LemmaId::C1_JOINT: return "C1_JOINT";
        case LemmaId::C2_CHECKED_CONTEXT: return "C2_CHECKED_CONTEXT";
        case LemmaId::L4_COND_PROMOTE: return "L4_COND_PROMOTE";
        case LemmaId::L5_INDUCTION: return "L5_INDUCTION";
        case LemmaId::C3_INTERLEAVE: return "C3_INTERLEAVE";
        case LemmaId::L6_PARENT_REDUCE: return "L6_PARENT_REDUCE";
    }
    return "?";
}

std::optional<LemmaId> lemma_id_from_string(const std::string& name) {
    for (LemmaId id : kAllLemmaIds) {
        if (name == lemma_id_name(id)) return id;
    }
    return std::nullopt;
}

std::string binding_label(const LemmaBinding& binding) {
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
        return s;
    };
    std::ostringstream out;
    if (!binding.b.empty()) out << "B={" << join(binding.b) << "}";
    if (!binding.d.empty()) out << " D={" << join(binding.d) << "}";
    if (!binding.checked_context.empty()) out << " E={" << join(binding.checked_context) << "}";
    if (!binding.w.empty()) out << " W={" << join(binding.w) << "}";
    if (!binding.y.empty()) out << " Y={" << join(binding.y) << "}";
    if (!binding.node.empty()) out << " node=" << binding.node;
    std::string s = out.str();
    return s.empty() ? "(whole model)" : s;
}

ImplicationReport check_lemma(const MultiRegimeModel& model, LemmaId id, const LemmaBinding& binding,
                              double tol) {
    ImplicationReport report;
    report.id = id;
    report.binding = binding;
    report.variation_independent = is_variation_independent(model);

    std::vector<Verdict> premise_parts, conclusion_parts;

    auto add_dc_premise = [&] {
        for (const auto& t : model.targets) {
            Verdict v = check_distributional_consistency(model, t, tol);
            v.detail = "distributional consistency of " + t;
            report.premise_statements.push_back(v.detail);
            premise_parts.push_back(std::move(v));
        }
    };
    auto add_eci = [&](std::vector<Verdict>& parts, std::vector<std::string>& texts,
                       const ECIStatement& stmt) {
        texts.push_back(format_statement(stmt));
        parts.push_back(evaluate(model, stmt, tol));
    };

    switch (id) {
        case LemmaId::DC_DEF: {
            require(binding.b.size() == 1, "needs one target");
            require_targets(model, binding.b);
            Verdict v = check_distributional_consistency(model, binding.b[0], tol);
            v.detail = "distributional consistency of " + binding.b[0];
            report.conclusion_statements.push_back(v.detail);
            conclusion_parts.push_back(std::move(v));
            break;
        }
        case LemmaId::DC_PAIR: {
            require(binding.b.size() == 1, "needs one target");
            require_targets(model, binding.b);
            Verdict v = check_distributional_consistency(model, binding.b[0], tol);
            v.detail = "distributional consistency of " + binding.b[0];
            report.premise_statements.push_back(v.detail);
            premise_parts.push_back(std::move(v));
            DcDecomposition dec = decompose_dc(model, binding.b[0], tol);
            dec.response_invariance.detail = "response invariance for " + binding.b[0];
            dec.value_match.detail = "value match for " + binding.b[0];
            report.conclusion_statements.push_back(dec.response_invariance.detail);
            report.conclusion_statements.push_back(dec.value_match.detail);
            conclusion_parts.push_back(std::move(dec.response_invariance));
            conclusion_parts.push_back(std::move(dec.value_match));
            break;
        }
        case LemmaId::EQ2_STRONG: {
            require(binding.b.size() == 1, "needs one target");
            require_targets(model, binding.b);
            DcDecomposition dec = decompose_dc(model, binding.b[0], tol);
            report.premise_statements.push_back(dec.full_invariance.detail);
            premise_parts.push_back(std::move(dec.full_invariance));
            dec.value_match.detail = "value match for " + binding.b[0];
            report.conclusion_statements.push_back(dec.value_match.detail);
            conclusion_parts.push_back(std::move(dec.value_match));
            break;
        }
        case LemmaId::L1_SUBSET: {
            require(!binding.b.empty(), "needs a target subset");
            require_targets(model, binding.b);
            add_dc_premise();
            Verdict direct = check_dc_subset(model, binding.b, tol);
            Verdict chain = check_dc_subset_stepwise(model, binding.b, tol);
            report.induction_agrees = direct.outcome == chain.outcome;
            direct.detail = "subset consistency of " + binding_label(binding);
            report.conclusion_statements.push_back(direct.detail);
            conclusion_parts.push_back(std::move(direct));
            break;
        }
        case LemmaId::L2_CONDITION: {
            require(!binding.b.empty(), "needs a target subset");
            require_targets(model, binding.b);
            require_vars(model, binding.w);
            require(disjoint(binding.b, binding.w), "conditioning set must avoid the target subset");
            add_dc_premise();
            Verdict v = check_conditioned_dc(model, binding.b, binding.w, tol);
            v.detail = "conditioned consistency of " + binding_label(binding);
            report.conclusion_statements.push_back(v.detail);
            conclusion_parts.push_back(std::move(v));
            break;
        }
        case LemmaId::L3_PROMOTE: {
            require(!binding.b.empty(), "needs a target subset");
            require_targets(model, binding.b);
            require_vars(model, binding.w);
            require(contains_all(binding.w, binding.b), "W must contain the target subset");
            add_dc_premise();
            add_eci(premise_parts, report.premise_statements,
                    promotion_statement(model, binding.w, binding.b, true, {}, {}, {}));
            add_eci(conclusion_parts, report.conclusion_statements,
                    promotion_statement(model, binding.w, binding.b, false, {}, {}, {}));
            break;
        }
        case LemmaId::C1_JOINT: {
            require(!binding.b.empty() && !binding.d.empty(), "needs two target subsets");
            require_targets(model, binding.b);
            require_targets(model, binding.d);
            require(disjoint(binding.b, binding.d), "the two target subsets must be disjoint");
            require_vars(model, binding.w);
            require(contains_all(binding.w, binding.b), "W must contain the first subset");
            add_dc_premise();
            add_eci(premise_parts, report.premise_statements,
                    promotion_statement(model, binding.w, binding.b, true, binding.d, {}, {}));
            add_eci(conclusion_parts, report.conclusion_statements,
                    promotion_statement(model, binding.w, binding.b, false, binding.d, {}, {}));
            break;
        }
        case LemmaId::C2_CHECKED_CONTEXT: {
            require(!binding.b.empty(), "needs a target subset");
            require(!binding.checked_context.empty(), "needs a checked context subset");
            require_targets(model, binding.b);
            require_targets(model, binding.checked_context);
            require(disjoint(binding.b, binding.checked_context), "checked context must avoid the subset");
            require_vars(model, binding.w);
            require(contains_all(binding.w, binding.b), "W must contain the target subset");
            add_dc_premise();
            add_eci(premise_parts, report.premise_statements,
                    promotion_statement(model, binding.w, binding.b, true, {}, binding.checked_context, {}));
            add_eci(conclusion_parts, report.conclusion_statements,
                    promotion_statement(model, binding.w, binding.b, false, {}, binding.checked_context, {}));
            break;
        }
        case LemmaId::L4_COND_PROMOTE: {
            require(!binding.b.empty(), "needs a target subset");
            require_targets(model, binding.b);
            require_vars(model, binding.w);
            require_vars(model, binding.y);
            require(!binding.y.empty(), "needs a left set");
            require(contains_all(binding.w, binding.b), "W must contain the target subset");
            require(disjoint(binding.y, binding.w), "left set and W must be disjoint");
            add_dc_premise();
            add_eci(premise_parts, report.premise_statements,
                    promotion_statement(model, binding.y, binding.b, true, {}, {}, binding.w));
            add_eci(conclusion_parts, report.conclusion_statements,
                    promotion_statement(model, binding.y, binding.b, false, {}, {}, binding.w));
            break;
        }
        case LemmaId::L5_INDUCTION: {
            const AugmentedDAG& dag = require_dag(model, binding);
            int k = static_cast<int>(dag.targets.size());
            require(k > 0, "dag has no targets");
            add_dc_premise();
            for (int r = 1; r <= k; ++r)
                add_eci(premise_parts, report.premise_statements, local_markov_target(dag, r));
            for (int r = 1; r <= k; ++r)
                add_eci(conclusion_parts, report.conclusion_statements, tail_irrelevance(dag, r));
            break;
        }
        case LemmaId::C3_INTERLEAVE: {
            const AugmentedDAG& dag = require_dag(model, binding);
            require(!binding.node.empty(), "needs a node");
            require(dag.node_index(binding.node) >= 0, "unknown node " + binding.node);
            require(!dag.is_target(binding.node), "node must be a non-target");
            add_dc_premise();
            int k = static_cast<int>(dag.targets.size());
            for (int r = 1; r <= k; ++r)
                add_eci(premise_parts, report.premise_statements, local_markov_target(dag, r));
            add_eci(conclusion_parts, report.conclusion_statements,
                    node_tail_irrelevance(dag, binding.node));
            break;
        }
        case LemmaId::L6_PARENT_REDUCE: {
            const AugmentedDAG& dag = require_dag(model, binding);
            require(!binding.node.empty(), "needs a node");
            require(dag.node_index(binding.node) >= 0, "unknown node " + binding.node);
            require(!dag.is_target(binding.node), "node must be a non-target");
            add_dc_premise();
            add_eci(premise_parts, report.premise_statements, local_markov_node(dag, binding.node));
            add_eci(premise_parts, report.premise_statements,
                    conditioned_tail_irrelevance(dag, binding.node));
            add_eci(conclusion_parts, report.conclusion_statements, parent_reduction(dag, binding.node));
            break;
        }
    }

    report.premise = combine_conjunction(premise_parts);
    report.conclusion = combine_conjunction(conclusion_parts);
    report.implication_ok = !(report.premise.holds() && report.conclusion.fails());
    return report;
}

namespace {

std::vector<std::vector<std::string>> subsets_up_to(const std::vector<std::string>& pool, int max_size,
                                                    bool include_empty) {
    std::vector<std::vector<std::string>> out;
    int n = static_cast<int>(pool.size());
    for (unsigned mask = include_empty ? 0 : 1; mask < (1u << n); ++mask) {
        if (static_cast<int>(__builtin_popcount(mask)) > max_size) continue;
        std::vector<std::string> set;
        for (int k = 0; k < n; ++k) {
            if (mask & (1u << k)) set.push_back(pool[static_cast<std::size_t>(k)]);
        }
        out.push_back(std::move(set));
    }
    return out;
}

std::vector<std::string> set_union(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    for (const auto& s : b) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

std::vector<std::string> set_minus(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    for (const auto& s : a) {
        if (std::find(b.begin(), b.end(), s) == b.end()) out.push_back(s);
    }
    return out;
}

}  // namespace

std::vector<LemmaBinding> enumerate_bindings(const MultiRegimeModel& model, LemmaId id,
                                             const AugmentedDAG* dag) {
    std::vector<LemmaBinding> out;
    std::vector<std::string> vars;
    for (const auto& v : model.variables) vars.push_back(v.name);
    const std::vector<std::string>& targets = model.targets;

    auto with_dag = [&](LemmaBinding b) {
        if (dag) b.dag = *dag;
        return b;
    };

    switch (id) {
        case LemmaId::DC_DEF:
        case LemmaId::DC_PAIR:
        case LemmaId::EQ2_STRONG:
            for (const auto& t : targets) {
                LemmaBinding b;
                b.b = {t};
                out.push_back(std::move(b));
            }
            break;
        case LemmaId::L1_SUBSET:
            for (auto& bs : subsets_up_to(targets, 3, false)) {
                LemmaBinding b;
                b.b = std::move(bs);
                out.push_back(std::move(b));
            }
            break;
        case LemmaId::L2_CONDITION:
            for (const auto& bs : subsets_up_to(targets, 3, false)) {
                for (auto& ws : subsets_up_to(set_minus(vars, bs), 2, true)) {
                    LemmaBinding b;
                    b.b = bs;
                    b.w = std::move(ws);
                    out.push_back(std::move(b));
                }
            }
            break;
        case LemmaId::L3_PROMOTE:
            for (const auto& bs : subsets_up_to(targets, 3, false)) {
                for (const auto& extra : subsets_up_to(set_minus(vars, bs), 2, true)) {
                    LemmaBinding b;
                    b.b = bs;
                    b.w = set_union(bs, extra);
                    out.push_back(std::move(b));
                }
            }
            break;
        case LemmaId::C1_JOINT:
            for (const auto& bs : subsets_up_to(targets, 2, false)) {
                for (const auto& ds : subsets_up_to(set_minus(targets, bs), 2, false)) {
                    for (const auto& extra : subsets_up_to(set_minus(vars, bs), 1, true)) {
                        LemmaBinding b;
                        b.b = bs;
                        b.d = ds;
                        b.w = set_union(bs, extra);
                        out.push_back(std::move(b));
                    }
                }
            }
            break;
        case LemmaId::C2_CHECKED_CONTEXT:
            for (const auto& bs : subsets_up_to(targets, 2, false)) {
                for (const auto& es : subsets_up_to(set_minus(targets, bs), 2, false)) {
                    for (const auto& extra : subsets_up_to(set_minus(vars, bs), 1, true)) {
                        LemmaBinding b;
                        b.b = bs;
                        b.checked_context = es;
                        b.w = set_union(bs, extra);
                        out.push_back(std::move(b));
                    }
                }
            }
            break;
        case LemmaId::L4_COND_PROMOTE:
            for (const auto& bs : subsets_up_to(targets, 2, false)) {
                for (const auto& extra : subsets_up_to(set_minus(vars, bs), 1, true)) {
                    auto w = set_union(bs, extra);
                    for (auto& ys : subsets_up_to(set_minus(vars, w), 2, false)) {
                        LemmaBinding b;
                        b.b = bs;
                        b.w = w;
                        b.y = std::move(ys);
                        out.push_back(std::move(b));
                    }
                }
            }
            break;
        case LemmaId::L5_INDUCTION:
            if (dag && !dag->targets.empty()) out.push_back(with_dag({}));
            break;
        case LemmaId::C3_INTERLEAVE:
        case LemmaId::L6_PARENT_REDUCE:
            if (dag && !dag->targets.empty()) {
                for (const auto& n : dag->nodes) {
                    if (dag->is_target(n)) continue;
                    LemmaBinding b;
                    b.node = n;
                    out.push_back(with_dag(std::move(b)));
                }
            }
            break;
    }
    if (dag) {
        for (auto& b : out) {
            if (!b.dag) b.dag = *dag;
        }
    }
    return out;
}

long SuiteReport::total_implication_failures() const {
    long total = 0;
    for (const auto& [id, counts] : lemmas) total += counts.implication_failures;
    return total;
}

SuiteReport run_suite(const GeneratorConfig& config, const std::vector<LemmaId>& ids, int trials,
                      std::uint64_t seed, double tol) {
    if (trials < 1) throw Error("run_suite: trials must be >= 1");
    if (ids.empty()) throw Error("run_suite: lemma list must not be empty");

    SuiteReport report;
    report.config = config;
    report.seed = seed;
    report.trials = trials;
    report.tol = tol;
    for (LemmaId id : ids) report.lemmas.emplace_back(id, LemmaCounts{});

    Rng root(seed);
    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t trial_seed = root.fork(static_cast<std::uint64_t>(trial) + 1);
        StructuralSpec spec = random_structural_spec(config.shape, trial_seed);
        MultiRegimeModel model;
        std::optional<AugmentedDAG> dag;
        if (config.kind == GeneratorConfig::Kind::Structural) {
            model = generate_structural_model(spec);
            dag = dag_of(spec);
        } else {
            model = generate_random_model(spec.variables, spec.targets,
                                          full_product_regimes(spec.variables, spec.targets), trial_seed);
        }

        for (auto& [id, counts] : report.lemmas) {
            for (const auto& binding : enumerate_bindings(model, id, dag ? &*dag : nullptr)) {
                ImplicationReport rep = check_lemma(model, id, binding, tol);
                ++counts.instances;
                switch (rep.premise.outcome) {
                    case Outcome::Holds: ++counts.premise_holds; break;
                    case Outcome::Vacuous: ++counts.premise_vacuous; break;
                    case Outcome::Fails: ++counts.premise_fails; break;
                }
                if (rep.conclusion.holds()) ++counts.conclusion_holds;
                if (!rep.implication_ok) {
                    ++counts.implication_failures;
                    SuiteFailure f;
                    f.trial = trial;
                    f.trial_seed = trial_seed;
                    f.id = id;
                    f.binding = binding_label(binding);
                    f.premise_detail = rep.premise.detail;
                    f.conclusion_detail = rep.conclusion.detail;
                    f.discrepancy = rep.conclusion.witness ? rep.conclusion.witness->discrepancy : 0.0;
                    f.variation_independent = rep.variation_independent;
                    report.failures.push_back(std::move(f));
                }
            }
        }
    }
    return report;
}

}  // namespace eciv
