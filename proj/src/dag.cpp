#include "eciv/dag.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "eciv/evaluate.hpp"

namespace eciv {

namespace {

// Internal graph with indicators materialized as nodes after the stochastic
// ones.
struct Graph {
    std::vector<std::string> names;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;
    std::map<std::string, int> index;

    int lookup(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end()) throw Error("unknown node: " + name);
        return it->second;
    }
};

Graph build_graph(const AugmentedDAG& dag) {
    Graph g;
    for (const auto& n : dag.nodes) g.names.push_back(n);
    for (const auto& t : dag.targets) g.names.push_back(indicator_name(t));
    g.parents.resize(g.names.size());
    g.children.resize(g.names.size());
    for (std::size_t i = 0; i < g.names.size(); ++i) g.index[g.names[i]] = static_cast<int>(i);

    auto add_edge = [&](int from, int to) {
        auto& ch = g.children[static_cast<std::size_t>(from)];
        if (std::find(ch.begin(), ch.end(), to) == ch.end()) {
            ch.push_back(to);
            g.parents[static_cast<std::size_t>(to)].push_back(from);
        }
    };
    for (const auto& [from, to] : dag.edges) add_edge(g.lookup(from), g.lookup(to));
    for (const auto& t : dag.targets) add_edge(g.lookup(indicator_name(t)), g.lookup(t));
    return g;
}

std::vector<int> target_positions(const AugmentedDAG& dag) {
    std::vector<int> pos;
    for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
        if (dag.is_target(dag.nodes[i])) pos.push_back(static_cast<int>(i));
    }
    return pos;
}

void append_checked(ECIStatement& stmt, const AugmentedDAG& dag, const std::vector<int>& positions) {
    for (int p : positions)
        stmt.given_indicators.push_back({dag.nodes[static_cast<std::size_t>(p)], IndicatorMode::Checked, ""});
}

}  // namespace

int AugmentedDAG::node_index(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == name) return static_cast<int>(i);
    }
    return -1;
}

bool AugmentedDAG::is_target(const std::string& name) const {
    return std::find(targets.begin(), targets.end(), name) != targets.end();
}

std::vector<int> AugmentedDAG::parents_of(int node) const {
    std::vector<int> out;
    const std::string& name = nodes.at(static_cast<std::size_t>(node));
    for (const auto& [from, to] : edges) {
        if (to != name) continue;
        int f = node_index(from);
        if (f >= 0) out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Diagnostic> validate_dag(const AugmentedDAG& dag) {
    std::vector<Diagnostic> out;
    std::set<std::string> seen;
    for (const auto& n : dag.nodes) {
        if (!seen.insert(n).second) out.push_back({"duplicate-node", n, "node declared twice"});
    }
    for (const auto& t : dag.targets) {
        if (!seen.count(t)) out.push_back({"unknown-target", t, "target is not a declared node"});
    }
    std::set<std::string> indicator_edge_seen;
    for (const auto& [from, to] : dag.edges) {
        bool from_ind = from.rfind("F(", 0) == 0;
        bool to_ind = to.rfind("F(", 0) == 0;
        if (to_ind) {
            out.push_back({"indicator-in-degree", to, "indicator nodes cannot have parents"});
            continue;
        }
        if (from_ind) {
            std::string target = from.substr(2, from.size() - 3);
            if (std::find(dag.targets.begin(), dag.targets.end(), target) == dag.targets.end()) {
                out.push_back({"unknown-indicator", from, "indicator of an undeclared target"});
            } else if (to != target) {
                out.push_back({"indicator-out-degree", from, "indicator's single edge must enter its target"});
            } else if (!indicator_edge_seen.insert(from).second) {
                out.push_back({"indicator-out-degree", from, "indicator listed with more than one edge"});
            }
            continue;
        }
        if (!seen.count(from)) out.push_back({"unknown-node", from, "edge endpoint is not declared"});
        if (!seen.count(to)) out.push_back({"unknown-node", to, "edge endpoint is not declared"});
    }
    if (!out.empty()) return out;

    // The declared order must be topological for the stochastic edges.
    for (const auto& [from, to] : dag.edges) {
        if (from.rfind("F(", 0) == 0) continue;
        if (dag.node_index(from) >= dag.node_index(to))
            out.push_back({"order", from + "->" + to, "edge violates the declared topological order (or forms a cycle)"});
    }
    return out;
}

bool d_separated(const AugmentedDAG& dag, const std::vector<std::string>& x,
                 const std::vector<std::string>& y, const std::vector<std::string>& z) {
    Graph g = build_graph(dag);
    auto resolve = [&](const std::vector<std::string>& names) {
        std::set<int> out;
        for (const auto& n : names) out.insert(g.lookup(n));
        return out;
    };
    std::set<int> xs = resolve(x), ys = resolve(y), zs = resolve(z);
    for (int v : xs) {
        if (ys.count(v) || zs.count(v)) throw Error("d_separated: sets must be disjoint");
    }
    for (int v : ys) {
        if (zs.count(v)) throw Error("d_separated: sets must be disjoint");
    }

    // Ancestors of Z (including Z itself).
    std::set<int> anc_z = zs;
    std::deque<int> queue(zs.begin(), zs.end());
    while (!queue.empty()) {
        int n = queue.front();
        queue.pop_front();
        for (int p : g.parents[static_cast<std::size_t>(n)]) {
            if (anc_z.insert(p).second) queue.push_back(p);
        }
    }

    // Reachability along active trails; state = (node, entered-from-child?).
    enum { FromChild = 0, FromParent = 1 };
    std::set<std::pair<int, int>> visited;
    std::deque<std::pair<int, int>> frontier;
    for (int v : xs) frontier.emplace_back(v, FromChild);
    while (!frontier.empty()) {
        auto [n, dir] = frontier.front();
        frontier.pop_front();
        if (!visited.emplace(n, dir).second) continue;
        bool in_z = zs.count(n) > 0;
        if (!in_z && ys.count(n)) return false;
        if (dir == FromChild && !in_z) {
            for (int p : g.parents[static_cast<std::size_t>(n)]) frontier.emplace_back(p, FromChild);
            for (int c : g.children[static_cast<std::size_t>(n)]) frontier.emplace_back(c, FromParent);
        } else if (dir == FromParent) {
            if (!in_z) {
                for (int c : g.children[static_cast<std::size_t>(n)]) frontier.emplace_back(c, FromParent);
            }
            if (anc_z.count(n)) {
                for (int p : g.parents[static_cast<std::size_t>(n)]) frontier.emplace_back(p, FromChild);
            }
        }
    }
    return true;
}

ECIStatement local_markov_target(const AugmentedDAG& dag, int r) {
    auto tpos = target_positions(dag);
    if (r < 1 || static_cast<std::size_t>(r) > tpos.size()) throw Error("target block out of range");
    int pos = tpos[static_cast<std::size_t>(r - 1)];

    ECIStatement stmt;
    for (int i = 0; i <= pos; ++i) stmt.left.push_back(dag.nodes[static_cast<std::size_t>(i)]);
    stmt.group.push_back({dag.nodes[static_cast<std::size_t>(pos)], IndicatorMode::Checked, ""});
    std::vector<int> others;
    for (std::size_t j = 0; j < tpos.size(); ++j) {
        if (static_cast<int>(j) != r - 1) others.push_back(tpos[j]);
    }
    append_checked(stmt, dag, others);
    return stmt;
}

ECIStatement local_markov_node(const AugmentedDAG& dag, const std::string& node) {
    int pos = dag.node_index(node);
    if (pos < 0) throw Error("unknown node: " + node);
    if (dag.is_target(node)) throw Error("per-node statement applies to non-target nodes: " + node);
    auto pa = dag.parents_of(pos);
    auto tpos = target_positions(dag);

    ECIStatement stmt;
    stmt.left.push_back(node);
    std::vector<int> pa_targets, later_targets;
    for (int t : tpos) {
        bool is_parent = std::binary_search(pa.begin(), pa.end(), t);
        if (t < pos && !is_parent)
            stmt.group.push_back({dag.nodes[static_cast<std::size_t>(t)], IndicatorMode::Checked, ""});
        else if (t < pos)
            pa_targets.push_back(t);
        else
            later_targets.push_back(t);
    }
    for (int i = 0; i < pos; ++i) stmt.given_vars.push_back(dag.nodes[static_cast<std::size_t>(i)]);
    append_checked(stmt, dag, pa_targets);
    append_checked(stmt, dag, later_targets);
    return stmt;
}

ECIStatement tail_irrelevance(const AugmentedDAG& dag, int r) {
    auto tpos = target_positions(dag);
    if (r < 1 || static_cast<std::size_t>(r) > tpos.size()) throw Error("target block out of range");
    int pos = tpos[static_cast<std::size_t>(r - 1)];

    ECIStatement stmt;
    for (int i = 0; i <= pos; ++i) stmt.left.push_back(dag.nodes[static_cast<std::size_t>(i)]);
    std::vector<int> earlier;
    for (std::size_t j = 0; j < tpos.size(); ++j) {
        if (static_cast<int>(j) >= r - 1)
            stmt.group.push_back({dag.nodes[static_cast<std::size_t>(tpos[j])], IndicatorMode::Full, ""});
        else
            earlier.push_back(tpos[j]);
    }
    append_checked(stmt, dag, earlier);
    return stmt;
}

ECIStatement node_tail_irrelevance(const AugmentedDAG& dag, const std::string& node) {
    int pos = dag.node_index(node);
    if (pos < 0) throw Error("unknown node: " + node);
    if (dag.is_target(node)) throw Error("per-node statement applies to non-target nodes: " + node);
    auto tpos = target_positions(dag);

    ECIStatement stmt;
    for (int i = 0; i < pos; ++i) stmt.left.push_back(dag.nodes[static_cast<std::size_t>(i)]);
    stmt.left.push_back(node);
    std::vector<int> earlier;
    for (int t : tpos) {
        if (t > pos)
            stmt.group.push_back({dag.nodes[static_cast<std::size_t>(t)], IndicatorMode::Full, ""});
        else
            earlier.push_back(t);
    }
    append_checked(stmt, dag, earlier);
    return stmt;
}

ECIStatement conditioned_tail_irrelevance(const AugmentedDAG& dag, const std::string& node) {
    int pos = dag.node_index(node);
    if (pos < 0) throw Error("unknown node: " + node);
    if (dag.is_target(node)) throw Error("per-node statement applies to non-target nodes: " + node);
    auto tpos = target_positions(dag);

    ECIStatement stmt;
    stmt.left.push_back(node);
    std::vector<int> earlier;
    for (int t : tpos) {
        if (t > pos)
            stmt.group.push_back({dag.nodes[static_cast<std::size_t>(t)], IndicatorMode::Full, ""});
        else
            earlier.push_back(t);
    }
    for (int i = 0; i < pos; ++i) stmt.given_vars.push_back(dag.nodes[static_cast<std::size_t>(i)]);
    append_checked(stmt, dag, earlier);
    return stmt;
}

ECIStatement parent_reduction(const AugmentedDAG& dag, const std::string& node) {
    int pos = dag.node_index(node);
    if (pos < 0) throw Error("unknown node: " + node);
    if (dag.is_target(node)) throw Error("per-node statement applies to non-target nodes: " + node);
    auto pa = dag.parents_of(pos);
    auto tpos = target_positions(dag);

    ECIStatement stmt;
    stmt.left.push_back(node);
    std::vector<int> pa_targets;
    for (int t : tpos) {
        if (std::binary_search(pa.begin(), pa.end(), t))
            pa_targets.push_back(t);
        else
            stmt.group.push_back({dag.nodes[static_cast<std::size_t>(t)], IndicatorMode::Full, ""});
    }
    for (int i = 0; i < pos; ++i) stmt.given_vars.push_back(dag.nodes[static_cast<std::size_t>(i)]);
    append_checked(stmt, dag, pa_targets);
    return stmt;
}

ECIStatement unconditioned_nonparent_statement(const AugmentedDAG& dag, const std::string& node) {
    int pos = dag.node_index(node);
    if (pos < 0) throw Error("unknown node: " + node);
    if (dag.is_target(node)) throw Error("per-node statement applies to non-target nodes: " + node);
    auto pa = dag.parents_of(pos);
    auto tpos = target_positions(dag);

    ECIStatement stmt;
    stmt.left.push_back(node);
    std::vector<int> pa_targets;
    for (int t : tpos) {
        if (t >= pos) continue;  // later indicators stay implicitly idle
        if (std::binary_search(pa.begin(), pa.end(), t))
            pa_targets.push_back(t);
        else
            stmt.group.push_back({dag.nodes[static_cast<std::size_t>(t)], IndicatorMode::Checked, ""});
    }
    append_checked(stmt, dag, pa_targets);
    return stmt;
}

std::vector<ECIStatement> local_markov_statements(const AugmentedDAG& dag) {
    std::vector<ECIStatement> out;
    auto tpos = target_positions(dag);
    if (tpos.empty()) return out;
    for (std::size_t r = 1; r <= tpos.size(); ++r)
        out.push_back(local_markov_target(dag, static_cast<int>(r)));
    for (const auto& n : dag.nodes) {
        if (!dag.is_target(n)) out.push_back(local_markov_node(dag, n));
    }
    return out;
}

std::vector<Verdict> verify_local_markov(const MultiRegimeModel& model, const AugmentedDAG& dag,
                                         double tol) {
    for (const auto& n : dag.nodes) {
        if (model.var_index(n) < 0) throw Error("model lacks dag node: " + n);
    }
    std::set<std::string> mt(model.targets.begin(), model.targets.end());
    std::set<std::string> dt(dag.targets.begin(), dag.targets.end());
    if (mt != dt) throw Error("model and dag disagree on the target set");

    std::vector<Verdict> out;
    for (const auto& stmt : local_markov_statements(dag)) out.push_back(evaluate(model, stmt, tol));
    return out;
}

AugmentedDAG dag_of(const StructuralSpec& spec) {
    AugmentedDAG dag;
    for (const auto& v : spec.variables) dag.nodes.push_back(v.name);
    dag.targets = spec.targets;
    for (std::size_t i = 0; i < spec.parents.size(); ++i) {
        for (int p : spec.parents[i])
            dag.edges.emplace_back(spec.variables[static_cast<std::size_t>(p)].name, spec.variables[i].name);
    }
    return dag;
}

MultiRegimeModel expand_itt(const StructuralSpec& spec) { return generate_structural_model(spec); }

std::vector<IndepTriple> implied_independencies(const AugmentedDAG& dag, int max_conditioning) {
    if (max_conditioning < 0) throw Error("max_conditioning must be >= 0");
    std::vector<IndepTriple> out;
    int n = static_cast<int>(dag.nodes.size());
    for (int xi = 0; xi < n; ++xi) {
        for (int yi = xi + 1; yi < n; ++yi) {
            std::vector<int> rest;
            for (int k = 0; k < n; ++k) {
                if (k != xi && k != yi) rest.push_back(k);
            }
            int m = static_cast<int>(rest.size());
            for (std::size_t mask = 0; mask < (1u << m); ++mask) {
                if (static_cast<int>(__builtin_popcount(static_cast<unsigned>(mask))) > max_conditioning)
                    continue;
                std::vector<std::string> z;
                for (int k = 0; k < m; ++k) {
                    if (mask & (1u << k)) z.push_back(dag.nodes[static_cast<std::size_t>(rest[static_cast<std::size_t>(k)])]);
                }
                if (d_separated(dag, {dag.nodes[static_cast<std::size_t>(xi)]},
                                {dag.nodes[static_cast<std::size_t>(yi)]}, z)) {
                    out.push_back({dag.nodes[static_cast<std::size_t>(xi)], dag.nodes[static_cast<std::size_t>(yi)], z});
                }
            }
        }
    }
    return out;
}

Verdict verify_triple(const MultiRegimeModel& model, const IndepTriple& triple, double tol) {
    Verdict combined;
    combined.outcome = Outcome::Vacuous;
    for (const auto& entry : model.regimes) {
        Verdict v = check_ci(model, entry.first, {triple.x}, {triple.y}, triple.z, tol);
        combined.contexts += v.contexts;
        combined.comparisons += v.comparisons;
        combined.max_discrepancy = std::max(combined.max_discrepancy, v.max_discrepancy);
        if (v.fails()) {
            combined.outcome = Outcome::Fails;
            combined.witness = v.witness;
            return combined;
        }
        if (v.holds()) combined.outcome = Outcome::Holds;
    }
    return combined;
}

}  // namespace eciv
