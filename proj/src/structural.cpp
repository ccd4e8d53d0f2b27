#include "eciv/structural.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "eciv/rng.hpp"

namespace eciv {

namespace {

constexpr double kRowTol = 1e-12;

std::size_t parent_rows(const StructuralSpec& spec, std::size_t i) {
    std::size_t rows = 1;
    for (int p : spec.parents[i]) rows *= spec.variables[static_cast<std::size_t>(p)].domain.size();
    return rows;
}

// Distribution with all entries bounded away from zero, so conditioning
// contexts in generated models stay well defined.
std::vector<double> random_row(Rng& rng, std::size_t n) {
    std::vector<double> row(n);
    double sum = 0.0;
    for (double& x : row) {
        x = 0.05 + 0.95 * rng.uniform();
        sum += x;
    }
    for (double& x : row) x /= sum;
    return row;
}

}  // namespace

std::vector<Diagnostic> validate_spec(const StructuralSpec& spec) {
    std::vector<Diagnostic> out;
    std::set<std::string> seen;
    for (const auto& v : spec.variables) {
        if (!seen.insert(v.name).second)
            out.push_back({"duplicate-variable", v.name, "variable name declared twice"});
        if (v.domain.size() < 2)
            out.push_back({"domain-size", v.name, "domain must list at least two values"});
    }
    for (const auto& t : spec.targets) {
        if (!seen.count(t)) out.push_back({"unknown-target", t, "target is not a declared variable"});
    }
    if (spec.parents.size() != spec.variables.size() || spec.cpt.size() != spec.variables.size()) {
        out.push_back({"arity", "spec", "parents and cpt must list one entry per variable"});
        return out;
    }
    for (std::size_t i = 0; i < spec.variables.size(); ++i) {
        const std::string& where = spec.variables[i].name;
        for (int p : spec.parents[i]) {
            if (p < 0 || static_cast<std::size_t>(p) >= i)
                out.push_back({"parent-order", where, "parents must precede the variable"});
        }
        std::size_t d = spec.variables[i].domain.size();
        std::size_t rows = parent_rows(spec, i);
        if (spec.cpt[i].size() != rows * d) {
            out.push_back({"cpt-size", where, "conditional table length does not match parents and domain"});
            continue;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            double sum = 0.0;
            bool neg = false;
            for (std::size_t k = 0; k < d; ++k) {
                double p = spec.cpt[i][r * d + k];
                if (p < -kRowTol) neg = true;
                sum += p;
            }
            if (neg) out.push_back({"negative-entry", where, "conditional row has a negative entry"});
            if (std::abs(sum - 1.0) > kRowTol)
                out.push_back({"row-normalization", where, "conditional row must sum to 1"});
        }
    }
    return out;
}

std::vector<RegimeAssignment> full_product_regimes(const std::vector<VariableDecl>& variables,
                                                   const std::vector<std::string>& targets) {
    std::vector<std::size_t> sizes;
    for (const auto& t : targets) {
        auto it = std::find_if(variables.begin(), variables.end(),
                               [&](const VariableDecl& v) { return v.name == t; });
        if (it == variables.end()) throw Error("unknown target: " + t);
        sizes.push_back(it->domain.size() + 1);  // idle + each value
    }
    std::vector<RegimeAssignment> out;
    RegimeAssignment cur(targets.size(), kIdle);
    std::size_t total = 1;
    for (std::size_t s : sizes) total *= s;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        for (std::size_t t = targets.size(); t-- > 0;) {
            cur[t] = static_cast<int>(rest % sizes[t]) - 1;
            rest /= sizes[t];
        }
        out.push_back(cur);
    }
    std::sort(out.begin(), out.end());
    return out;
}

MultiRegimeModel generate_structural_model(const StructuralSpec& spec) {
    auto problems = validate_spec(spec);
    if (!problems.empty())
        throw Error("invalid structural spec: " + problems.front().location + ": " + problems.front().message);

    MultiRegimeModel model;
    model.variables = spec.variables;
    model.targets = spec.targets;

    std::vector<int> target_of(spec.variables.size(), -1);  // variable -> target slot
    for (std::size_t t = 0; t < spec.targets.size(); ++t) {
        for (std::size_t i = 0; i < spec.variables.size(); ++i) {
            if (spec.variables[i].name == spec.targets[t]) target_of[i] = static_cast<int>(t);
        }
    }

    std::size_t cells = table_cells(spec.variables);
    std::vector<int> values;
    for (const auto& regime : full_product_regimes(spec.variables, spec.targets)) {
        DistributionTable table;
        table.vars = spec.variables;
        table.probs.assign(cells, 0.0);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            decode_cell(spec.variables, cell, values);
            double p = 1.0;
            for (std::size_t i = 0; i < spec.variables.size() && p > 0.0; ++i) {
                std::size_t row = 0;
                for (std::size_t k = 0; k < spec.parents[i].size(); ++k) {
                    auto parent = static_cast<std::size_t>(spec.parents[i][k]);
                    int received = values[parent];
                    int tslot = target_of[parent];
                    if (tslot >= 0 && regime[static_cast<std::size_t>(tslot)] != kIdle &&
                        !spec.reads_intention(i, k)) {
                        received = regime[static_cast<std::size_t>(tslot)];
                    }
                    row = row * spec.variables[parent].domain.size() + static_cast<std::size_t>(received);
                }
                std::size_t d = spec.variables[i].domain.size();
                p *= spec.cpt[i][row * d + static_cast<std::size_t>(values[i])];
            }
            table.probs[cell] = p;
        }
        model.regimes.emplace(regime, std::move(table));
    }
    return model;
}

StructuralSpec random_structural_spec(const StructuralShape& shape, std::uint64_t seed) {
    if (shape.num_vars < 1 || shape.num_targets < 0 || shape.num_targets > shape.num_vars)
        throw Error("random_structural_spec: bad shape");
    Rng rng(seed);

    StructuralSpec spec;
    for (int i = 0; i < shape.num_vars; ++i) {
        VariableDecl v;
        v.name = "V" + std::to_string(i + 1);
        int d = 2 + (shape.max_domain > 2 ? rng.uniform_int(shape.max_domain - 1) : 0);
        for (int k = 0; k < d; ++k) v.domain.push_back(std::to_string(k));
        spec.variables.push_back(std::move(v));
    }

    // Draw target positions without replacement.
    std::vector<int> order(static_cast<std::size_t>(shape.num_vars));
    for (int i = 0; i < shape.num_vars; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(i)))]);
    std::vector<int> tpos(order.begin(), order.begin() + shape.num_targets);
    std::sort(tpos.begin(), tpos.end());
    for (int i : tpos) spec.targets.push_back(spec.variables[static_cast<std::size_t>(i)].name);

    spec.parents.resize(spec.variables.size());
    spec.cpt.resize(spec.variables.size());
    for (std::size_t i = 0; i < spec.variables.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (rng.bernoulli(shape.edge_prob)) spec.parents[i].push_back(static_cast<int>(j));
        }
        std::size_t d = spec.variables[i].domain.size();
        std::size_t rows = parent_rows(spec, i);
        spec.cpt[i].reserve(rows * d);
        for (std::size_t r = 0; r < rows; ++r) {
            auto row = random_row(rng, d);
            spec.cpt[i].insert(spec.cpt[i].end(), row.begin(), row.end());
        }
    }
    return spec;
}

MultiRegimeModel generate_random_model(const std::vector<VariableDecl>& variables,
                                       const std::vector<std::string>& targets,
                                       const std::vector<RegimeAssignment>& regime_subset,
                                       std::uint64_t seed) {
    MultiRegimeModel model;
    model.variables = variables;
    model.targets = targets;
    RegimeAssignment idle(targets.size(), kIdle);
    if (std::find(regime_subset.begin(), regime_subset.end(), idle) == regime_subset.end())
        throw Error("generate_random_model: regime subset must contain the all-idle regime");

    Rng rng(seed);
    std::size_t cells = table_cells(variables);
    // Sort so the draw order (and hence the output) is independent of the
    // caller's subset ordering.
    std::vector<RegimeAssignment> keys = regime_subset;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto& key : keys) {
        DistributionTable table;
        table.vars = variables;
        table.probs = random_row(rng, cells);
        model.regimes.emplace(key, std::move(table));
    }
    return model;
}

}  // namespace eciv
