// Shared handmade models for the unit suites. Expected values in the tests
// are frozen from hand enumeration of these tiny tables.
#pragma once

#include "eciv/model.hpp"
#include "eciv/rng.hpp"
#include "eciv/structural.hpp"

namespace fixtures {

using eciv::DistributionTable;
using eciv::MultiRegimeModel;
using eciv::RegimeAssignment;
using eciv::StructuralSpec;
using eciv::VariableDecl;

inline MultiRegimeModel make_model(std::vector<VariableDecl> vars, std::vector<std::string> targets,
                                   std::vector<std::pair<RegimeAssignment, std::vector<double>>> tables) {
    MultiRegimeModel model;
    model.variables = std::move(vars);
    model.targets = std::move(targets);
    for (auto& [key, probs] : tables) {
        DistributionTable table;
        table.vars = model.variables;
        table.probs = std::move(probs);
        model.regimes.emplace(std::move(key), std::move(table));
    }
    return model;
}

// Intention T a fair coin; the response follows the received value of T
// with rates P(Y=1 | received r) = 0.2 + 0.6 r.
inline StructuralSpec ty_spec() {
    StructuralSpec spec;
    spec.variables = {{"T", {"0", "1"}}, {"Y", {"0", "1"}}};
    spec.targets = {"T"};
    spec.parents = {{}, {0}};
    spec.cpt = {{0.5, 0.5}, {0.8, 0.2, 0.2, 0.8}};
    return spec;
}

inline MultiRegimeModel ty_model() { return eciv::generate_structural_model(ty_spec()); }

// Single binary variable whose set regime forces the value: the idle law is
// a fair coin but P(T=1 | F(T)=1) = 1.
inline MultiRegimeModel forced_value_model() {
    return make_model({{"T", {"0", "1"}}}, {"T"},
                      {{{eciv::kIdle}, {0.5, 0.5}}, {{0}, {0.5, 0.5}}, {{1}, {0.0, 1.0}}});
}

// Three-valued variable: setting the indicator to b leaves P(B=b) alone but
// shifts mass between the other two values.
inline MultiRegimeModel shifted_mass_model() {
    return make_model({{"B", {"b0", "b1", "b2"}}}, {"B"},
                      {{{eciv::kIdle}, {0.5, 0.3, 0.2}},
                       {{0}, {0.5, 0.2, 0.3}},
                       {{1}, {0.6, 0.3, 0.1}},
                       {{2}, {0.55, 0.25, 0.2}}});
}

// Two binary targets S, T plus a response Y on a non-product regime set.
// Every regime shares a uniform joint except (F(S)=0, F(T)=0), whose mass is
// moved inside the cells with S=1 and T=1 -- exactly the cells no
// single-indicator consistency pair pins once (F(S)=1, F(T)=0) and
// (F(S)=0, F(T)=1) are dropped. Single-target consistency holds, yet the
// checked-to-full promotion fails.
inline MultiRegimeModel broken_product_model() {
    std::vector<double> base(8, 0.125);
    std::vector<double> shifted = base;
    shifted[6] = 0.25;  // (S=1, T=1, Y=0)
    shifted[7] = 0.0;   // (S=1, T=1, Y=1)
    using RA = RegimeAssignment;
    const int idle = eciv::kIdle;
    return make_model({{"S", {"0", "1"}}, {"T", {"0", "1"}}, {"Y", {"0", "1"}}}, {"S", "T"},
                      {{RA{idle, idle}, base},
                       {RA{idle, 0}, base},
                       {RA{idle, 1}, base},
                       {RA{0, idle}, base},
                       {RA{1, idle}, base},
                       {RA{0, 0}, shifted},
                       {RA{1, 1}, base}});
}

// T/Y pair plus an unrelated fair coin C.
inline StructuralSpec tyc_spec() {
    StructuralSpec spec;
    spec.variables = {{"T", {"0", "1"}}, {"C", {"0", "1"}}, {"Y", {"0", "1"}}};
    spec.targets = {"T"};
    spec.parents = {{}, {}, {0}};
    spec.cpt = {{0.5, 0.5}, {0.5, 0.5}, {0.8, 0.2, 0.2, 0.8}};
    return spec;
}

// Random two-stage sequential spec: (X0, Z, X1, Y) with targets {X0, X1}.
// Z reads the received X0; X1 reads Z (and sometimes the received X0); Y
// reads the received X1 (and sometimes Z or the received X0).
inline StructuralSpec sequential_spec(std::uint64_t seed) {
    eciv::Rng rng(seed);
    auto coin = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    auto row2 = [&](double p1) { return std::vector<double>{1.0 - p1, p1}; };

    StructuralSpec spec;
    spec.variables = {{"X0", {"0", "1"}}, {"Z", {"0", "1"}}, {"X1", {"0", "1"}}, {"Y", {"0", "1"}}};
    spec.targets = {"X0", "X1"};
    spec.parents.resize(4);
    spec.cpt.resize(4);

    spec.parents[0] = {};
    spec.cpt[0] = row2(coin(0.3, 0.7));

    auto fill_rows = [&](std::vector<double>& cpt, std::size_t rows, double lo, double hi) {
        for (std::size_t r = 0; r < rows; ++r) {
            auto row = row2(coin(lo, hi));
            cpt.insert(cpt.end(), row.begin(), row.end());
        }
    };

    spec.parents[1] = {0};
    fill_rows(spec.cpt[1], 2, 0.15, 0.85);

    spec.parents[2] = rng.bernoulli(0.5) ? std::vector<int>{0, 1} : std::vector<int>{1};
    fill_rows(spec.cpt[2], spec.parents[2].size() == 2 ? 4 : 2, 0.15, 0.85);

    spec.parents[3] = rng.bernoulli(0.5) ? std::vector<int>{0, 1, 2} : std::vector<int>{1, 2};
    fill_rows(spec.cpt[3], spec.parents[3].size() == 3 ? 8 : 4, 0.1, 0.9);
    return spec;
}

// Confounded variant: Y reads the intention value of X0, which the idle
// conditionals cannot see once the first indicator is set. The response
// leans on the intention strongly enough that the identification gap stays
// far above a 1e-3 detection threshold.
inline StructuralSpec confounded_sequential_spec(std::uint64_t seed) {
    StructuralSpec spec = sequential_spec(seed);
    spec.parents[3] = {0, 1, 2};
    spec.cpt[3].clear();
    for (int u = 0; u < 2; ++u) {
        for (int z = 0; z < 2; ++z) {
            for (int x1 = 0; x1 < 2; ++x1) {
                double p = 0.15 + 0.6 * u + 0.05 * z + 0.05 * x1;
                spec.cpt[3].push_back(1.0 - p);
                spec.cpt[3].push_back(p);
            }
        }
    }
    spec.read_intention = {{}, {false}, std::vector<bool>(spec.parents[2].size(), false), {true, false, false}};
    return spec;
}

}  // namespace fixtures
