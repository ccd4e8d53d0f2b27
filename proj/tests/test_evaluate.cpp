#include "doctest.h"

#include "eciv/evaluate.hpp"
#include "eciv/rng.hpp"
#include "eciv/structural.hpp"
#include "fixtures.hpp"

using namespace eciv;

TEST_CASE("intention is invariant to intervening on its own target") {
    auto model = fixtures::ty_model();
    auto verdict = evaluate(model, "T _||_ F(T)");
    CHECK(verdict.holds());
    CHECK(verdict.contexts == 3);  // idle and both set values
}

TEST_CASE("response given treatment shifts across regimes") {
    auto model = fixtures::ty_model();
    auto verdict = evaluate(model, "Y _||_ F(T) | T");
    REQUIRE(verdict.fails());
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->discrepancy == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("a failing witness replays through conditional()") {
    auto model = fixtures::ty_model();
    auto verdict = evaluate(model, "Y _||_ F(T) | T");
    REQUIRE(verdict.witness.has_value());
    const Witness& w = *verdict.witness;
    auto lhs = conditional(model, w.lhs.regime, {"Y"}, w.lhs.given);
    auto rhs = conditional(model, w.rhs.regime, {"Y"}, w.rhs.given);
    REQUIRE(lhs.has_value());
    REQUIRE(rhs.has_value());
    CHECK(total_variation(*lhs, *rhs) == doctest::Approx(w.discrepancy).epsilon(1e-12));
    CHECK(total_variation(*lhs, *rhs) > 1e-9);
}

TEST_CASE("an empty indicator group degenerates to a plain independence check") {
    auto model = generate_structural_model(fixtures::tyc_spec());
    ECIStatement stmt;
    stmt.left = {"C"};
    stmt.given_vars = {"Y"};
    auto verdict = evaluate(model, stmt);
    CHECK(verdict.holds());
    CHECK(verdict.comparisons == 0);
    auto ci = check_ci(model, model.idle_regime(), {"C"}, {}, {"Y"});
    CHECK(ci.outcome == verdict.outcome);
}

TEST_CASE("unmentioned targets are pinned idle") {
    // Two targets; the statement mentions only F(V1). If F(V2) were
    // quantified rather than pinned idle, the set regimes would disagree.
    StructuralShape shape;
    shape.num_vars = 3;
    shape.num_targets = 2;
    auto model = generate_structural_model(random_structural_spec(shape, 11));
    ECIStatement stmt;
    stmt.left = {model.targets[0]};
    stmt.group.push_back({model.targets[0], IndicatorMode::Full, ""});
    auto verdict = evaluate(model, stmt);
    CHECK(verdict.holds());
    // Exactly the idle-by-default contexts: one per group value.
    auto dom = model.target_decl(0).domain.size();
    CHECK(verdict.contexts == static_cast<long>(dom) + 1);
}

TEST_CASE("full invariance implies checked invariance") {
    StructuralShape shape;
    shape.num_vars = 4;
    shape.num_targets = 2;
    Rng rng(17);
    int checked_statements = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto model = generate_structural_model(random_structural_spec(shape, seed));
        for (const auto& target : model.targets) {
            for (const auto& v : model.variables) {
                ECIStatement full;
                full.left = {v.name};
                full.group.push_back({target, IndicatorMode::Full, ""});
                ECIStatement checked = full;
                checked.group[0].mode = IndicatorMode::Checked;
                auto vf = evaluate(model, full);
                auto vc = evaluate(model, checked);
                if (vf.holds()) {
                    CHECK_FALSE(vc.fails());
                    ++checked_statements;
                }
            }
        }
    }
    CHECK(checked_statements > 0);
    (void)rng;
}

TEST_CASE("evaluation is invariant under permuting the left set") {
    StructuralShape shape;
    shape.num_vars = 3;
    shape.num_targets = 1;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto model = generate_structural_model(random_structural_spec(shape, seed));
        ECIStatement a, b;
        a.left = {model.variables[1].name, model.variables[2].name};
        b.left = {model.variables[2].name, model.variables[1].name};
        a.group.push_back({model.targets[0], IndicatorMode::Full, ""});
        b.group = a.group;
        auto va = evaluate(model, a);
        auto vb = evaluate(model, b);
        CHECK(va.outcome == vb.outcome);
        CHECK(va.max_discrepancy == doctest::Approx(vb.max_discrepancy));
    }
}

TEST_CASE("evaluation is invariant under renaming the model") {
    auto model = fixtures::ty_model();
    auto renamed = model;
    renamed.variables[0].name = "treat";
    renamed.variables[1].name = "resp";
    renamed.targets = {"treat"};
    for (auto& [key, table] : renamed.regimes) table.vars = renamed.variables;
    auto before = evaluate(model, "Y _||_ F(T) | T");
    auto after = evaluate(renamed, "resp _||_ F(treat) | treat");
    CHECK(before.outcome == after.outcome);
    CHECK(before.witness->discrepancy == doctest::Approx(after.witness->discrepancy));
}

TEST_CASE("single full indicator group unfolds to idle-versus-set table comparisons") {
    StructuralShape shape;
    shape.num_vars = 3;
    shape.num_targets = 1;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto model = generate_structural_model(random_structural_spec(shape, seed));
        const auto& target = model.targets[0];
        std::string other;
        for (const auto& v : model.variables) {
            if (v.name != target) {
                other = v.name;
                break;
            }
        }
        ECIStatement stmt;
        stmt.left = {other};
        stmt.group.push_back({target, IndicatorMode::Full, ""});
        auto verdict = evaluate(model, stmt, 1e-9);

        auto idle = marginal(model, model.idle_regime(), {other});
        bool all_equal = true;
        const auto& dom = model.target_decl(0).domain;
        for (std::size_t b = 0; b < dom.size(); ++b) {
            RegimeAssignment r(1, static_cast<int>(b));
            all_equal = all_equal && total_variation(idle, marginal(model, r, {other})) <= 1e-9;
        }
        CHECK(verdict.holds() == all_equal);
    }
}

TEST_CASE("fixed indicator values pin the context") {
    StructuralShape shape;
    shape.num_vars = 3;
    shape.num_targets = 2;
    auto model = generate_structural_model(random_structural_spec(shape, 23));
    ECIStatement full;
    full.left = {model.targets[0]};
    full.group.push_back({model.targets[0], IndicatorMode::Full, ""});
    full.given_indicators.push_back({model.targets[1], IndicatorMode::Full, ""});
    ECIStatement pinned = full;
    pinned.given_indicators[0].mode = IndicatorMode::FixedIdle;
    auto vf = evaluate(model, full);
    auto vp = evaluate(model, pinned);
    CHECK(vp.contexts < vf.contexts);  // one conditioning context instead of three
    CHECK(vp.holds());
}

TEST_CASE("misuse is rejected with errors") {
    auto model = fixtures::ty_model();
    CHECK_THROWS_AS(evaluate(model, "Q _||_ F(T)"), Error);        // unknown variable
    CHECK_THROWS_AS(evaluate(model, "Y _||_ F(Y)"), Error);        // Y is not a target
    CHECK_THROWS_AS(evaluate(model, "Y _||_ F(T) | Y"), Error);    // both sides
    CHECK_THROWS_AS(evaluate(model, "Y _||_ F(T) | F(T)=idle"), Error);  // duplicate indicator
    CHECK_THROWS_AS(evaluate(model, "Y, Y _||_ F(T)"), Error);     // duplicate left entry
    CHECK_THROWS_AS(evaluate(model, "Y _||_ F(T)=1"), ParseError); // fixed value in group position
}

TEST_CASE("quantified contexts over absent regimes are skipped and reported") {
    auto model = fixtures::ty_model();
    model.regimes.erase(RegimeAssignment{0});  // drop F(T)=0
    auto verdict = evaluate(model, "T _||_ F(T)");
    CHECK(verdict.holds());  // the remaining regimes still agree
    REQUIRE(verdict.missing_regimes.size() == 1);
    CHECK(verdict.missing_regimes[0] == RegimeAssignment{0});
}

TEST_CASE("a statement over entirely absent regimes is vacuous") {
    auto model = fixtures::ty_model();
    model.regimes.erase(RegimeAssignment{0});
    model.regimes.erase(RegimeAssignment{1});
    auto verdict = evaluate(model, "Y _||_ F(T)!");
    CHECK(verdict.vacuous());
    CHECK(verdict.missing_regimes.size() == 2);
}
