#include "doctest.h"

#include <cmath>

#include "eciv/consistency.hpp"
#include "eciv/model.hpp"
#include "eciv/structural.hpp"
#include "fixtures.hpp"

using namespace eciv;

TEST_CASE("well formed model validates cleanly") {
    CHECK(validate_model(fixtures::ty_model()).empty());
    CHECK(validate_model(fixtures::forced_value_model()).empty());
    CHECK(validate_model(fixtures::shifted_mass_model()).empty());
}

TEST_CASE("validation flags a table that does not normalize") {
    auto model = fixtures::ty_model();
    model.regimes[RegimeAssignment{1}].probs[0] -= 0.1;
    auto diagnostics = validate_model(model);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].code == "normalization");
}

TEST_CASE("validation flags a missing idle regime") {
    auto model = fixtures::ty_model();
    model.regimes.erase(model.idle_regime());
    auto diagnostics = validate_model(model);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].code == "idle-regime-absent");
}

TEST_CASE("validation flags negative entries and bad regime keys") {
    auto model = fixtures::ty_model();
    model.regimes[RegimeAssignment{1}].probs[0] -= 0.2;
    model.regimes[RegimeAssignment{1}].probs[1] += 0.2;
    auto diagnostics = validate_model(model);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].code == "negative-entry");

    auto bad_key = fixtures::ty_model();
    DistributionTable table = bad_key.regimes.begin()->second;
    bad_key.regimes.emplace(RegimeAssignment{7}, table);
    bool found = false;
    for (const auto& d : validate_model(bad_key)) found = found || d.code == "regime-key-value";
    CHECK(found);
}

TEST_CASE("marginals match hand enumeration") {
    auto model = fixtures::ty_model();
    auto y_set = marginal(model, RegimeAssignment{1}, {"Y"});
    CHECK(y_set.probs[1] == doctest::Approx(0.8).epsilon(1e-12));
    auto y_idle = marginal(model, model.idle_regime(), {"Y"});
    CHECK(y_idle.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("marginal over all variables returns the regime's own table") {
    auto model = fixtures::ty_model();
    auto full = marginal(model, RegimeAssignment{1}, {"T", "Y"});
    const auto& own = model.regime_table(RegimeAssignment{1});
    REQUIRE(full.probs.size() == own.probs.size());
    for (std::size_t i = 0; i < full.probs.size(); ++i)
        CHECK(full.probs[i] == doctest::Approx(own.probs[i]).epsilon(1e-12));
}

TEST_CASE("marginal rejects unknown regimes and names") {
    auto model = fixtures::ty_model();
    CHECK_THROWS_AS(marginal(model, RegimeAssignment{2}, {"Y"}), Error);
    CHECK_THROWS_AS(marginal(model, model.idle_regime(), {"Q"}), Error);
}

TEST_CASE("conditional matches hand enumeration and handles null events") {
    auto model = fixtures::ty_model();
    auto y_given_t1 = conditional(model, model.idle_regime(), {"Y"}, {{"T", "1"}});
    REQUIRE(y_given_t1.has_value());
    CHECK(y_given_t1->probs[1] == doctest::Approx(0.8).epsilon(1e-12));

    auto forced = fixtures::make_model(
        {{"T", {"0", "1"}}, {"Y", {"0", "1"}}}, {"T"},
        {{{eciv::kIdle}, {0.4, 0.1, 0.1, 0.4}}, {{0}, {0.8, 0.2, 0.0, 0.0}}, {{1}, {0.0, 0.0, 0.2, 0.8}}});
    CHECK_FALSE(conditional(forced, RegimeAssignment{1}, {"Y"}, {{"T", "0"}}).has_value());

    auto empty_given = conditional(model, model.idle_regime(), {"Y"}, {});
    auto plain = marginal(model, model.idle_regime(), {"Y"});
    REQUIRE(empty_given.has_value());
    CHECK(total_variation(*empty_given, plain) == doctest::Approx(0.0));
}

TEST_CASE("conditional rejects overlapping variable sets") {
    auto model = fixtures::ty_model();
    CHECK_THROWS_AS(conditional(model, model.idle_regime(), {"Y"}, {{"Y", "1"}}), Error);
}

TEST_CASE("conditional equals the ratio of marginals wherever defined") {
    StructuralShape shape;
    shape.num_vars = 3;
    shape.num_targets = 1;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto model = generate_structural_model(random_structural_spec(shape, seed));
        const auto& v0 = model.variables[0];
        const auto& v1 = model.variables[1];
        auto joint = marginal(model, model.idle_regime(), {v0.name, v1.name});
        auto w_marg = marginal(model, model.idle_regime(), {v1.name});
        for (std::size_t w = 0; w < v1.domain.size(); ++w) {
            auto cond = conditional(model, model.idle_regime(), {v0.name}, {{v1.name, v1.domain[w]}});
            REQUIRE(cond.has_value());
            for (std::size_t x = 0; x < v0.domain.size(); ++x) {
                double ratio = joint.probs[x * v1.domain.size() + w] / w_marg.probs[w];
                CHECK(std::abs(cond->probs[x] - ratio) < 1e-12);
            }
        }
    }
}

TEST_CASE("an unrelated coin is independent of the response") {
    auto model = generate_structural_model(fixtures::tyc_spec());
    auto verdict = check_ci(model, model.idle_regime(), {"C"}, {"Y"}, {});
    CHECK(verdict.holds());
}

TEST_CASE("response and treatment are dependent in the idle regime") {
    auto model = fixtures::ty_model();
    auto verdict = check_ci(model, model.idle_regime(), {"Y"}, {"T"}, {});
    REQUIRE(verdict.fails());
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->discrepancy == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("independence with an empty left set holds vacuously") {
    auto model = fixtures::ty_model();
    CHECK(check_ci(model, model.idle_regime(), {}, {"Y"}, {}).holds());
}

TEST_CASE("check_ci rejects overlapping sets") {
    auto model = fixtures::ty_model();
    CHECK_THROWS_AS(check_ci(model, model.idle_regime(), {"Y"}, {"Y"}, {}), Error);
}

TEST_CASE("check_ci is symmetric in its two variable sets") {
    StructuralShape shape;
    shape.num_vars = 4;
    shape.num_targets = 1;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto model = generate_structural_model(random_structural_spec(shape, seed));
        auto a = model.variables[0].name;
        auto b = model.variables[2].name;
        auto z = model.variables[1].name;
        auto fwd = check_ci(model, model.idle_regime(), {a}, {b}, {z});
        auto rev = check_ci(model, model.idle_regime(), {b}, {a}, {z});
        CHECK(fwd.outcome == rev.outcome);
    }
}

TEST_CASE("check_ci is invariant under renaming the variables") {
    auto model = fixtures::ty_model();
    auto renamed = model;
    renamed.variables[0].name = "treat";
    renamed.variables[1].name = "resp";
    renamed.targets = {"treat"};
    for (auto& [key, table] : renamed.regimes) table.vars = renamed.variables;
    auto before = check_ci(model, model.idle_regime(), {"Y"}, {"T"}, {});
    auto after = check_ci(renamed, renamed.idle_regime(), {"resp"}, {"treat"}, {});
    CHECK(before.outcome == after.outcome);
    CHECK(before.witness->discrepancy == doctest::Approx(after.witness->discrepancy));
}

TEST_CASE("variation independence detects full and broken products") {
    CHECK(is_variation_independent(fixtures::ty_model()));
    auto broken = fixtures::ty_model();
    broken.regimes.erase(RegimeAssignment{0});
    CHECK_FALSE(is_variation_independent(broken));
}

TEST_CASE("variation independence over two targets needs all nine combinations") {
    StructuralShape shape;
    shape.num_vars = 2;
    shape.num_targets = 2;
    auto model = generate_structural_model(random_structural_spec(shape, 5));
    CHECK(model.regimes.size() == 9);
    CHECK(is_variation_independent(model));
}

TEST_CASE("structural expansion is distributionally consistent by construction") {
    StructuralShape shape;
    shape.num_vars = 4;
    shape.num_targets = 2;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto model = generate_structural_model(random_structural_spec(shape, seed));
        for (const auto& t : model.targets)
            CHECK(check_distributional_consistency(model, t, 1e-12).holds());
    }
}

TEST_CASE("generators are pure functions of spec and seed") {
    StructuralShape shape;
    shape.num_vars = 4;
    shape.num_targets = 2;
    auto a = generate_structural_model(random_structural_spec(shape, 42));
    auto b = generate_structural_model(random_structural_spec(shape, 42));
    REQUIRE(a.regimes.size() == b.regimes.size());
    auto ita = a.regimes.begin();
    auto itb = b.regimes.begin();
    for (; ita != a.regimes.end(); ++ita, ++itb) {
        CHECK(ita->first == itb->first);
        CHECK(ita->second.probs == itb->second.probs);  // bit for bit
    }

    auto vars = a.variables;
    auto regimes = full_product_regimes(vars, a.targets);
    auto r1 = generate_random_model(vars, a.targets, regimes, 7);
    auto r2 = generate_random_model(vars, a.targets, regimes, 7);
    CHECK(r1.regimes.begin()->second.probs == r2.regimes.begin()->second.probs);
}

TEST_CASE("a spec without targets expands to the idle regime only") {
    StructuralSpec spec = fixtures::ty_spec();
    spec.targets.clear();
    auto model = generate_structural_model(spec);
    CHECK(model.regimes.size() == 1);
    CHECK(model.regimes.begin()->first.empty());
}

TEST_CASE("random model generator demands the idle regime") {
    auto spec = fixtures::ty_spec();
    std::vector<RegimeAssignment> subset{{0}, {1}};
    CHECK_THROWS_AS(generate_random_model(spec.variables, spec.targets, subset, 1), Error);
}

TEST_CASE("random model over a strict subset is not variation independent") {
    auto spec = fixtures::ty_spec();
    auto all = full_product_regimes(spec.variables, spec.targets);
    auto model = generate_random_model(spec.variables, spec.targets, all, 3);
    CHECK(is_variation_independent(model));
    all.pop_back();
    auto partial = generate_random_model(spec.variables, spec.targets, all, 3);
    CHECK_FALSE(is_variation_independent(partial));
}
