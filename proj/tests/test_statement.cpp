#include "doctest.h"

#include "eciv/rng.hpp"
#include "eciv/statement.hpp"

using namespace eciv;

TEST_CASE("plain group term with stochastic conditioning") {
    auto stmt = parse_statement("Y _||_ F(T) | T");
    CHECK(stmt.left == std::vector<std::string>{"Y"});
    REQUIRE(stmt.group.size() == 1);
    CHECK(stmt.group[0].target == "T");
    CHECK(stmt.group[0].mode == IndicatorMode::Full);
    CHECK(stmt.given_vars == std::vector<std::string>{"T"});
    CHECK(stmt.given_indicators.empty());
}

TEST_CASE("bang marks a checked indicator") {
    auto stmt = parse_statement("Y _||_ F(T)! | M");
    REQUIRE(stmt.group.size() == 1);
    CHECK(stmt.group[0].mode == IndicatorMode::Checked);
}

TEST_CASE("conditioning indicators take every mode") {
    auto stmt = parse_statement("Y _||_ F(A) | W, F(B)=idle, F(C)=2, F(D)!, F(E)");
    REQUIRE(stmt.given_indicators.size() == 4);
    CHECK(stmt.given_indicators[0].mode == IndicatorMode::FixedIdle);
    CHECK(stmt.given_indicators[1].mode == IndicatorMode::FixedValue);
    CHECK(stmt.given_indicators[1].value == "2");
    CHECK(stmt.given_indicators[2].mode == IndicatorMode::Checked);
    CHECK(stmt.given_indicators[3].mode == IndicatorMode::Full);
    CHECK(stmt.given_vars == std::vector<std::string>{"W"});
}

TEST_CASE("empty group is a syntax error") {
    CHECK_THROWS_AS(parse_statement("Y _||_ | T"), ParseError);
    CHECK_THROWS_AS(parse_statement("Y _||_"), ParseError);
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_statement("Y _||_ F(T | M");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position > 0);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_statement(""), ParseError);
    CHECK_THROWS_AS(parse_statement("_||_ F(T)"), ParseError);
    CHECK_THROWS_AS(parse_statement("Y _||_ T"), ParseError);       // group must be indicators
    CHECK_THROWS_AS(parse_statement("Y _||_ F(T)=1"), ParseError);  // fixed values only after '|'
    CHECK_THROWS_AS(parse_statement("Y _||_ F(T) |"), ParseError);
    CHECK_THROWS_AS(parse_statement("Y _||_ F(T) | T extra"), ParseError);
}

TEST_CASE("formatting is a fixed point of parse") {
    const char* samples[] = {
        "Y _||_ F(T) | T",
        "Y, W _||_ F(S)!, F(T) | M, F(U)=idle, F(V)=1, F(Q)!",
        "A _||_ F(B)!",
        "X1 _||_ F(X0) | Z, F(X2)",
    };
    for (const char* text : samples) {
        auto stmt = parse_statement(text);
        auto printed = format_statement(stmt);
        CHECK(parse_statement(printed) == stmt);
        CHECK(format_statement(parse_statement(printed)) == printed);
    }
}

TEST_CASE("sets print in their stored order") {
    ECIStatement stmt;
    stmt.left = {"B", "A"};
    stmt.group.push_back({"T", IndicatorMode::Full, ""});
    CHECK(format_statement(stmt) == "B, A _||_ F(T)");
}

TEST_CASE("pinned idle prints explicitly") {
    ECIStatement stmt;
    stmt.left = {"Y"};
    stmt.group.push_back({"S", IndicatorMode::Checked, ""});
    stmt.given_indicators.push_back({"T", IndicatorMode::FixedIdle, ""});
    CHECK(format_statement(stmt) == "Y _||_ F(S)! | F(T)=idle");
}

TEST_CASE("random statements round-trip through the grammar") {
    Rng rng(99);
    const char* names[] = {"A", "B", "C", "D", "E", "Fx", "G2", "H_h"};
    for (int trial = 0; trial < 200; ++trial) {
        ECIStatement stmt;
        int used = 0;
        auto fresh = [&] { return std::string(names[used++]); };
        int n_left = 1 + rng.uniform_int(2);
        for (int i = 0; i < n_left; ++i) stmt.left.push_back(fresh());
        int n_group = 1 + rng.uniform_int(2);
        for (int i = 0; i < n_group; ++i)
            stmt.group.push_back({fresh(), rng.bernoulli(0.5) ? IndicatorMode::Checked : IndicatorMode::Full, ""});
        int n_givenv = rng.uniform_int(2);
        for (int i = 0; i < n_givenv; ++i) stmt.given_vars.push_back(fresh());
        int n_giveni = rng.uniform_int(3);
        for (int i = 0; i < n_giveni && used < 8; ++i) {
            IndicatorTerm term{fresh(), IndicatorMode::Full, ""};
            switch (rng.uniform_int(4)) {
                case 0: term.mode = IndicatorMode::Full; break;
                case 1: term.mode = IndicatorMode::Checked; break;
                case 2: term.mode = IndicatorMode::FixedIdle; break;
                case 3:
                    term.mode = IndicatorMode::FixedValue;
                    term.value = std::to_string(rng.uniform_int(4));
                    break;
            }
            stmt.given_indicators.push_back(std::move(term));
        }
        CHECK(parse_statement(format_statement(stmt)) == stmt);
    }
}
