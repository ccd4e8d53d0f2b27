// Extended conditional independence statements: a set of stochastic
// variables asserted invariant across the values of a group of intervention
// indicators, inside a conditioning context of stochastic variables and
// further indicator terms.
//
// Grammar:
//   stmt   := varlist "_||_" grouplist ["|" condlist]
//   group  := "F(" name ")" ["!"]
//   cond   := name | "F(" name ")" ["=" value | "=idle" | "!"]
//   lists are comma separated
// "!" marks a checked indicator (quantified over non-idle values only). A
// bare F(name) in the conditioning quantifies over all values including
// idle. Targets not mentioned anywhere are implicitly pinned idle.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eciv/model.hpp"

namespace eciv {

enum class IndicatorMode {
    Full,       // ranges over {idle} + domain
    Checked,    // ranges over the domain only
    FixedIdle,  // pinned idle
    FixedValue  // pinned to one domain value
};

struct IndicatorTerm {
    std::string target;
    IndicatorMode mode = IndicatorMode::Full;
    std::string value;  // FixedValue only

    bool operator==(const IndicatorTerm&) const = default;
};

struct ECIStatement {
    std::vector<std::string> left;                  // stochastic variables
    std::vector<IndicatorTerm> group;               // Full or Checked terms
    std::vector<std::string> given_vars;            // stochastic conditioning
    std::vector<IndicatorTerm> given_indicators;    // any mode

    bool operator==(const ECIStatement&) const = default;
};

struct ParseError : Error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& what)
        : Error("syntax error at position " + std::to_string(pos) + ": " + what), position(pos) {}
};

ECIStatement parse_statement(const std::string& text);  // throws ParseError

// Canonical text. Sets are printed in their stored order, so
// parse_statement(format_statement(s)) == s and formatting is a fixed point.
std::string format_statement(const ECIStatement& stmt);

}  // namespace eciv
