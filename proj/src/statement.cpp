#include "eciv/statement.hpp"

#include <cctype>

namespace eciv {

namespace {

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' || c == '+';
}

class Cursor {
public:
    explicit Cursor(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    std::size_t pos() const { return pos_; }

    bool sep_ahead() {
        skip_ws();
        return text_.compare(pos_, 4, "_||_") == 0;
    }

    void expect_sep() {
        skip_ws();
        if (!sep_ahead()) throw ParseError(pos_, "expected '_||_'");
        pos_ += 4;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    // A word stops where "_||_" begins, so names can sit flush against the
    // separator.
    std::string word(const char* what) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && word_char(text_[pos_])) {
            if (text_.compare(pos_, 4, "_||_") == 0) break;
            ++pos_;
        }
        if (pos_ == start) throw ParseError(pos_, std::string("expected ") + what);
        return text_.substr(start, pos_ - start);
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

IndicatorTerm parse_indicator(Cursor& cur, bool conditioning) {
    std::size_t at = cur.pos();
    std::string head = cur.word("indicator");
    if (head != "F") throw ParseError(at, "expected 'F('");
    if (!cur.eat('(')) throw ParseError(cur.pos(), "expected '(' after F");
    IndicatorTerm term;
    term.target = cur.word("target name");
    if (!cur.eat(')')) throw ParseError(cur.pos(), "expected ')'");
    if (cur.eat('!')) {
        term.mode = IndicatorMode::Checked;
        return term;
    }
    if (cur.eat('=')) {
        if (!conditioning) throw ParseError(cur.pos(), "fixed indicator values are only allowed after '|'");
        std::string value = cur.word("indicator value");
        if (value == "idle") {
            term.mode = IndicatorMode::FixedIdle;
        } else {
            term.mode = IndicatorMode::FixedValue;
            term.value = value;
        }
        return term;
    }
    term.mode = IndicatorMode::Full;
    return term;
}

// "F(" introduces an indicator term; anything else is a variable name.
bool indicator_ahead(const std::string& text, std::size_t probe) {
    while (probe < text.size() && std::isspace(static_cast<unsigned char>(text[probe]))) ++probe;
    if (probe >= text.size() || text[probe] != 'F') return false;
    ++probe;
    while (probe < text.size() && std::isspace(static_cast<unsigned char>(text[probe]))) ++probe;
    return probe < text.size() && text[probe] == '(';
}

}  // namespace

ECIStatement parse_statement(const std::string& text) {
    Cursor cur(text);
    ECIStatement stmt;

    if (cur.sep_ahead()) throw ParseError(cur.pos(), "empty variable list");
    stmt.left.push_back(cur.word("variable name"));
    while (cur.eat(',')) stmt.left.push_back(cur.word("variable name"));
    cur.expect_sep();

    if (cur.at_end() || cur.peek() == '|') throw ParseError(cur.pos(), "empty indicator group");
    stmt.group.push_back(parse_indicator(cur, false));
    while (cur.eat(',')) stmt.group.push_back(parse_indicator(cur, false));

    if (cur.eat('|')) {
        if (cur.at_end()) throw ParseError(cur.pos(), "empty conditioning list");
        do {
            if (indicator_ahead(text, cur.pos())) {
                stmt.given_indicators.push_back(parse_indicator(cur, true));
            } else {
                stmt.given_vars.push_back(cur.word("variable name"));
            }
        } while (cur.eat(','));
    }
    if (!cur.at_end()) throw ParseError(cur.pos(), "unexpected trailing input");
    return stmt;
}

namespace {

void format_indicator(std::string& out, const IndicatorTerm& term) {
    out += "F(" + term.target + ")";
    switch (term.mode) {
        case IndicatorMode::Full: break;
        case IndicatorMode::Checked: out += "!"; break;
        case IndicatorMode::FixedIdle: out += "=idle"; break;
        case IndicatorMode::FixedValue: out += "=" + term.value; break;
    }
}

}  // namespace

std::string format_statement(const ECIStatement& stmt) {
    std::string out;
    for (std::size_t i = 0; i < stmt.left.size(); ++i) {
        if (i) out += ", ";
        out += stmt.left[i];
    }
    out += " _||_ ";
    for (std::size_t i = 0; i < stmt.group.size(); ++i) {
        if (i) out += ", ";
        format_indicator(out, stmt.group[i]);
    }
    if (!stmt.given_vars.empty() || !stmt.given_indicators.empty()) {
        out += " | ";
        bool first = true;
        for (const auto& v : stmt.given_vars) {
            if (!first) out += ", ";
            first = false;
            out += v;
        }
        for (const auto& term : stmt.given_indicators) {
            if (!first) out += ", ";
            first = false;
            format_indicator(out, term);
        }
    }
    return out;
}

}  // namespace eciv
