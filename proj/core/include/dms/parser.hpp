#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "dms/core.hpp"

namespace dms {

/// Syntax error with a 1-based position into the parsed text.
class SourceError : public std::runtime_error {
public:
    SourceError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

// Surface syntax:
//   rule   := head [":-" body] "."
//   head   := atom { ("v" | "|") atom }
//   body   := literal { "," literal }
//   literal:= ["not"] atom
//   atom   := pred [ "(" term { "," term } ")" ]
// `%` starts a line comment. Variables start uppercase, constants lowercase
// or with a digit. `v` and `not` are reserved.

/// Throws SourceError on malformed text, ProgramError (wrapped into a
/// SourceError carrying the rule position) on unsafe rules or arity clashes.
Program parse_program(std::string_view text);
Query parse_query(std::string_view text);
Atom parse_atom(std::string_view text);

std::string print_atom(const Atom& atom);
std::string print_rule(const Rule& rule);
/// Canonical form: one rule per line, sorted by the predicate of the first
/// head atom and then by the printed rule.
std::string print_program(const Program& p);
std::string print_query(const Query& q);
/// `{a, b(1)}` with atoms in sorted order.
std::string print_interpretation(const Interpretation& i);

}  // namespace dms
