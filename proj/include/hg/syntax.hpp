#pragma once

// Concrete syntax for `.hg` spec files, formulas, sequents and `.hgs` proof
// scripts. Printing is canonical (one layout per AST) and parse(print(x)) == x
// for every well-formed AST.
//
// REL precedence, tightest first: prefix `~ ^ *`, then `. ->`, then `& -`,
// then `+`, then `in =`, then `!`, `&&`, `||`, `=>` (right-assoc), `<=>`.
// FORK terms: prefix `~ *`, then `;`, then `.`, then `+`.
//
// `univ`/`none` denote the unary constants; inside a union, intersection,
// difference or comparison whose other side is binary they are read as the
// binary ones. `univ2`/`none2` always denote the binary constants.
// A member atom is always written with a parenthesised tuple: `(a) in s`,
// `(a, b) in r`; `a in s` is the inclusion of the singleton `a`.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hg/logic.hpp"

namespace hg {

Spec parse_spec(std::string_view text);
Formula parse_formula(std::string_view text, const Signature& sig);
RelExpr parse_rel_expr(std::string_view text, const Signature& sig);
ForkTerm parse_fork_term(std::string_view text, const Signature& sig);
Sequent parse_sequent(std::string_view text, const Signature& sig);

// `x := r, y := s;t` -- metavariable bindings for FORK axiom schemas.
std::map<std::string, ForkTerm> parse_substitution(std::string_view text, const Signature& sig);

std::string print(const RelExpr& e);
std::string print(const RelFormula& f);
std::string print(const ForkTerm& t);
std::string print(const ForkFormula& f);
std::string print(const Formula& f);
std::string print(const Sequent& s);
std::string print(const Signature& sig);
std::string print(const Spec& spec);
std::string print_substitution(const std::map<std::string, ForkTerm>& subst);

// Proof scripts: one action per line, `node-ref action-id key=value ...`,
// `#` starts a comment. Values containing blanks are double-quoted.
struct ScriptLine {
  int line = 0;
  std::size_t node = 0;  // `root` is node 0
  std::string action;
  std::vector<std::pair<std::string, std::string>> params;
};

std::vector<ScriptLine> parse_script(std::string_view text);
std::string print_script_line(const ScriptLine& line);

// True for names usable as constants or variables (identifier, not a keyword).
bool is_plain_identifier(std::string_view text);

// Computes the 1-based line/column of a byte offset.
SourceSpan make_span(std::string_view text, std::size_t start, std::size_t end);

}  // namespace hg
