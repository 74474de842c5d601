#ifndef MRLENS_DSL_HPP
#define MRLENS_DSL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mrlens/lens.hpp"
#include "mrlens/mre.hpp"

namespace mrlens {

// Concrete text syntax (.mrl files, UTF-8, '#' line comments).
//
// Regexes:   alternation `|` < concatenation `.` < postfix `*`; atoms are
//            "literal", [character-class], eps, identifiers, parentheses,
//            and `bind x : R1 in R2`.
// Lenses:    composition `;` < alternation `|` < concat `.` / swap `~`
//            (equal precedence, left associative) < postfix `*`; atoms are
//            const("s1","s2") and its sugar "s1" <-> "s2", id(R),
//            identifiers, parentheses, and `link y = L1 in L2`.
//
// Identifiers resolve to the innermost enclosing binder, else to an earlier
// named definition (inlined on the spot), else they denote a free variable.

/// One definition of a source file: `name := expr ;`, optionally marked
/// `main`. The expression is either a regex or a lens.
struct Definition {
  std::string name;
  bool is_main = false;
  std::variant<MrePtr, LensPtr> value;

  bool is_regex() const { return std::holds_alternative<MrePtr>(value); }
  const MrePtr& regex() const { return std::get<MrePtr>(value); }
  const LensPtr& lens() const { return std::get<LensPtr>(value); }
};

/// An ordered, name-unique collection of definitions.
struct SourceFile {
  std::vector<Definition> definitions;

  const Definition* find(std::string_view name) const;
  const Definition* main() const;
};

/// Parses a whole source file. Throws SyntaxError with line/column.
SourceFile parse_source(std::string_view text);

/// Parses a single regex expression (no trailing input allowed).
MrePtr parse_regex(std::string_view text);

/// Parses a single lens expression.
LensPtr parse_lens(std::string_view text);

/// Minimal-parenthesization pretty printers; parse(print(ast)) == ast.
std::string print_regex(const MrePtr& r);
std::string print_lens(const LensPtr& l);

}  // namespace mrlens

#endif
