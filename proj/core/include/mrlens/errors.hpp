#ifndef MRLENS_ERRORS_HPP
#define MRLENS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace mrlens {

/// Base class for all library errors. `code()` is a stable machine-readable
/// identifier; `what()` is a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct UnboundVariable : Error {
  explicit UnboundVariable(const std::string& name)
      : Error("unbound-variable", "unbound variable: " + name) {}
};

struct UndefinedScopeVariable : Error {
  explicit UndefinedScopeVariable(const std::string& name)
      : Error("undefined-scope-variable",
              "scope form names a variable absent from the definition environment: " + name) {}
};

struct UnboundLensVariable : Error {
  explicit UnboundLensVariable(const std::string& name)
      : Error("unbound-lens-variable", "unbound lens variable: " + name) {}
};

struct DuplicateBinder : Error {
  explicit DuplicateBinder(const std::string& name)
      : Error("duplicate-binder", "binder name is not unique: " + name) {}
};

struct UnknownVariable : Error {
  explicit UnknownVariable(const std::string& name)
      : Error("unknown-variable", "variable not present in the definition environment: " + name) {}
};

struct IndexOutOfRange : Error {
  IndexOutOfRange(int index, int automaton)
      : Error("index-out-of-range",
              "variable index " + std::to_string(index) +
                  " not below automaton index " + std::to_string(automaton)) {}
};

struct InvalidInputSymbol : Error {
  explicit InvalidInputSymbol(const std::string& msg)
      : Error("invalid-input-symbol", msg) {}
};

/// Input handed to a lens is not in the source-side language.
class ParseFailure : public Error {
 public:
  ParseFailure(const std::string& msg, std::size_t position)
      : Error("parse-failure", msg), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A sub-result fell outside its expected language. Signals an implementation
/// bug, not a user error.
struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& msg)
      : Error("invariant-violation", msg) {}
};

/// Lens type checking failure. `rule` names the typing rule whose side
/// condition failed (e.g. "OrT"); empty when not rule-specific.
class TypeError : public Error {
 public:
  TypeError(std::string code, const std::string& msg, std::string rule = "")
      : Error(std::move(code), msg), rule_(std::move(rule)) {}
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

inline TypeError env_ill_formed(const std::string& msg) {
  return TypeError("env-ill-formed", msg);
}
inline TypeError not_closed(const std::string& msg) {
  return TypeError("not-closed", "IdT: " + msg, "IdT");
}
inline TypeError ambiguous_side(const std::string& rule, const std::string& side,
                                const std::string& diag) {
  return TypeError("ambiguous-side", rule + ": " + side + " side: " + diag, rule);
}
inline TypeError ambiguity_unknown(const std::string& rule, const std::string& side,
                                   const std::string& diag) {
  return TypeError("ambiguity-unknown", rule + ": " + side + " side: " + diag, rule);
}
inline TypeError comp_middle_mismatch(const std::string& msg) {
  return TypeError("comp-middle-mismatch", "CompT: " + msg, "CompT");
}

/// DSL syntax error with 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int col)
      : Error("syntax-error",
              "syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace mrlens

#endif
