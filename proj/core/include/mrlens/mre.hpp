#ifndef MRLENS_MRE_HPP
#define MRLENS_MRE_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mrlens {

class Mre;
using MrePtr = std::shared_ptr<const Mre>;

enum class MreKind { Epsilon, Const, Var, Star, Alt, Concat, Bind };

/// A match-reference regular expression. Nodes are immutable and shared;
/// whole trees are safe to read from any thread.
///
/// Constants are single Unicode scalar values; literal strings are
/// concatenation chains of constants (the empty string is the distinguished
/// Epsilon leaf). Variable names are drawn from a set disjoint from the
/// input alphabet, and `bind x : R1 in R2` scopes x over R2 only.
class Mre {
 public:
  static MrePtr epsilon();
  static MrePtr chr(char32_t c);
  static MrePtr var(std::string name);
  static MrePtr star(MrePtr inner);
  static MrePtr alt(MrePtr left, MrePtr right);
  static MrePtr concat(MrePtr left, MrePtr right);
  static MrePtr bind(std::string name, MrePtr def, MrePtr body);

  /// UTF-8 string to constant chain: "" becomes Epsilon, "ab" becomes
  /// Concat('a', 'b') associated to the right.
  static MrePtr literal(std::string_view utf8);

  MreKind kind() const noexcept { return kind_; }
  char32_t ch() const noexcept { return ch_; }            // Const
  const std::string& name() const noexcept { return name_; }  // Var, Bind
  const MrePtr& left() const noexcept { return a_; }      // Alt, Concat; Star inner; Bind def
  const MrePtr& right() const noexcept { return b_; }     // Alt, Concat; Bind body
  const MrePtr& inner() const noexcept { return a_; }
  const MrePtr& def() const noexcept { return a_; }
  const MrePtr& body() const noexcept { return b_; }

 private:
  Mre(MreKind kind, char32_t ch, std::string name, MrePtr a, MrePtr b)
      : kind_(kind), ch_(ch), name_(std::move(name)), a_(std::move(a)), b_(std::move(b)) {}

  MreKind kind_;
  char32_t ch_ = 0;
  std::string name_;
  MrePtr a_, b_;
};

/// Structural equality (names compared verbatim).
bool structurally_equal(const MrePtr& a, const MrePtr& b);

/// Equality up to consistent renaming of bound variables.
bool alpha_equivalent(const MrePtr& a, const MrePtr& b);

/// Variables occurring free in r. Bind(x, def, body) removes x from the
/// body's contribution but not from the definition's.
std::set<std::string> free_vars(const MrePtr& r);

/// True iff free_vars(r) is empty.
bool is_closed(const MrePtr& r);

/// Returns an alpha-equivalent expression in which every binder introduces a
/// distinct fresh name ("base$N", N counted in preorder). Names in `avoid`
/// are never produced. Free variables are untouched.
MrePtr alpha_rename(const MrePtr& r);
MrePtr alpha_rename(const MrePtr& r, const std::set<std::string>& avoid);

/// Replaces free occurrences of x in r by `replacement` (binder-aware).
MrePtr substitute_var(const MrePtr& r, const std::string& x, const MrePtr& replacement);

/// The set of input-alphabet symbols mentioned in r.
std::set<char32_t> chars_of(const MrePtr& r);

// ---------------------------------------------------------------------------
// Environments. All four are immutable ordered sequences; extension returns
// a new environment. Lookup takes the innermost (rightmost) entry.
// ---------------------------------------------------------------------------

/// rho: variable -> matched string.
class RegexValueEnv {
 public:
  RegexValueEnv() = default;
  RegexValueEnv extended(std::string name, std::string value) const;
  std::optional<std::string> lookup(std::string_view name) const;
  bool contains(std::string_view name) const { return lookup(name).has_value(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::pair<std::string, std::string>& at(std::size_t i) const { return entries_[i]; }
  /// Entries strictly before position i.
  RegexValueEnv prefix(std::size_t i) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Gamma_R: variable -> match-reference regex.
class RegexTypeEnv {
 public:
  RegexTypeEnv() = default;
  RegexTypeEnv extended(std::string name, MrePtr type) const;
  std::optional<MrePtr> lookup(std::string_view name) const;
  bool contains(std::string_view name) const { return lookup(name).has_value(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::pair<std::string, MrePtr>& at(std::size_t i) const { return entries_[i]; }
  RegexTypeEnv prefix(std::size_t i) const;

 private:
  std::vector<std::pair<std::string, MrePtr>> entries_;
};

/// Gamma_L: lens variable -> pair of regex variable names (x1 <=> x2).
class LensTypeEnv {
 public:
  LensTypeEnv() = default;
  LensTypeEnv extended(std::string name, std::string x1, std::string x2) const;
  std::optional<std::pair<std::string, std::string>> lookup(std::string_view name) const;
  bool contains(std::string_view name) const { return lookup(name).has_value(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::pair<std::string, std::pair<std::string, std::string>>& at(std::size_t i) const {
    return entries_[i];
  }

 private:
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> entries_;
};

/// lambda-env: lens variable -> pair of strings.
class LensValueEnv {
 public:
  LensValueEnv() = default;
  LensValueEnv extended(std::string name, std::string s1, std::string s2) const;
  std::optional<std::pair<std::string, std::string>> lookup(std::string_view name) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::pair<std::string, std::pair<std::string, std::string>>& at(std::size_t i) const {
    return entries_[i];
  }

 private:
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> entries_;
};

/// Gamma_R |- R: every free variable of r is in env's domain.
bool rtenv_good_for(const RegexTypeEnv& env, const MrePtr& r);

/// Gamma_R |- *: empty, or a well-formed prefix extended with a fresh name
/// whose type only uses earlier variables.
bool rtenv_well_formed(const RegexTypeEnv& env);

/// Gamma_L, Gamma_R |- *: built by the two inference rules — the empty pair,
/// or an extension adding one lens variable mapped to a fresh pair of regex
/// variables bound simultaneously in the regex environment.
bool envs_well_formed(const LensTypeEnv& lenv, const RegexTypeEnv& renv);

/// Gamma_R |- rho: domains match positionally and each bound string is in
/// the language of its type evaluated under the preceding prefix.
/// Membership is decided by the enumeration oracle.
bool renv_consistent(const RegexTypeEnv& tenv, const RegexValueEnv& venv);

/// Replaces every free variable bound in venv by its literal string value.
MrePtr substitute_values(const MrePtr& r, const RegexValueEnv& venv);

}  // namespace mrlens

#endif
