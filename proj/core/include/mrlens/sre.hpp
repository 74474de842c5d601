#ifndef MRLENS_SRE_HPP
#define MRLENS_SRE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mrlens/mre.hpp"

namespace mrlens {

class PartialRegex;
using PartialPtr = std::shared_ptr<const PartialRegex>;

enum class PartialKind { Epsilon, Const, Var, Star, Alt, Concat, Scope };

/// A partial regex: a regular expression extended with variables and scope
/// markers, but carrying no variable types. Scope(body, x) asserts that x is
/// in scope within the body.
///
/// Variable and scope forms carry both the variable name and, once
/// vars_to_indices has run, the variable's position in the definition
/// environment (-1 before indexing). `origin` points back at the
/// match-reference node the translation derived this node from.
class PartialRegex {
 public:
  static PartialPtr epsilon(MrePtr origin);
  static PartialPtr chr(char32_t c, MrePtr origin);
  static PartialPtr var(std::string name, int index, MrePtr origin);
  static PartialPtr star(PartialPtr inner, MrePtr origin);
  static PartialPtr alt(PartialPtr left, PartialPtr right, MrePtr origin);
  static PartialPtr concat(PartialPtr left, PartialPtr right, MrePtr origin);
  static PartialPtr scope(PartialPtr body, std::string name, int index, MrePtr origin);

  PartialKind kind() const noexcept { return kind_; }
  char32_t ch() const noexcept { return ch_; }
  const std::string& name() const noexcept { return name_; }
  int index() const noexcept { return index_; }
  const PartialPtr& left() const noexcept { return a_; }
  const PartialPtr& right() const noexcept { return b_; }
  const PartialPtr& inner() const noexcept { return a_; }
  const PartialPtr& body() const noexcept { return a_; }
  const MrePtr& origin() const noexcept { return origin_; }

 private:
  PartialRegex(PartialKind kind, char32_t ch, std::string name, int index, PartialPtr a,
               PartialPtr b, MrePtr origin)
      : kind_(kind),
        ch_(ch),
        name_(std::move(name)),
        index_(index),
        a_(std::move(a)),
        b_(std::move(b)),
        origin_(std::move(origin)) {}

  PartialKind kind_;
  char32_t ch_;
  std::string name_;
  int index_;
  PartialPtr a_, b_;
  MrePtr origin_;
};

bool structurally_equal(const PartialPtr& a, const PartialPtr& b);

/// Ordered definition environment d mapping variables to partial regexes.
/// Variable names are unique; the leftmost index is 0.
class DefEnv {
 public:
  DefEnv() = default;
  void append(std::string name, PartialPtr def);
  std::size_t size() const noexcept { return entries_.size(); }
  const std::pair<std::string, PartialPtr>& entry_at(std::size_t i) const { return entries_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<PartialPtr> lookup(std::string_view name) const;
  /// The restriction d|x: all entries strictly before x.
  DefEnv prefix_before(std::string_view name) const;
  DefEnv prefix(std::size_t i) const;

 private:
  std::vector<std::pair<std::string, PartialPtr>> entries_;
};

/// A scoped regular expression: a main partial regex paired with an ordered
/// definition environment. Every definition's body only scopes or uses
/// variables defined strictly earlier.
struct Sre {
  PartialPtr main;
  DefEnv defs;
};

/// Translates a match-reference regex into an equivalent scoped regex,
/// flattening nested binding expressions into the definition environment.
/// Binder names must be unique (apply alpha_rename first); throws
/// DuplicateBinder otherwise.
Sre mre_to_sre(const MrePtr& r);

/// Returns a copy with every variable occurrence annotated with its index in
/// the definition environment. Throws UnknownVariable for a variable absent
/// from the definitions.
Sre vars_to_indices(const Sre& e);

}  // namespace mrlens

#endif
