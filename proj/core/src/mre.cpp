#include "mrlens/mre.hpp"

#include <map>

#include "mrlens/errors.hpp"
#include "mrlens/oracle.hpp"
#include "mrlens/unicode.hpp"

namespace mrlens {

MrePtr Mre::epsilon() {
  static const MrePtr eps(new Mre(MreKind::Epsilon, 0, "", nullptr, nullptr));
  return eps;
}

MrePtr Mre::chr(char32_t c) {
  return MrePtr(new Mre(MreKind::Const, c, "", nullptr, nullptr));
}

MrePtr Mre::var(std::string name) {
  return MrePtr(new Mre(MreKind::Var, 0, std::move(name), nullptr, nullptr));
}

MrePtr Mre::star(MrePtr inner) {
  return MrePtr(new Mre(MreKind::Star, 0, "", std::move(inner), nullptr));
}

MrePtr Mre::alt(MrePtr left, MrePtr right) {
  return MrePtr(new Mre(MreKind::Alt, 0, "", std::move(left), std::move(right)));
}

MrePtr Mre::concat(MrePtr left, MrePtr right) {
  return MrePtr(new Mre(MreKind::Concat, 0, "", std::move(left), std::move(right)));
}

MrePtr Mre::bind(std::string name, MrePtr def, MrePtr body) {
  return MrePtr(new Mre(MreKind::Bind, 0, std::move(name), std::move(def), std::move(body)));
}

MrePtr Mre::literal(std::string_view utf8) {
  auto cps = decode_utf8(utf8);
  if (cps.empty()) return epsilon();
  MrePtr acc = chr(cps.back());
  for (std::size_t i = cps.size() - 1; i-- > 0;) {
    acc = concat(chr(cps[i]), std::move(acc));
  }
  return acc;
}

bool structurally_equal(const MrePtr& a, const MrePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case MreKind::Epsilon:
      return true;
    case MreKind::Const:
      return a->ch() == b->ch();
    case MreKind::Var:
      return a->name() == b->name();
    case MreKind::Star:
      return structurally_equal(a->inner(), b->inner());
    case MreKind::Alt:
    case MreKind::Concat:
      return structurally_equal(a->left(), b->left()) &&
             structurally_equal(a->right(), b->right());
    case MreKind::Bind:
      return a->name() == b->name() && structurally_equal(a->def(), b->def()) &&
             structurally_equal(a->body(), b->body());
  }
  return false;
}

namespace {

bool alpha_eq(const MrePtr& a, const MrePtr& b, std::map<std::string, std::string>& ab,
              std::map<std::string, std::string>& ba) {
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case MreKind::Epsilon:
      return true;
    case MreKind::Const:
      return a->ch() == b->ch();
    case MreKind::Var: {
      auto ia = ab.find(a->name());
      auto ib = ba.find(b->name());
      if (ia == ab.end() && ib == ba.end()) return a->name() == b->name();  // both free
      if (ia == ab.end() || ib == ba.end()) return false;
      return ia->second == b->name() && ib->second == a->name();
    }
    case MreKind::Star:
      return alpha_eq(a->inner(), b->inner(), ab, ba);
    case MreKind::Alt:
    case MreKind::Concat:
      return alpha_eq(a->left(), b->left(), ab, ba) && alpha_eq(a->right(), b->right(), ab, ba);
    case MreKind::Bind: {
      if (!alpha_eq(a->def(), b->def(), ab, ba)) return false;
      // Bind the pair for the body, restoring any shadowed mapping after.
      auto save_ab = ab;
      auto save_ba = ba;
      ab[a->name()] = b->name();
      ba[b->name()] = a->name();
      bool ok = alpha_eq(a->body(), b->body(), ab, ba);
      ab = std::move(save_ab);
      ba = std::move(save_ba);
      return ok;
    }
  }
  return false;
}

void free_vars_into(const MrePtr& r, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return;
    case MreKind::Var:
      if (!bound.count(r->name())) out.insert(r->name());
      return;
    case MreKind::Star:
      free_vars_into(r->inner(), bound, out);
      return;
    case MreKind::Alt:
    case MreKind::Concat:
      free_vars_into(r->left(), bound, out);
      free_vars_into(r->right(), bound, out);
      return;
    case MreKind::Bind: {
      free_vars_into(r->def(), bound, out);
      bool inserted = bound.insert(r->name()).second;
      free_vars_into(r->body(), bound, out);
      if (inserted) bound.erase(r->name());
      return;
    }
  }
}

struct Renamer {
  const std::set<std::string>* avoid;
  int counter = 0;

  std::string fresh(const std::string& original) {
    // Strip a previous "$N" suffix so repeated renaming stays tidy.
    std::string base = original.substr(0, original.find('$'));
    for (;;) {
      std::string candidate = base + "$" + std::to_string(counter++);
      if (!avoid || !avoid->count(candidate)) return candidate;
    }
  }

  MrePtr run(const MrePtr& r, const std::map<std::string, std::string>& subst) {
    switch (r->kind()) {
      case MreKind::Epsilon:
      case MreKind::Const:
        return r;
      case MreKind::Var: {
        auto it = subst.find(r->name());
        return it == subst.end() ? r : Mre::var(it->second);
      }
      case MreKind::Star:
        return Mre::star(run(r->inner(), subst));
      case MreKind::Alt: {
        MrePtr left = run(r->left(), subst);  // sequence: counters advance left to right
        return Mre::alt(std::move(left), run(r->right(), subst));
      }
      case MreKind::Concat: {
        MrePtr left = run(r->left(), subst);
        return Mre::concat(std::move(left), run(r->right(), subst));
      }
      case MreKind::Bind: {
        std::string name = fresh(r->name());
        MrePtr def = run(r->def(), subst);
        auto inner = subst;
        inner[r->name()] = name;
        return Mre::bind(name, std::move(def), run(r->body(), inner));
      }
    }
    return r;
  }
};

}  // namespace

bool alpha_equivalent(const MrePtr& a, const MrePtr& b) {
  std::map<std::string, std::string> ab, ba;
  return alpha_eq(a, b, ab, ba);
}

std::set<std::string> free_vars(const MrePtr& r) {
  std::set<std::string> bound, out;
  free_vars_into(r, bound, out);
  return out;
}

bool is_closed(const MrePtr& r) { return free_vars(r).empty(); }

MrePtr alpha_rename(const MrePtr& r) {
  Renamer ren{nullptr};
  return ren.run(r, {});
}

MrePtr alpha_rename(const MrePtr& r, const std::set<std::string>& avoid) {
  Renamer ren{&avoid};
  return ren.run(r, {});
}

MrePtr substitute_var(const MrePtr& r, const std::string& x, const MrePtr& replacement) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return r;
    case MreKind::Var:
      return r->name() == x ? replacement : r;
    case MreKind::Star:
      return Mre::star(substitute_var(r->inner(), x, replacement));
    case MreKind::Alt:
      return Mre::alt(substitute_var(r->left(), x, replacement),
                      substitute_var(r->right(), x, replacement));
    case MreKind::Concat:
      return Mre::concat(substitute_var(r->left(), x, replacement),
                         substitute_var(r->right(), x, replacement));
    case MreKind::Bind: {
      MrePtr def = substitute_var(r->def(), x, replacement);
      // The binder shadows x in the body.
      MrePtr body = r->name() == x ? r->body() : substitute_var(r->body(), x, replacement);
      return Mre::bind(r->name(), std::move(def), std::move(body));
    }
  }
  return r;
}

std::set<char32_t> chars_of(const MrePtr& r) {
  std::set<char32_t> out;
  auto walk = [&](auto&& self, const MrePtr& n) -> void {
    switch (n->kind()) {
      case MreKind::Const:
        out.insert(n->ch());
        return;
      case MreKind::Epsilon:
      case MreKind::Var:
        return;
      case MreKind::Star:
        self(self, n->inner());
        return;
      case MreKind::Alt:
      case MreKind::Concat:
        self(self, n->left());
        self(self, n->right());
        return;
      case MreKind::Bind:
        self(self, n->def());
        self(self, n->body());
        return;
    }
  };
  walk(walk, r);
  return out;
}

// --------------------------------------------------------------------------
// Environments
// --------------------------------------------------------------------------

RegexValueEnv RegexValueEnv::extended(std::string name, std::string value) const {
  RegexValueEnv out = *this;
  out.entries_.emplace_back(std::move(name), std::move(value));
  return out;
}

std::optional<std::string> RegexValueEnv::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == name) return it->second;
  }
  return std::nullopt;
}

RegexValueEnv RegexValueEnv::prefix(std::size_t i) const {
  RegexValueEnv out;
  out.entries_.assign(entries_.begin(), entries_.begin() + i);
  return out;
}

RegexTypeEnv RegexTypeEnv::extended(std::string name, MrePtr type) const {
  RegexTypeEnv out = *this;
  out.entries_.emplace_back(std::move(name), std::move(type));
  return out;
}

std::optional<MrePtr> RegexTypeEnv::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == name) return it->second;
  }
  return std::nullopt;
}

std::optional<std::size_t> RegexTypeEnv::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first == name) return i;
  }
  return std::nullopt;
}

RegexTypeEnv RegexTypeEnv::prefix(std::size_t i) const {
  RegexTypeEnv out;
  out.entries_.assign(entries_.begin(), entries_.begin() + i);
  return out;
}

LensTypeEnv LensTypeEnv::extended(std::string name, std::string x1, std::string x2) const {
  LensTypeEnv out = *this;
  out.entries_.emplace_back(std::move(name), std::make_pair(std::move(x1), std::move(x2)));
  return out;
}

std::optional<std::pair<std::string, std::string>> LensTypeEnv::lookup(
    std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == name) return it->second;
  }
  return std::nullopt;
}

LensValueEnv LensValueEnv::extended(std::string name, std::string s1, std::string s2) const {
  LensValueEnv out = *this;
  out.entries_.emplace_back(std::move(name), std::make_pair(std::move(s1), std::move(s2)));
  return out;
}

std::optional<std::pair<std::string, std::string>> LensValueEnv::lookup(
    std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == name) return it->second;
  }
  return std::nullopt;
}

// --------------------------------------------------------------------------
// Well-formedness judgments
// --------------------------------------------------------------------------

bool rtenv_good_for(const RegexTypeEnv& env, const MrePtr& r) {
  for (const auto& x : free_vars(r)) {
    if (!env.contains(x)) return false;
  }
  return true;
}

bool rtenv_well_formed(const RegexTypeEnv& env) {
  for (std::size_t i = 0; i < env.size(); ++i) {
    const auto& [name, type] = env.at(i);
    RegexTypeEnv before = env.prefix(i);
    if (before.contains(name)) return false;
    if (!rtenv_good_for(before, type)) return false;
  }
  return true;
}

bool envs_well_formed(const LensTypeEnv& lenv, const RegexTypeEnv& renv) {
  // The extension rule adds one lens variable and its two regex variables
  // simultaneously, so the regex environment must split into consecutive
  // pairs, one pair per lens entry, in order.
  if (renv.size() != 2 * lenv.size()) return false;
  if (!rtenv_well_formed(renv)) return false;
  std::set<std::string> seen_lens;
  for (std::size_t i = 0; i < lenv.size(); ++i) {
    const auto& [y, pair] = lenv.at(i);
    if (!seen_lens.insert(y).second) return false;
    if (pair.first != renv.at(2 * i).first) return false;
    if (pair.second != renv.at(2 * i + 1).first) return false;
  }
  return true;
}

bool renv_consistent(const RegexTypeEnv& tenv, const RegexValueEnv& venv) {
  if (tenv.size() != venv.size()) return false;
  for (std::size_t i = 0; i < tenv.size(); ++i) {
    const auto& [tname, type] = tenv.at(i);
    const auto& [vname, value] = venv.at(i);
    if (tname != vname) return false;
    if (!regex_member(type, venv.prefix(i), value)) return false;
  }
  return true;
}

MrePtr substitute_values(const MrePtr& r, const RegexValueEnv& venv) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return r;
    case MreKind::Var: {
      auto v = venv.lookup(r->name());
      return v ? Mre::literal(*v) : r;
    }
    case MreKind::Star:
      return Mre::star(substitute_values(r->inner(), venv));
    case MreKind::Alt:
      return Mre::alt(substitute_values(r->left(), venv), substitute_values(r->right(), venv));
    case MreKind::Concat:
      return Mre::concat(substitute_values(r->left(), venv),
                         substitute_values(r->right(), venv));
    case MreKind::Bind: {
      // Unique binders are assumed upstream; still honor shadowing.
      MrePtr def = substitute_values(r->def(), venv);
      MrePtr body;
      if (venv.lookup(r->name())) {
        RegexValueEnv without;
        for (std::size_t i = 0; i < venv.size(); ++i) {
          if (venv.at(i).first != r->name()) {
            without = without.extended(venv.at(i).first, venv.at(i).second);
          }
        }
        body = substitute_values(r->body(), without);
      } else {
        body = substitute_values(r->body(), venv);
      }
      return Mre::bind(r->name(), std::move(def), std::move(body));
    }
  }
  return r;
}

}  // namespace mrlens
