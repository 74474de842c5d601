#include "mrlens/sre.hpp"

#include <set>

#include "mrlens/errors.hpp"

namespace mrlens {

PartialPtr PartialRegex::epsilon(MrePtr origin) {
  return PartialPtr(
      new PartialRegex(PartialKind::Epsilon, 0, "", -1, nullptr, nullptr, std::move(origin)));
}

PartialPtr PartialRegex::chr(char32_t c, MrePtr origin) {
  return PartialPtr(
      new PartialRegex(PartialKind::Const, c, "", -1, nullptr, nullptr, std::move(origin)));
}

PartialPtr PartialRegex::var(std::string name, int index, MrePtr origin) {
  return PartialPtr(new PartialRegex(PartialKind::Var, 0, std::move(name), index, nullptr,
                                     nullptr, std::move(origin)));
}

PartialPtr PartialRegex::star(PartialPtr inner, MrePtr origin) {
  return PartialPtr(new PartialRegex(PartialKind::Star, 0, "", -1, std::move(inner), nullptr,
                                     std::move(origin)));
}

PartialPtr PartialRegex::alt(PartialPtr left, PartialPtr right, MrePtr origin) {
  return PartialPtr(new PartialRegex(PartialKind::Alt, 0, "", -1, std::move(left),
                                     std::move(right), std::move(origin)));
}

PartialPtr PartialRegex::concat(PartialPtr left, PartialPtr right, MrePtr origin) {
  return PartialPtr(new PartialRegex(PartialKind::Concat, 0, "", -1, std::move(left),
                                     std::move(right), std::move(origin)));
}

PartialPtr PartialRegex::scope(PartialPtr body, std::string name, int index, MrePtr origin) {
  return PartialPtr(new PartialRegex(PartialKind::Scope, 0, std::move(name), index,
                                     std::move(body), nullptr, std::move(origin)));
}

bool structurally_equal(const PartialPtr& a, const PartialPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case PartialKind::Epsilon:
      return true;
    case PartialKind::Const:
      return a->ch() == b->ch();
    case PartialKind::Var:
      return a->name() == b->name();
    case PartialKind::Star:
      return structurally_equal(a->inner(), b->inner());
    case PartialKind::Alt:
    case PartialKind::Concat:
      return structurally_equal(a->left(), b->left()) &&
             structurally_equal(a->right(), b->right());
    case PartialKind::Scope:
      return a->name() == b->name() && structurally_equal(a->body(), b->body());
  }
  return false;
}

void DefEnv::append(std::string name, PartialPtr def) {
  entries_.emplace_back(std::move(name), std::move(def));
}

std::optional<std::size_t> DefEnv::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first == name) return i;
  }
  return std::nullopt;
}

std::optional<PartialPtr> DefEnv::lookup(std::string_view name) const {
  auto i = index_of(name);
  if (!i) return std::nullopt;
  return entries_[*i].second;
}

DefEnv DefEnv::prefix_before(std::string_view name) const {
  auto i = index_of(name);
  return prefix(i ? *i : 0);
}

DefEnv DefEnv::prefix(std::size_t i) const {
  DefEnv out;
  out.entries_.assign(entries_.begin(), entries_.begin() + i);
  return out;
}

namespace {

void collect_binders(const MrePtr& r, std::set<std::string>& seen) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
    case MreKind::Var:
      return;
    case MreKind::Star:
      collect_binders(r->inner(), seen);
      return;
    case MreKind::Alt:
    case MreKind::Concat:
      collect_binders(r->left(), seen);
      collect_binders(r->right(), seen);
      return;
    case MreKind::Bind:
      if (!seen.insert(r->name()).second) throw DuplicateBinder(r->name());
      collect_binders(r->def(), seen);
      collect_binders(r->body(), seen);
      return;
  }
}

// The accumulator-threading translation: each call receives the definition
// environment built so far and returns the partial regex plus the
// environment extended with the definitions discovered inside. The binary
// case translates both operands against the incoming environment and
// concatenates the fresh suffixes left to right.
PartialPtr to_sre_acc(const MrePtr& r, DefEnv& defs) {
  switch (r->kind()) {
    case MreKind::Epsilon:
      return PartialRegex::epsilon(r);
    case MreKind::Const:
      return PartialRegex::chr(r->ch(), r);
    case MreKind::Var:
      return PartialRegex::var(r->name(), -1, r);
    case MreKind::Star:
      return PartialRegex::star(to_sre_acc(r->inner(), defs), r);
    case MreKind::Alt:
    case MreKind::Concat: {
      std::size_t shared = defs.size();
      PartialPtr p1 = to_sre_acc(r->left(), defs);
      // Translate the right operand against the shared prefix, then splice
      // its fresh suffix after the left's.
      DefEnv right_defs = defs.prefix(shared);
      PartialPtr p2 = to_sre_acc(r->right(), right_defs);
      for (std::size_t i = shared; i < right_defs.size(); ++i) {
        defs.append(right_defs.entry_at(i).first, right_defs.entry_at(i).second);
      }
      return r->kind() == MreKind::Alt ? PartialRegex::alt(std::move(p1), std::move(p2), r)
                                       : PartialRegex::concat(std::move(p1), std::move(p2), r);
    }
    case MreKind::Bind: {
      PartialPtr p1 = to_sre_acc(r->def(), defs);
      defs.append(r->name(), std::move(p1));
      PartialPtr p2 = to_sre_acc(r->body(), defs);
      return PartialRegex::scope(std::move(p2), r->name(), -1, r);
    }
  }
  return nullptr;
}

PartialPtr index_partial(const PartialPtr& p, const DefEnv& defs) {
  switch (p->kind()) {
    case PartialKind::Epsilon:
    case PartialKind::Const:
      return p;
    case PartialKind::Var: {
      auto i = defs.index_of(p->name());
      if (!i) throw UnknownVariable(p->name());
      return PartialRegex::var(p->name(), static_cast<int>(*i), p->origin());
    }
    case PartialKind::Star:
      return PartialRegex::star(index_partial(p->inner(), defs), p->origin());
    case PartialKind::Alt:
      return PartialRegex::alt(index_partial(p->left(), defs), index_partial(p->right(), defs),
                               p->origin());
    case PartialKind::Concat:
      return PartialRegex::concat(index_partial(p->left(), defs),
                                  index_partial(p->right(), defs), p->origin());
    case PartialKind::Scope: {
      auto i = defs.index_of(p->name());
      if (!i) throw UnknownVariable(p->name());
      return PartialRegex::scope(index_partial(p->body(), defs), p->name(),
                                 static_cast<int>(*i), p->origin());
    }
  }
  return p;
}

}  // namespace

Sre mre_to_sre(const MrePtr& r) {
  std::set<std::string> seen;
  collect_binders(r, seen);
  DefEnv defs;
  PartialPtr main = to_sre_acc(r, defs);
  return Sre{std::move(main), std::move(defs)};
}

Sre vars_to_indices(const Sre& e) {
  Sre out;
  for (std::size_t i = 0; i < e.defs.size(); ++i) {
    const auto& [name, def] = e.defs.entry_at(i);
    out.defs.append(name, index_partial(def, e.defs));
  }
  out.main = index_partial(e.main, e.defs);
  return out;
}

}  // namespace mrlens
