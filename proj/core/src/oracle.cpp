#include "mrlens/oracle.hpp"

#include <algorithm>

#include "mrlens/errors.hpp"
#include "mrlens/unicode.hpp"

namespace mrlens {

namespace {

std::size_t scalar_length(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(),
                    [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

using StringSet = std::set<std::string>;

StringSet concat_bounded(const StringSet& lhs, const StringSet& rhs, std::size_t max_len) {
  StringSet out;
  for (const auto& a : lhs) {
    std::size_t la = scalar_length(a);
    if (la > max_len) continue;
    for (const auto& b : rhs) {
      if (la + scalar_length(b) <= max_len) out.insert(a + b);
    }
  }
  return out;
}

// Kleene closure restricted by length: iterate until no new strings appear.
StringSet star_bounded(const StringSet& base, std::size_t max_len) {
  StringSet out = {""};
  StringSet frontier = out;
  while (!frontier.empty()) {
    StringSet next;
    for (const auto& a : frontier) {
      std::size_t la = scalar_length(a);
      for (const auto& b : base) {
        if (b.empty()) continue;  // appending the empty string never adds strings
        if (la + scalar_length(b) > max_len) continue;
        std::string s = a + b;
        if (!out.count(s)) next.insert(std::move(s));
      }
    }
    out.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

std::set<std::string> enumerate_regex(const MrePtr& r, const RegexValueEnv& env,
                                      std::size_t max_len) {
  switch (r->kind()) {
    case MreKind::Epsilon:
      return {""};
    case MreKind::Const: {
      std::string s = encode_utf8(r->ch());
      if (1 <= max_len) return {std::move(s)};
      return {};
    }
    case MreKind::Var: {
      auto v = env.lookup(r->name());
      if (!v) throw UnboundVariable(r->name());
      if (scalar_length(*v) <= max_len) return {*v};
      return {};
    }
    case MreKind::Star:
      return star_bounded(enumerate_regex(r->inner(), env, max_len), max_len);
    case MreKind::Alt: {
      StringSet out = enumerate_regex(r->left(), env, max_len);
      StringSet rhs = enumerate_regex(r->right(), env, max_len);
      out.insert(rhs.begin(), rhs.end());
      return out;
    }
    case MreKind::Concat:
      return concat_bounded(enumerate_regex(r->left(), env, max_len),
                            enumerate_regex(r->right(), env, max_len), max_len);
    case MreKind::Bind: {
      // Candidate witnesses up to max_len suffice: a witness embedded in an
      // accepted string can never exceed the whole, and when the variable is
      // unused the body language does not depend on the witness.
      StringSet out;
      for (const auto& witness : enumerate_regex(r->def(), env, max_len)) {
        StringSet body = enumerate_regex(r->body(), env.extended(r->name(), witness), max_len);
        out.insert(body.begin(), body.end());
      }
      return out;
    }
  }
  return {};
}

bool regex_member(const MrePtr& r, const RegexValueEnv& env, const std::string& s) {
  return enumerate_regex(r, env, scalar_length(s)).count(s) > 0;
}

namespace {

StringSet enumerate_partial(const PartialPtr& p, const DefEnv& defs, const RegexValueEnv& env,
                            std::size_t max_len) {
  switch (p->kind()) {
    case PartialKind::Epsilon:
      return {""};
    case PartialKind::Const: {
      if (1 <= max_len) return {encode_utf8(p->ch())};
      return {};
    }
    case PartialKind::Var: {
      auto v = env.lookup(p->name());
      if (!v) throw UnboundVariable(p->name());
      if (scalar_length(*v) <= max_len) return {*v};
      return {};
    }
    case PartialKind::Star:
      return star_bounded(enumerate_partial(p->inner(), defs, env, max_len), max_len);
    case PartialKind::Alt: {
      StringSet out = enumerate_partial(p->left(), defs, env, max_len);
      StringSet rhs = enumerate_partial(p->right(), defs, env, max_len);
      out.insert(rhs.begin(), rhs.end());
      return out;
    }
    case PartialKind::Concat:
      return concat_bounded(enumerate_partial(p->left(), defs, env, max_len),
                            enumerate_partial(p->right(), defs, env, max_len), max_len);
    case PartialKind::Scope: {
      auto def = defs.lookup(p->name());
      if (!def) throw UndefinedScopeVariable(p->name());
      DefEnv restricted = defs.prefix_before(p->name());
      StringSet out;
      for (const auto& witness : enumerate_partial(*def, restricted, env, max_len)) {
        StringSet body =
            enumerate_partial(p->body(), defs, env.extended(p->name(), witness), max_len);
        out.insert(body.begin(), body.end());
      }
      return out;
    }
  }
  return {};
}

}  // namespace

std::set<std::string> enumerate_sre(const Sre& e, const RegexValueEnv& env, std::size_t max_len) {
  return enumerate_partial(e.main, e.defs, env, max_len);
}

namespace {

using PairSet = std::set<std::pair<std::string, std::string>>;

bool pair_fits(const std::pair<std::string, std::string>& p, std::size_t max_len) {
  return scalar_length(p.first) <= max_len && scalar_length(p.second) <= max_len;
}

PairSet concat_pairs(const PairSet& lhs, const PairSet& rhs, bool swap_second,
                     std::size_t max_len) {
  PairSet out;
  for (const auto& a : lhs) {
    for (const auto& b : rhs) {
      std::pair<std::string, std::string> p =
          swap_second ? std::make_pair(a.first + b.first, b.second + a.second)
                      : std::make_pair(a.first + b.first, a.second + b.second);
      if (pair_fits(p, max_len)) out.insert(std::move(p));
    }
  }
  return out;
}

}  // namespace

std::set<std::pair<std::string, std::string>> enumerate_lens(const LensPtr& l,
                                                             const LensValueEnv& env,
                                                             std::size_t max_len) {
  switch (l->kind()) {
    case LensKind::Const: {
      std::pair<std::string, std::string> p{l->s1(), l->s2()};
      if (pair_fits(p, max_len)) return {std::move(p)};
      return {};
    }
    case LensKind::Id: {
      PairSet out;
      for (const auto& s : enumerate_regex(l->regex(), RegexValueEnv{}, max_len)) {
        out.insert({s, s});
      }
      return out;
    }
    case LensKind::Iter: {
      PairSet base = enumerate_lens(l->inner(), env, max_len);
      PairSet out = {{"", ""}};
      PairSet frontier = out;
      while (!frontier.empty()) {
        PairSet next;
        for (const auto& a : frontier) {
          for (const auto& b : base) {
            if (b.first.empty() && b.second.empty()) continue;
            std::pair<std::string, std::string> p{a.first + b.first, a.second + b.second};
            if (pair_fits(p, max_len) && !out.count(p)) next.insert(std::move(p));
          }
        }
        out.insert(next.begin(), next.end());
        frontier = std::move(next);
      }
      return out;
    }
    case LensKind::Concat:
      return concat_pairs(enumerate_lens(l->left(), env, max_len),
                          enumerate_lens(l->right(), env, max_len), false, max_len);
    case LensKind::Swap:
      return concat_pairs(enumerate_lens(l->left(), env, max_len),
                          enumerate_lens(l->right(), env, max_len), true, max_len);
    case LensKind::Or: {
      PairSet out = enumerate_lens(l->left(), env, max_len);
      PairSet rhs = enumerate_lens(l->right(), env, max_len);
      out.insert(rhs.begin(), rhs.end());
      return out;
    }
    case LensKind::Comp: {
      PairSet lhs = enumerate_lens(l->left(), env, max_len);
      PairSet rhs = enumerate_lens(l->right(), env, max_len);
      PairSet out;
      for (const auto& a : lhs) {
        for (const auto& b : rhs) {
          if (a.second == b.first) out.insert({a.first, b.second});
        }
      }
      return out;
    }
    case LensKind::Var: {
      auto v = env.lookup(l->name());
      if (!v) throw UnboundLensVariable(l->name());
      if (pair_fits(*v, max_len)) return {*v};
      return {};
    }
    case LensKind::Link: {
      PairSet out;
      for (const auto& witness : enumerate_lens(l->def(), env, max_len)) {
        PairSet body =
            enumerate_lens(l->body(), env.extended(l->name(), witness.first, witness.second),
                           max_len);
        out.insert(body.begin(), body.end());
      }
      return out;
    }
  }
  return {};
}

}  // namespace mrlens
