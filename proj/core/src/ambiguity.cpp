#include "mrlens/ambiguity.hpp"

#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mrlens/errors.hpp"
#include "mrlens/mrras.hpp"
#include "mrlens/oracle.hpp"
#include "mrlens/sre.hpp"

namespace mrlens {

namespace {

// ---------------------------------------------------------------------------
// Variable-free approximation: substitute every variable by its type,
// transitively, and drop binders. The result's language contains the
// original's under every consistent value environment, so disjointness and
// unique-split facts about it transfer.
// ---------------------------------------------------------------------------

MrePtr vfa(const RegexTypeEnv& tenv, const MrePtr& r) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return r;
    case MreKind::Var: {
      auto i = tenv.index_of(r->name());
      if (!i) throw UnboundVariable(r->name());
      return vfa(tenv.prefix(*i), tenv.at(*i).second);
    }
    case MreKind::Star:
      return Mre::star(vfa(tenv, r->inner()));
    case MreKind::Alt:
      return Mre::alt(vfa(tenv, r->left()), vfa(tenv, r->right()));
    case MreKind::Concat:
      return Mre::concat(vfa(tenv, r->left()), vfa(tenv, r->right()));
    case MreKind::Bind:
      return vfa(tenv.extended(r->name(), r->def()), r->body());
  }
  return r;
}

bool nullable(const MrePtr& r) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Star:
      return true;
    case MreKind::Const:
      return false;
    case MreKind::Alt:
      return nullable(r->left()) || nullable(r->right());
    case MreKind::Concat:
      return nullable(r->left()) && nullable(r->right());
    default:
      throw InvariantViolation("nullable expects a variable-free expression");
  }
}

// ---------------------------------------------------------------------------
// Epsilon-free NFA over single-symbol strings, built from the shared FSA
// construction. Used for the classical product checks.
// ---------------------------------------------------------------------------

struct Nfa {
  int n = 0;
  int initial = 0;
  std::vector<bool> accepting;
  // state -> symbol -> targets
  std::vector<std::unordered_map<std::string, std::vector<int>>> edges;
};

Nfa to_nfa(const MrePtr& variable_free) {
  Sre sre = mre_to_sre(variable_free);  // no binders, so no definitions
  Automaton a = rpart_to_fsa(sre.main, 0);

  std::vector<std::vector<int>> eps(a.num_states);
  std::vector<std::vector<std::pair<std::string, int>>> chars(a.num_states);
  for (const auto& t : a.transitions) {
    if (t.sym.kind == AutSymbol::Kind::Eps) {
      eps[t.from].push_back(t.to);
    } else {
      chars[t.from].emplace_back(t.sym.chr, t.to);
    }
  }

  // Forward epsilon closures.
  std::vector<std::vector<int>> closure(a.num_states);
  for (int s = 0; s < a.num_states; ++s) {
    std::vector<bool> seen(a.num_states, false);
    std::deque<int> work{s};
    seen[s] = true;
    while (!work.empty()) {
      int q = work.front();
      work.pop_front();
      closure[s].push_back(q);
      for (int to : eps[q]) {
        if (!seen[to]) {
          seen[to] = true;
          work.push_back(to);
        }
      }
    }
  }

  Nfa nfa;
  nfa.n = a.num_states;
  nfa.initial = a.initial;
  nfa.accepting.assign(a.num_states, false);
  nfa.edges.resize(a.num_states);
  for (int s = 0; s < a.num_states; ++s) {
    for (int q : closure[s]) {
      if (a.finals.count(q)) nfa.accepting[s] = true;
      for (const auto& [sym, to] : chars[q]) nfa.edges[s][sym].push_back(to);
    }
  }
  return nfa;
}

// Synchronized product reachability from (ia, ib); returns all reachable
// pairs, with a sample string leading to each pair when `witnesses` is set.
struct PairReach {
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<int, int>> pairs;
  std::unordered_map<std::uint64_t, std::string> sample;

  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }
};

PairReach product_reach(const Nfa& na, const Nfa& nb, int ia, int ib, bool witnesses) {
  PairReach r;
  std::deque<std::pair<int, int>> work;
  auto push = [&](int a, int b, const std::string& via) {
    auto k = PairReach::key(a, b);
    if (!r.seen.insert(k).second) return;
    r.pairs.emplace_back(a, b);
    if (witnesses) r.sample[k] = via;
    work.emplace_back(a, b);
  };
  push(ia, ib, "");
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    std::string here = witnesses ? r.sample[PairReach::key(a, b)] : std::string();
    for (const auto& [sym, tos] : na.edges[a]) {
      auto it = nb.edges[b].find(sym);
      if (it == nb.edges[b].end()) continue;
      for (int ta : tos) {
        for (int tb : it->second) push(ta, tb, here + sym);
      }
    }
  }
  return r;
}

// A sample string of L(na from states `init`) ∩ L(nb from ib) with length
// >= 1, or nullopt. `nb_accepting` overrides nb's accepting set when given.
std::optional<std::string> intersect_nonempty(const Nfa& na, const std::vector<int>& init_a,
                                              const Nfa& nb, int ib,
                                              const std::vector<bool>* nb_accepting) {
  // State: (a, b, consumed-at-least-one)
  auto key = [](int a, int b, bool c) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 33) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 1) |
           (c ? 1 : 0);
  };
  std::unordered_map<std::uint64_t, std::string> sample;
  std::deque<std::tuple<int, int, bool>> work;
  auto accept_b = [&](int b) { return nb_accepting ? (*nb_accepting)[b] : nb.accepting[b]; };
  auto push = [&](int a, int b, bool c, const std::string& via) {
    auto k = key(a, b, c);
    if (sample.count(k)) return;
    sample[k] = via;
    work.emplace_back(a, b, c);
  };
  for (int a : init_a) push(a, ib, false, "");
  while (!work.empty()) {
    auto [a, b, c] = work.front();
    work.pop_front();
    const std::string& here = sample[key(a, b, c)];
    if (c && na.accepting[a] && accept_b(b)) return here;
    for (const auto& [sym, tos] : na.edges[a]) {
      auto it = nb.edges[b].find(sym);
      if (it == nb.edges[b].end()) continue;
      for (int ta : tos) {
        for (int tb : it->second) push(ta, tb, true, here + sym);
      }
    }
  }
  return std::nullopt;
}

// States p of n such that L_p(n) ∩ L(n) is nonempty: backward fixpoint over
// the synchronized self-product.
std::vector<bool> joinable_with_language(const Nfa& n) {
  // Reverse edges per symbol.
  std::vector<std::unordered_map<std::string, std::vector<int>>> rev(n.n);
  for (int s = 0; s < n.n; ++s) {
    for (const auto& [sym, tos] : n.edges[s]) {
      for (int to : tos) rev[to][sym].push_back(s);
    }
  }
  std::unordered_set<std::uint64_t> ne;
  std::deque<std::pair<int, int>> work;
  auto push = [&](int a, int b) {
    auto k = PairReach::key(a, b);
    if (!ne.insert(k).second) return;
    work.emplace_back(a, b);
  };
  for (int a = 0; a < n.n; ++a) {
    if (!n.accepting[a]) continue;
    for (int b = 0; b < n.n; ++b) {
      if (n.accepting[b]) push(a, b);
    }
  }
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    for (const auto& [sym, preds_a] : rev[a]) {
      auto it = rev[b].find(sym);
      if (it == rev[b].end()) continue;
      for (int pa : preds_a) {
        for (int pb : it->second) push(pa, pb);
      }
    }
  }
  std::vector<bool> out(n.n, false);
  for (int p = 0; p < n.n; ++p) {
    if (ne.count(PairReach::key(p, n.initial))) out[p] = true;
  }
  return out;
}

// Classical unique-split check for L(n1) · L(n2): ambiguous iff some
// nonempty y both extends an L1-string inside L1 and can be stripped off the
// front of an L2-string leaving an L2-string.
std::optional<std::string> concat_overlap(const Nfa& n1, const Nfa& n2) {
  PairReach r = product_reach(n1, n1, n1.initial, n1.initial, false);
  std::vector<bool> start(n1.n, false);
  for (auto [a, b] : r.pairs) {
    if (n1.accepting[a]) start[b] = true;
    if (n1.accepting[b]) start[a] = true;
  }
  std::vector<int> inits;
  for (int p = 0; p < n1.n; ++p) {
    if (start[p]) inits.push_back(p);
  }
  if (inits.empty()) return std::nullopt;
  std::vector<bool> strippable = joinable_with_language(n2);
  return intersect_nonempty(n1, inits, n2, n2.initial, &strippable);
}

std::optional<std::string> disjoint_overlap(const Nfa& n1, const Nfa& n2) {
  PairReach r = product_reach(n1, n2, n1.initial, n2.initial, true);
  for (auto [a, b] : r.pairs) {
    if (n1.accepting[a] && n2.accepting[b]) return r.sample[PairReach::key(a, b)];
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bounded oracle confirmation over consistent value environments.
// ---------------------------------------------------------------------------

constexpr std::size_t kMaxVenvs = 2048;

void gen_venvs(const RegexTypeEnv& tenv, std::size_t i, const RegexValueEnv& acc,
               std::size_t bound, std::vector<RegexValueEnv>& out) {
  if (out.size() >= kMaxVenvs) return;
  if (i == tenv.size()) {
    out.push_back(acc);
    return;
  }
  const auto& [name, type] = tenv.at(i);
  for (const auto& value : enumerate_regex(type, acc, bound)) {
    gen_venvs(tenv, i + 1, acc.extended(name, value), bound, out);
    if (out.size() >= kMaxVenvs) return;
  }
}

std::vector<RegexValueEnv> consistent_venvs(const RegexTypeEnv& tenv, std::size_t bound) {
  std::vector<RegexValueEnv> out;
  gen_venvs(tenv, 0, RegexValueEnv{}, bound, out);
  return out;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::optional<std::string> confirm_iter(const MrePtr& r, const RegexValueEnv& venv,
                                        std::size_t bound) {
  auto lang = enumerate_regex(r, venv, bound);
  if (lang.count("")) {
    return "the empty string is iterated ambiguously (zero or more empty parts)";
  }
  std::map<std::string, int, LengthLexLess> factorizations{{"", 1}};
  for (auto it = factorizations.begin(); it != factorizations.end(); ++it) {
    for (const auto& part : lang) {
      if (it->first.size() + part.size() > bound) continue;
      auto [slot, inserted] = factorizations.try_emplace(it->first + part, 0);
      slot->second += it->second;
      if (slot->second > 1) {
        return quoted(slot->first) + " factors in more than one way";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> confirm_concat(const MrePtr& r1, const MrePtr& r2,
                                          const RegexValueEnv& venv, std::size_t bound) {
  auto l1 = enumerate_regex(r1, venv, bound);
  auto l2 = enumerate_regex(r2, venv, bound);
  std::map<std::string, std::string> first_split;
  for (const auto& a : l1) {
    for (const auto& b : l2) {
      if (a.size() + b.size() > bound) continue;
      auto [it, inserted] = first_split.try_emplace(a + b, a);
      if (!inserted && it->second != a) {
        return quoted(a + b) + " splits after " + quoted(it->second) + " and after " + quoted(a);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> confirm_alt(const MrePtr& r1, const MrePtr& r2,
                                       const RegexValueEnv& venv, std::size_t bound) {
  auto l1 = enumerate_regex(r1, venv, bound);
  auto l2 = enumerate_regex(r2, venv, bound);
  for (const auto& s : l1) {
    if (l2.count(s)) return quoted(s) + " matches both alternatives";
  }
  return std::nullopt;
}

std::optional<std::string> confirm_bind(const std::string& x, const MrePtr& r1, const MrePtr& r2,
                                        const RegexValueEnv& venv, std::size_t bound) {
  std::map<std::string, std::string> witness_for;
  for (const auto& w : enumerate_regex(r1, venv, bound)) {
    for (const auto& body : enumerate_regex(r2, venv.extended(x, w), bound)) {
      auto [it, inserted] = witness_for.try_emplace(body, w);
      if (!inserted && it->second != w) {
        return quoted(body) + " arises from witnesses " + quoted(it->second) + " and " +
               quoted(w);
      }
    }
  }
  return std::nullopt;
}

template <typename Confirm>
std::optional<std::string> over_venvs(const RegexTypeEnv& tenv, std::size_t bound,
                                      Confirm&& confirm) {
  for (const auto& venv : consistent_venvs(tenv, bound)) {
    if (auto w = confirm(venv)) return w;
  }
  return std::nullopt;
}

bool used_in_every_branch(const std::string& x, const MrePtr& r) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return false;
    case MreKind::Var:
      return r->name() == x;
    case MreKind::Star:
      return false;  // zero iterations skip the occurrence
    case MreKind::Alt:
      return used_in_every_branch(x, r->left()) && used_in_every_branch(x, r->right());
    case MreKind::Concat:
      return used_in_every_branch(x, r->left()) || used_in_every_branch(x, r->right());
    case MreKind::Bind:
      return r->name() != x && used_in_every_branch(x, r->body());
  }
  return false;
}

std::set<std::string> domain_of(const RegexTypeEnv& tenv) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < tenv.size(); ++i) out.insert(tenv.at(i).first);
  return out;
}

void require_housed(const RegexTypeEnv& tenv, const MrePtr& r) {
  for (const auto& x : free_vars(r)) {
    if (!tenv.contains(x)) throw UnboundVariable(x);
  }
}

AmbVerdict strongly_unambiguous_unique(const RegexTypeEnv& tenv, const MrePtr& r,
                                       std::size_t bound);

}  // namespace

AmbVerdict check_unamb_iter(const RegexTypeEnv& tenv, const MrePtr& r, std::size_t bound) {
  require_housed(tenv, r);
  MrePtr renamed = alpha_rename(r, domain_of(tenv));
  MrePtr approx = vfa(tenv, renamed);
  if (nullable(approx)) {
    auto w = over_venvs(tenv, bound,
                        [&](const RegexValueEnv& v) { return confirm_iter(renamed, v, bound); });
    return AmbVerdict::possibly(
        w.value_or("iterated expression can match the empty string"), w.has_value());
  }
  if (auto y = concat_overlap(to_nfa(approx), to_nfa(Mre::star(approx)))) {
    auto w = over_venvs(tenv, bound,
                        [&](const RegexValueEnv& v) { return confirm_iter(renamed, v, bound); });
    return AmbVerdict::possibly(
        w.value_or("iteration boundary not unique (overlap on " + quoted(*y) + ")"),
        w.has_value());
  }
  if (auto w = over_venvs(tenv, bound, [&](const RegexValueEnv& v) {
        return confirm_iter(renamed, v, bound);
      })) {
    return AmbVerdict::possibly(*w, true);
  }
  return AmbVerdict::ok();
}

AmbVerdict check_unamb_concat(const RegexTypeEnv& tenv, const MrePtr& r1, const MrePtr& r2,
                              std::size_t bound) {
  require_housed(tenv, r1);
  require_housed(tenv, r2);
  MrePtr a = alpha_rename(r1, domain_of(tenv));
  MrePtr b = alpha_rename(r2, domain_of(tenv));
  auto oracle = [&](const RegexValueEnv& v) { return confirm_concat(a, b, v, bound); };
  if (auto y = concat_overlap(to_nfa(vfa(tenv, a)), to_nfa(vfa(tenv, b)))) {
    auto w = over_venvs(tenv, bound, oracle);
    return AmbVerdict::possibly(
        w.value_or("split point not unique (overlap on " + quoted(*y) + ")"), w.has_value());
  }
  if (auto w = over_venvs(tenv, bound, oracle)) return AmbVerdict::possibly(*w, true);
  return AmbVerdict::ok();
}

AmbVerdict check_unamb_alt(const RegexTypeEnv& tenv, const MrePtr& r1, const MrePtr& r2,
                           std::size_t bound) {
  require_housed(tenv, r1);
  require_housed(tenv, r2);
  MrePtr a = alpha_rename(r1, domain_of(tenv));
  MrePtr b = alpha_rename(r2, domain_of(tenv));
  auto oracle = [&](const RegexValueEnv& v) { return confirm_alt(a, b, v, bound); };
  if (auto s = disjoint_overlap(to_nfa(vfa(tenv, a)), to_nfa(vfa(tenv, b)))) {
    auto w = over_venvs(tenv, bound, oracle);
    return AmbVerdict::possibly(
        w.value_or("alternative languages may overlap (on " + quoted(*s) + ")"),
        w.has_value());
  }
  if (auto w = over_venvs(tenv, bound, oracle)) return AmbVerdict::possibly(*w, true);
  return AmbVerdict::ok();
}

AmbVerdict check_unamb_bind(const RegexTypeEnv& tenv, const std::string& x, const MrePtr& r1,
                            const MrePtr& r2, std::size_t bound) {
  require_housed(tenv, r1);
  auto avoid = domain_of(tenv);
  avoid.insert(x);
  MrePtr def = alpha_rename(r1, avoid);
  MrePtr body = alpha_rename(r2, avoid);
  auto oracle = [&](const RegexValueEnv& v) { return confirm_bind(x, def, body, v, bound); };

  if (!used_in_every_branch(x, body)) {
    auto w = over_venvs(tenv, bound, oracle);
    return AmbVerdict::possibly(
        w.value_or("variable " + x + " is not used on every alternation branch"),
        w.has_value());
  }
  // Substituting the type for the variable must leave an unambiguous
  // expression; renaming keeps the duplicated binders distinct.
  AmbVerdict subst =
      strongly_unambiguous(tenv, substitute_var(body, x, def), bound);
  if (!subst) {
    auto w = over_venvs(tenv, bound, oracle);
    return AmbVerdict::possibly(w.value_or("after substituting the variable's type: " +
                                           subst.reason),
                                w.has_value());
  }
  if (auto w = over_venvs(tenv, bound, oracle)) return AmbVerdict::possibly(*w, true);
  return AmbVerdict::ok();
}

namespace {

AmbVerdict strongly_unambiguous_unique(const RegexTypeEnv& tenv, const MrePtr& r,
                                       std::size_t bound) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return AmbVerdict::ok();
    case MreKind::Var: {
      auto i = tenv.index_of(r->name());
      if (!i) throw UnboundVariable(r->name());
      return strongly_unambiguous_unique(tenv.prefix(*i), tenv.at(*i).second, bound);
    }
    case MreKind::Star: {
      if (auto v = check_unamb_iter(tenv, r->inner(), bound); !v) return v;
      return strongly_unambiguous_unique(tenv, r->inner(), bound);
    }
    case MreKind::Alt: {
      if (auto v = check_unamb_alt(tenv, r->left(), r->right(), bound); !v) return v;
      if (auto v = strongly_unambiguous_unique(tenv, r->left(), bound); !v) return v;
      return strongly_unambiguous_unique(tenv, r->right(), bound);
    }
    case MreKind::Concat: {
      if (auto v = check_unamb_concat(tenv, r->left(), r->right(), bound); !v) return v;
      if (auto v = strongly_unambiguous_unique(tenv, r->left(), bound); !v) return v;
      return strongly_unambiguous_unique(tenv, r->right(), bound);
    }
    case MreKind::Bind: {
      if (auto v = check_unamb_bind(tenv, r->name(), r->def(), r->body(), bound); !v) return v;
      if (auto v = strongly_unambiguous_unique(tenv, r->def(), bound); !v) return v;
      return strongly_unambiguous_unique(tenv.extended(r->name(), r->def()), r->body(), bound);
    }
  }
  return AmbVerdict::possibly("unhandled expression kind", false);
}

}  // namespace

AmbVerdict strongly_unambiguous(const RegexTypeEnv& tenv, const MrePtr& r, std::size_t bound) {
  require_housed(tenv, r);
  // Every housed expression denotes a nonempty language, so the
  // empty-language case of the definition never applies here.
  return strongly_unambiguous_unique(tenv, alpha_rename(r, domain_of(tenv)), bound);
}

}  // namespace mrlens
