#include "mrlens/mrras.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "mrlens/errors.hpp"
#include "mrlens/unicode.hpp"

namespace mrlens {

namespace {

struct Fragment {
  int initial = 0;
  std::set<int> finals;
};

struct FsaBuilder {
  Automaton aut;

  int fresh() { return aut.num_states++; }

  void edge(int from, int to, AutSymbol sym, const PartialRegex* origin, EdgeRole role) {
    aut.transitions.push_back({from, to, std::move(sym), origin, role});
  }

  Fragment build(const PartialPtr& p) {
    switch (p->kind()) {
      case PartialKind::Epsilon: {
        int j = fresh(), k = fresh();
        edge(j, k, AutSymbol::eps(), p.get(), EdgeRole::Consume);
        return {j, {k}};
      }
      case PartialKind::Const: {
        int j = fresh(), k = fresh();
        edge(j, k, AutSymbol::character(encode_utf8(p->ch())), p.get(), EdgeRole::Consume);
        return {j, {k}};
      }
      case PartialKind::Var: {
        check_index(p->index());
        int j = fresh(), k = fresh();
        edge(j, k, AutSymbol::ref(p->index()), p.get(), EdgeRole::Consume);
        return {j, {k}};
      }
      case PartialKind::Star: {
        Fragment f = build(p->inner());
        int j = fresh();
        edge(j, f.initial, AutSymbol::eps(), p.get(), EdgeRole::StarEnter);
        for (int q : f.finals) {
          edge(q, f.initial, AutSymbol::eps(), p.get(), EdgeRole::StarLoop);
        }
        Fragment out{j, f.finals};
        out.finals.insert(j);
        return out;
      }
      case PartialKind::Alt: {
        Fragment f1 = build(p->left());
        Fragment f2 = build(p->right());
        int j = fresh();
        edge(j, f1.initial, AutSymbol::eps(), p.get(), EdgeRole::AltLeft);
        edge(j, f2.initial, AutSymbol::eps(), p.get(), EdgeRole::AltRight);
        Fragment out{j, f1.finals};
        out.finals.insert(f2.finals.begin(), f2.finals.end());
        return out;
      }
      case PartialKind::Concat: {
        Fragment f1 = build(p->left());
        Fragment f2 = build(p->right());
        for (int q : f1.finals) {
          edge(q, f2.initial, AutSymbol::eps(), p.get(), EdgeRole::ConcatJoin);
        }
        return {f1.initial, f2.finals};
      }
      case PartialKind::Scope: {
        check_index(p->index());
        Fragment f = build(p->body());
        int j = fresh(), k = fresh();
        edge(j, f.initial, AutSymbol::open(p->index()), p.get(), EdgeRole::ScopeOpen);
        for (int q : f.finals) {
          edge(q, k, AutSymbol::close(p->index()), p.get(), EdgeRole::ScopeClose);
        }
        return {j, {k}};
      }
    }
    throw InvariantViolation("unhandled partial regex kind");
  }

  void check_index(int h) const {
    if (h < 0) throw InvariantViolation("partial regex has not been indexed");
    if (h >= aut.index) throw IndexOutOfRange(h, aut.index);
  }
};

}  // namespace

Automaton rpart_to_fsa(const PartialPtr& p, int automaton_index) {
  FsaBuilder b;
  b.aut.index = automaton_index;
  Fragment root = b.build(p);
  b.aut.initial = root.initial;
  b.aut.finals = std::move(root.finals);
  return std::move(b.aut);
}

Mrras sre_to_mrras(const Sre& e) {
  Mrras m;
  m.source = vars_to_indices(e);
  for (std::size_t k = 0; k < m.source.defs.size(); ++k) {
    m.automata.push_back(rpart_to_fsa(m.source.defs.entry_at(k).second, static_cast<int>(k)));
  }
  m.automata.push_back(
      rpart_to_fsa(m.source.main, static_cast<int>(m.source.defs.size())));
  return m;
}

Mrras compile(const MrePtr& r) {
  auto fv = free_vars(r);
  if (!fv.empty()) throw UnboundVariable(*fv.begin());
  return sre_to_mrras(mre_to_sre(alpha_rename(r)));
}

Config initial_config(const Mrras& m, const std::string& input) {
  Config c;
  c.aut = m.main_index();
  c.state = m.main().initial;
  c.pos = 0;
  c.buffers.assign(m.automata.size(), Buffer::out());
  c.buffers.back() = Buffer::curr("");
  (void)input;
  return c;
}

std::size_t ConfigHash::operator()(const Config& c) const noexcept {
  std::size_t h = std::hash<int>()(c.aut * 8191 + c.state);
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(std::hash<std::size_t>()(c.pos));
  for (const auto& [a, s] : c.stack) mix(std::hash<int>()(a * 131 + s));
  for (const auto& b : c.buffers) {
    mix(static_cast<std::size_t>(b.state));
    mix(std::hash<std::string>()(b.text));
  }
  return h;
}

const char* step_rule_name(StepRule rule) {
  switch (rule) {
    case StepRule::ConsumeChar: return "ConsumeChar";
    case StepRule::ConsumeVar: return "ConsumeVar";
    case StepRule::ScopeIn: return "ScopeIn";
    case StepRule::ScopeOut: return "ScopeOut";
    case StepRule::SwitchInit: return "SwitchInit";
    case StepRule::SwitchReturn: return "SwitchReturn";
  }
  return "?";
}

std::vector<std::pair<Config, StepRecord>> step(const Mrras& m, const Config& c,
                                                const std::string& input) {
  std::vector<std::pair<Config, StepRecord>> consume, scope, sw;
  const Automaton& active = m.automata[c.aut];

  for (const Transition& t : active.transitions) {
    if (t.from != c.state) continue;
    switch (t.sym.kind) {
      case AutSymbol::Kind::Char:
      case AutSymbol::Kind::Eps: {
        const std::string& chunk = t.sym.chr;  // empty for Eps
        if (input.compare(c.pos, chunk.size(), chunk) != 0) break;
        Config n = c;
        n.state = t.to;
        n.pos += chunk.size();
        n.buffers[c.aut].text += chunk;
        consume.push_back({std::move(n), {StepRule::ConsumeChar, c.aut, &t, chunk}});
        break;
      }
      case AutSymbol::Kind::Ref: {
        const Buffer& b = c.buffers[t.sym.index];
        if (b.state == Buffer::State::Found) {
          if (input.compare(c.pos, b.text.size(), b.text) != 0) break;
          Config n = c;
          n.state = t.to;
          n.pos += b.text.size();
          n.buffers[c.aut].text += b.text;
          consume.push_back({std::move(n), {StepRule::ConsumeVar, c.aut, &t, b.text}});
        } else if (b.state == Buffer::State::In) {
          Config n = c;
          n.stack.emplace_back(c.aut, t.to);
          n.aut = t.sym.index;
          n.state = m.automata[t.sym.index].initial;
          n.buffers[t.sym.index] = Buffer::curr("");
          sw.push_back({std::move(n), {StepRule::SwitchInit, c.aut, &t, ""}});
        }
        break;
      }
      case AutSymbol::Kind::Open: {
        if (c.buffers[t.sym.index].state != Buffer::State::Out) break;
        Config n = c;
        n.state = t.to;
        n.buffers[t.sym.index] = Buffer::in();
        scope.push_back({std::move(n), {StepRule::ScopeIn, c.aut, &t, ""}});
        break;
      }
      case AutSymbol::Kind::Close: {
        const Buffer& b = c.buffers[t.sym.index];
        if (b.state != Buffer::State::In && b.state != Buffer::State::Found) break;
        Config n = c;
        n.state = t.to;
        n.buffers[t.sym.index] = Buffer::out();
        scope.push_back({std::move(n), {StepRule::ScopeOut, c.aut, &t, ""}});
        break;
      }
    }
  }

  // A variable automaton in a final state can hand its match back to the
  // caller on top of the stack.
  if (c.aut != m.main_index() && active.is_final(c.state) && !c.stack.empty()) {
    auto [caller_aut, caller_state] = c.stack.back();
    if (c.buffers[c.aut].state != Buffer::State::Curr ||
        c.buffers[caller_aut].state != Buffer::State::Curr) {
      throw InvariantViolation("buffers out of discipline at SwitchReturn");
    }
    std::string matched = c.buffers[c.aut].text;
    Config n = c;
    n.stack.pop_back();
    n.buffers[c.aut] = Buffer::found(matched);
    n.buffers[caller_aut].text += matched;
    n.aut = caller_aut;
    n.state = caller_state;
    StepRecord rec{StepRule::SwitchReturn, c.aut, nullptr, matched, caller_aut, caller_state};
    sw.push_back({std::move(n), std::move(rec)});
  }

  std::vector<std::pair<Config, StepRecord>> out;
  out.reserve(consume.size() + scope.size() + sw.size());
  for (auto& x : consume) out.push_back(std::move(x));
  for (auto& x : scope) out.push_back(std::move(x));
  for (auto& x : sw) out.push_back(std::move(x));
  return out;
}

bool is_accepting(const Mrras& m, const Config& c, const std::string& input) {
  if (c.aut != m.main_index()) return false;
  if (!m.main().is_final(c.state)) return false;
  if (c.pos != input.size()) return false;
  if (!c.stack.empty()) return false;
  for (int k = 0; k + 1 < static_cast<int>(c.buffers.size()); ++k) {
    if (c.buffers[k].state != Buffer::State::Out) return false;
  }
  const Buffer& main_buf = c.buffers.back();
  return main_buf.state == Buffer::State::Curr && main_buf.text == input;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void apply_order(std::vector<std::pair<Config, StepRecord>>& succ, const ExploreOrder& order,
                 const Config& at) {
  switch (order.kind) {
    case ExploreOrder::Kind::Canonical:
      return;
    case ExploreOrder::Kind::Reversed:
      std::reverse(succ.begin(), succ.end());
      return;
    case ExploreOrder::Kind::Seeded: {
      std::uint64_t state = splitmix64(order.seed ^ ConfigHash{}(at));
      for (std::size_t i = succ.size(); i > 1; --i) {
        state = splitmix64(state);
        std::swap(succ[i - 1], succ[state % i]);
      }
      return;
    }
  }
}

// Depth-first search over the configuration graph. A globally visited
// configuration never needs re-exploration: acceptance depends only on the
// configuration itself.
class Search {
 public:
  Search(const Mrras& m, const std::string& input, ExploreOrder order)
      : m_(m), input_(input), order_(order) {}

  std::optional<Trace> run() {
    if (!valid_utf8(input_)) {
      throw InvalidInputSymbol("input string is not a sequence of alphabet symbols");
    }
    Trace path;
    if (dfs(initial_config(m_, input_), path)) return path;
    return std::nullopt;
  }

  std::size_t furthest() const { return furthest_; }

 private:
  bool dfs(const Config& c, Trace& path) {
    if (!visited_.insert(c).second) return false;
    furthest_ = std::max(furthest_, c.pos);
    if (is_accepting(m_, c, input_)) return true;
    auto succ = step(m_, c, input_);
    apply_order(succ, order_, c);
    for (auto& [next, rec] : succ) {
      path.push_back(rec);
      if (dfs(next, path)) return true;
      path.pop_back();
    }
    return false;
  }

  const Mrras& m_;
  const std::string& input_;
  ExploreOrder order_;
  std::size_t furthest_ = 0;
  std::unordered_set<Config, ConfigHash> visited_;
};

}  // namespace

bool accepts(const Mrras& m, const std::string& input) {
  return Search(m, input, ExploreOrder::canonical()).run().has_value();
}

std::optional<Trace> match_witness(const Mrras& m, const std::string& input, ExploreOrder order) {
  return Search(m, input, order).run();
}

MatchResult match_details(const Mrras& m, const std::string& input, ExploreOrder order) {
  Search s(m, input, order);
  MatchResult out;
  out.trace = s.run();
  out.furthest = s.furthest();
  return out;
}

Config replay(const Mrras& m, const std::string& input, const Trace& trace) {
  Config c = initial_config(m, input);
  for (const StepRecord& rec : trace) {
    auto succ = step(m, c, input);
    bool found = false;
    for (auto& [next, cand] : succ) {
      if (cand.rule == rec.rule && cand.transition == rec.transition &&
          cand.consumed == rec.consumed && cand.return_aut == rec.return_aut &&
          cand.return_state == rec.return_state) {
        c = std::move(next);
        found = true;
        break;
      }
    }
    if (!found) {
      throw InvariantViolation(std::string("trace replay: step not applicable: ") +
                               step_rule_name(rec.rule));
    }
  }
  return c;
}

std::vector<StepRule> rule_summary(const Trace& trace) {
  std::vector<StepRule> out;
  for (const auto& rec : trace) {
    if (rec.rule == StepRule::ConsumeChar && rec.consumed.empty()) continue;
    out.push_back(rec.rule);
  }
  return out;
}

}  // namespace mrlens
