#include <doctest.h>

#include <deque>
#include <unordered_set>

#include "mrlens/errors.hpp"
#include "mrlens/mrras.hpp"
#include "mrlens/oracle.hpp"
#include "testing.hpp"

using namespace mrlens;
using namespace mrlens::testing;

namespace {

Mrras compile_fixture(const std::string& file, const std::string& name) {
  auto source = load_fixture(file);
  return compile(fixture_regex(source, name));
}

int count_edges(const Automaton& a, AutSymbol::Kind kind) {
  int n = 0;
  for (const auto& t : a.transitions) {
    if (t.sym.kind == kind) ++n;
  }
  return n;
}

// All configurations reachable on the given input.
std::vector<std::pair<Config, Config>> reachable_steps(const Mrras& m, const std::string& input) {
  std::vector<std::pair<Config, Config>> edges;
  std::unordered_set<Config, ConfigHash> seen;
  std::deque<Config> work{initial_config(m, input)};
  seen.insert(work.front());
  while (!work.empty()) {
    Config c = work.front();
    work.pop_front();
    for (auto& [next, rec] : step(m, c, input)) {
      edges.emplace_back(c, next);
      if (seen.insert(next).second) work.push_back(next);
    }
  }
  return edges;
}

bool legal_buffer_change(const Buffer& before, const Buffer& after) {
  using S = Buffer::State;
  if (before.state == after.state) {
    if (before.state == S::Curr) {
      return after.text.size() >= before.text.size() &&
             after.text.compare(0, before.text.size(), before.text) == 0;
    }
    return before.text == after.text;
  }
  switch (before.state) {
    case S::Out: return after.state == S::In;
    case S::In: return after.state == S::Curr || after.state == S::Out;
    case S::Curr: return after.state == S::Found && after.text == before.text;
    case S::Found: return after.state == S::Out;
  }
  return false;
}

}  // namespace

TEST_CASE("single construction rules build the expected fragments") {
  Sre c = vars_to_indices(mre_to_sre(Mre::chr(U'c')));
  Automaton ac = rpart_to_fsa(c.main, 1);
  CHECK(ac.num_states == 2);
  REQUIRE(ac.transitions.size() == 1);
  CHECK(ac.transitions[0].sym.kind == AutSymbol::Kind::Char);
  CHECK(ac.transitions[0].sym.chr == "c");
  CHECK(ac.finals.size() == 1);

  // A bare variable occurrence compiles to a single reference edge.
  PartialPtr var = PartialRegex::var("x", 0, nullptr);
  Automaton av = rpart_to_fsa(var, 1);
  CHECK(av.num_states == 2);
  REQUIRE(av.transitions.size() == 1);
  CHECK(av.transitions[0].sym.kind == AutSymbol::Kind::Ref);
  CHECK(av.transitions[0].sym.index == 0);

  CHECK_THROWS_AS(rpart_to_fsa(var, 0), IndexOutOfRange);
}

TEST_CASE("the worked-example system has the familiar shape") {
  Mrras m = compile_fixture("core.mrl", "akcak");
  REQUIRE(m.automata.size() == 2);

  const Automaton& a0 = m.automata[0];
  CHECK(count_edges(a0, AutSymbol::Kind::Char) == 1);
  CHECK(count_edges(a0, AutSymbol::Kind::Ref) == 0);

  const Automaton& a1 = m.automata[1];
  CHECK(a1.num_states == 8);
  CHECK(count_edges(a1, AutSymbol::Kind::Ref) == 2);
  CHECK(count_edges(a1, AutSymbol::Kind::Char) == 1);
  CHECK(count_edges(a1, AutSymbol::Kind::Open) == 1);
  CHECK(count_edges(a1, AutSymbol::Kind::Close) == 1);
  CHECK(count_edges(a1, AutSymbol::Kind::Eps) == 2);
  CHECK(a1.finals.size() == 1);
}

TEST_CASE("system shapes for trivial and hyperlink fixtures") {
  Mrras single = compile(Mre::chr(U'a'));
  CHECK(single.automata.size() == 1);

  Mrras pg = compile_fixture("pg.mrl", "pg_html_line_MR");
  CHECK(pg.automata.size() == 2);
}

TEST_CASE("initial configurations start with everything out of scope") {
  Mrras m = compile_fixture("core.mrl", "akcak");
  Config c = initial_config(m, "aca");
  CHECK(c.aut == 1);
  CHECK(c.state == m.main().initial);
  CHECK(c.pos == 0);
  CHECK(c.stack.empty());
  REQUIRE(c.buffers.size() == 2);
  CHECK(c.buffers[0].state == Buffer::State::Out);
  CHECK(c.buffers[1].state == Buffer::State::Curr);
  CHECK(c.buffers[1].text.empty());

  Config e = initial_config(m, "");
  CHECK(e.pos == 0);

  Config s = initial_config(compile(Mre::chr(U'a')), "x");
  REQUIRE(s.buffers.size() == 1);
  CHECK(s.buffers[0].state == Buffer::State::Curr);
}

TEST_CASE("stepping through the accepting path of aca") {
  Mrras m = compile_fixture("core.mrl", "akcak");
  const std::string input = "aca";

  // The only move from the start is putting x0 in scope.
  Config c = initial_config(m, input);
  auto succ = step(m, c, input);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].second.rule == StepRule::ScopeIn);
  c = succ[0].first;
  CHECK(c.buffers[0].state == Buffer::State::In);
  CHECK(c.pos == 0);

  // Consuming x0 with no match switches into the variable automaton,
  // pushing the return state.
  succ = step(m, c, input);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].second.rule == StepRule::SwitchInit);
  Config inside = succ[0].first;
  CHECK(inside.aut == 0);
  CHECK(inside.state == m.automata[0].initial);
  REQUIRE(inside.stack.size() == 1);
  CHECK(inside.stack[0].first == 1);
  CHECK(inside.buffers[0].state == Buffer::State::Curr);
  CHECK(inside.buffers[0].text.empty());

  // Follow the canonical witness; its visible rules are the paper's steps.
  auto witness = match_witness(m, input);
  REQUIRE(witness.has_value());
  CHECK(rule_summary(*witness) ==
        std::vector<StepRule>{StepRule::ScopeIn, StepRule::SwitchInit, StepRule::ConsumeChar,
                              StepRule::SwitchReturn, StepRule::ConsumeChar,
                              StepRule::ConsumeVar, StepRule::ScopeOut});

  // After the return, the buffer records the found match.
  Config replayed = initial_config(m, input);
  std::size_t upto = 0;
  for (const auto& rec : *witness) {
    ++upto;
    if (rec.rule == StepRule::SwitchReturn) break;
  }
  Trace prefix(witness->begin(), witness->begin() + upto);
  Config after_return = replay(m, input, prefix);
  CHECK(after_return.aut == 1);
  CHECK(after_return.buffers[0].state == Buffer::State::Found);
  CHECK(after_return.buffers[0].text == "a");
  CHECK(after_return.stack.empty());
}

TEST_CASE("acceptance on the worked example") {
  Mrras m = compile_fixture("core.mrl", "akcak");
  CHECK(accepts(m, "aca"));
  CHECK(accepts(m, "c"));
  CHECK_FALSE(accepts(m, "acaa"));
  CHECK_FALSE(accepts(m, "ac"));
  CHECK_FALSE(accepts(m, "x"));
  CHECK_THROWS_AS(accepts(m, "\xff\xfe"), InvalidInputSymbol);
}

TEST_CASE("witnesses replay to accepting configurations") {
  auto file = load_fixture("corpus.mrl");
  RegexValueEnv empty;
  for (const auto& name : {"c01", "c03", "c11", "c20"}) {
    MrePtr r = fixture_regex(file, name);
    Mrras m = compile(r);
    for (const auto& s : enumerate_regex(r, empty, 5)) {
      auto witness = match_witness(m, s);
      REQUIRE(witness.has_value());
      Config final_config = replay(m, s, *witness);
      CHECK(is_accepting(m, final_config, s));
    }
  }
}

TEST_CASE("no witness for rejected strings") {
  Mrras m = compile_fixture("core.mrl", "akcak");
  CHECK_FALSE(match_witness(m, "x").has_value());
  Mrras trivial = compile(Mre::chr(U'a'));
  auto witness = match_witness(trivial, "a");
  REQUIRE(witness.has_value());
  CHECK(rule_summary(*witness) == std::vector<StepRule>{StepRule::ConsumeChar});
}

TEST_CASE("reachable configurations respect the stack bound and buffer discipline") {
  auto file = load_fixture("corpus.mrl");
  for (const auto& [name, input] : std::vector<std::pair<std::string, std::string>>{
           {"c01", "aca"}, {"c01", "aacaa"}, {"c01", "ac"}, {"c03", "abab"}, {"c20", "abcab"}}) {
    Mrras m = compile(fixture_regex(file, name));
    for (const auto& [before, after] : reachable_steps(m, input)) {
      CHECK(after.stack.size() <= m.automata.size());
      REQUIRE(before.buffers.size() == after.buffers.size());
      for (std::size_t k = 0; k < before.buffers.size(); ++k) {
        CHECK_MESSAGE(legal_buffer_change(before.buffers[k], after.buffers[k]),
                      "buffer ", k, " broke discipline on ", name, " input ", input);
      }
    }
  }
}

TEST_CASE("acceptance agrees with the enumeration oracle on samples") {
  auto file = load_fixture("corpus.mrl");
  RegexValueEnv empty;
  for (const auto& name : {"c01", "c03", "c10", "c20"}) {
    MrePtr r = fixture_regex(file, name);
    Mrras m = compile(r);
    for (const auto& w : strings_up_to(alphabet_plus_fresh(r), 5)) {
      CHECK_MESSAGE(accepts(m, w) == regex_member(r, empty, w),
                    "disagreement on ", name, " for input \"", w, "\"");
    }
  }
}

TEST_CASE("parsing the worked example recovers the split") {
  MrePtr r = parse_regex("bind x : \"a\"* in x . \"c\" . x");
  auto tree = parse(r, "aca");
  REQUIRE(tree.has_value());
  const ParseTree& root = **tree;
  CHECK(root.kind == MreKind::Bind);
  CHECK(root.var_name == "x");
  REQUIRE(root.witness.has_value());
  CHECK(*root.witness == "a");
  // x . "c" . x associates to the left: (x . "c") . x
  REQUIRE(root.body->kind == MreKind::Concat);
  CHECK(root.body->left->left->text == "a");
  CHECK(root.body->left->right->text == "c");
  CHECK(root.body->right->text == "a");
  CHECK(root.body->right->kind == MreKind::Var);
  CHECK(root.body->right->var_name == "x");

  CHECK_FALSE(parse(r, "abca").has_value());
}

TEST_CASE("parsing a constant is a leaf") {
  auto tree = parse(Mre::chr(U'a'), "a");
  REQUIRE(tree.has_value());
  CHECK((*tree)->kind == MreKind::Const);
  CHECK((*tree)->text == "a");
}

TEST_CASE("parsing an iterated prefix recovers the iterations") {
  MrePtr r = Mre::concat(Mre::star(Mre::chr(U'a')), Mre::chr(U'b'));
  auto tree = parse(r, "aab");
  REQUIRE(tree.has_value());
  const ParseTree& root = **tree;
  REQUIRE(root.kind == MreKind::Concat);
  CHECK(root.split == 2);
  REQUIRE(root.left->kind == MreKind::Star);
  REQUIRE(root.left->iterations.size() == 2);
  CHECK(root.left->iterations[0]->text == "a");
  CHECK(root.left->iterations[1]->text == "a");
  CHECK(root.right->text == "b");
}

TEST_CASE("parses under a value environment report variable occurrences") {
  MrePtr open = parse_regex("x . \"c\" . x");
  RegexValueEnv venv = RegexValueEnv{}.extended("x", "ab");
  auto tree = parse_in_env(open, "abcab", venv);
  REQUIRE(tree.has_value());
  const ParseTree& root = **tree;
  REQUIRE(root.kind == MreKind::Concat);
  CHECK(root.left->left->kind == MreKind::Var);
  CHECK(root.left->left->var_name == "x");
  CHECK(root.left->left->text == "ab");
  CHECK(root.right->text == "ab");
  CHECK_FALSE(parse_in_env(open, "abcaa", venv).has_value());
}

namespace {

// Checks that every binder's witness is in its definition's language under
// the enclosing witnesses, and that every variable occurrence repeats its
// binder's witness exactly.
void check_parse_soundness(const ParseTreePtr& t, const MrePtr& r, const RegexValueEnv& venv) {
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return;
    case MreKind::Var: {
      auto bound = venv.lookup(r->name());
      REQUIRE(bound.has_value());
      CHECK(t->text == *bound);
      return;
    }
    case MreKind::Star:
      for (const auto& iter : t->iterations) check_parse_soundness(iter, r->inner(), venv);
      return;
    case MreKind::Alt:
      check_parse_soundness(t->child, t->left_branch ? r->left() : r->right(), venv);
      return;
    case MreKind::Concat:
      check_parse_soundness(t->left, r->left(), venv);
      check_parse_soundness(t->right, r->right(), venv);
      return;
    case MreKind::Bind: {
      RegexValueEnv inner = venv;
      if (t->witness) {
        CHECK(regex_member(r->def(), venv, *t->witness));
        inner = venv.extended(r->name(), *t->witness);
      }
      check_parse_soundness(t->body, r->body(), inner);
      return;
    }
  }
}

}  // namespace

TEST_CASE("parse trees carry sound witnesses") {
  auto file = load_fixture("corpus.mrl");
  RegexValueEnv empty;
  for (const auto& name : {"c01", "c03", "c11", "c12", "c20"}) {
    MrePtr r = fixture_regex(file, name);
    for (const auto& w : enumerate_regex(r, empty, 5)) {
      auto tree = parse(r, w);
      REQUIRE(tree.has_value());
      CHECK((*tree)->text == w);
      check_parse_soundness(*tree, r, empty);
    }
  }
}

TEST_CASE("strongly unambiguous parses ignore exploration order") {
  MrePtr r = parse_regex("bind x : \"a\"* in x . \"c\" . x");
  RegexValueEnv empty;
  for (const auto& w : enumerate_regex(r, empty, 6)) {
    auto canonical = parse(r, w, ExploreOrder::canonical());
    auto reversed = parse(r, w, ExploreOrder::reversed());
    auto seeded = parse(r, w, ExploreOrder::seeded(42));
    REQUIRE(canonical.has_value());
    REQUIRE(reversed.has_value());
    REQUIRE(seeded.has_value());
    CHECK(structurally_equal(*canonical, *reversed));
    CHECK(structurally_equal(*canonical, *seeded));
  }
}
