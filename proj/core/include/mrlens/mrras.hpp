#ifndef MRLENS_MRRAS_HPP
#define MRLENS_MRRAS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mrlens/mre.hpp"
#include "mrlens/sre.hpp"

namespace mrlens {

/// A transition label. Char carries the UTF-8 bytes of one input symbol;
/// Open/Close/Ref carry the index of the variable automaton they affect.
/// Within automaton i, Open/Close/Ref indices are always below i.
struct AutSymbol {
  enum class Kind { Char, Eps, Open, Close, Ref };
  Kind kind = Kind::Eps;
  std::string chr;  // Char only
  int index = -1;   // Open/Close/Ref only

  static AutSymbol character(std::string utf8) { return {Kind::Char, std::move(utf8), -1}; }
  static AutSymbol eps() { return {Kind::Eps, "", -1}; }
  static AutSymbol open(int k) { return {Kind::Open, "", k}; }
  static AutSymbol close(int k) { return {Kind::Close, "", k}; }
  static AutSymbol ref(int k) { return {Kind::Ref, "", k}; }
};

/// The role a transition plays in the fragment built for its origin node.
/// Parse reconstruction keys on these labels.
enum class EdgeRole : std::uint8_t {
  Consume,   // Const / Epsilon edge, Var reference edge
  StarEnter, // fresh initial -> sub-initial
  StarLoop,  // sub-final -> sub-initial
  AltLeft,
  AltRight,
  ConcatJoin,  // left finals -> right initial
  ScopeOpen,
  ScopeClose,
};

struct Transition {
  int from = 0;
  int to = 0;
  AutSymbol sym;
  const PartialRegex* origin = nullptr;  // node that created this edge
  EdgeRole role = EdgeRole::Consume;
};

/// One finite state automaton of the system. States are dense ids
/// 0..num_states-1, unique within the automaton (the pair (index, state)
/// is globally unique).
struct Automaton {
  int index = 0;
  int num_states = 0;
  int initial = 0;
  std::set<int> finals;
  std::vector<Transition> transitions;

  bool is_final(int q) const { return finals.count(q) > 0; }
};

/// A match-reference regex automata system: variable automata A_0..A_{n-1}
/// plus the main automaton A_n, coordinated through a state stack and one
/// buffer per automaton. The indexed scoped regex it was compiled from is
/// retained for parse reconstruction and dumps.
struct Mrras {
  std::vector<Automaton> automata;  // automata[k].index == k; last is main
  Sre source;                       // indexed

  int main_index() const { return static_cast<int>(automata.size()) - 1; }
  const Automaton& main() const { return automata.back(); }
};

/// Per-automaton buffer. A variable's buffer cycles Out -> In -> Curr ->
/// Found -> Out (Out directly after In when the variable goes unused); the
/// main automaton's buffer is always Curr and accumulates consumed input.
struct Buffer {
  enum class State : std::uint8_t { Out, In, Curr, Found };
  State state = State::Out;
  std::string text;  // Curr / Found only

  static Buffer out() { return {State::Out, ""}; }
  static Buffer in() { return {State::In, ""}; }
  static Buffer curr(std::string w) { return {State::Curr, std::move(w)}; }
  static Buffer found(std::string w) { return {State::Found, std::move(w)}; }

  bool operator==(const Buffer& o) const { return state == o.state && text == o.text; }
};

/// An execution configuration: active state, consumed-input offset, state
/// stack, and the buffer set. The stack never grows past the number of
/// automata.
struct Config {
  int aut = 0;
  int state = 0;
  std::size_t pos = 0;  // bytes of input consumed
  std::vector<std::pair<int, int>> stack;
  std::vector<Buffer> buffers;

  bool operator==(const Config& o) const {
    return aut == o.aut && state == o.state && pos == o.pos && stack == o.stack &&
           buffers == o.buffers;
  }
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const noexcept;
};

enum class StepRule : std::uint8_t {
  ConsumeChar,
  ConsumeVar,
  ScopeIn,
  ScopeOut,
  SwitchInit,
  SwitchReturn,
};

const char* step_rule_name(StepRule rule);

/// One applied step: the rule, the transition taken (none for SwitchReturn),
/// and what was consumed. Replaying a trace from the initial configuration
/// reproduces the final configuration.
struct StepRecord {
  StepRule rule;
  int aut = 0;                            // automaton whose state changed first
  const Transition* transition = nullptr; // null for SwitchReturn
  std::string consumed;                   // ConsumeChar / ConsumeVar
  int return_aut = -1;                    // SwitchReturn: automaton returned to
  int return_state = -1;
};

using Trace = std::vector<StepRecord>;

/// Exploration order for the nondeterministic step relation. Acceptance is
/// order-independent; witnesses and parses of ambiguous expressions are not.
struct ExploreOrder {
  enum class Kind { Canonical, Reversed, Seeded } kind = Kind::Canonical;
  std::uint64_t seed = 0;

  static ExploreOrder canonical() { return {Kind::Canonical, 0}; }
  static ExploreOrder reversed() { return {Kind::Reversed, 0}; }
  static ExploreOrder seeded(std::uint64_t s) { return {Kind::Seeded, s}; }
};

/// Compiles one indexed partial regex into automaton i following the
/// construction table. All variable indices in p must be below i; throws
/// IndexOutOfRange otherwise.
Automaton rpart_to_fsa(const PartialPtr& p, int automaton_index);

/// Algorithm 2: index the variables, compile each definition into a variable
/// automaton, and the main regex into the main automaton.
Mrras sre_to_mrras(const Sre& e);

/// Convenience: alpha-rename, translate, and compile a closed
/// match-reference regex.
Mrras compile(const MrePtr& r);

/// Initial configuration: the main automaton's initial state, nothing
/// consumed, empty stack, every variable out of scope.
Config initial_config(const Mrras& m, const std::string& input);

/// Every configuration reachable from c in one step, in canonical order
/// (consume rules, then scope rules, then switch rules; by transition order
/// within each class).
std::vector<std::pair<Config, StepRecord>> step(const Mrras& m, const Config& c,
                                                const std::string& input);

bool is_accepting(const Mrras& m, const Config& c, const std::string& input);

/// True iff an accepting configuration is reachable. The input must be
/// well-formed UTF-8 (throws InvalidInputSymbol otherwise); the visited-set
/// search always terminates because the configuration space is finite.
bool accepts(const Mrras& m, const std::string& input);

/// The trace of the first accepting path under the given exploration order,
/// or nullopt when the input is rejected.
std::optional<Trace> match_witness(const Mrras& m, const std::string& input,
                                   ExploreOrder order = ExploreOrder::canonical());

/// match_witness plus the furthest input offset any explored configuration
/// reached; useful for positioning rejection diagnostics.
struct MatchResult {
  std::optional<Trace> trace;
  std::size_t furthest = 0;
};
MatchResult match_details(const Mrras& m, const std::string& input,
                          ExploreOrder order = ExploreOrder::canonical());

/// Replays a trace from the initial configuration, checking every step's
/// side conditions. Returns the final configuration.
Config replay(const Mrras& m, const std::string& input, const Trace& trace);

/// The trace's rule sequence with silent steps (epsilon consumption) left
/// out; matches the step-by-step narration style of worked examples.
std::vector<StepRule> rule_summary(const Trace& trace);

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct ParseTree;
using ParseTreePtr = std::shared_ptr<const ParseTree>;

/// A parse of a string against a match-reference regex, mirroring the regex
/// AST: Star carries per-iteration subtrees, Concat the split point, Alt the
/// chosen branch, Bind the witness its variable matched, Var the matched
/// occurrence. Every node records the substring it matched.
struct ParseTree {
  MreKind kind;
  std::string text;
  // Star
  std::vector<ParseTreePtr> iterations;
  // Alt
  bool left_branch = false;
  ParseTreePtr child;
  // Concat
  ParseTreePtr left;
  ParseTreePtr right;
  std::size_t split = 0;  // byte offset of the split within text
  // Bind
  std::string var_name;  // Bind and Var
  std::optional<std::string> witness;
  ParseTreePtr body;
};

bool structurally_equal(const ParseTreePtr& a, const ParseTreePtr& b);

/// Parses w against a closed, uniquely-bound regex by folding the accepting
/// trace back through the scoped-regex structure. Returns nullopt when w is
/// not in the language. When r is strongly unambiguous in the empty
/// environment the result is independent of the exploration order.
std::optional<ParseTreePtr> parse(const MrePtr& r, const std::string& w,
                                  ExploreOrder order = ExploreOrder::canonical());

/// Parse against an already-compiled system (must retain its source).
std::optional<ParseTreePtr> parse_compiled(const Mrras& m, const std::string& w,
                                           ExploreOrder order = ExploreOrder::canonical());

/// Parses w against r with venv-bound free variables replaced by their
/// literal values, then re-aligns the tree so those variables show up as Var
/// leaves again.
std::optional<ParseTreePtr> parse_in_env(const MrePtr& r, const std::string& w,
                                         const RegexValueEnv& venv,
                                         ExploreOrder order = ExploreOrder::canonical());

}  // namespace mrlens

#endif
