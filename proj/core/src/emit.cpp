#include "mrlens/emit.hpp"

#include <json.hpp>

#include "mrlens/errors.hpp"
#include "mrlens/unicode.hpp"

namespace mrlens {

namespace {

using nlohmann::json;

json partial_to_json(const PartialPtr& p) {
  switch (p->kind()) {
    case PartialKind::Epsilon:
      return {{"kind", "epsilon"}};
    case PartialKind::Const:
      return {{"kind", "const"}, {"char", encode_utf8(p->ch())}};
    case PartialKind::Var:
      return {{"kind", "var"}, {"name", p->name()}, {"index", p->index()}};
    case PartialKind::Star:
      return {{"kind", "star"}, {"inner", partial_to_json(p->inner())}};
    case PartialKind::Alt:
      return {{"kind", "alt"},
              {"left", partial_to_json(p->left())},
              {"right", partial_to_json(p->right())}};
    case PartialKind::Concat:
      return {{"kind", "concat"},
              {"left", partial_to_json(p->left())},
              {"right", partial_to_json(p->right())}};
    case PartialKind::Scope:
      return {{"kind", "scope"},
              {"var", p->name()},
              {"index", p->index()},
              {"body", partial_to_json(p->body())}};
  }
  throw InvariantViolation("unhandled partial regex kind");
}

json symbol_to_json(const AutSymbol& sym) {
  switch (sym.kind) {
    case AutSymbol::Kind::Char:
      return {{"kind", "char"}, {"char", sym.chr}};
    case AutSymbol::Kind::Eps:
      return {{"kind", "eps"}};
    case AutSymbol::Kind::Open:
      return {{"kind", "open"}, {"index", sym.index}};
    case AutSymbol::Kind::Close:
      return {{"kind", "close"}, {"index", sym.index}};
    case AutSymbol::Kind::Ref:
      return {{"kind", "ref"}, {"index", sym.index}};
  }
  throw InvariantViolation("unhandled symbol kind");
}

std::string symbol_label(const AutSymbol& sym) {
  switch (sym.kind) {
    case AutSymbol::Kind::Char:
      return sym.chr;
    case AutSymbol::Kind::Eps:
      return "eps";
    case AutSymbol::Kind::Open:
      return "in_" + std::to_string(sym.index);
    case AutSymbol::Kind::Close:
      return "out_" + std::to_string(sym.index);
    case AutSymbol::Kind::Ref:
      return "x_" + std::to_string(sym.index);
  }
  return "?";
}

}  // namespace

std::string sre_to_json(const Sre& e) {
  json defs = json::array();
  for (std::size_t i = 0; i < e.defs.size(); ++i) {
    const auto& [name, def] = e.defs.entry_at(i);
    defs.push_back({{"var", name}, {"def", partial_to_json(def)}});
  }
  json out = {{"main", partial_to_json(e.main)}, {"defs", defs}};
  return out.dump(2);
}

std::string mrras_to_json(const Mrras& m) {
  json automata = json::array();
  for (const Automaton& a : m.automata) {
    json transitions = json::array();
    for (const Transition& t : a.transitions) {
      transitions.push_back({{"from", t.from}, {"sym", symbol_to_json(t.sym)}, {"to", t.to}});
    }
    json states = json::array();
    for (int q = 0; q < a.num_states; ++q) states.push_back(q);
    automata.push_back({{"index", a.index},
                        {"states", states},
                        {"initial", a.initial},
                        {"finals", a.finals},
                        {"transitions", transitions}});
  }
  json out = {{"automata", automata}};
  return out.dump(2);
}

std::string mrras_to_dot(const Mrras& m) {
  std::string out = "digraph mrras {\n  rankdir=LR;\n";
  for (const Automaton& a : m.automata) {
    std::string prefix = "q" + std::to_string(a.index) + "_";
    out += "  subgraph cluster_" + std::to_string(a.index) + " {\n";
    out += "    label=\"A" + std::to_string(a.index) +
           (a.index == m.main_index() ? " (main)" : "") + "\";\n";
    for (int q = 0; q < a.num_states; ++q) {
      out += "    " + prefix + std::to_string(q) + " [shape=" +
             (a.finals.count(q) ? "doublecircle" : "circle") + "];\n";
    }
    out += "    " + prefix + "start [shape=point];\n";
    out += "    " + prefix + "start -> " + prefix + std::to_string(a.initial) + ";\n";
    for (const Transition& t : a.transitions) {
      std::string label;
      for (char c : symbol_label(t.sym)) {
        if (c == '"' || c == '\\') label.push_back('\\');
        label.push_back(c);
      }
      out += "    " + prefix + std::to_string(t.from) + " -> " + prefix +
             std::to_string(t.to) + " [label=\"" + label + "\"];\n";
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mrlens
