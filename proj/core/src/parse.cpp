#include <functional>
#include <memory>

#include "mrlens/errors.hpp"
#include "mrlens/mrras.hpp"

// Parse reconstruction. The accepting trace is first nested into per-automaton
// activations (SwitchInit..SwitchReturn brackets), then each activation's step
// sequence is folded back through the partial regex that produced the
// automaton: every transition records the node that created it and the role
// the edge plays in that node's fragment, which pins iteration boundaries,
// branch choices, and concatenation splits exactly.

namespace mrlens {

namespace {

struct Activation;

struct Item {
  const StepRecord* rec = nullptr;           // plain step
  std::unique_ptr<Activation> call;          // nested activation (variable match)
  const Transition* call_ref = nullptr;      // the Ref transition that started it
  std::string call_matched;
};

struct Activation {
  int aut = -1;
  std::vector<Item> items;
};

Activation nest_trace(const Mrras& m, const Trace& trace) {
  Activation root{m.main_index(), {}};
  std::vector<Activation*> stack{&root};
  std::vector<const Transition*> refs;
  for (const StepRecord& rec : trace) {
    switch (rec.rule) {
      case StepRule::SwitchInit: {
        auto child = std::make_unique<Activation>();
        child->aut = rec.transition->sym.index;
        Item item;
        item.call = std::move(child);
        item.call_ref = rec.transition;
        stack.back()->items.push_back(std::move(item));
        stack.push_back(stack.back()->items.back().call.get());
        refs.push_back(rec.transition);
        break;
      }
      case StepRule::SwitchReturn: {
        if (stack.size() < 2) throw InvariantViolation("unbalanced trace");
        stack.pop_back();
        refs.pop_back();
        stack.back()->items.back().call_matched = rec.consumed;
        break;
      }
      default: {
        Item item;
        item.rec = &rec;
        stack.back()->items.push_back(std::move(item));
        break;
      }
    }
  }
  if (stack.size() != 1) throw InvariantViolation("unbalanced trace");
  return root;
}

using ItemIt = std::vector<Item>::const_iterator;

bool is_plain(const Item& it, const PartialRegex* node, EdgeRole role) {
  return it.rec && it.rec->transition && it.rec->transition->origin == node &&
         it.rec->transition->role == role;
}

// First variable-match event for index h within [begin, end), walking nested
// activations in temporal order.
std::optional<std::string> find_witness(ItemIt begin, ItemIt end, int h) {
  for (auto it = begin; it != end; ++it) {
    if (it->call) {
      if (it->call_ref->sym.index == h) return it->call_matched;
      auto inner = find_witness(it->call->items.begin(), it->call->items.end(), h);
      if (inner) return inner;
    }
  }
  return std::nullopt;
}

ParseTreePtr fold(const PartialPtr& p, ItemIt begin, ItemIt end);

ParseTreePtr make_leaf(MreKind kind, std::string text) {
  auto t = std::make_shared<ParseTree>();
  t->kind = kind;
  t->text = std::move(text);
  return t;
}

ParseTreePtr fold(const PartialPtr& p, ItemIt begin, ItemIt end) {
  switch (p->kind()) {
    case PartialKind::Epsilon:
    case PartialKind::Const: {
      if (end - begin != 1 || !is_plain(*begin, p.get(), EdgeRole::Consume)) {
        throw InvariantViolation("parse fold: malformed leaf segment");
      }
      return make_leaf(p->kind() == PartialKind::Epsilon ? MreKind::Epsilon : MreKind::Const,
                       begin->rec->consumed);
    }
    case PartialKind::Var: {
      if (end - begin != 1) throw InvariantViolation("parse fold: malformed variable segment");
      auto t = std::make_shared<ParseTree>();
      t->kind = MreKind::Var;
      t->var_name = p->name();
      if (begin->call) {
        t->text = begin->call_matched;
      } else if (begin->rec && begin->rec->rule == StepRule::ConsumeVar) {
        t->text = begin->rec->consumed;
      } else {
        throw InvariantViolation("parse fold: variable occurrence without a match event");
      }
      return t;
    }
    case PartialKind::Star: {
      auto t = std::make_shared<ParseTree>();
      t->kind = MreKind::Star;
      if (begin == end) return t;  // zero iterations
      if (!is_plain(*begin, p.get(), EdgeRole::StarEnter)) {
        throw InvariantViolation("parse fold: star segment does not begin with entry");
      }
      auto seg_start = begin + 1;
      for (auto it = seg_start; it != end; ++it) {
        if (is_plain(*it, p.get(), EdgeRole::StarLoop)) {
          t->iterations.push_back(fold(p->inner(), seg_start, it));
          seg_start = it + 1;
        }
      }
      t->iterations.push_back(fold(p->inner(), seg_start, end));
      for (const auto& iter : t->iterations) t->text += iter->text;
      return t;
    }
    case PartialKind::Alt: {
      if (begin == end) throw InvariantViolation("parse fold: empty alternation segment");
      bool left = is_plain(*begin, p.get(), EdgeRole::AltLeft);
      bool right = is_plain(*begin, p.get(), EdgeRole::AltRight);
      if (!left && !right) {
        throw InvariantViolation("parse fold: alternation segment without branch choice");
      }
      auto t = std::make_shared<ParseTree>();
      t->kind = MreKind::Alt;
      t->left_branch = left;
      t->child = fold(left ? p->left() : p->right(), begin + 1, end);
      t->text = t->child->text;
      return t;
    }
    case PartialKind::Concat: {
      for (auto it = begin; it != end; ++it) {
        if (is_plain(*it, p.get(), EdgeRole::ConcatJoin)) {
          auto t = std::make_shared<ParseTree>();
          t->kind = MreKind::Concat;
          t->left = fold(p->left(), begin, it);
          t->right = fold(p->right(), it + 1, end);
          t->split = t->left->text.size();
          t->text = t->left->text + t->right->text;
          return t;
        }
      }
      throw InvariantViolation("parse fold: concatenation segment without join");
    }
    case PartialKind::Scope: {
      if (end - begin < 2 || !is_plain(*begin, p.get(), EdgeRole::ScopeOpen) ||
          !is_plain(*(end - 1), p.get(), EdgeRole::ScopeClose)) {
        throw InvariantViolation("parse fold: scope segment without open/close");
      }
      auto t = std::make_shared<ParseTree>();
      t->kind = MreKind::Bind;
      t->var_name = p->name();
      t->witness = find_witness(begin + 1, end - 1, p->index());
      t->body = fold(p->body(), begin + 1, end - 1);
      t->text = t->body->text;
      return t;
    }
  }
  throw InvariantViolation("parse fold: unhandled partial kind");
}

// The parse pipeline alpha-renames before compiling; walk the result in
// lockstep with the original expression to restore the caller's names.
ParseTreePtr restore_names(const ParseTreePtr& t, const MrePtr& r) {
  auto out = std::make_shared<ParseTree>(*t);
  switch (r->kind()) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return out;
    case MreKind::Var:
      out->var_name = r->name();
      return out;
    case MreKind::Star: {
      for (auto& iter : out->iterations) iter = restore_names(iter, r->inner());
      return out;
    }
    case MreKind::Alt:
      out->child = restore_names(t->child, t->left_branch ? r->left() : r->right());
      return out;
    case MreKind::Concat:
      out->left = restore_names(t->left, r->left());
      out->right = restore_names(t->right, r->right());
      return out;
    case MreKind::Bind:
      out->var_name = r->name();
      out->body = restore_names(t->body, r->body());
      return out;
  }
  return out;
}

}  // namespace

bool structurally_equal(const ParseTreePtr& a, const ParseTreePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->text != b->text) return false;
  switch (a->kind) {
    case MreKind::Epsilon:
    case MreKind::Const:
      return true;
    case MreKind::Var:
      return a->var_name == b->var_name;
    case MreKind::Star: {
      if (a->iterations.size() != b->iterations.size()) return false;
      for (std::size_t i = 0; i < a->iterations.size(); ++i) {
        if (!structurally_equal(a->iterations[i], b->iterations[i])) return false;
      }
      return true;
    }
    case MreKind::Alt:
      return a->left_branch == b->left_branch && structurally_equal(a->child, b->child);
    case MreKind::Concat:
      return a->split == b->split && structurally_equal(a->left, b->left) &&
             structurally_equal(a->right, b->right);
    case MreKind::Bind:
      return a->var_name == b->var_name && a->witness == b->witness &&
             structurally_equal(a->body, b->body);
  }
  return false;
}

std::optional<ParseTreePtr> parse_compiled(const Mrras& m, const std::string& w,
                                           ExploreOrder order) {
  auto trace = match_witness(m, w, order);
  if (!trace) return std::nullopt;
  Activation root = nest_trace(m, *trace);
  return fold(m.source.main, root.items.begin(), root.items.end());
}

std::optional<ParseTreePtr> parse(const MrePtr& r, const std::string& w, ExploreOrder order) {
  Mrras m = compile(r);
  auto t = parse_compiled(m, w, order);
  if (!t) return std::nullopt;
  return restore_names(*t, r);
}

std::optional<ParseTreePtr> parse_in_env(const MrePtr& r, const std::string& w,
                                         const RegexValueEnv& venv, ExploreOrder order) {
  MrePtr closed = substitute_values(r, venv);
  auto parsed = parse(closed, w, order);
  if (!parsed) return std::nullopt;

  // Fold the substituted literal subtrees back into Var leaves.
  std::function<ParseTreePtr(const ParseTreePtr&, const MrePtr&)> realign =
      [&](const ParseTreePtr& t, const MrePtr& orig) -> ParseTreePtr {
    if (orig->kind() == MreKind::Var && venv.lookup(orig->name())) {
      auto leaf = std::make_shared<ParseTree>();
      leaf->kind = MreKind::Var;
      leaf->var_name = orig->name();
      leaf->text = t->text;
      return leaf;
    }
    auto out = std::make_shared<ParseTree>(*t);
    switch (orig->kind()) {
      case MreKind::Epsilon:
      case MreKind::Const:
      case MreKind::Var:
        return out;
      case MreKind::Star:
        for (auto& iter : out->iterations) iter = realign(iter, orig->inner());
        return out;
      case MreKind::Alt:
        out->child = realign(t->child, t->left_branch ? orig->left() : orig->right());
        return out;
      case MreKind::Concat:
        out->left = realign(t->left, orig->left());
        out->right = realign(t->right, orig->right());
        return out;
      case MreKind::Bind:
        out->body = realign(t->body, orig->body());
        return out;
    }
    return out;
  };
  return realign(*parsed, r);
}

}  // namespace mrlens
