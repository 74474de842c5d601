#include "mrlens/lens.hpp"

#include <memory>
#include <vector>

#include "mrlens/ambiguity.hpp"
#include "mrlens/errors.hpp"
#include "mrlens/mrras.hpp"
#include "mrlens/unicode.hpp"

namespace mrlens {

LensPtr Lens::constant(std::string s1, std::string s2) {
  return LensPtr(new Lens(LensKind::Const, std::move(s1), std::move(s2), nullptr, "", nullptr,
                          nullptr));
}

LensPtr Lens::id(MrePtr regex) {
  return LensPtr(new Lens(LensKind::Id, "", "", std::move(regex), "", nullptr, nullptr));
}

LensPtr Lens::iter(LensPtr inner) {
  return LensPtr(new Lens(LensKind::Iter, "", "", nullptr, "", std::move(inner), nullptr));
}

LensPtr Lens::concat(LensPtr left, LensPtr right) {
  return LensPtr(
      new Lens(LensKind::Concat, "", "", nullptr, "", std::move(left), std::move(right)));
}

LensPtr Lens::swap(LensPtr left, LensPtr right) {
  return LensPtr(
      new Lens(LensKind::Swap, "", "", nullptr, "", std::move(left), std::move(right)));
}

LensPtr Lens::alt(LensPtr left, LensPtr right) {
  return LensPtr(new Lens(LensKind::Or, "", "", nullptr, "", std::move(left), std::move(right)));
}

LensPtr Lens::comp(LensPtr left, LensPtr right) {
  return LensPtr(new Lens(LensKind::Comp, "", "", nullptr, "", std::move(left), std::move(right)));
}

LensPtr Lens::var(std::string name) {
  return LensPtr(new Lens(LensKind::Var, "", "", nullptr, std::move(name), nullptr, nullptr));
}

LensPtr Lens::link(std::string name, LensPtr def, LensPtr body) {
  return LensPtr(new Lens(LensKind::Link, "", "", nullptr, std::move(name), std::move(def),
                          std::move(body)));
}

bool structurally_equal(const LensPtr& a, const LensPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case LensKind::Const:
      return a->s1() == b->s1() && a->s2() == b->s2();
    case LensKind::Id:
      return structurally_equal(a->regex(), b->regex());
    case LensKind::Iter:
      return structurally_equal(a->inner(), b->inner());
    case LensKind::Concat:
    case LensKind::Swap:
    case LensKind::Or:
    case LensKind::Comp:
      return structurally_equal(a->left(), b->left()) &&
             structurally_equal(a->right(), b->right());
    case LensKind::Var:
      return a->name() == b->name();
    case LensKind::Link:
      return a->name() == b->name() && structurally_equal(a->def(), b->def()) &&
             structurally_equal(a->body(), b->body());
  }
  return false;
}

namespace {

// Typing derivation: each node keeps its inferred type and, for links, the
// fresh regex variables and extended environments its body was typed under.
// Building the derivation once keeps the evaluator from re-running the
// ambiguity side conditions at every recursive step.
struct Typed {
  const Lens* lens = nullptr;
  LensType type;
  std::vector<std::shared_ptr<const Typed>> kids;
  std::string x1, x2;  // Link only
};
using TypedPtr = std::shared_ptr<const Typed>;

class Checker {
 public:
  Checker() = default;
  explicit Checker(std::size_t bound) : bound_(bound) {}

  TypedPtr check(const LensTypeEnv& lenv, const RegexTypeEnv& renv, const LensPtr& l) {
    auto node = std::make_shared<Typed>();
    node->lens = l.get();
    switch (l->kind()) {
      case LensKind::Const: {
        require_wf(lenv, renv);
        node->type = {Mre::literal(l->s1()), Mre::literal(l->s2())};
        break;
      }
      case LensKind::Var: {
        require_wf(lenv, renv);
        auto pair = lenv.lookup(l->name());
        if (!pair) {
          throw TypeError("unbound-lens-variable", "VarT: unbound lens variable " + l->name(),
                          "VarT");
        }
        node->type = {Mre::var(pair->first), Mre::var(pair->second)};
        break;
      }
      case LensKind::Id: {
        require_wf(lenv, renv);
        if (!is_closed(l->regex())) {
          throw not_closed("identity regex has free variables");
        }
        require_unamb(strongly_unambiguous(RegexTypeEnv{}, l->regex(), bound_), "IdT", "regex");
        node->type = {l->regex(), l->regex()};
        break;
      }
      case LensKind::Iter: {
        TypedPtr kid = check(lenv, renv, l->inner());
        require_unamb(check_unamb_iter(renv, kid->type.source, bound_), "IterT", "source");
        require_unamb(check_unamb_iter(renv, kid->type.target, bound_), "IterT", "target");
        node->type = {Mre::star(kid->type.source), Mre::star(kid->type.target)};
        node->kids = {std::move(kid)};
        break;
      }
      case LensKind::Or: {
        TypedPtr k1 = check(lenv, renv, l->left());
        TypedPtr k2 = check(lenv, renv, l->right());
        require_unamb(check_unamb_alt(renv, k1->type.source, k2->type.source, bound_), "OrT",
                      "source");
        require_unamb(check_unamb_alt(renv, k1->type.target, k2->type.target, bound_), "OrT",
                      "target");
        node->type = {Mre::alt(k1->type.source, k2->type.source),
                      Mre::alt(k1->type.target, k2->type.target)};
        node->kids = {std::move(k1), std::move(k2)};
        break;
      }
      case LensKind::Concat: {
        TypedPtr k1 = check(lenv, renv, l->left());
        TypedPtr k2 = check(lenv, renv, l->right());
        require_unamb(check_unamb_concat(renv, k1->type.source, k2->type.source, bound_),
                      "ConcatT", "source");
        require_unamb(check_unamb_concat(renv, k1->type.target, k2->type.target, bound_),
                      "ConcatT", "target");
        node->type = {Mre::concat(k1->type.source, k2->type.source),
                      Mre::concat(k1->type.target, k2->type.target)};
        node->kids = {std::move(k1), std::move(k2)};
        break;
      }
      case LensKind::Swap: {
        TypedPtr k1 = check(lenv, renv, l->left());
        TypedPtr k2 = check(lenv, renv, l->right());
        require_unamb(check_unamb_concat(renv, k1->type.source, k2->type.source, bound_),
                      "SwapT", "source");
        require_unamb(check_unamb_concat(renv, k2->type.target, k1->type.target, bound_),
                      "SwapT", "target");
        node->type = {Mre::concat(k1->type.source, k2->type.source),
                      Mre::concat(k2->type.target, k1->type.target)};
        node->kids = {std::move(k1), std::move(k2)};
        break;
      }
      case LensKind::Comp: {
        TypedPtr k1 = check(lenv, renv, l->left());
        TypedPtr k2 = check(lenv, renv, l->right());
        if (!alpha_equivalent(k1->type.target, k2->type.source)) {
          throw comp_middle_mismatch("middle types do not agree");
        }
        node->type = {k1->type.source, k2->type.target};
        node->kids = {std::move(k1), std::move(k2)};
        break;
      }
      case LensKind::Link: {
        TypedPtr k1 = check(lenv, renv, l->def());
        node->x1 = fresh(l->name(), renv);
        node->x2 = fresh(l->name(), renv);
        LensTypeEnv lenv2 = lenv.extended(l->name(), node->x1, node->x2);
        RegexTypeEnv renv2 =
            renv.extended(node->x1, k1->type.source).extended(node->x2, k1->type.target);
        TypedPtr k2 = check(lenv2, renv2, l->body());
        require_unamb(
            check_unamb_bind(renv, node->x1, k1->type.source, k2->type.source, bound_),
            "LinkT", "source");
        require_unamb(
            check_unamb_bind(renv, node->x2, k1->type.target, k2->type.target, bound_),
            "LinkT", "target");
        node->type = {Mre::bind(node->x1, k1->type.source, k2->type.source),
                      Mre::bind(node->x2, k1->type.target, k2->type.target)};
        node->kids = {std::move(k1), std::move(k2)};
        break;
      }
    }
    return node;
  }

 private:
  static void require_wf(const LensTypeEnv& lenv, const RegexTypeEnv& renv) {
    if (!envs_well_formed(lenv, renv)) {
      throw env_ill_formed("lens and regex type environments are not well-formed");
    }
  }

  static void require_unamb(const AmbVerdict& v, const std::string& rule,
                            const std::string& side) {
    if (v.unambiguous) return;
    if (v.witness_found) throw ambiguous_side(rule, side, v.reason);
    throw ambiguity_unknown(rule, side, v.reason);
  }

  std::string fresh(const std::string& base, const RegexTypeEnv& renv) {
    std::string stem = base.substr(0, base.find('$'));
    for (;;) {
      std::string candidate = stem + "$" + std::to_string(counter_++);
      if (!renv.contains(candidate)) return candidate;
    }
  }

  std::size_t bound_ = kDefaultAmbBound;
  int counter_ = 0;
};

const MrePtr& side_of(const LensType& t, Direction dir, bool input_side) {
  bool source = (dir == Direction::Get) == input_side;
  return source ? t.source : t.target;
}

bool member_in_env(const MrePtr& r, const std::string& s, const RegexValueEnv& venv) {
  return accepts(compile(substitute_values(r, venv)), s);
}

class Evaluator {
 public:
  Evaluator(Direction dir, ExploreOrder order) : dir_(dir), order_(order) {}

  std::string run(const Typed& t, const std::string& input, const RegexValueEnv& venv) {
    const Lens& l = *t.lens;
    switch (l.kind()) {
      case LensKind::Const: {
        const std::string& expect = dir_ == Direction::Get ? l.s1() : l.s2();
        const std::string& result = dir_ == Direction::Get ? l.s2() : l.s1();
        if (input != expect) {
          throw ParseFailure("constant lens expected \"" + expect + "\"", 0);
        }
        return result;
      }
      case LensKind::Var: {
        const std::string& xj =
            dir_ == Direction::Get ? t.type.source->name() : t.type.target->name();
        const std::string& xk =
            dir_ == Direction::Get ? t.type.target->name() : t.type.source->name();
        auto vj = venv.lookup(xj);
        if (!vj) throw UnboundVariable(xj);
        if (input != *vj) {
          throw ParseFailure("variable lens input does not match the bound string for " + xj, 0);
        }
        auto vk = venv.lookup(xk);
        if (!vk) throw UnboundVariable(xk);
        return *vk;
      }
      case LensKind::Id: {
        // The identity regex is evaluated in the empty environment.
        if (!accepts(compile(l.regex()), input)) {
          throw ParseFailure("input is not in the identity lens language", 0);
        }
        return input;
      }
      case LensKind::Iter: {
        auto tree = parse_input(t, input, venv);
        std::string out;
        for (const auto& iter : (*tree)->iterations) {
          out += run(*t.kids[0], iter->text, venv);
        }
        return out;
      }
      case LensKind::Concat: {
        auto tree = parse_input(t, input, venv);
        return run(*t.kids[0], (*tree)->left->text, venv) +
               run(*t.kids[1], (*tree)->right->text, venv);
      }
      case LensKind::Swap: {
        auto tree = parse_input(t, input, venv);
        const std::string& first = (*tree)->left->text;
        const std::string& second = (*tree)->right->text;
        if (dir_ == Direction::Get) {
          // source is l1 . l2; target swaps the translated parts
          return run(*t.kids[1], second, venv) + run(*t.kids[0], first, venv);
        }
        // target side reads l2's part first
        return run(*t.kids[0], second, venv) + run(*t.kids[1], first, venv);
      }
      case LensKind::Or: {
        const MrePtr& left_in = side_of(t.kids[0]->type, dir_, true);
        if (member_in_env(left_in, input, venv)) return run(*t.kids[0], input, venv);
        const MrePtr& right_in = side_of(t.kids[1]->type, dir_, true);
        if (member_in_env(right_in, input, venv)) return run(*t.kids[1], input, venv);
        throw ParseFailure("input matches neither alternative", 0);
      }
      case LensKind::Comp: {
        // get runs left-to-right, put right-to-left
        const Typed& first = dir_ == Direction::Get ? *t.kids[0] : *t.kids[1];
        const Typed& second = dir_ == Direction::Get ? *t.kids[1] : *t.kids[0];
        return run(second, run(first, input, venv), venv);
      }
      case LensKind::Link: {
        auto tree = parse_input(t, input, venv);
        if (!(*tree)->witness) {
          throw InvariantViolation("link lens matched without a witness for its variable");
        }
        const std::string& sj1 = *(*tree)->witness;
        std::string sk1 = run(*t.kids[0], sj1, venv);
        const std::string& s11 = dir_ == Direction::Get ? sj1 : sk1;
        const std::string& s21 = dir_ == Direction::Get ? sk1 : sj1;
        RegexValueEnv venv2 = venv.extended(t.x1, s11).extended(t.x2, s21);
        return run(*t.kids[1], input, venv2);
      }
    }
    throw InvariantViolation("unhandled lens kind");
  }

 private:
  std::optional<ParseTreePtr> parse_side(const MrePtr& side, const std::string& input,
                                         const RegexValueEnv& venv) {
    return parse_in_env(side, input, venv, order_);
  }

  // Parses the input against the direction-selected side of t's type.
  std::optional<ParseTreePtr> parse_input(const Typed& t, const std::string& input,
                                          const RegexValueEnv& venv) {
    const MrePtr& side = side_of(t.type, dir_, true);
    auto tree = parse_side(side, input, venv);
    if (!tree) {
      auto details =
          match_details(compile(substitute_values(side, venv)), input, order_);
      throw ParseFailure("input is not in the lens " +
                             std::string(dir_ == Direction::Get ? "source" : "target") +
                             " language",
                         details.furthest);
    }
    return tree;
  }

  Direction dir_;
  ExploreOrder order_;
};

}  // namespace

LensType typecheck(const LensTypeEnv& lenv, const RegexTypeEnv& renv, const LensPtr& l) {
  Checker checker;
  return checker.check(lenv, renv, l)->type;
}

LensType typecheck(const LensTypeEnv& lenv, const RegexTypeEnv& renv, const LensPtr& l,
                   std::size_t amb_bound) {
  Checker checker(amb_bound);
  return checker.check(lenv, renv, l)->type;
}

bool step_envs_well_formed(const LensTypeEnv& lenv, const RegexTypeEnv& renv,
                           const RegexValueEnv& venv) {
  for (std::size_t i = 0; i < lenv.size(); ++i) {
    const auto& [x1, x2] = lenv.at(i).second;
    if (!renv.contains(x1) || !renv.contains(x2)) return false;
    if (!venv.lookup(x1) || !venv.lookup(x2)) return false;
  }
  for (std::size_t i = 0; i < venv.size(); ++i) {
    const auto& [name, value] = venv.at(i);
    auto type = renv.lookup(name);
    if (!type) return false;
    MrePtr closed = substitute_values(*type, venv.prefix(i));
    if (!is_closed(closed)) return false;
    if (!accepts(compile(closed), value)) return false;
  }
  return true;
}

std::string eval(const LensPtr& l, Direction dir, const std::string& input,
                 const LensTypeEnv& lenv, const RegexTypeEnv& renv, const RegexValueEnv& venv,
                 ExploreOrder order) {
  if (!step_envs_well_formed(lenv, renv, venv)) {
    throw env_ill_formed("operational environments are not well-formed");
  }
  Checker checker;
  TypedPtr typed = checker.check(lenv, renv, l);
  Evaluator ev(dir, order);
  return ev.run(*typed, input, venv);
}

std::string eval(const LensPtr& l, Direction dir, const std::string& input,
                 const LensTypeEnv& lenv, const RegexTypeEnv& renv, const RegexValueEnv& venv) {
  return eval(l, dir, input, lenv, renv, venv, ExploreOrder::canonical());
}

std::string eval(const LensPtr& l, Direction dir, const std::string& input) {
  return eval(l, dir, input, LensTypeEnv{}, RegexTypeEnv{}, RegexValueEnv{});
}

}  // namespace mrlens
