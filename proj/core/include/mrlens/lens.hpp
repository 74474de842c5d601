#ifndef MRLENS_LENS_HPP
#define MRLENS_LENS_HPP

#include <memory>
#include <string>
#include <utility>

#include "mrlens/mre.hpp"
#include "mrlens/mrras.hpp"

namespace mrlens {

class Lens;
using LensPtr = std::shared_ptr<const Lens>;

enum class LensKind { Const, Id, Iter, Concat, Swap, Or, Comp, Var, Link };

/// A bijective match-reference lens. Immutable and shareable, like Mre.
///
/// const(s1, s2) maps between two fixed strings; id(R) is the identity on
/// L(R); iter, concat, swap, or, and comp combine sublenses; a lens variable
/// reuses the translation its link binder performed, so equal substrings stay
/// equal across the translation.
class Lens {
 public:
  static LensPtr constant(std::string s1, std::string s2);
  static LensPtr id(MrePtr regex);
  static LensPtr iter(LensPtr inner);
  static LensPtr concat(LensPtr left, LensPtr right);
  static LensPtr swap(LensPtr left, LensPtr right);
  static LensPtr alt(LensPtr left, LensPtr right);
  static LensPtr comp(LensPtr left, LensPtr right);
  static LensPtr var(std::string name);
  static LensPtr link(std::string name, LensPtr def, LensPtr body);

  LensKind kind() const noexcept { return kind_; }
  const std::string& s1() const noexcept { return s1_; }
  const std::string& s2() const noexcept { return s2_; }
  const MrePtr& regex() const noexcept { return regex_; }
  const std::string& name() const noexcept { return name_; }
  const LensPtr& left() const noexcept { return a_; }
  const LensPtr& right() const noexcept { return b_; }
  const LensPtr& inner() const noexcept { return a_; }
  const LensPtr& def() const noexcept { return a_; }
  const LensPtr& body() const noexcept { return b_; }

 private:
  Lens(LensKind kind, std::string s1, std::string s2, MrePtr regex, std::string name, LensPtr a,
       LensPtr b)
      : kind_(kind),
        s1_(std::move(s1)),
        s2_(std::move(s2)),
        regex_(std::move(regex)),
        name_(std::move(name)),
        a_(std::move(a)),
        b_(std::move(b)) {}

  LensKind kind_;
  std::string s1_, s2_;
  MrePtr regex_;
  std::string name_;
  LensPtr a_, b_;
};

bool structurally_equal(const LensPtr& a, const LensPtr& b);

/// A lens type R1 <=> R2: the contract that the lens maps L(R1) onto L(R2)
/// bijectively. Produced only by the type checker.
struct LensType {
  MrePtr source;
  MrePtr target;
};

/// Translation direction: Get reads the source side (j,k)=(1,2), Put the
/// target side (2,1).
enum class Direction { Get, Put };

/// Infers the type of l under the given environments, enforcing every side
/// condition of the typing rules. Throws TypeError on failure. The optional
/// bound feeds the ambiguity checks' oracle confirmation step.
LensType typecheck(const LensTypeEnv& lenv, const RegexTypeEnv& renv, const LensPtr& l);
LensType typecheck(const LensTypeEnv& lenv, const RegexTypeEnv& renv, const LensPtr& l,
                   std::size_t amb_bound);

/// Gamma_L, Gamma_R, rho |- *: the lens type environment's pairs exist in
/// both the regex type and value environments, and every value environment
/// entry is in the language of its type.
bool step_envs_well_formed(const LensTypeEnv& lenv, const RegexTypeEnv& renv,
                           const RegexValueEnv& venv);

/// Applies l in the given direction to `input` under the given environments,
/// following the big-step semantics: infer the type, parse the input against
/// the direction-selected side, and recurse on sublenses over the parsed
/// substrings. Throws ParseFailure when the input is outside the source-side
/// language and TypeError when l does not typecheck.
std::string eval(const LensPtr& l, Direction dir, const std::string& input,
                 const LensTypeEnv& lenv, const RegexTypeEnv& renv, const RegexValueEnv& venv);

/// Convenience: eval with empty environments.
std::string eval(const LensPtr& l, Direction dir, const std::string& input);

/// eval under an explicit exploration order; for well-typed lenses the
/// result does not depend on it.
std::string eval(const LensPtr& l, Direction dir, const std::string& input,
                 const LensTypeEnv& lenv, const RegexTypeEnv& renv, const RegexValueEnv& venv,
                 ExploreOrder order);

}  // namespace mrlens

#endif
