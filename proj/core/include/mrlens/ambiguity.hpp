#ifndef MRLENS_AMBIGUITY_HPP
#define MRLENS_AMBIGUITY_HPP

#include <string>

#include "mrlens/mre.hpp"

namespace mrlens {

/// Verdict of an unambiguity check. Unambiguous is only reported when the
/// property provably holds; a PossiblyAmbiguous verdict may or may not come
/// with a concrete counterexample (`witness_found`), since full decidability
/// of strong unambiguity for match-reference regexes is not established.
struct AmbVerdict {
  bool unambiguous = false;
  std::string reason;       // diagnostic for PossiblyAmbiguous
  bool witness_found = false;

  static AmbVerdict ok() { return {true, "", false}; }
  static AmbVerdict possibly(std::string reason, bool witness) {
    return {false, std::move(reason), witness};
  }
  explicit operator bool() const { return unambiguous; }
};

/// Default bound for the enumeration-based confirmation step.
inline constexpr std::size_t kDefaultAmbBound = 8;

// Each check substitutes variables by their types (an over-approximation
// that drops equality constraints, so a clean verdict on the approximation
// carries over), runs the classical automata-based check on the resulting
// plain regex, and confirms with the bounded enumeration oracle over value
// environments consistent with the type environment.

/// Unambiguous iteration: concatenations of L(r)-strings decompose uniquely.
AmbVerdict check_unamb_iter(const RegexTypeEnv& tenv, const MrePtr& r,
                            std::size_t bound = kDefaultAmbBound);

/// Unambiguous concatenation: every string of L(r1)L(r2) splits uniquely.
AmbVerdict check_unamb_concat(const RegexTypeEnv& tenv, const MrePtr& r1, const MrePtr& r2,
                              std::size_t bound = kDefaultAmbBound);

/// Unambiguous alternation: L(r1) and L(r2) are disjoint.
AmbVerdict check_unamb_alt(const RegexTypeEnv& tenv, const MrePtr& r1, const MrePtr& r2,
                           std::size_t bound = kDefaultAmbBound);

/// Unambiguous variable binding: distinct witnesses for x yield distinct
/// body strings. Requires x to occur in every alternation branch of r2 and
/// the substitution of r1 for x in r2 to be unambiguous.
AmbVerdict check_unamb_bind(const RegexTypeEnv& tenv, const std::string& x, const MrePtr& r1,
                            const MrePtr& r2, std::size_t bound = kDefaultAmbBound);

/// Structural recursion over r: every operator unambiguous in its
/// environment, variables checked against their type under the environment
/// prefix that precedes them.
AmbVerdict strongly_unambiguous(const RegexTypeEnv& tenv, const MrePtr& r,
                                std::size_t bound = kDefaultAmbBound);

}  // namespace mrlens

#endif
