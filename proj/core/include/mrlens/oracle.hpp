#ifndef MRLENS_ORACLE_HPP
#define MRLENS_ORACLE_HPP

#include <set>
#include <string>
#include <utility>

#include "mrlens/lens.hpp"
#include "mrlens/mre.hpp"
#include "mrlens/sre.hpp"

namespace mrlens {

// Bounded brute-force enumeration of the denotational semantics. This is the
// ground truth the automata and the evaluator are tested against, not a
// production matcher: expect exponential blowup past max_len of about 10.

/// All strings of L_env(r) of length at most max_len, counted in Unicode
/// scalar values. Throws UnboundVariable when a free variable is missing
/// from env.
std::set<std::string> enumerate_regex(const MrePtr& r, const RegexValueEnv& env,
                                      std::size_t max_len);

/// Membership by enumeration at bound |s|.
bool regex_member(const MrePtr& r, const RegexValueEnv& env, const std::string& s);

/// Bounded language of a scoped regex. The scope case draws candidate
/// matches from the variable's definition evaluated under the restricted
/// environment d|x.
std::set<std::string> enumerate_sre(const Sre& e, const RegexValueEnv& env, std::size_t max_len);

/// Bounded denotation of a lens: the string pairs with both components of
/// length at most max_len. The id case evaluates its regex in the empty
/// environment.
std::set<std::pair<std::string, std::string>> enumerate_lens(const LensPtr& l,
                                                             const LensValueEnv& env,
                                                             std::size_t max_len);

/// Orders strings by length, then lexicographically; used for all
/// reproducible oracle output.
struct LengthLexLess {
  bool operator()(const std::string& a, const std::string& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace mrlens

#endif
