#ifndef MRLENS_EMIT_HPP
#define MRLENS_EMIT_HPP

#include <string>

#include "mrlens/mrras.hpp"
#include "mrlens/sre.hpp"

namespace mrlens {

/// JSON dump of a scoped regex: {"main": ..., "defs": [{"var", "def"}...]}.
std::string sre_to_json(const Sre& e);

/// JSON dump of an automata system:
/// {automata:[{index, states, initial, finals,
///             transitions:[{from, sym:{kind, char|index}, to}]}]}.
std::string mrras_to_json(const Mrras& m);

/// Graphviz rendering, one cluster per automaton.
std::string mrras_to_dot(const Mrras& m);

}  // namespace mrlens

#endif
