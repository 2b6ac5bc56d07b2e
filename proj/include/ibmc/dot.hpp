#pragma once

#include <string>

#include "ibmc/automata.hpp"

namespace ibmc {

/// Graphviz rendering: boxes come out as filled rectangles, accepting
/// states as double circles, initial states get an arrow from a point
/// node. Purely for documentation.
std::string to_dot(const Automaton& a, const std::string& name);

}  // namespace ibmc
