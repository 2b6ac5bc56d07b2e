#pragma once

#include <set>
#include <string>
#include <vector>

#include "ibmc/constraints.hpp"
#include "ibmc/product.hpp"
#include "ibmc/refinement.hpp"

namespace ibmc {

/// Product of a replacement (as model) with a sub-property's inner
/// automaton (as claim), plus the synchronized plug entries. Incoming
/// entries pair a replacement incoming transition with a sub-property
/// incoming transition over the same model-side source and jointly
/// satisfiable guards, materializing targets for every counter value;
/// outgoing entries pair by model-side target. g/r index the entries
/// derived from a G/R entry of the sub-property.
struct SubRepProduct {
  IntersectionAutomaton product;

  struct InEntry {
    std::string model_source;
    Guard guard;
    std::string target;  // product state id
    std::size_t from_replacement;
    std::size_t from_subproperty;
  };
  struct OutEntry {
    std::string source;  // product state id
    Guard guard;
    std::string model_target;
    std::size_t from_replacement;
    std::size_t from_subproperty;
  };

  std::vector<InEntry> incoming;
  std::vector<OutEntry> outgoing;
  std::set<std::size_t> g;  // indices into incoming
  std::set<std::size_t> r;  // indices into outgoing
};

SubRepProduct intersect_subproperty_replacement(const SubProperty& s, const Replacement& r);

enum class ApproxKind { Under, Over };

/// The sub-property x replacement product extended with a placeholder
/// initial state g (edges to the targets of G entries), a placeholder
/// accepting state r carrying a <stut> self-loop (edges from the sources
/// of R entries), and <eps> edges that shortcut the outside connections
/// recorded in K, with the counter advanced according to the gamma flags.
/// Under uses the completed replacement against the S sub-property, over
/// the full replacement against Sp.
struct ApproxAutomaton {
  Automaton underlying;
  std::string g_state;
  std::string r_state;
  ApproxKind kind = ApproxKind::Under;
};

ApproxAutomaton build_approx(const SubProperty& s, const Replacement& r, ApproxKind kind);

/// Verdict for a replacement against its box's constraint: False when the
/// under approximation accepts something, True when the over approximation
/// is empty and no bypass run exists, Unknown otherwise.
Verdict check_replacement(const Constraint& c, const Replacement& r);

}  // namespace ibmc
