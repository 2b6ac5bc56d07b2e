#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ibmc/automata.hpp"

namespace ibmc {

/// Refinement increment for one box: the automaton to plug in plus the
/// transitions that connect it to the host. Incoming entries run from a
/// host state into an inner state, outgoing entries from an inner state
/// back to a host state; each must mirror a host transition touching the
/// box (same source/target and guard).
struct Replacement {
  std::string box;
  Automaton inner;
  std::vector<Transition> incoming;  // host source -> inner target
  std::vector<Transition> outgoing;  // inner source -> host target

  friend bool operator==(const Replacement&, const Replacement&) = default;
};

/// Checks the replacement against its host: inner initial/accepting states
/// are only allowed when the box is initial/accepting, and every host
/// transition into, out of, or looping on the box needs a counterpart.
/// Entries that do not mirror any host transition are reported as stray.
std::vector<Violation> validate_replacement(const Automaton& host, const Replacement& r);

/// Pair relation between abstract and concrete state ids.
struct RefinementRelation {
  std::set<std::pair<std::string, std::string>> pairs;

  friend bool operator==(const RefinementRelation&, const RefinementRelation&) = default;
};

RefinementRelation identity_relation(const Automaton& a);

/// Plugs the replacement into the host: the box disappears, inner states
/// and plug transitions are merged in, initial/accepting sets are joined.
/// State id collisions between host and inner are rejected; use
/// rename_inner_states first. Also returns the canonical refinement
/// relation (identity on surviving host states, box mapped to every inner
/// state).
std::pair<Automaton, RefinementRelation> compose(const Automaton& host, const Replacement& r);

/// Replacement with every inner state id prefixed (plug endpoints follow).
Replacement rename_inner_states(const Replacement& r, const std::string& prefix);

/// Replacement restricted to the completion of its inner automaton; plug
/// entries touching dropped states disappear with them.
Replacement replacement_completion(const Replacement& r);

struct RefinementCheck {
  bool ok = true;
  std::vector<int> violated;       // condition numbers 1..9; 0 is the alphabet check
  std::vector<std::string> notes;  // human-readable details, parallel-ish to violated
};

/// Verifies that rel witnesses "concrete refines abstract": the alphabet
/// is preserved and the nine structural conditions hold. Guards are
/// compared for equality. The relation is checked as given; no search.
RefinementCheck check_refinement(const Automaton& abstract, const Automaton& concrete,
                                 const RefinementRelation& rel);

/// Refinement between two replacements for the same box: the inner
/// automata refine each other through rel (condition 1) and the plug
/// transitions correspond under rel (conditions 2-5, with the uniqueness
/// requirements checked literally).
RefinementCheck check_replacement_refinement(const Replacement& coarse, const Replacement& fine,
                                             const RefinementRelation& rel);

}  // namespace ibmc
