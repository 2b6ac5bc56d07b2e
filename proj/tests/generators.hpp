#pragma once

#include <random>
#include <string>
#include <vector>

#include "ibmc/automata.hpp"
#include "ibmc/ltl.hpp"
#include "ibmc/refinement.hpp"

// Random instance generators for the property and acceptance suites. All
// randomness flows through the caller's engine, so a fixed seed pins the
// whole run.

namespace gen {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline ibmc::PropositionSet props_n(int n) {
  ibmc::PropositionSet props;
  const char* names[] = {"a", "b", "c", "d"};
  for (int i = 0; i < n && i < 4; ++i) props.names.insert(names[i]);
  return props;
}

inline ibmc::Guard random_guard(Rng& rng, const ibmc::PropositionSet& props, int max_literals) {
  std::vector<std::string> names(props.names.begin(), props.names.end());
  std::vector<ibmc::Literal> lits;
  const int count = pick(rng, 0, max_literals);
  for (int i = 0; i < count && !names.empty(); ++i) {
    lits.push_back({names[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(names.size()) - 1))],
                    chance(rng, 0.7)});
  }
  auto g = ibmc::Guard::make(std::move(lits));
  return g ? *g : ibmc::Guard::top();
}

struct IbaOptions {
  int max_states = 5;
  int min_boxes = 0;
  double box_probability = 0.3;
  double accepting_probability = 0.4;
  int max_guard_literals = 2;
};

inline ibmc::Automaton random_iba(Rng& rng, const ibmc::PropositionSet& props, const IbaOptions& opt) {
  ibmc::Automaton a;
  a.kind = ibmc::Kind::Iba;
  a.propositions = props;
  const int n = pick(rng, 1, opt.max_states);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    const std::string id = "m" + std::to_string(i);
    ids.push_back(id);
    a.states.insert(id);
    if (chance(rng, opt.box_probability)) a.boxes.insert(id);
    if (chance(rng, opt.accepting_probability)) a.accepting.insert(id);
  }
  while (static_cast<int>(a.boxes.size()) < opt.min_boxes && static_cast<int>(a.boxes.size()) < n) {
    a.boxes.insert(ids[static_cast<std::size_t>(pick(rng, 0, n - 1))]);
  }
  a.initial.insert(ids[static_cast<std::size_t>(pick(rng, 0, n - 1))]);
  if (chance(rng, 0.3)) a.initial.insert(ids[static_cast<std::size_t>(pick(rng, 0, n - 1))]);
  const int transitions = pick(rng, n, 3 * n);
  for (int i = 0; i < transitions; ++i) {
    a.transitions.insert({ids[static_cast<std::size_t>(pick(rng, 0, n - 1))],
                          random_guard(rng, props, opt.max_guard_literals),
                          ids[static_cast<std::size_t>(pick(rng, 0, n - 1))]});
  }
  return a;
}

inline ibmc::Automaton random_claim(Rng& rng, const ibmc::PropositionSet& props, int max_states) {
  ibmc::Automaton a;
  a.kind = ibmc::Kind::Ba;
  a.propositions = props;
  const int n = pick(rng, 1, max_states);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    const std::string id = "c" + std::to_string(i);
    ids.push_back(id);
    a.states.insert(id);
    if (chance(rng, 0.5)) a.accepting.insert(id);
  }
  if (a.accepting.empty()) a.accepting.insert(ids.back());
  a.initial.insert(ids[0]);
  const int transitions = pick(rng, n, 3 * n);
  for (int i = 0; i < transitions; ++i) {
    a.transitions.insert({ids[static_cast<std::size_t>(pick(rng, 0, n - 1))],
                          random_guard(rng, props, 2),
                          ids[static_cast<std::size_t>(pick(rng, 0, n - 1))]});
  }
  return a;
}

/// Valid by construction: every host transition touching the box gets a
/// counterpart, inner initial/accepting states appear only when allowed.
inline ibmc::Replacement random_replacement(Rng& rng, const ibmc::Automaton& host,
                                            const std::string& box, int max_states) {
  ibmc::Replacement r;
  r.box = box;
  r.inner.kind = ibmc::Kind::Iba;
  r.inner.propositions = host.propositions;
  const int n = pick(rng, 1, max_states);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    const std::string id = "x" + std::to_string(i);
    ids.push_back(id);
    r.inner.states.insert(id);
    if (chance(rng, 0.25)) r.inner.boxes.insert(id);
    if (host.is_initial(box) && chance(rng, 0.4)) r.inner.initial.insert(id);
    if (host.is_accepting(box) && chance(rng, 0.4)) r.inner.accepting.insert(id);
  }
  auto random_id = [&] { return ids[static_cast<std::size_t>(pick(rng, 0, n - 1))]; };

  for (const auto& t : host.transitions) {
    if (t.to == box && t.from != box) {
      r.incoming.push_back({t.from, t.guard, random_id()});
      if (chance(rng, 0.3)) r.incoming.push_back({t.from, t.guard, random_id()});
    }
    if (t.from == box && t.to != box) {
      r.outgoing.push_back({random_id(), t.guard, t.to});
      if (chance(rng, 0.3)) r.outgoing.push_back({random_id(), t.guard, t.to});
    }
    if (t.from == box && t.to == box) {
      r.inner.transitions.insert({random_id(), t.guard, random_id()});
    }
  }
  const int extra = pick(rng, 0, 2 * n);
  for (int i = 0; i < extra; ++i) {
    r.inner.transitions.insert({random_id(), random_guard(rng, host.propositions, 2), random_id()});
  }
  return r;
}

inline ibmc::LtlPtr random_formula(Rng& rng, const ibmc::PropositionSet& props, int depth) {
  std::vector<std::string> names(props.names.begin(), props.names.end());
  if (depth == 0 || chance(rng, 0.2)) {
    const int kind = pick(rng, 0, 5);
    if (kind == 0) return ibmc::ltl_true();
    if (kind == 1) return ibmc::ltl_false();
    return ibmc::ltl_prop(names[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(names.size()) - 1))]);
  }
  switch (pick(rng, 0, 7)) {
    case 0: return ibmc::ltl_not(random_formula(rng, props, depth - 1));
    case 1: return ibmc::ltl_and(random_formula(rng, props, depth - 1), random_formula(rng, props, depth - 1));
    case 2: return ibmc::ltl_or(random_formula(rng, props, depth - 1), random_formula(rng, props, depth - 1));
    case 3:
      return ibmc::ltl_implies(random_formula(rng, props, depth - 1), random_formula(rng, props, depth - 1));
    case 4: return ibmc::ltl_next(random_formula(rng, props, depth - 1));
    case 5: return ibmc::ltl_until(random_formula(rng, props, depth - 1), random_formula(rng, props, depth - 1));
    case 6: return ibmc::ltl_finally(random_formula(rng, props, depth - 1));
    default: return ibmc::ltl_globally(random_formula(rng, props, depth - 1));
  }
}

}  // namespace gen
