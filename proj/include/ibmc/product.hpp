#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ibmc/automata.hpp"

namespace ibmc {

/// Components of one product state <model, claim, counter>.
struct ProductStateInfo {
  std::string model;
  std::string claim;
  int counter = 0;
  bool mixed = false;  // model component is a box
  bool model_accepting = false;
  bool claim_accepting = false;
};

std::string product_state_id(const std::string& model, const std::string& claim, int counter);

/// Which pair of source transitions produced a product transition. A
/// missing model transition means the model stuttered inside a box.
struct TransitionOrigin {
  std::optional<Transition> model;
  Transition claim;
};

/// Product of a (possibly incomplete) automaton with a claim automaton.
///
/// States are reachable triples <q, p, x>. Synchronized steps pair a model
/// transition with a claim transition whose guards are jointly satisfiable
/// and label the edge with the conjunction (delta_c); inside a box the
/// claim may also move alone while the model stutters (delta_p). The
/// counter x cycles 0 -> 1 on a model-accepting target, 1 -> 2 on a
/// claim-accepting target and 2 -> 0; a state is accepting exactly when
/// its counter is 2, so a run accepts iff both sides accept.
///
/// A transition generated both by a box self-loop and by a stutter step
/// can carry both tags at once; delta_c and delta_p always cover all
/// transitions.
struct IntersectionAutomaton {
  Automaton underlying;  // kind Ba over product state ids
  std::map<std::string, ProductStateInfo> info;
  std::set<Transition> delta_c;
  std::set<Transition> delta_p;
  std::map<Transition, TransitionOrigin> origin;  // one witness pair per transition

  bool is_mixed(const std::string& id) const { return info.at(id).mixed; }
};

/// Extra product states to materialize besides the initial ones.
struct ProductSeed {
  std::string model;
  std::string claim;
  int counter = 0;
};

/// Builds the reachable product of model and claim. The claim must have no
/// boxes. Candidate edges whose guards contradict are simply omitted.
IntersectionAutomaton intersect(const Automaton& model, const Automaton& claim,
                                const std::vector<ProductSeed>& extra_seeds = {});

/// Accepting lasso of a Buchi automaton, as word, state run and the
/// transitions taken. Stem characters/transitions connect run_stem[i] to
/// run_stem[i+1]; the last stem state equals the loop head run_loop[0],
/// and loop transitions wrap around.
struct Witness {
  LassoWord word;
  std::vector<std::string> run_stem;
  std::vector<std::string> run_loop;
  std::vector<Transition> stem_transitions;
  std::vector<Transition> loop_transitions;
};

/// SCC-based emptiness check: returns a lasso through an accepting state
/// that lies in a nontrivial strongly connected component reachable from
/// an initial state, or nothing when the language is empty. Characters are
/// the minimal models of the guards along the path. Deterministic for a
/// given automaton.
std::optional<Witness> find_accepting_lasso(const Automaton& ba);

enum class VerdictValue { True, False, Unknown };

std::string to_string(VerdictValue v);

/// Three-valued outcome with an optional witness lasso. A False witness
/// runs through regular states only; an Unknown witness crosses at least
/// one box.
struct Verdict {
  VerdictValue value = VerdictValue::True;
  std::optional<Witness> witness;
};

struct CheckStats {
  std::size_t completion_product_states = 0;
  std::size_t completion_product_transitions = 0;
  std::size_t product_states = 0;  // zero when the full product was not needed
  std::size_t product_transitions = 0;
};

/// Decides whether the model satisfies the claim automaton of the negated
/// property: False when the completion product has an accepting lasso,
/// Unknown when only the full product has one, True otherwise.
Verdict model_check(const Automaton& model, const Automaton& claim, CheckStats* stats = nullptr);

}  // namespace ibmc
