#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "ibmc/automata.hpp"
#include "ibmc/ltl.hpp"
#include "ibmc/product.hpp"

// Brute-force reference semantics over bounded lasso words. Everything in
// here explores (state x word-position) graphs directly and shares no
// traversal code with the product module, so the two sides can check each
// other.

namespace ibmc {
namespace oracle {

enum class RunClassification { Definite, Possible, Rejected };

std::string to_string(RunClassification c);

/// Classifies how an automaton treats the infinite word w. Definite: an
/// accepting run through regular states only exists. Possible: no such run
/// but an accepting run crossing a box exists (a box consumes any
/// character by stuttering). Rejected otherwise.
RunClassification classify_word(const Automaton& m, const LassoWord& w);

/// Membership in the language of a box-free automaton; equivalent to
/// classify_word(ba, w) == Definite.
bool accepts_lasso(const Automaton& ba, const LassoWord& w);

/// Reusable membership checker for scanning large word universes against
/// one automaton. Definite mode drops the boxes, possible mode keeps them
/// as stuttering self-loops. Small automata run on cached per-character
/// successor bitmasks; larger ones fall back to the generic search.
class LassoAcceptor {
 public:
  enum class Mode { Definite, Possible };

  LassoAcceptor(const Automaton& automaton, Mode mode);

  bool accepts(const LassoWord& w) const;

 private:
  bool accepts_bitset(const LassoWord& w) const;

  const Automaton& automaton_;
  Mode mode_;
  bool use_bitset_ = false;
  std::vector<std::string> states_;
  std::vector<bool> stutter_;
  std::uint64_t initial_mask_ = 0;
  std::uint64_t accepting_mask_ = 0;
  struct GuardEdge {
    Guard guard;
    int from;
    int to;
  };
  std::vector<GuardEdge> edges_;
  mutable std::map<Character, std::vector<std::uint64_t>> successors_by_char_;
};

/// Standard LTL semantics evaluated on an ultimately periodic word.
bool eval_ltl(const LtlPtr& f, const LassoWord& w);

/// All lassos with |stem| <= max_stem and 1 <= |loop| <= max_loop over the
/// given propositions, in a fixed lexicographic order (characters ordered
/// by their bitmask over the sorted proposition list).
std::vector<LassoWord> enumerate_lassos(const PropositionSet& props, std::size_t max_stem,
                                        std::size_t max_loop);

/// Streaming variant of enumerate_lassos; stops early when the callback
/// returns false.
void for_each_lasso(const PropositionSet& props, std::size_t max_stem, std::size_t max_loop,
                    const std::function<bool(const LassoWord&)>& fn);

/// Bounded three-valued verdict: False when some enumerated lasso is
/// definite for m and violates f, else Unknown when some definite or
/// possible lasso violates f, else True within the bound. Sound only
/// relative to the bound. Words are enumerated over the union of the
/// model's and extra propositions.
Verdict brute_force_verdict(const Automaton& m, const LtlPtr& f, std::size_t max_stem,
                            std::size_t max_loop, const PropositionSet& extra_props = {});

/// Finite and infinite word abstractions of an accepting product run with
/// respect to one box: the character segments the claim consumes while the
/// model sits inside that box, with the entering synchronized character as
/// prefix (empty when the run starts inside the box) and, for finite
/// segments, the leaving synchronized character as suffix.
struct Abstractions {
  std::set<std::vector<Character>> finite_words;
  std::set<LassoWord> infinite_words;
};

Abstractions abstractions(const IntersectionAutomaton& product, const std::string& box,
                          const LassoWord& word, const Witness& run);

/// True when two lassos denote the same infinite word.
inline bool lasso_equivalent(const LassoWord& a, const LassoWord& b) { return same_omega_word(a, b); }

}  // namespace oracle
}  // namespace ibmc
