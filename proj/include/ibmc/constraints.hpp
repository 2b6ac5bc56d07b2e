#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ibmc/automata.hpp"
#include "ibmc/product.hpp"

namespace ibmc {

enum class SubPropertyKind { S, Sp };

std::string to_string(SubPropertyKind k);

/// Per-box obligation extracted from the cleaned product. The inner
/// automaton is the product fragment the claim can traverse while the
/// model sits inside the box; incoming/outgoing entries connect it to the
/// rest of the model (with the model-side endpoint recorded). G marks
/// incoming entries reachable without crossing the box, R outgoing entries
/// from which a violating cycle is reachable without crossing the box, K
/// which outgoing/incoming entry pairs are connected outside the box, and
/// the gamma flags whether such a connection passes a model- or
/// claim-accepting state. Kind S restricts all of this to purely regular
/// product states (must-not behaviors); kind Sp merely avoids this box's
/// own states (should-not behaviors).
struct SubProperty {
  std::string box;
  SubPropertyKind kind = SubPropertyKind::S;
  Automaton inner;                   // box-free automaton over product state ids
  std::vector<Transition> incoming;  // model source -> inner target
  std::vector<Transition> outgoing;  // inner source -> model target
  std::set<std::size_t> g;           // indices into incoming
  std::set<std::size_t> r;           // indices into outgoing
  std::vector<std::pair<std::size_t, std::size_t>> k;  // (outgoing index, incoming index)
  std::vector<bool> gamma_m;                           // parallel to k
  std::vector<bool> gamma_a;                           // parallel to k
};

/// Both sub-property flavors for one box plus the bypass flag: y_flag is
/// true when a possibly violating run exists that avoids the box entirely
/// (its lasso is kept as y_witness).
struct Constraint {
  std::string box;
  SubProperty s;
  SubProperty sp;
  bool y_flag = false;
  std::optional<Witness> y_witness;
};

/// Drops every product state that lies on no accepting run: keeps the
/// backward closure of the nontrivial SCCs that contain an accepting
/// state. Tags and origins survive on the remaining transitions.
IntersectionAutomaton clean_intersection(const IntersectionAutomaton& i);

/// Inner automaton and plug entries of one box, before G/R/K are known.
/// incoming_origin/outgoing_origin keep the product transitions the
/// entries were derived from.
struct SubPropertySkeleton {
  std::string box;
  Automaton inner;
  std::vector<Transition> incoming;
  std::vector<Transition> outgoing;
  std::vector<Transition> incoming_origin;
  std::vector<Transition> outgoing_origin;
};

/// One skeleton per box of the model (empty for boxes the cleaned product
/// never visits). icl must already be cleaned.
std::map<std::string, SubPropertySkeleton> extract_subproperty_skeletons(
    const IntersectionAutomaton& icl, const Automaton& model);

struct GrSets {
  std::set<std::size_t> g;
  std::set<std::size_t> r;
};

GrSets compute_g_r(const IntersectionAutomaton& icl, const SubPropertySkeleton& sk,
                   SubPropertyKind kind);

struct ReachabilityRelation {
  std::vector<std::pair<std::size_t, std::size_t>> k;
  std::vector<bool> gamma_m;
  std::vector<bool> gamma_a;
};

ReachabilityRelation compute_reachability(const IntersectionAutomaton& icl,
                                          const SubPropertySkeleton& sk, SubPropertyKind kind);

/// Full pipeline: requires model_check(model, claim) to come out Unknown,
/// then builds the cleaned product and a constraint per box.
std::map<std::string, Constraint> compute_constraint(const Automaton& model, const Automaton& claim);

}  // namespace ibmc
