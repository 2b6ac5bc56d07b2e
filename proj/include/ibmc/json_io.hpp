#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ibmc/automata.hpp"
#include "ibmc/constraints.hpp"
#include "ibmc/product.hpp"
#include "ibmc/refinement.hpp"

// JSON document formats:
//   automaton    {"kind":"iba"|"ba","propositions":[...],
//                 "states":[{"id","box","initial","accepting"}],
//                 "transitions":[{"from","to","guard":["send","!success"]}]}
//   replacement  {"box","automaton":{...},"incoming":[{"from","guard","to"}],
//                 "outgoing":[...]}
//   relation     {"pairs":[["abstract","concrete"],...]}
//   constraint   {"box","yFlag","s":{...},"sp":{...}[,"yWitness":{...}]}
//   sub-property {"box","kind","automaton","incoming","outgoing",
//                 "G","R","K","gammaM","gammaA"}
// Guard literals use a '!' prefix for negation; an empty array is "true".
// Emitted objects have sorted keys and sorted collections, so equal values
// serialize byte-identically.

namespace ibmc {

nlohmann::json to_json(const Guard& g);
Guard guard_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Automaton& a);
Automaton automaton_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Replacement& r);
Replacement replacement_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RefinementRelation& rel);
RefinementRelation relation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LassoWord& w);
LassoWord lasso_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SubProperty& s);
SubProperty subproperty_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Constraint& c);
Constraint constraint_from_json(const nlohmann::json& j);

std::string dump_canonical(const nlohmann::json& j);

nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const nlohmann::json& j);

Automaton load_automaton_file(const std::filesystem::path& path);
Replacement load_replacement_file(const std::filesystem::path& path);
RefinementRelation load_relation_file(const std::filesystem::path& path);
Constraint load_constraint_file(const std::filesystem::path& path);

}  // namespace ibmc
