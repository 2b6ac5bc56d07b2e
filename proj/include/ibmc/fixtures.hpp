#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ibmc/automata.hpp"
#include "ibmc/refinement.hpp"

namespace ibmc {
namespace fixtures {

/// Directory holding the bundled example systems; the IBMC_FIXTURE_DIR
/// environment variable overrides the compiled-in location.
std::filesystem::path root();

std::vector<std::string> automaton_ids();
std::vector<std::string> replacement_ids();

/// Known ids: m_send, m_send_acc, a_nphi (the claim of m_send), n_fig3,
/// timer_two_box, two_box_bypass. Unknown ids raise InputError.
Automaton load_automaton(const std::string& id);

/// Known ids: r_send1, r_violating, r_cooperating.
Replacement load_replacement(const std::string& id);

/// The refinement relation bundled with n_fig3.
RefinementRelation load_relation(const std::string& id);

/// Raw manifest of a fixture directory (id, description, edge notes,
/// expected word classifications).
std::filesystem::path manifest_path(const std::string& id);

}  // namespace fixtures
}  // namespace ibmc
