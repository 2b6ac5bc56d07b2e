#include "ibmc/fixtures.hpp"

#include <cstdlib>
#include <map>

#include "ibmc/json_io.hpp"

#ifndef IBMC_FIXTURE_ROOT
#define IBMC_FIXTURE_ROOT "fixtures"
#endif

namespace ibmc {
namespace fixtures {

namespace {

const std::map<std::string, std::string>& automaton_files() {
  static const std::map<std::string, std::string> files = {
      {"m_send", "m_send/model.json"},
      {"a_nphi", "m_send/claim.json"},
      {"m_send_acc", "m_send_acc/model.json"},
      {"n_fig3", "n_fig3/concrete.json"},
      {"timer_two_box", "timer_two_box/model.json"},
      {"two_box_bypass", "two_box_bypass/model.json"},
  };
  return files;
}

const std::map<std::string, std::string>& replacement_files() {
  static const std::map<std::string, std::string> files = {
      {"r_send1", "r_send1/replacement.json"},
      {"r_violating", "r_violating/replacement.json"},
      {"r_cooperating", "r_cooperating/replacement.json"},
  };
  return files;
}

}  // namespace

std::filesystem::path root() {
  if (const char* env = std::getenv("IBMC_FIXTURE_DIR")) return env;
  return IBMC_FIXTURE_ROOT;
}

std::vector<std::string> automaton_ids() {
  std::vector<std::string> out;
  for (const auto& [id, file] : automaton_files()) out.push_back(id);
  return out;
}

std::vector<std::string> replacement_ids() {
  std::vector<std::string> out;
  for (const auto& [id, file] : replacement_files()) out.push_back(id);
  return out;
}

Automaton load_automaton(const std::string& id) {
  auto it = automaton_files().find(id);
  if (it == automaton_files().end()) throw InputError("unknown fixture automaton '" + id + "'");
  Automaton a = load_automaton_file(root() / it->second);
  require_valid(a, "fixture " + id);
  return a;
}

Replacement load_replacement(const std::string& id) {
  auto it = replacement_files().find(id);
  if (it == replacement_files().end()) throw InputError("unknown fixture replacement '" + id + "'");
  return load_replacement_file(root() / it->second);
}

RefinementRelation load_relation(const std::string& id) {
  if (id != "n_fig3") throw InputError("unknown fixture relation '" + id + "'");
  return load_relation_file(root() / "n_fig3/relation.json");
}

std::filesystem::path manifest_path(const std::string& id) {
  const std::filesystem::path path = root() / id / "manifest.json";
  if (!std::filesystem::exists(path)) throw InputError("unknown fixture '" + id + "'");
  return path;
}

}  // namespace fixtures
}  // namespace ibmc
