#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ibmc/constraints.hpp"
#include "ibmc/dot.hpp"
#include "ibmc/json_io.hpp"
#include "ibmc/ltl.hpp"
#include "ibmc/oracle.hpp"
#include "ibmc/product.hpp"
#include "ibmc/refinement.hpp"
#include "ibmc/replacement_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitError = 10;

int verdict_exit_code(ibmc::VerdictValue v) {
  switch (v) {
    case ibmc::VerdictValue::True: return kExitTrue;
    case ibmc::VerdictValue::False: return kExitFalse;
    case ibmc::VerdictValue::Unknown: return kExitUnknown;
  }
  return kExitError;
}

std::string render_characters(const std::vector<ibmc::Character>& chars) {
  std::string out;
  for (const auto& c : chars) {
    if (!out.empty()) out += " ";
    std::string shown = c.to_string();
    // Reserved connector symbols read better in angle form.
    if (shown == "{<eps>}") shown = "<eps>";
    if (shown == "{<stut>}") shown = "<stut>";
    out += shown;
  }
  return out;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += " ";
    out += id;
  }
  return out;
}

struct ReportOptions {
  std::string format = "text";
};

void print_verdict_report(const ibmc::Verdict& verdict, const ibmc::CheckStats* stats,
                          long long wall_ms, const ReportOptions& opts) {
  if (opts.format == "json") {
    json out;
    out["verdict"] = ibmc::to_string(verdict.value);
    out["exitCode"] = verdict_exit_code(verdict.value);
    if (stats) {
      out["statistics"] = json{{"completionProductStates", stats->completion_product_states},
                               {"completionProductTransitions", stats->completion_product_transitions},
                               {"productStates", stats->product_states},
                               {"productTransitions", stats->product_transitions},
                               {"wallTimeMs", wall_ms}};
    } else {
      out["statistics"] = json{{"wallTimeMs", wall_ms}};
    }
    if (verdict.witness) out["witness"] = ibmc::to_json(*verdict.witness);
    std::cout << ibmc::dump_canonical(out);
    return;
  }
  std::cout << "verdict: " << ibmc::to_string(verdict.value) << "\n";
  if (stats) {
    std::cout << "completion product: " << stats->completion_product_states << " states, "
              << stats->completion_product_transitions << " transitions\n";
    if (stats->product_states > 0 || verdict.value != ibmc::VerdictValue::False) {
      std::cout << "product: " << stats->product_states << " states, " << stats->product_transitions
                << " transitions\n";
    }
  }
  std::cout << "time: " << wall_ms << " ms\n";
  if (verdict.witness) {
    std::cout << "witness stem: " << render_characters(verdict.witness->word.stem) << "\n";
    std::cout << "witness loop: " << render_characters(verdict.witness->word.loop) << "\n";
    if (!verdict.witness->run_stem.empty()) {
      std::cout << "witness run stem: " << join_ids(verdict.witness->run_stem) << "\n";
      std::cout << "witness run loop: " << join_ids(verdict.witness->run_loop) << "\n";
    }
  }
}

void write_dot(const fs::path& dir, const std::string& name, const ibmc::Automaton& a) {
  fs::create_directories(dir);
  std::ofstream out(dir / (name + ".dot"));
  if (!out) throw ibmc::InputError("cannot write " + (dir / (name + ".dot")).string());
  out << ibmc::to_dot(a, name);
}

ibmc::Automaton load_claim(const std::string& claim_path, const std::string& ltl_text,
                           const ibmc::Automaton& model) {
  if (!claim_path.empty()) {
    ibmc::Automaton claim = ibmc::load_automaton_file(claim_path);
    ibmc::require_valid(claim, "claim");
    if (!claim.boxes.empty()) throw ibmc::InputError("claim automaton may not contain boxes");
    return claim;
  }
  const ibmc::LtlPtr formula = ibmc::parse_ltl(ltl_text, model.propositions);
  return ibmc::ltl_to_ba(ibmc::ltl_not(formula), model.propositions);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ibmc - three-valued model checking for incomplete Buchi automata"};
  app.require_subcommand(1);

  int exit_code = kExitTrue;

  // ------------------------------------------------------------------ check
  auto* check = app.add_subcommand(
      "check", "Check a model against a property; prints T, F or ? with a witness lasso");
  std::string check_model, check_claim, check_ltl, check_dot;
  ReportOptions check_report;
  check->add_option("--model", check_model, "model automaton (json)")->required();
  auto* check_ltl_opt = check->add_option("--ltl", check_ltl, "property as an LTL formula");
  check->add_option("--claim", check_claim, "automaton of the behaviors the model must not exhibit")
      ->excludes(check_ltl_opt);
  check->add_option("--format", check_report.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  check->add_option("--dot", check_dot, "directory for graphviz exports");
  check->callback([&] {
    if (check_ltl.empty() && check_claim.empty()) {
      throw ibmc::InputError("check needs --ltl or --claim");
    }
    ibmc::Automaton model = ibmc::load_automaton_file(check_model);
    ibmc::require_valid(model, "model");
    ibmc::Automaton claim = load_claim(check_claim, check_ltl, model);

    const auto started = std::chrono::steady_clock::now();
    ibmc::CheckStats stats;
    const ibmc::Verdict verdict = ibmc::model_check(model, claim, &stats);
    const auto wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
            .count();
    if (!check_dot.empty()) {
      write_dot(check_dot, "model", model);
      write_dot(check_dot, "claim", claim);
      write_dot(check_dot, "completion_product", ibmc::intersect(ibmc::completion(model), claim).underlying);
      write_dot(check_dot, "product", ibmc::intersect(model, claim).underlying);
    }
    print_verdict_report(verdict, &stats, wall_ms, check_report);
    exit_code = verdict_exit_code(verdict.value);
  });

  // ------------------------------------------------------------ constraints
  auto* constraints = app.add_subcommand(
      "constraints", "Compute the per-box constraints of a possibly satisfied property");
  std::string con_model, con_claim, con_ltl, con_out, con_dot;
  constraints->add_option("--model", con_model, "model automaton (json)")->required();
  auto* con_ltl_opt = constraints->add_option("--ltl", con_ltl, "property as an LTL formula");
  constraints->add_option("--claim", con_claim, "automaton of the violating behaviors")
      ->excludes(con_ltl_opt);
  constraints->add_option("--out", con_out, "output directory for <box>.constraint.json files")->required();
  constraints->add_option("--dot", con_dot, "directory for graphviz exports");
  constraints->callback([&] {
    if (con_ltl.empty() && con_claim.empty()) {
      throw ibmc::InputError("constraints needs --ltl or --claim");
    }
    ibmc::Automaton model = ibmc::load_automaton_file(con_model);
    ibmc::require_valid(model, "model");
    ibmc::Automaton claim = load_claim(con_claim, con_ltl, model);

    const ibmc::Verdict verdict = ibmc::model_check(model, claim);
    if (verdict.value != ibmc::VerdictValue::Unknown) {
      std::cerr << "constraints are only defined for verdict ?, got "
                << ibmc::to_string(verdict.value) << "\n";
      exit_code = kExitPrecondition;
      return;
    }
    auto all = ibmc::compute_constraint(model, claim);
    fs::create_directories(con_out);
    std::cout << "box           kind  |P|  in  out  |G|  |R|  |K|  Y\n";
    for (const auto& [box, constraint] : all) {
      ibmc::save_json_file(fs::path(con_out) / (box + ".constraint.json"), ibmc::to_json(constraint));
      for (const ibmc::SubProperty* sp : {&constraint.s, &constraint.sp}) {
        std::printf("%-13s %-5s %4zu %3zu %4zu %4zu %4zu %4zu  %s\n", box.c_str(),
                    ibmc::to_string(sp->kind).c_str(), ibmc::size(sp->inner), sp->incoming.size(),
                    sp->outgoing.size(), sp->g.size(), sp->r.size(), sp->k.size(),
                    constraint.y_flag ? "T" : "F");
      }
      if (!con_dot.empty()) write_dot(con_dot, "subproperty_" + box, constraint.sp.inner);
    }
    if (!con_dot.empty()) {
      write_dot(con_dot, "cleaned_product",
                ibmc::clean_intersection(ibmc::intersect(model, claim)).underlying);
    }
    std::cout << "wrote " << all.size() << " constraint file(s) to " << con_out << "\n";
    exit_code = kExitUnknown;
  });

  // ------------------------------------------------------ check-replacement
  auto* check_rep = app.add_subcommand(
      "check-replacement", "Check a replacement against a previously computed constraint");
  std::string rep_constraint, rep_replacement, rep_dot;
  ReportOptions rep_report;
  check_rep->add_option("--constraint", rep_constraint, "constraint file (json)")->required();
  check_rep->add_option("--replacement", rep_replacement, "replacement file (json)")->required();
  check_rep->add_option("--format", rep_report.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  check_rep->add_option("--dot", rep_dot, "directory for graphviz exports");
  check_rep->callback([&] {
    const ibmc::Constraint constraint = ibmc::load_constraint_file(rep_constraint);
    const ibmc::Replacement replacement = ibmc::load_replacement_file(rep_replacement);
    if (constraint.box != replacement.box) {
      throw ibmc::InputError("constraint targets box '" + constraint.box + "' but replacement targets '" +
                             replacement.box + "'");
    }
    const auto started = std::chrono::steady_clock::now();
    const ibmc::Verdict verdict = ibmc::check_replacement(constraint, replacement);
    const auto wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
            .count();
    if (!rep_dot.empty()) {
      write_dot(rep_dot, "under",
                ibmc::build_approx(constraint.s, replacement, ibmc::ApproxKind::Under).underlying);
      write_dot(rep_dot, "over",
                ibmc::build_approx(constraint.sp, replacement, ibmc::ApproxKind::Over).underlying);
    }
    print_verdict_report(verdict, nullptr, wall_ms, rep_report);
    exit_code = verdict_exit_code(verdict.value);
  });

  // ---------------------------------------------------------------- compose
  auto* compose_cmd = app.add_subcommand(
      "compose", "Plug a replacement into a model and emit the composition plus the canonical relation");
  std::string comp_model, comp_replacement, comp_out, comp_relation, comp_prefix, comp_dot;
  compose_cmd->add_option("--model", comp_model, "host model (json)")->required();
  compose_cmd->add_option("--replacement", comp_replacement, "replacement file (json)")->required();
  compose_cmd->add_option("--out", comp_out, "output file for the composed model")->required();
  compose_cmd->add_option("--relation", comp_relation,
                          "output file for the canonical refinement relation (default: <out>.relation.json)");
  compose_cmd->add_option("--prefix", comp_prefix, "rename inner states with this prefix before composing");
  compose_cmd->add_option("--dot", comp_dot, "directory for graphviz exports");
  compose_cmd->callback([&] {
    ibmc::Automaton host = ibmc::load_automaton_file(comp_model);
    ibmc::require_valid(host, "model");
    ibmc::Replacement replacement = ibmc::load_replacement_file(comp_replacement);
    if (!comp_prefix.empty()) replacement = ibmc::rename_inner_states(replacement, comp_prefix);
    const auto violations = ibmc::validate_replacement(host, replacement);
    if (!violations.empty()) {
      std::cerr << "replacement does not fit the model:\n";
      for (const auto& v : violations) std::cerr << "  " << v.to_string() << "\n";
      exit_code = kExitError;
      return;
    }
    auto [composed, relation] = ibmc::compose(host, replacement);
    ibmc::save_json_file(comp_out, ibmc::to_json(composed));
    const fs::path relation_path = comp_relation.empty() ? fs::path(comp_out + ".relation.json")
                                                         : fs::path(comp_relation);
    ibmc::save_json_file(relation_path, ibmc::to_json(relation));
    if (!comp_dot.empty()) write_dot(comp_dot, "composed", composed);
    std::cout << "composed model: " << comp_out << " (" << composed.states.size() << " states, "
              << composed.transitions.size() << " transitions)\n";
    std::cout << "relation: " << relation_path.string() << "\n";
  });

  // ---------------------------------------------------------------- refines
  auto* refines = app.add_subcommand(
      "refines", "Check a refinement relation between an abstract and a concrete model");
  std::string ref_abstract, ref_concrete, ref_relation;
  refines->add_option("--abstract", ref_abstract, "abstract model (json)")->required();
  refines->add_option("--concrete", ref_concrete, "concrete model (json)")->required();
  refines->add_option("--relation", ref_relation, "relation file (json)")->required();
  refines->callback([&] {
    ibmc::Automaton abstract = ibmc::load_automaton_file(ref_abstract);
    ibmc::require_valid(abstract, "abstract model");
    ibmc::Automaton concrete = ibmc::load_automaton_file(ref_concrete);
    ibmc::require_valid(concrete, "concrete model");
    const ibmc::RefinementRelation relation = ibmc::load_relation_file(ref_relation);
    const ibmc::RefinementCheck result = ibmc::check_refinement(abstract, concrete, relation);
    if (result.ok) {
      std::cout << "true\n";
      exit_code = kExitTrue;
    } else {
      std::cout << "false (violated conditions:";
      for (int c : result.violated) std::cout << " " << c;
      std::cout << ")\n";
      for (const auto& note : result.notes) std::cout << "  " << note << "\n";
      exit_code = kExitFalse;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int cli_code = app.exit(e);
    return cli_code == 0 ? 0 : kExitError;
  } catch (const ibmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return exit_code;
}
