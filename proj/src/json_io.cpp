#include "ibmc/json_io.hpp"

#include <fstream>

namespace ibmc {

using nlohmann::json;

namespace {

json guard_to_json_array(const Guard& g) {
  json arr = json::array();
  for (const auto& lit : g.literals()) arr.push_back(lit.to_string());
  return arr;
}

json transition_to_json(const Transition& t) {
  return json{{"from", t.from}, {"guard", guard_to_json_array(t.guard)}, {"to", t.to}};
}

Transition transition_from_json(const json& j) {
  return Transition{j.at("from").get<std::string>(), guard_from_json(j.at("guard")),
                    j.at("to").get<std::string>()};
}

json character_to_json(const Character& c) {
  json arr = json::array();
  for (const auto& p : c.props) arr.push_back(p);
  return arr;
}

Character character_from_json(const json& j) {
  Character c;
  for (const auto& p : j) c.props.insert(p.get<std::string>());
  return c;
}

const json& require_field(const json& j, const char* field, const char* context) {
  auto it = j.find(field);
  if (it == j.end()) throw InputError(std::string(context) + ": missing field '" + field + "'");
  return *it;
}

}  // namespace

json to_json(const Guard& g) { return guard_to_json_array(g); }

Guard guard_from_json(const json& j) {
  if (!j.is_array()) throw InputError("guard must be an array of literals");
  std::vector<Literal> lits;
  for (const auto& item : j) {
    std::string text = item.get<std::string>();
    if (text.empty()) throw InputError("empty guard literal");
    bool positive = true;
    if (text[0] == '!') {
      positive = false;
      text = text.substr(1);
    }
    if (!is_identifier(text)) throw InputError("guard literal '" + text + "' is not an identifier");
    lits.push_back({text, positive});
  }
  auto g = Guard::make(std::move(lits));
  if (!g) throw InputError("guard lists a proposition with both polarities: " + j.dump());
  return *g;
}

json to_json(const Automaton& a) {
  json states = json::array();
  for (const auto& id : a.states) {
    states.push_back(json{{"id", id},
                          {"box", a.is_box(id)},
                          {"initial", a.is_initial(id)},
                          {"accepting", a.is_accepting(id)}});
  }
  json transitions = json::array();
  for (const auto& t : a.transitions) transitions.push_back(transition_to_json(t));
  json props = json::array();
  for (const auto& p : a.propositions.names) props.push_back(p);
  return json{{"kind", a.kind == Kind::Iba ? "iba" : "ba"},
              {"propositions", props},
              {"states", states},
              {"transitions", transitions}};
}

Automaton automaton_from_json(const json& j) {
  Automaton a;
  const std::string kind = require_field(j, "kind", "automaton").get<std::string>();
  if (kind == "iba") a.kind = Kind::Iba;
  else if (kind == "ba") a.kind = Kind::Ba;
  else throw InputError("automaton kind must be 'iba' or 'ba', got '" + kind + "'");
  for (const auto& p : require_field(j, "propositions", "automaton")) {
    a.propositions.names.insert(p.get<std::string>());
  }
  for (const auto& s : require_field(j, "states", "automaton")) {
    const std::string id = require_field(s, "id", "state").get<std::string>();
    if (a.states.count(id)) throw InputError("duplicate state id '" + id + "'");
    a.states.insert(id);
    if (s.value("box", false)) a.boxes.insert(id);
    if (s.value("initial", false)) a.initial.insert(id);
    if (s.value("accepting", false)) a.accepting.insert(id);
  }
  for (const auto& t : require_field(j, "transitions", "automaton")) {
    a.transitions.insert(transition_from_json(t));
  }
  return a;
}

json to_json(const Replacement& r) {
  json incoming = json::array(), outgoing = json::array();
  for (const auto& e : r.incoming) incoming.push_back(transition_to_json(e));
  for (const auto& e : r.outgoing) outgoing.push_back(transition_to_json(e));
  return json{{"box", r.box}, {"automaton", to_json(r.inner)}, {"incoming", incoming}, {"outgoing", outgoing}};
}

Replacement replacement_from_json(const json& j) {
  Replacement r;
  r.box = require_field(j, "box", "replacement").get<std::string>();
  r.inner = automaton_from_json(require_field(j, "automaton", "replacement"));
  for (const auto& e : require_field(j, "incoming", "replacement")) r.incoming.push_back(transition_from_json(e));
  for (const auto& e : require_field(j, "outgoing", "replacement")) r.outgoing.push_back(transition_from_json(e));
  return r;
}

json to_json(const RefinementRelation& rel) {
  json pairs = json::array();
  for (const auto& [a, b] : rel.pairs) pairs.push_back(json::array({a, b}));
  return json{{"pairs", pairs}};
}

RefinementRelation relation_from_json(const json& j) {
  RefinementRelation rel;
  for (const auto& p : require_field(j, "pairs", "relation")) {
    if (!p.is_array() || p.size() != 2) throw InputError("relation pairs must be two-element arrays");
    rel.pairs.insert({p[0].get<std::string>(), p[1].get<std::string>()});
  }
  return rel;
}

json to_json(const LassoWord& w) {
  json stem = json::array(), loop = json::array();
  for (const auto& c : w.stem) stem.push_back(character_to_json(c));
  for (const auto& c : w.loop) loop.push_back(character_to_json(c));
  return json{{"stem", stem}, {"loop", loop}};
}

LassoWord lasso_from_json(const json& j) {
  LassoWord w;
  for (const auto& c : require_field(j, "stem", "lasso")) w.stem.push_back(character_from_json(c));
  for (const auto& c : require_field(j, "loop", "lasso")) w.loop.push_back(character_from_json(c));
  if (w.loop.empty()) throw InputError("lasso loop may not be empty");
  return w;
}

json to_json(const Witness& w) {
  json out = to_json(w.word);
  json run_stem = json::array(), run_loop = json::array();
  for (const auto& id : w.run_stem) run_stem.push_back(id);
  for (const auto& id : w.run_loop) run_loop.push_back(id);
  out["runStem"] = run_stem;
  out["runLoop"] = run_loop;
  return out;
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.word = lasso_from_json(j);
  for (const auto& id : j.value("runStem", json::array())) w.run_stem.push_back(id.get<std::string>());
  for (const auto& id : j.value("runLoop", json::array())) w.run_loop.push_back(id.get<std::string>());
  return w;
}

json to_json(const SubProperty& s) {
  json incoming = json::array(), outgoing = json::array();
  for (const auto& e : s.incoming) incoming.push_back(transition_to_json(e));
  for (const auto& e : s.outgoing) outgoing.push_back(transition_to_json(e));
  json g = json::array(), r = json::array(), k = json::array();
  json gamma_m = json::array(), gamma_a = json::array();
  for (auto idx : s.g) g.push_back(idx);
  for (auto idx : s.r) r.push_back(idx);
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    k.push_back(json::array({s.k[i].first, s.k[i].second}));
    gamma_m.push_back(static_cast<bool>(s.gamma_m[i]));
    gamma_a.push_back(static_cast<bool>(s.gamma_a[i]));
  }
  return json{{"box", s.box},       {"kind", to_string(s.kind)}, {"automaton", to_json(s.inner)},
              {"incoming", incoming}, {"outgoing", outgoing},    {"G", g},
              {"R", r},               {"K", k},                  {"gammaM", gamma_m},
              {"gammaA", gamma_a}};
}

SubProperty subproperty_from_json(const json& j) {
  SubProperty s;
  s.box = require_field(j, "box", "sub-property").get<std::string>();
  const std::string kind = require_field(j, "kind", "sub-property").get<std::string>();
  if (kind == "s") s.kind = SubPropertyKind::S;
  else if (kind == "sp") s.kind = SubPropertyKind::Sp;
  else throw InputError("sub-property kind must be 's' or 'sp'");
  s.inner = automaton_from_json(require_field(j, "automaton", "sub-property"));
  for (const auto& e : require_field(j, "incoming", "sub-property")) s.incoming.push_back(transition_from_json(e));
  for (const auto& e : require_field(j, "outgoing", "sub-property")) s.outgoing.push_back(transition_from_json(e));
  for (const auto& idx : require_field(j, "G", "sub-property")) {
    const auto i = idx.get<std::size_t>();
    if (i >= s.incoming.size()) throw InputError("G index out of range");
    s.g.insert(i);
  }
  for (const auto& idx : require_field(j, "R", "sub-property")) {
    const auto i = idx.get<std::size_t>();
    if (i >= s.outgoing.size()) throw InputError("R index out of range");
    s.r.insert(i);
  }
  const json& k = require_field(j, "K", "sub-property");
  const json& gm = require_field(j, "gammaM", "sub-property");
  const json& ga = require_field(j, "gammaA", "sub-property");
  if (gm.size() != k.size() || ga.size() != k.size()) {
    throw InputError("gammaM/gammaA must parallel K");
  }
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto o = k[i][0].get<std::size_t>();
    const auto in = k[i][1].get<std::size_t>();
    if (o >= s.outgoing.size() || in >= s.incoming.size()) throw InputError("K index out of range");
    s.k.push_back({o, in});
    s.gamma_m.push_back(gm[i].get<bool>());
    s.gamma_a.push_back(ga[i].get<bool>());
  }
  return s;
}

json to_json(const Constraint& c) {
  json out{{"box", c.box}, {"yFlag", c.y_flag}, {"s", to_json(c.s)}, {"sp", to_json(c.sp)}};
  if (c.y_witness) out["yWitness"] = to_json(*c.y_witness);
  return out;
}

Constraint constraint_from_json(const json& j) {
  Constraint c;
  c.box = require_field(j, "box", "constraint").get<std::string>();
  c.y_flag = require_field(j, "yFlag", "constraint").get<bool>();
  c.s = subproperty_from_json(require_field(j, "s", "constraint"));
  c.sp = subproperty_from_json(require_field(j, "sp", "constraint"));
  if (j.contains("yWitness")) c.y_witness = witness_from_json(j.at("yWitness"));
  if (c.s.kind != SubPropertyKind::S || c.sp.kind != SubPropertyKind::Sp) {
    throw InputError("constraint sub-properties are mislabeled");
  }
  if (c.s.box != c.box || c.sp.box != c.box) throw InputError("constraint sub-properties name a different box");
  return c;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << dump_canonical(j);
}

Automaton load_automaton_file(const std::filesystem::path& path) {
  return automaton_from_json(load_json_file(path));
}

Replacement load_replacement_file(const std::filesystem::path& path) {
  return replacement_from_json(load_json_file(path));
}

RefinementRelation load_relation_file(const std::filesystem::path& path) {
  return relation_from_json(load_json_file(path));
}

Constraint load_constraint_file(const std::filesystem::path& path) {
  return constraint_from_json(load_json_file(path));
}

}  // namespace ibmc
