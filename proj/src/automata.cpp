#include "ibmc/automata.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ibmc {

namespace {
constexpr const char* kEpsilonName = "<eps>";
constexpr const char* kStutterName = "<stut>";
}  // namespace

bool is_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (name[0] < 'a' || name[0] > 'z') return false;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
    if (!ok) return false;
  }
  return true;
}

PropositionSet merge(const PropositionSet& a, const PropositionSet& b) {
  PropositionSet out = a;
  out.names.insert(b.names.begin(), b.names.end());
  return out;
}

std::optional<Guard> Guard::make(std::vector<Literal> literals) {
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  for (std::size_t i = 1; i < literals.size(); ++i) {
    if (literals[i].prop == literals[i - 1].prop) return std::nullopt;
  }
  Guard g;
  g.literals_ = std::move(literals);
  return g;
}

Guard Guard::require(std::vector<Literal> literals) {
  auto g = make(std::move(literals));
  if (!g) throw InputError("guard requires a proposition with both polarities");
  return *g;
}

Guard Guard::epsilon() { return require({Literal{kEpsilonName, true}}); }

Guard Guard::stutter() { return require({Literal{kStutterName, true}}); }

bool Guard::is_epsilon() const {
  return literals_.size() == 1 && literals_[0].positive && literals_[0].prop == kEpsilonName;
}

bool Guard::is_stutter() const {
  return literals_.size() == 1 && literals_[0].positive && literals_[0].prop == kStutterName;
}

std::string Guard::to_string() const {
  if (literals_.empty()) return "true";
  std::string out;
  for (const auto& lit : literals_) {
    if (!out.empty()) out += " & ";
    out += lit.to_string();
  }
  return out;
}

std::optional<Guard> conjoin(const Guard& a, const Guard& b) {
  std::vector<Literal> lits = a.literals();
  lits.insert(lits.end(), b.literals().begin(), b.literals().end());
  return Guard::make(std::move(lits));
}

std::string Character::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& p : props) {
    if (!first) out += ",";
    out += p;
    first = false;
  }
  return out + "}";
}

bool match_guard(const Guard& g, const Character& c) {
  for (const auto& lit : g.literals()) {
    const bool holds = c.props.count(lit.prop) != 0;
    if (holds != lit.positive) return false;
  }
  return true;
}

Character minimal_model(const Guard& g) {
  Character c;
  for (const auto& lit : g.literals()) {
    if (lit.positive) c.props.insert(lit.prop);
  }
  return c;
}

std::string LassoWord::to_string() const {
  std::string out;
  for (const auto& c : stem) out += c.to_string();
  out += "(";
  for (const auto& c : loop) out += c.to_string();
  return out + ")^w";
}

bool same_omega_word(const LassoWord& a, const LassoWord& b) {
  if (a.loop.empty() || b.loop.empty()) return false;
  const std::size_t stem = std::max(a.stem.size(), b.stem.size());
  std::size_t period = std::lcm(a.loop.size(), b.loop.size());
  auto at = [](const LassoWord& w, std::size_t i) -> const Character& {
    if (i < w.stem.size()) return w.stem[i];
    return w.loop[(i - w.stem.size()) % w.loop.size()];
  };
  for (std::size_t i = 0; i < stem + 2 * period; ++i) {
    if (at(a, i) != at(b, i)) return false;
  }
  return true;
}

std::string Transition::to_string() const {
  return from + " -[" + guard.to_string() + "]-> " + to;
}

std::vector<Violation> validate(const Automaton& a) {
  std::vector<Violation> out;
  for (const auto& name : a.propositions.names) {
    if (!is_identifier(name)) out.push_back({"bad-proposition", name, "must match [a-z][a-z0-9_]*"});
  }
  for (const auto& id : a.states) {
    if (id.empty() || id.find_first_of(",()| \t\n") != std::string::npos) {
      out.push_back({"bad-state-id", id, "ids may not be empty or contain ',', '(', ')', '|' or whitespace"});
    }
  }
  for (const auto& id : a.boxes) {
    if (!a.states.count(id)) out.push_back({"partition", id, "box is not a declared state"});
  }
  if (a.kind == Kind::Ba && !a.boxes.empty()) {
    for (const auto& id : a.boxes) out.push_back({"ba-has-box", id, "kind ba forbids boxes"});
  }
  for (const auto& id : a.initial) {
    if (!a.states.count(id)) out.push_back({"dangling-initial", id, ""});
  }
  for (const auto& id : a.accepting) {
    if (!a.states.count(id)) out.push_back({"dangling-accepting", id, ""});
  }
  for (const auto& t : a.transitions) {
    if (!a.states.count(t.from)) out.push_back({"dangling-endpoint", t.to_string(), "unknown source"});
    if (!a.states.count(t.to)) out.push_back({"dangling-endpoint", t.to_string(), "unknown target"});
    for (const auto& lit : t.guard.literals()) {
      if (!a.propositions.contains(lit.prop)) {
        out.push_back({"undeclared-proposition", t.to_string(), lit.prop});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_valid(const Automaton& a, const std::string& label) {
  auto violations = validate(a);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << label << " is not well formed:";
  for (const auto& v : violations) msg << "\n  " << v.to_string();
  throw InputError(msg.str());
}

Automaton completion(const Automaton& a) {
  Automaton out;
  out.kind = Kind::Ba;
  out.propositions = a.propositions;
  for (const auto& id : a.states) {
    if (!a.is_box(id)) out.states.insert(id);
  }
  for (const auto& id : a.initial) {
    if (out.states.count(id)) out.initial.insert(id);
  }
  for (const auto& id : a.accepting) {
    if (out.states.count(id)) out.accepting.insert(id);
  }
  for (const auto& t : a.transitions) {
    if (out.states.count(t.from) && out.states.count(t.to)) out.transitions.insert(t);
  }
  return out;
}

std::size_t size(const Automaton& a) { return a.states.size() + a.transitions.size(); }

}  // namespace ibmc
