#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibmc {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An input file, flag combination or argument value that cannot be used.
struct InputError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Alphabet
// ---------------------------------------------------------------------------

/// Proposition names follow the identifier syntax [a-z][a-z0-9_]*.
bool is_identifier(const std::string& name);

/// Ordered set of atomic proposition names.
struct PropositionSet {
  std::set<std::string> names;

  bool contains(const std::string& name) const { return names.count(name) != 0; }
  bool empty() const { return names.empty(); }
  friend auto operator<=>(const PropositionSet&, const PropositionSet&) = default;
};

PropositionSet merge(const PropositionSet& a, const PropositionSet& b);

/// One conjunct of a guard: a proposition required to be true or false.
struct Literal {
  std::string prop;
  bool positive = true;

  friend auto operator<=>(const Literal&, const Literal&) = default;
  std::string to_string() const { return positive ? prop : "!" + prop; }
};

/// Conjunction of literals over distinct propositions; the empty guard is
/// "true" and matches every character. Two reserved symbols, <eps> and
/// <stut>, label the connector edges of the approximation automata. They
/// are excluded from user alphabets and behave like ordinary satisfiable
/// labels during emptiness checks.
class Guard {
 public:
  Guard() = default;

  /// Normalizes (sorts, dedupes) and rejects guards that require a
  /// proposition with both polarities.
  static std::optional<Guard> make(std::vector<Literal> literals);

  /// As make(), but throws InputError instead of returning nullopt.
  static Guard require(std::vector<Literal> literals);

  static Guard top() { return Guard(); }
  static Guard epsilon();
  static Guard stutter();

  const std::vector<Literal>& literals() const { return literals_; }
  bool is_top() const { return literals_.empty(); }
  bool is_epsilon() const;
  bool is_stutter() const;
  bool is_reserved() const { return is_epsilon() || is_stutter(); }

  std::string to_string() const;

  friend auto operator<=>(const Guard&, const Guard&) = default;

 private:
  std::vector<Literal> literals_;  // sorted by (prop, positive), props unique
};

/// Conjunction of two guards; absent when they contradict each other.
std::optional<Guard> conjoin(const Guard& a, const Guard& b);

/// One position of a word: the set of propositions that hold there.
struct Character {
  std::set<std::string> props;

  friend auto operator<=>(const Character&, const Character&) = default;
  std::string to_string() const;
};

/// True iff every positive literal of g is in c and no negative literal is.
/// Propositions of c that g does not mention are ignored, so words over a
/// larger alphabet are still recognized.
bool match_guard(const Guard& g, const Character& c);

/// The smallest character satisfying g: exactly its positive literals.
Character minimal_model(const Guard& g);

/// Ultimately periodic infinite word stem.loop^omega.
struct LassoWord {
  std::vector<Character> stem;
  std::vector<Character> loop;  // non-empty

  friend auto operator<=>(const LassoWord&, const LassoWord&) = default;
  std::string to_string() const;
};

/// True iff the two lassos denote the same infinite word.
bool same_omega_word(const LassoWord& a, const LassoWord& b);

// ---------------------------------------------------------------------------
// Automata
// ---------------------------------------------------------------------------

struct Transition {
  std::string from;
  Guard guard;
  std::string to;

  friend auto operator<=>(const Transition&, const Transition&) = default;
  std::string to_string() const;
};

enum class Kind { Ba, Iba };

/// Shared representation for complete and incomplete Buchi automata. Box
/// states are placeholders for behavior that is not specified yet; a kind
/// of Ba promises that there are none. Instances are immutable by
/// convention once built, so they can be shared freely.
struct Automaton {
  Kind kind = Kind::Ba;
  PropositionSet propositions;
  std::set<std::string> states;
  std::set<std::string> boxes;
  std::set<std::string> initial;
  std::set<std::string> accepting;
  std::set<Transition> transitions;

  bool is_box(const std::string& id) const { return boxes.count(id) != 0; }
  bool is_initial(const std::string& id) const { return initial.count(id) != 0; }
  bool is_accepting(const std::string& id) const { return accepting.count(id) != 0; }

  friend bool operator==(const Automaton&, const Automaton&) = default;
};

struct Violation {
  std::string code;     // stable identifier, e.g. "partition"
  std::string subject;  // offending state / transition / proposition
  std::string detail;

  friend auto operator<=>(const Violation&, const Violation&) = default;
  std::string to_string() const { return code + ": " + subject + (detail.empty() ? "" : " (" + detail + ")"); }
};

/// Structural validation; an empty result means the automaton is well
/// formed. Violations are reported in a deterministic order.
std::vector<Violation> validate(const Automaton& a);

/// Throws InputError when validate(a) is non-empty.
void require_valid(const Automaton& a, const std::string& label);

/// Removes the boxes and every transition touching them. The result
/// recognizes exactly the behaviors that do not depend on unspecified
/// parts.
Automaton completion(const Automaton& a);

/// |states| + |transitions|.
std::size_t size(const Automaton& a);

}  // namespace ibmc
