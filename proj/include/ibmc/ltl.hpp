#pragma once

#include <memory>
#include <string>

#include "ibmc/automata.hpp"

namespace ibmc {

enum class LtlOp {
  True,
  False,
  Prop,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Finally,
  Globally,
};

struct LtlFormula;
using LtlPtr = std::shared_ptr<const LtlFormula>;

/// Immutable LTL syntax tree. Children are shared, never mutated.
struct LtlFormula {
  LtlOp op;
  std::string prop;  // LtlOp::Prop only
  LtlPtr lhs;        // unary operand / left operand
  LtlPtr rhs;        // right operand of binary operators
};

LtlPtr ltl_true();
LtlPtr ltl_false();
LtlPtr ltl_prop(const std::string& name);
LtlPtr ltl_not(LtlPtr f);
LtlPtr ltl_and(LtlPtr a, LtlPtr b);
LtlPtr ltl_or(LtlPtr a, LtlPtr b);
LtlPtr ltl_implies(LtlPtr a, LtlPtr b);
LtlPtr ltl_next(LtlPtr f);
LtlPtr ltl_until(LtlPtr a, LtlPtr b);
LtlPtr ltl_finally(LtlPtr f);
LtlPtr ltl_globally(LtlPtr f);

std::string to_string(const LtlPtr& f);

/// Number of distinct subformulas (used by the bounded word evaluator).
std::size_t subformula_count(const LtlPtr& f);

struct LtlParseError : Error {
  LtlParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset(offset) {}
  std::size_t offset;
};

/// Concrete syntax: true false ! & | -> X U F G, identifiers
/// [a-z][a-z0-9_]*, parentheses. Precedence: unary > U > & > | > ->.
/// Propositions must be declared in props.
LtlPtr parse_ltl(const std::string& text, const PropositionSet& props);

/// Pushes negations down to propositions. F/G survive (G is its own dual
/// shape); an until under negation is rewritten with the dual encoding
/// !(a U b) = (!b U (!a & !b)) | G !b.
LtlPtr negation_normal_form(const LtlPtr& f);

/// Buchi automaton accepting exactly the words that satisfy f. Tableau
/// construction with counter-based degeneralization; no minimization.
Automaton ltl_to_ba(const LtlPtr& f, const PropositionSet& props);

}  // namespace ibmc
