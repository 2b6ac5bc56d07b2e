#include "ibmc/ltl.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <vector>

namespace ibmc {

namespace {

LtlPtr node(LtlOp op, std::string prop, LtlPtr l, LtlPtr r) {
  auto f = std::make_shared<LtlFormula>();
  f->op = op;
  f->prop = std::move(prop);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

}  // namespace

LtlPtr ltl_true() { return node(LtlOp::True, "", nullptr, nullptr); }
LtlPtr ltl_false() { return node(LtlOp::False, "", nullptr, nullptr); }
LtlPtr ltl_prop(const std::string& name) { return node(LtlOp::Prop, name, nullptr, nullptr); }
LtlPtr ltl_not(LtlPtr f) { return node(LtlOp::Not, "", std::move(f), nullptr); }
LtlPtr ltl_and(LtlPtr a, LtlPtr b) { return node(LtlOp::And, "", std::move(a), std::move(b)); }
LtlPtr ltl_or(LtlPtr a, LtlPtr b) { return node(LtlOp::Or, "", std::move(a), std::move(b)); }
LtlPtr ltl_implies(LtlPtr a, LtlPtr b) { return node(LtlOp::Implies, "", std::move(a), std::move(b)); }
LtlPtr ltl_next(LtlPtr f) { return node(LtlOp::Next, "", std::move(f), nullptr); }
LtlPtr ltl_until(LtlPtr a, LtlPtr b) { return node(LtlOp::Until, "", std::move(a), std::move(b)); }
LtlPtr ltl_finally(LtlPtr f) { return node(LtlOp::Finally, "", std::move(f), nullptr); }
LtlPtr ltl_globally(LtlPtr f) { return node(LtlOp::Globally, "", std::move(f), nullptr); }

std::string to_string(const LtlPtr& f) {
  switch (f->op) {
    case LtlOp::True: return "true";
    case LtlOp::False: return "false";
    case LtlOp::Prop: return f->prop;
    case LtlOp::Not: return "!(" + to_string(f->lhs) + ")";
    case LtlOp::And: return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case LtlOp::Or: return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case LtlOp::Implies: return "(" + to_string(f->lhs) + " -> " + to_string(f->rhs) + ")";
    case LtlOp::Next: return "X(" + to_string(f->lhs) + ")";
    case LtlOp::Until: return "(" + to_string(f->lhs) + " U " + to_string(f->rhs) + ")";
    case LtlOp::Finally: return "F(" + to_string(f->lhs) + ")";
    case LtlOp::Globally: return "G(" + to_string(f->lhs) + ")";
  }
  return "?";
}

namespace {
void collect_subformulas(const LtlPtr& f, std::set<std::string>& seen) {
  seen.insert(to_string(f));
  if (f->lhs) collect_subformulas(f->lhs, seen);
  if (f->rhs) collect_subformulas(f->rhs, seen);
}
}  // namespace

std::size_t subformula_count(const LtlPtr& f) {
  std::set<std::string> seen;
  collect_subformulas(f, seen);
  return seen.size();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Type { Ident, True, False, Bang, Amp, Pipe, Arrow, LParen, RParen, X, U, F, G, End } type;
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '!') { out.push_back({Token::Bang, "!", i}); ++i; continue; }
    if (c == '&') { out.push_back({Token::Amp, "&", i}); ++i; continue; }
    if (c == '|') { out.push_back({Token::Pipe, "|", i}); ++i; continue; }
    if (c == '(') { out.push_back({Token::LParen, "(", i}); ++i; continue; }
    if (c == ')') { out.push_back({Token::RParen, ")", i}); ++i; continue; }
    if (c == '-') {
      if (i + 1 < text.size() && text[i + 1] == '>') { out.push_back({Token::Arrow, "->", i}); i += 2; continue; }
      throw LtlParseError("stray '-'", i);
    }
    if (c == 'X') { out.push_back({Token::X, "X", i}); ++i; continue; }
    if (c == 'U') { out.push_back({Token::U, "U", i}); ++i; continue; }
    if (c == 'F') { out.push_back({Token::F, "F", i}); ++i; continue; }
    if (c == 'G') { out.push_back({Token::G, "G", i}); ++i; continue; }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = i;
      while (i < text.size() &&
             ((text[i] >= 'a' && text[i] <= 'z') || (text[i] >= '0' && text[i] <= '9') || text[i] == '_')) {
        ++i;
      }
      std::string word = text.substr(start, i - start);
      if (word == "true") out.push_back({Token::True, word, start});
      else if (word == "false") out.push_back({Token::False, word, start});
      else out.push_back({Token::Ident, word, start});
      continue;
    }
    throw LtlParseError(std::string("unexpected character '") + c + "'", i);
  }
  std::size_t end_offset = out.empty() ? 0 : out.back().offset;
  out.push_back({Token::End, "", end_offset});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const PropositionSet& props) : tokens_(std::move(tokens)), props_(props) {}

  LtlPtr parse() {
    LtlPtr f = implies();
    if (peek().type != Token::End) throw LtlParseError("unexpected token '" + peek().text + "'", peek().offset);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  LtlPtr implies() {
    LtlPtr lhs = disjunction();
    if (peek().type == Token::Arrow) {
      take();
      return ltl_implies(lhs, implies());
    }
    return lhs;
  }

  LtlPtr disjunction() {
    LtlPtr lhs = conjunction();
    while (peek().type == Token::Pipe) {
      take();
      lhs = ltl_or(lhs, conjunction());
    }
    return lhs;
  }

  LtlPtr conjunction() {
    LtlPtr lhs = until();
    while (peek().type == Token::Amp) {
      take();
      lhs = ltl_and(lhs, until());
    }
    return lhs;
  }

  LtlPtr until() {
    LtlPtr lhs = unary();
    if (peek().type == Token::U) {
      take();
      return ltl_until(lhs, until());
    }
    return lhs;
  }

  LtlPtr unary() {
    switch (peek().type) {
      case Token::Bang: take(); return ltl_not(unary());
      case Token::X: take(); return ltl_next(unary());
      case Token::F: take(); return ltl_finally(unary());
      case Token::G: take(); return ltl_globally(unary());
      default: return primary();
    }
  }

  LtlPtr primary() {
    const Token tok = take();
    switch (tok.type) {
      case Token::True: return ltl_true();
      case Token::False: return ltl_false();
      case Token::Ident:
        if (!props_.contains(tok.text)) throw LtlParseError("undeclared proposition '" + tok.text + "'", tok.offset);
        return ltl_prop(tok.text);
      case Token::LParen: {
        LtlPtr f = implies();
        if (peek().type != Token::RParen) throw LtlParseError("expected ')'", peek().offset);
        take();
        return f;
      }
      case Token::End: throw LtlParseError("unexpected end of input", tok.offset);
      default: throw LtlParseError("unexpected token '" + tok.text + "'", tok.offset);
    }
  }

  std::vector<Token> tokens_;
  const PropositionSet& props_;
  std::size_t pos_ = 0;
};

}  // namespace

LtlPtr parse_ltl(const std::string& text, const PropositionSet& props) {
  return Parser(tokenize(text), props).parse();
}

// ---------------------------------------------------------------------------
// Negation normal form
// ---------------------------------------------------------------------------

namespace {

LtlPtr nnf(const LtlPtr& f, bool positive) {
  switch (f->op) {
    case LtlOp::True: return positive ? ltl_true() : ltl_false();
    case LtlOp::False: return positive ? ltl_false() : ltl_true();
    case LtlOp::Prop: return positive ? ltl_prop(f->prop) : ltl_not(ltl_prop(f->prop));
    case LtlOp::Not: return nnf(f->lhs, !positive);
    case LtlOp::And:
      return positive ? ltl_and(nnf(f->lhs, true), nnf(f->rhs, true))
                      : ltl_or(nnf(f->lhs, false), nnf(f->rhs, false));
    case LtlOp::Or:
      return positive ? ltl_or(nnf(f->lhs, true), nnf(f->rhs, true))
                      : ltl_and(nnf(f->lhs, false), nnf(f->rhs, false));
    case LtlOp::Implies:
      return positive ? ltl_or(nnf(f->lhs, false), nnf(f->rhs, true))
                      : ltl_and(nnf(f->lhs, true), nnf(f->rhs, false));
    case LtlOp::Next: return ltl_next(nnf(f->lhs, positive));
    case LtlOp::Until:
      if (positive) return ltl_until(nnf(f->lhs, true), nnf(f->rhs, true));
      else {
        // !(a U b) = (!a) R (!b), release encoded via until and globally
        LtlPtr na = nnf(f->lhs, false);
        LtlPtr nb = nnf(f->rhs, false);
        return ltl_or(ltl_until(nb, ltl_and(na, nb)), ltl_globally(nb));
      }
    case LtlOp::Finally:
      return positive ? ltl_until(ltl_true(), nnf(f->lhs, true)) : ltl_globally(nnf(f->lhs, false));
    case LtlOp::Globally:
      return positive ? ltl_globally(nnf(f->lhs, true)) : ltl_until(ltl_true(), nnf(f->lhs, false));
  }
  return f;
}

}  // namespace

LtlPtr negation_normal_form(const LtlPtr& f) { return nnf(f, true); }

// ---------------------------------------------------------------------------
// Tableau translation
// ---------------------------------------------------------------------------

namespace {

// Interned tableau formulas. Negation normal form guarantees negations sit
// on propositions only; globally is handled as a release with a false
// left-hand side.
struct TForm {
  enum Op { True, False, Lit, And, Or, Next, Until, Release } op;
  std::string prop;
  bool positive = true;
  int lhs = -1;
  int rhs = -1;
};

class Pool {
 public:
  int intern(TForm f) {
    auto key = std::make_tuple(static_cast<int>(f.op), f.prop, f.positive, f.lhs, f.rhs);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int id = static_cast<int>(forms_.size());
    forms_.push_back(f);
    memo_.emplace(key, id);
    return id;
  }

  const TForm& at(int id) const { return forms_[id]; }

  std::string text(int id) const {
    const TForm& f = at(id);
    switch (f.op) {
      case TForm::True: return "true";
      case TForm::False: return "false";
      case TForm::Lit: return f.positive ? f.prop : "!" + f.prop;
      case TForm::And: return "(" + text(f.lhs) + "&" + text(f.rhs) + ")";
      case TForm::Or: return "(" + text(f.lhs) + "|" + text(f.rhs) + ")";
      case TForm::Next: return "X" + text(f.lhs);
      case TForm::Until: return "(" + text(f.lhs) + "U" + text(f.rhs) + ")";
      case TForm::Release: return "(" + text(f.lhs) + "R" + text(f.rhs) + ")";
    }
    return "?";
  }

  int count() const { return static_cast<int>(forms_.size()); }

 private:
  std::vector<TForm> forms_;
  std::map<std::tuple<int, std::string, bool, int, int>, int> memo_;
};

int to_tableau(const LtlPtr& f, Pool& pool) {
  switch (f->op) {
    case LtlOp::True: return pool.intern({TForm::True, "", true, -1, -1});
    case LtlOp::False: return pool.intern({TForm::False, "", true, -1, -1});
    case LtlOp::Prop: return pool.intern({TForm::Lit, f->prop, true, -1, -1});
    case LtlOp::Not:
      assert(f->lhs->op == LtlOp::Prop);
      return pool.intern({TForm::Lit, f->lhs->prop, false, -1, -1});
    case LtlOp::And: {
      int l = to_tableau(f->lhs, pool), r = to_tableau(f->rhs, pool);
      return pool.intern({TForm::And, "", true, l, r});
    }
    case LtlOp::Or: {
      int l = to_tableau(f->lhs, pool), r = to_tableau(f->rhs, pool);
      return pool.intern({TForm::Or, "", true, l, r});
    }
    case LtlOp::Next: return pool.intern({TForm::Next, "", true, to_tableau(f->lhs, pool), -1});
    case LtlOp::Until: {
      int l = to_tableau(f->lhs, pool), r = to_tableau(f->rhs, pool);
      return pool.intern({TForm::Until, "", true, l, r});
    }
    case LtlOp::Globally: {
      int bot = pool.intern({TForm::False, "", true, -1, -1});
      return pool.intern({TForm::Release, "", true, bot, to_tableau(f->lhs, pool)});
    }
    default:
      throw Error("formula is not in negation normal form: " + to_string(f));
  }
}

struct GNode {
  int id;
  std::set<int> incoming;  // 0 is the virtual init node
  std::set<int> neu, old, next;
};

class Expander {
 public:
  explicit Expander(Pool& pool) : pool_(pool) {}

  std::vector<GNode> run(int root) {
    GNode start;
    start.id = fresh_id();
    start.incoming = {0};
    start.neu = {root};
    expand(std::move(start));
    return std::move(done_);
  }

 private:
  int fresh_id() { return next_id_++; }

  void expand(GNode n) {
    if (n.neu.empty()) {
      for (auto& nd : done_) {
        if (nd.old == n.old && nd.next == n.next) {
          nd.incoming.insert(n.incoming.begin(), n.incoming.end());
          return;
        }
      }
      done_.push_back(n);
      GNode succ;
      succ.id = fresh_id();
      succ.incoming = {n.id};
      succ.neu = n.next;
      expand(std::move(succ));
      return;
    }
    const int f = *n.neu.begin();
    n.neu.erase(n.neu.begin());
    const TForm& form = pool_.at(f);
    switch (form.op) {
      case TForm::False:
        return;  // contradiction, node discarded
      case TForm::True:
        n.old.insert(f);
        expand(std::move(n));
        return;
      case TForm::Lit: {
        const int negated = pool_.intern({TForm::Lit, form.prop, !form.positive, -1, -1});
        if (n.old.count(negated)) return;
        n.old.insert(f);
        expand(std::move(n));
        return;
      }
      case TForm::And: {
        n.old.insert(f);
        if (!n.old.count(form.lhs)) n.neu.insert(form.lhs);
        if (!n.old.count(form.rhs)) n.neu.insert(form.rhs);
        expand(std::move(n));
        return;
      }
      case TForm::Or: {
        n.old.insert(f);
        GNode n1 = n, n2 = std::move(n);
        n1.id = fresh_id();
        if (!n1.old.count(form.lhs)) n1.neu.insert(form.lhs);
        if (!n2.old.count(form.rhs)) n2.neu.insert(form.rhs);
        expand(std::move(n1));
        expand(std::move(n2));
        return;
      }
      case TForm::Next: {
        n.old.insert(f);
        n.next.insert(form.lhs);
        expand(std::move(n));
        return;
      }
      case TForm::Until: {
        n.old.insert(f);
        GNode n1 = n, n2 = std::move(n);
        n1.id = fresh_id();
        if (!n1.old.count(form.lhs)) n1.neu.insert(form.lhs);
        n1.next.insert(f);
        if (!n2.old.count(form.rhs)) n2.neu.insert(form.rhs);
        expand(std::move(n1));
        expand(std::move(n2));
        return;
      }
      case TForm::Release: {
        n.old.insert(f);
        GNode n1 = n, n2 = std::move(n);
        n1.id = fresh_id();
        if (!n1.old.count(form.rhs)) n1.neu.insert(form.rhs);
        n1.next.insert(f);
        if (!n2.old.count(form.lhs)) n2.neu.insert(form.lhs);
        if (!n2.old.count(form.rhs)) n2.neu.insert(form.rhs);
        expand(std::move(n1));
        expand(std::move(n2));
        return;
      }
    }
  }

  Pool& pool_;
  int next_id_ = 1;  // 0 is the virtual init marker
  std::vector<GNode> done_;
};

}  // namespace

Automaton ltl_to_ba(const LtlPtr& f, const PropositionSet& props) {
  Pool pool;
  const int root = to_tableau(negation_normal_form(f), pool);
  const std::vector<GNode> nodes = Expander(pool).run(root);

  // Acceptance sets, one per until subformula, in sorted textual order.
  std::vector<int> untils;
  for (int id = 0; id < pool.count(); ++id) {
    if (pool.at(id).op == TForm::Until) untils.push_back(id);
  }
  std::sort(untils.begin(), untils.end(), [&](int a, int b) { return pool.text(a) < pool.text(b); });

  std::map<int, const GNode*> by_id;
  for (const auto& n : nodes) by_id[n.id] = &n;

  auto node_guard = [&](const GNode& n) {
    std::vector<Literal> lits;
    for (int fid : n.old) {
      const TForm& form = pool.at(fid);
      if (form.op == TForm::Lit) lits.push_back({form.prop, form.positive});
    }
    return Guard::require(std::move(lits));  // contradictions were pruned during expansion
  };
  auto in_set = [&](const GNode& n, int u) {
    return !n.old.count(u) || n.old.count(pool.at(u).rhs);
  };

  const int k = static_cast<int>(untils.size());
  const std::string init_id = "init";
  Automaton ba;
  ba.kind = Kind::Ba;
  ba.propositions = props;
  ba.states.insert(init_id);
  ba.initial.insert(init_id);

  auto state_id = [&](int node, int level) {
    return "n" + std::to_string(node) + (k > 0 ? "_" + std::to_string(level) : "");
  };

  // Reachable part of the (node x counter) space, seeded from init.
  struct Item {
    int node;
    int level;
  };
  std::vector<Item> work;
  std::set<std::pair<int, int>> seen;
  auto push = [&](int nd, int lvl) {
    if (seen.insert({nd, lvl}).second) work.push_back({nd, lvl});
  };
  for (const auto& n : nodes) {
    if (n.incoming.count(0)) {
      ba.transitions.insert({init_id, node_guard(n), state_id(n.id, 0)});
      push(n.id, 0);
    }
  }
  while (!work.empty()) {
    Item item = work.back();
    work.pop_back();
    const GNode& n = *by_id.at(item.node);
    const std::string id = state_id(n.id, item.level);
    ba.states.insert(id);
    if (k == 0) {
      ba.accepting.insert(id);
    } else if (item.level == 0 && in_set(n, untils[0])) {
      ba.accepting.insert(id);
    }
    int next_level = item.level;
    if (k > 0 && in_set(n, untils[static_cast<std::size_t>(item.level)])) {
      next_level = (item.level + 1) % k;
    }
    for (const auto& succ : nodes) {
      if (!succ.incoming.count(n.id)) continue;
      ba.transitions.insert({id, node_guard(succ), state_id(succ.id, next_level)});
      push(succ.id, next_level);
    }
  }
  // Drop transitions into states that were never materialized (can only
  // happen when a successor has no outgoing path; harmless but keep the
  // automaton well formed).
  for (auto it = ba.transitions.begin(); it != ba.transitions.end();) {
    if (!ba.states.count(it->to) || !ba.states.count(it->from)) it = ba.transitions.erase(it);
    else ++it;
  }
  return ba;
}

}  // namespace ibmc
