#include "ibmc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>

namespace ibmc {
namespace oracle {

std::string to_string(RunClassification c) {
  switch (c) {
    case RunClassification::Definite: return "definite";
    case RunClassification::Possible: return "possible";
    case RunClassification::Rejected: return "rejected";
  }
  return "?";
}

namespace {

// (state x word position) exploration used by both classify_word and
// accepts_lasso. Node numbering: state * positions + position.
struct WordGraph {
  std::vector<std::string> states;
  std::map<std::string, int> index;
  std::size_t positions = 0;
  std::vector<std::vector<int>> succ;
  std::vector<bool> start;
  std::vector<bool> accepting_node;

  int node(int state, std::size_t pos) const { return state * static_cast<int>(positions) + static_cast<int>(pos); }
};

const Character& char_at(const LassoWord& w, std::size_t pos) {
  if (pos < w.stem.size()) return w.stem[pos];
  return w.loop[pos - w.stem.size()];
}

std::size_t next_pos(const LassoWord& w, std::size_t pos) {
  const std::size_t n = w.stem.size() + w.loop.size();
  return pos + 1 < n ? pos + 1 : w.stem.size();
}

/// allow_boxes: include box states (with stutter steps); otherwise the
/// graph is restricted to regular states.
WordGraph build_word_graph(const Automaton& m, const LassoWord& w, bool allow_boxes) {
  WordGraph g;
  for (const auto& id : m.states) {
    if (!allow_boxes && m.is_box(id)) continue;
    g.index[id] = static_cast<int>(g.states.size());
    g.states.push_back(id);
  }
  g.positions = w.stem.size() + w.loop.size();
  const std::size_t node_count = g.states.size() * g.positions;
  g.succ.assign(node_count, {});
  g.start.assign(node_count, false);
  g.accepting_node.assign(node_count, false);

  for (std::size_t si = 0; si < g.states.size(); ++si) {
    const std::string& id = g.states[si];
    if (m.is_initial(id) && g.positions > 0) g.start[static_cast<std::size_t>(g.node(static_cast<int>(si), 0))] = true;
    for (std::size_t pos = 0; pos < g.positions; ++pos) {
      const int nd = g.node(static_cast<int>(si), pos);
      if (m.is_accepting(id)) g.accepting_node[static_cast<std::size_t>(nd)] = true;
      if (m.is_box(id)) {
        g.succ[static_cast<std::size_t>(nd)].push_back(g.node(static_cast<int>(si), next_pos(w, pos)));
      }
    }
  }
  // Words repeat a handful of characters, so match each transition once
  // per distinct character instead of once per position.
  std::map<Character, std::vector<std::size_t>> positions_of;
  for (std::size_t pos = 0; pos < g.positions; ++pos) positions_of[char_at(w, pos)].push_back(pos);
  for (const auto& t : m.transitions) {
    auto from = g.index.find(t.from);
    auto to = g.index.find(t.to);
    if (from == g.index.end() || to == g.index.end()) continue;
    for (const auto& [character, positions] : positions_of) {
      if (!match_guard(t.guard, character)) continue;
      for (std::size_t pos : positions) {
        g.succ[static_cast<std::size_t>(g.node(from->second, pos))].push_back(
            g.node(to->second, next_pos(w, pos)));
      }
    }
  }
  return g;
}

std::vector<bool> forward_reach(const WordGraph& g, const std::vector<bool>& from) {
  std::vector<bool> seen = from;
  std::vector<int> queue;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) queue.push_back(static_cast<int>(i));
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int to : g.succ[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(to)]) {
        seen[static_cast<std::size_t>(to)] = true;
        queue.push_back(to);
      }
    }
  }
  return seen;
}

/// Kosaraju-style two-pass component search over the reachable part, then
/// a scan for an accepting node whose component contains a cycle.
bool has_accepting_cycle(const WordGraph& g) {
  const std::vector<bool> reach = forward_reach(g, g.start);
  const int n = static_cast<int>(g.succ.size());

  std::vector<int> finish_order;
  finish_order.reserve(static_cast<std::size_t>(n));
  {
    std::vector<char> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
    std::vector<std::pair<int, std::size_t>> stack;
    for (int root = 0; root < n; ++root) {
      if (!reach[static_cast<std::size_t>(root)] || state[static_cast<std::size_t>(root)] != 0) continue;
      state[static_cast<std::size_t>(root)] = 1;
      stack.push_back({root, 0});
      while (!stack.empty()) {
        auto& [node, edge] = stack.back();
        const auto& succ = g.succ[static_cast<std::size_t>(node)];
        if (edge < succ.size()) {
          const int to = succ[edge++];
          if (reach[static_cast<std::size_t>(to)] && state[static_cast<std::size_t>(to)] == 0) {
            state[static_cast<std::size_t>(to)] = 1;
            stack.push_back({to, 0});
          }
        } else {
          state[static_cast<std::size_t>(node)] = 2;
          finish_order.push_back(node);
          stack.pop_back();
        }
      }
    }
  }

  std::vector<std::vector<int>> pred(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    if (!reach[static_cast<std::size_t>(v)]) continue;
    for (int to : g.succ[static_cast<std::size_t>(v)]) {
      if (reach[static_cast<std::size_t>(to)]) pred[static_cast<std::size_t>(to)].push_back(v);
    }
  }

  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int comp_count = 0;
  std::vector<int> members;
  for (auto it = finish_order.rbegin(); it != finish_order.rend(); ++it) {
    if (comp[static_cast<std::size_t>(*it)] != -1) continue;
    members.clear();
    members.push_back(*it);
    comp[static_cast<std::size_t>(*it)] = comp_count;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (int from : pred[static_cast<std::size_t>(members[head])]) {
        if (comp[static_cast<std::size_t>(from)] == -1) {
          comp[static_cast<std::size_t>(from)] = comp_count;
          members.push_back(from);
        }
      }
    }
    bool accepting = false;
    bool nontrivial = members.size() > 1;
    for (int v : members) {
      accepting = accepting || g.accepting_node[static_cast<std::size_t>(v)];
      if (!nontrivial) {
        for (int to : g.succ[static_cast<std::size_t>(v)]) nontrivial = nontrivial || to == v;
      }
    }
    if (accepting && nontrivial) return true;
    ++comp_count;
  }
  return false;
}

}  // namespace

RunClassification classify_word(const Automaton& m, const LassoWord& w) {
  if (w.loop.empty()) throw InputError("lasso loop may not be empty");
  if (LassoAcceptor(m, LassoAcceptor::Mode::Definite).accepts(w)) return RunClassification::Definite;
  if (!m.boxes.empty() && LassoAcceptor(m, LassoAcceptor::Mode::Possible).accepts(w)) {
    return RunClassification::Possible;
  }
  return RunClassification::Rejected;
}

bool accepts_lasso(const Automaton& ba, const LassoWord& w) {
  return LassoAcceptor(ba, LassoAcceptor::Mode::Definite).accepts(w);
}

LassoAcceptor::LassoAcceptor(const Automaton& automaton, Mode mode)
    : automaton_(automaton), mode_(mode) {
  for (const auto& id : automaton.states) {
    if (mode == Mode::Definite && automaton.is_box(id)) continue;
    states_.push_back(id);
  }
  use_bitset_ = states_.size() <= 64;
  if (!use_bitset_) return;
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(states_.size()); ++i) index[states_[i]] = i;
  stutter_.assign(states_.size(), false);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const std::string& id = states_[i];
    if (automaton.is_initial(id)) initial_mask_ |= std::uint64_t(1) << i;
    if (automaton.is_accepting(id)) accepting_mask_ |= std::uint64_t(1) << i;
    if (mode == Mode::Possible && automaton.is_box(id)) stutter_[i] = true;
  }
  for (const auto& t : automaton.transitions) {
    auto from = index.find(t.from);
    auto to = index.find(t.to);
    if (from == index.end() || to == index.end()) continue;
    edges_.push_back({t.guard, from->second, to->second});
  }
}

bool LassoAcceptor::accepts(const LassoWord& w) const {
  if (w.loop.empty()) throw InputError("lasso loop may not be empty");
  if (use_bitset_) return accepts_bitset(w);
  return has_accepting_cycle(build_word_graph(automaton_, w, mode_ == Mode::Possible));
}

bool LassoAcceptor::accepts_bitset(const LassoWord& w) const {
  if (initial_mask_ == 0) return false;
  const std::size_t n = states_.size();

  auto successors_for = [&](const Character& c) -> const std::vector<std::uint64_t>& {
    auto it = successors_by_char_.find(c);
    if (it != successors_by_char_.end()) return it->second;
    std::vector<std::uint64_t> succ(n, 0);
    for (const auto& e : edges_) {
      if (match_guard(e.guard, c)) succ[static_cast<std::size_t>(e.from)] |= std::uint64_t(1) << e.to;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (stutter_[i]) succ[i] |= std::uint64_t(1) << i;
    }
    return successors_by_char_.emplace(c, std::move(succ)).first->second;
  };
  auto step = [&](const std::vector<std::uint64_t>& succ, std::uint64_t mask) {
    std::uint64_t out = 0;
    while (mask) {
      const int bit = std::countr_zero(mask);
      mask &= mask - 1;
      out |= succ[static_cast<std::size_t>(bit)];
    }
    return out;
  };

  std::uint64_t frontier = initial_mask_;
  for (const auto& c : w.stem) {
    frontier = step(successors_for(c), frontier);
    if (frontier == 0) return false;
  }

  // One full pass around the loop from a single state, split into paths
  // that have already visited an accepting state and paths that have not.
  std::vector<const std::vector<std::uint64_t>*> loop_succ;
  loop_succ.reserve(w.loop.size());
  for (const auto& c : w.loop) loop_succ.push_back(&successors_for(c));
  auto lap = [&](std::uint64_t start) {
    std::uint64_t plain = start, acc = 0;
    for (const auto* succ : loop_succ) {
      acc |= plain & accepting_mask_;
      plain &= ~accepting_mask_;
      plain = step(*succ, plain);
      acc = step(*succ, acc);
    }
    return std::pair<std::uint64_t, std::uint64_t>{plain, acc};
  };

  // Close the set of loop-start states under laps.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> lap_of(n, {0, 0});
  std::uint64_t known = 0;
  std::uint64_t todo = frontier;
  while (todo) {
    const int bit = std::countr_zero(todo);
    todo &= todo - 1;
    if (known & (std::uint64_t(1) << bit)) continue;
    known |= std::uint64_t(1) << bit;
    lap_of[static_cast<std::size_t>(bit)] = lap(std::uint64_t(1) << bit);
    todo |= (lap_of[static_cast<std::size_t>(bit)].first | lap_of[static_cast<std::size_t>(bit)].second) &
            ~known;
  }

  // Accepting run <=> some lap cycle reachable from the frontier crosses
  // an accepting position: an acc-lap edge s -> t with t reaching s again.
  std::vector<std::uint64_t> reach(n, 0);
  std::uint64_t nodes = known;
  while (nodes) {
    const int s = std::countr_zero(nodes);
    nodes &= nodes - 1;
    std::uint64_t seen = lap_of[static_cast<std::size_t>(s)].first | lap_of[static_cast<std::size_t>(s)].second;
    std::uint64_t frontier2 = seen;
    while (frontier2) {
      const int v = std::countr_zero(frontier2);
      frontier2 &= frontier2 - 1;
      const std::uint64_t next =
          (lap_of[static_cast<std::size_t>(v)].first | lap_of[static_cast<std::size_t>(v)].second) & ~seen;
      seen |= next;
      frontier2 |= next;
    }
    reach[static_cast<std::size_t>(s)] = seen;
  }
  std::uint64_t candidates = known & frontier;
  // Also states reachable from the frontier via laps can start the cycle.
  std::uint64_t closure = candidates;
  {
    std::uint64_t frontier2 = candidates;
    while (frontier2) {
      const int v = std::countr_zero(frontier2);
      frontier2 &= frontier2 - 1;
      const std::uint64_t next = reach[static_cast<std::size_t>(v)] & ~closure;
      closure |= next;
      frontier2 |= next;
    }
  }
  std::uint64_t from_cycle = closure;
  while (from_cycle) {
    const int s = std::countr_zero(from_cycle);
    from_cycle &= from_cycle - 1;
    std::uint64_t acc_targets = lap_of[static_cast<std::size_t>(s)].second;
    while (acc_targets) {
      const int t = std::countr_zero(acc_targets);
      acc_targets &= acc_targets - 1;
      const bool closes = t == s || (reach[static_cast<std::size_t>(t)] & (std::uint64_t(1) << s)) != 0;
      if (closes) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// LTL evaluation on lassos
// ---------------------------------------------------------------------------

namespace {

std::vector<bool> eval_table(const LtlPtr& f, const LassoWord& w,
                             std::map<const LtlFormula*, std::vector<bool>>& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  const std::size_t n = w.stem.size() + w.loop.size();
  std::vector<bool> vals(n, false);
  auto nxt = [&](std::size_t pos) { return next_pos(w, pos); };
  switch (f->op) {
    case LtlOp::True: vals.assign(n, true); break;
    case LtlOp::False: vals.assign(n, false); break;
    case LtlOp::Prop:
      for (std::size_t i = 0; i < n; ++i) vals[i] = char_at(w, i).props.count(f->prop) != 0;
      break;
    case LtlOp::Not: {
      auto sub = eval_table(f->lhs, w, memo);
      for (std::size_t i = 0; i < n; ++i) vals[i] = !sub[i];
      break;
    }
    case LtlOp::And: {
      auto l = eval_table(f->lhs, w, memo), r = eval_table(f->rhs, w, memo);
      for (std::size_t i = 0; i < n; ++i) vals[i] = l[i] && r[i];
      break;
    }
    case LtlOp::Or: {
      auto l = eval_table(f->lhs, w, memo), r = eval_table(f->rhs, w, memo);
      for (std::size_t i = 0; i < n; ++i) vals[i] = l[i] || r[i];
      break;
    }
    case LtlOp::Implies: {
      auto l = eval_table(f->lhs, w, memo), r = eval_table(f->rhs, w, memo);
      for (std::size_t i = 0; i < n; ++i) vals[i] = !l[i] || r[i];
      break;
    }
    case LtlOp::Next: {
      auto sub = eval_table(f->lhs, w, memo);
      for (std::size_t i = 0; i < n; ++i) vals[i] = sub[nxt(i)];
      break;
    }
    case LtlOp::Until: {
      // Least fixpoint on the lasso graph.
      auto l = eval_table(f->lhs, w, memo), r = eval_table(f->rhs, w, memo);
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t k = n; k-- > 0;) {
          const bool v = r[k] || (l[k] && vals[nxt(k)]);
          if (v != vals[k]) {
            vals[k] = v;
            changed = true;
          }
        }
      }
      break;
    }
    case LtlOp::Finally: {
      auto sub = eval_table(f->lhs, w, memo);
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t k = n; k-- > 0;) {
          const bool v = sub[k] || vals[nxt(k)];
          if (v != vals[k]) {
            vals[k] = v;
            changed = true;
          }
        }
      }
      break;
    }
    case LtlOp::Globally: {
      // Greatest fixpoint.
      auto sub = eval_table(f->lhs, w, memo);
      vals.assign(n, true);
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t k = n; k-- > 0;) {
          const bool v = sub[k] && vals[nxt(k)];
          if (v != vals[k]) {
            vals[k] = v;
            changed = true;
          }
        }
      }
      break;
    }
  }
  memo[f.get()] = vals;
  return vals;
}

}  // namespace

bool eval_ltl(const LtlPtr& f, const LassoWord& w) {
  if (w.loop.empty()) throw InputError("lasso loop may not be empty");
  std::map<const LtlFormula*, std::vector<bool>> memo;
  return eval_table(f, w, memo)[0];
}

// ---------------------------------------------------------------------------
// Lasso enumeration
// ---------------------------------------------------------------------------

void for_each_lasso(const PropositionSet& props, std::size_t max_stem, std::size_t max_loop,
                    const std::function<bool(const LassoWord&)>& fn) {
  std::vector<std::string> names(props.names.begin(), props.names.end());
  const std::size_t char_count = static_cast<std::size_t>(1) << names.size();
  std::vector<Character> chars(char_count);
  for (std::size_t mask = 0; mask < char_count; ++mask) {
    for (std::size_t bit = 0; bit < names.size(); ++bit) {
      if (mask & (static_cast<std::size_t>(1) << bit)) chars[mask].props.insert(names[bit]);
    }
  }

  // Enumerates sequences of a given length in lexicographic (counting)
  // order, most significant position first.
  auto each_sequence = [&](std::size_t length, const std::function<bool(const std::vector<Character>&)>& body) {
    std::vector<std::size_t> digits(length, 0);
    std::vector<Character> seq(length);
    while (true) {
      for (std::size_t i = 0; i < length; ++i) seq[i] = chars[digits[i]];
      if (!body(seq)) return false;
      std::size_t i = length;
      while (i > 0) {
        --i;
        if (++digits[i] < char_count) break;
        digits[i] = 0;
        if (i == 0) return true;
      }
      if (length == 0) return true;
    }
  };

  for (std::size_t stem_len = 0; stem_len <= max_stem; ++stem_len) {
    bool keep_going = each_sequence(stem_len, [&](const std::vector<Character>& stem) {
      for (std::size_t loop_len = 1; loop_len <= max_loop; ++loop_len) {
        bool inner = each_sequence(loop_len, [&](const std::vector<Character>& loop) {
          return fn(LassoWord{stem, loop});
        });
        if (!inner) return false;
      }
      return true;
    });
    if (!keep_going) return;
  }
}

std::vector<LassoWord> enumerate_lassos(const PropositionSet& props, std::size_t max_stem,
                                        std::size_t max_loop) {
  std::vector<LassoWord> out;
  for_each_lasso(props, max_stem, max_loop, [&](const LassoWord& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

Verdict brute_force_verdict(const Automaton& m, const LtlPtr& f, std::size_t max_stem,
                            std::size_t max_loop, const PropositionSet& extra_props) {
  const PropositionSet props = merge(m.propositions, extra_props);
  std::optional<LassoWord> possible_violation;
  std::optional<LassoWord> definite_violation;
  for_each_lasso(props, max_stem, max_loop, [&](const LassoWord& w) {
    if (eval_ltl(f, w)) return true;
    const RunClassification cls = classify_word(m, w);
    if (cls == RunClassification::Definite) {
      definite_violation = w;
      return false;  // False dominates, no need to continue
    }
    if (cls == RunClassification::Possible && !possible_violation) possible_violation = w;
    return true;
  });
  if (definite_violation) {
    Witness wit;
    wit.word = *definite_violation;
    return Verdict{VerdictValue::False, wit};
  }
  if (possible_violation) {
    Witness wit;
    wit.word = *possible_violation;
    return Verdict{VerdictValue::Unknown, wit};
  }
  return Verdict{VerdictValue::True, std::nullopt};
}

// ---------------------------------------------------------------------------
// Run abstractions
// ---------------------------------------------------------------------------

Abstractions abstractions(const IntersectionAutomaton& product, const std::string& box,
                          const LassoWord& word, const Witness& run) {
  const std::size_t S = word.stem.size();
  const std::size_t L = word.loop.size();
  if (L == 0) throw InputError("lasso loop may not be empty");
  if (run.stem_transitions.size() != S || run.loop_transitions.size() != L ||
      run.run_loop.size() != L || run.run_stem.size() != S + 1) {
    throw InputError("run does not line up with the word");
  }

  auto state_at = [&](std::size_t k) -> const std::string& {
    if (k < S) return run.run_stem[k];
    return run.run_loop[(k - S) % L];
  };
  auto trans_at = [&](std::size_t k) -> const Transition& {
    if (k < S) return run.stem_transitions[k];
    return run.loop_transitions[(k - S) % L];
  };
  auto word_at = [&](std::size_t k) -> const Character& {
    if (k < S) return word.stem[k];
    return word.loop[(k - S) % L];
  };

  // Validate the run against the word and the automaton.
  const std::size_t horizon = S + 3 * L;
  for (std::size_t k = 0; k < S + L; ++k) {
    const Transition& t = trans_at(k);
    if (t.from != state_at(k) || t.to != state_at(k + 1)) throw InputError("run transitions do not chain");
    if (!product.underlying.transitions.count(t)) throw InputError("run uses an unknown transition");
    if (!match_guard(t.guard, word_at(k))) throw InputError("run guard does not match the word");
  }
  if (!product.underlying.initial.count(state_at(0))) throw InputError("run does not start in an initial state");

  auto in_box = [&](std::size_t k) {
    auto it = product.info.find(state_at(k));
    return it != product.info.end() && it->second.mixed && it->second.model == box;
  };
  auto is_p = [&](std::size_t k) { return product.delta_p.count(trans_at(k)) != 0; };
  auto is_c = [&](std::size_t k) { return product.delta_c.count(trans_at(k)) != 0; };

  Abstractions out;

  // Finite segments: indices i < j with delta_p steps through the box on
  // [i, j), a delta_c exit at j, and either a delta_c entry at i-1 or a
  // run that starts inside the box.
  for (std::size_t i = 0; i + 1 < horizon; ++i) {
    const bool entry_ok = (i == 0) || is_c(i - 1);
    if (!entry_ok) continue;
    for (std::size_t j = i + 1; j + 1 < horizon; ++j) {
      bool segment_ok = true;
      for (std::size_t k = i; k < j; ++k) {
        if (!in_box(k) || !is_p(k)) {
          segment_ok = false;
          break;
        }
      }
      if (!segment_ok) break;  // longer j keeps the bad position
      if (!is_c(j)) continue;
      std::vector<Character> abstract_word;
      if (i > 0) abstract_word.push_back(word_at(i - 1));
      for (std::size_t k = i; k < j; ++k) abstract_word.push_back(word_at(k));
      abstract_word.push_back(word_at(j));
      out.finite_words.insert(abstract_word);
    }
  }

  // Infinite segment: the run eventually stays inside the box on delta_p
  // steps forever; with a lasso run that means the whole loop qualifies.
  bool loop_inside = true;
  for (std::size_t k = S; k < S + L; ++k) {
    if (!in_box(k) || !is_p(k)) {
      loop_inside = false;
      break;
    }
  }
  if (loop_inside) {
    for (std::size_t i = 0; i < S + L; ++i) {
      bool tail_ok = true;
      for (std::size_t k = i; k < S + L; ++k) {
        if (!in_box(k) || !is_p(k)) {
          tail_ok = false;
          break;
        }
      }
      if (!tail_ok) continue;
      const bool entry_ok = (i == 0) || is_c(i - 1);
      if (!entry_ok) continue;
      LassoWord tail;
      if (i > 0) tail.stem.push_back(word_at(i - 1));
      const std::size_t p = std::max(i, S);
      for (std::size_t k = i; k < p; ++k) tail.stem.push_back(word_at(k));
      for (std::size_t k = p; k < p + L; ++k) tail.loop.push_back(word_at(k));
      bool duplicate = false;
      for (const auto& existing : out.infinite_words) {
        if (same_omega_word(existing, tail)) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) out.infinite_words.insert(tail);
    }
  }
  return out;
}

}  // namespace oracle
}  // namespace ibmc
