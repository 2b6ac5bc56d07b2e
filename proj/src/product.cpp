#include "ibmc/product.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

#include "ibmc/detail/graph.hpp"

namespace ibmc {

std::string product_state_id(const std::string& model, const std::string& claim, int counter) {
  return "(" + model + "," + claim + "," + std::to_string(counter) + ")";
}

std::string to_string(VerdictValue v) {
  switch (v) {
    case VerdictValue::True: return "T";
    case VerdictValue::False: return "F";
    case VerdictValue::Unknown: return "?";
  }
  return "?";
}

namespace {

int bump_counter(int x, bool model_target_accepting, bool claim_target_accepting) {
  if (x == 0 && model_target_accepting) return 1;
  if (x == 1 && claim_target_accepting) return 2;
  if (x == 2) return 0;
  return x;
}

}  // namespace

IntersectionAutomaton intersect(const Automaton& model, const Automaton& claim,
                                const std::vector<ProductSeed>& extra_seeds) {
  if (!claim.boxes.empty()) throw InputError("claim automaton may not contain boxes");

  IntersectionAutomaton out;
  out.underlying.kind = Kind::Ba;
  out.underlying.propositions = merge(model.propositions, claim.propositions);

  std::multimap<std::string, const Transition*> model_from, claim_from;
  for (const auto& t : model.transitions) model_from.emplace(t.from, &t);
  for (const auto& t : claim.transitions) claim_from.emplace(t.from, &t);

  std::deque<std::string> work;
  auto materialize = [&](const std::string& m, const std::string& c, int x) {
    const std::string id = product_state_id(m, c, x);
    if (out.underlying.states.count(id)) return id;
    out.underlying.states.insert(id);
    ProductStateInfo st;
    st.model = m;
    st.claim = c;
    st.counter = x;
    st.mixed = model.is_box(m);
    st.model_accepting = model.is_accepting(m);
    st.claim_accepting = claim.is_accepting(c);
    out.info.emplace(id, st);
    if (x == 2) out.underlying.accepting.insert(id);
    work.push_back(id);
    return id;
  };

  for (const auto& m0 : model.initial) {
    for (const auto& c0 : claim.initial) {
      out.underlying.initial.insert(materialize(m0, c0, 0));
    }
  }
  for (const auto& seed : extra_seeds) materialize(seed.model, seed.claim, seed.counter);

  while (!work.empty()) {
    const std::string id = work.front();
    work.pop_front();
    const ProductStateInfo st = out.info.at(id);

    auto claim_range = claim_from.equal_range(st.claim);
    // Synchronized steps.
    auto model_range = model_from.equal_range(st.model);
    for (auto mi = model_range.first; mi != model_range.second; ++mi) {
      const Transition& mt = *mi->second;
      for (auto ci = claim_range.first; ci != claim_range.second; ++ci) {
        const Transition& ct = *ci->second;
        auto guard = conjoin(mt.guard, ct.guard);
        if (!guard) continue;
        const int y = bump_counter(st.counter, model.is_accepting(mt.to), claim.is_accepting(ct.to));
        const std::string to = materialize(mt.to, ct.to, y);
        Transition t{id, *guard, to};
        out.underlying.transitions.insert(t);
        out.delta_c.insert(t);
        out.origin.emplace(t, TransitionOrigin{mt, ct});
      }
    }
    // Claim steps while the model stutters inside a box.
    if (st.mixed) {
      for (auto ci = claim_range.first; ci != claim_range.second; ++ci) {
        const Transition& ct = *ci->second;
        const int y = bump_counter(st.counter, st.model_accepting, claim.is_accepting(ct.to));
        const std::string to = materialize(st.model, ct.to, y);
        Transition t{id, ct.guard, to};
        out.underlying.transitions.insert(t);
        out.delta_p.insert(t);
        out.origin.emplace(t, TransitionOrigin{std::nullopt, ct});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Emptiness
// ---------------------------------------------------------------------------

namespace {

using detail::Graph;
using detail::SccResult;

/// Deterministic BFS path from any source (distance 0) to target; returns
/// the transitions taken. allowed limits the traversal when non-null.
std::optional<std::vector<const Transition*>> bfs_path(const Graph& g, const std::vector<int>& sources,
                                                       int target, const std::vector<bool>* allowed) {
  std::vector<int> parent_edge(g.ids.size(), -1);
  std::vector<int> parent(g.ids.size(), -1);
  std::vector<bool> seen(g.ids.size(), false);
  std::deque<int> queue;
  for (int s : sources) {
    if (allowed && !(*allowed)[static_cast<std::size_t>(s)]) continue;
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      queue.push_back(s);
    }
  }
  std::vector<std::vector<const Transition*>> edge_of(g.ids.size());
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == target) {
      std::vector<const Transition*> path;
      int cur = v;
      while (parent[static_cast<std::size_t>(cur)] != -1) {
        path.push_back(edge_of[static_cast<std::size_t>(cur)][0]);
        cur = parent[static_cast<std::size_t>(cur)];
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& [to, t] : g.succ[static_cast<std::size_t>(v)]) {
      if (allowed && !(*allowed)[static_cast<std::size_t>(to)]) continue;
      if (seen[static_cast<std::size_t>(to)]) continue;
      seen[static_cast<std::size_t>(to)] = true;
      parent[static_cast<std::size_t>(to)] = v;
      edge_of[static_cast<std::size_t>(to)] = {t};
      queue.push_back(to);
    }
  }
  return std::nullopt;
}

/// Shortest cycle through node within its component.
std::optional<std::vector<const Transition*>> bfs_cycle(const Graph& g, int node,
                                                        const std::vector<bool>& in_comp) {
  // One forced step out of node, then a path back.
  std::optional<std::vector<const Transition*>> best;
  for (const auto& [to, t] : g.succ[static_cast<std::size_t>(node)]) {
    if (!in_comp[static_cast<std::size_t>(to)]) continue;
    if (to == node) return std::vector<const Transition*>{t};
    auto rest = bfs_path(g, {to}, node, &in_comp);
    if (!rest) continue;
    std::vector<const Transition*> cycle{t};
    cycle.insert(cycle.end(), rest->begin(), rest->end());
    if (!best || cycle.size() < best->size()) best = cycle;
  }
  return best;
}

}  // namespace

std::optional<Witness> find_accepting_lasso(const Automaton& ba) {
  const Graph g = detail::build_graph(ba);
  if (g.ids.empty()) return std::nullopt;
  const SccResult scc = detail::tarjan(g);

  std::vector<bool> reachable(g.ids.size(), false);
  {
    std::deque<int> queue;
    for (const auto& id : ba.initial) {
      const int v = g.index.at(id);
      if (!reachable[static_cast<std::size_t>(v)]) {
        reachable[static_cast<std::size_t>(v)] = true;
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (const auto& [to, t] : g.succ[static_cast<std::size_t>(v)]) {
        (void)t;
        if (!reachable[static_cast<std::size_t>(to)]) {
          reachable[static_cast<std::size_t>(to)] = true;
          queue.push_back(to);
        }
      }
    }
  }

  for (const auto& acc_id : ba.accepting) {
    const int acc = g.index.at(acc_id);
    if (!reachable[static_cast<std::size_t>(acc)]) continue;
    const int comp = scc.comp[static_cast<std::size_t>(acc)];
    if (!scc.nontrivial[static_cast<std::size_t>(comp)]) continue;

    std::vector<int> sources;
    for (const auto& id : ba.initial) sources.push_back(g.index.at(id));
    auto stem = bfs_path(g, sources, acc, nullptr);
    assert(stem.has_value());
    std::vector<bool> in_comp(g.ids.size(), false);
    for (std::size_t v = 0; v < g.ids.size(); ++v) in_comp[v] = scc.comp[v] == comp;
    auto cycle = bfs_cycle(g, acc, in_comp);
    assert(cycle.has_value());

    Witness w;
    std::string cur;
    // Stem states: from the BFS start to acc.
    if (stem->empty()) {
      // acc is itself initial; find which initial id it is.
      w.run_stem.push_back(acc_id);
    } else {
      w.run_stem.push_back((*stem)[0]->from);
      for (const Transition* t : *stem) {
        w.run_stem.push_back(t->to);
        w.stem_transitions.push_back(*t);
        w.word.stem.push_back(minimal_model(t->guard));
      }
    }
    for (const Transition* t : *cycle) {
      w.run_loop.push_back(t->from);
      w.loop_transitions.push_back(*t);
      w.word.loop.push_back(minimal_model(t->guard));
    }
    return w;
  }
  return std::nullopt;
}

Verdict model_check(const Automaton& model, const Automaton& claim, CheckStats* stats) {
  if (!claim.boxes.empty()) throw InputError("claim automaton may not contain boxes");

  const IntersectionAutomaton lower = intersect(completion(model), claim);
  if (stats) {
    stats->completion_product_states = lower.underlying.states.size();
    stats->completion_product_transitions = lower.underlying.transitions.size();
  }
  if (auto witness = find_accepting_lasso(lower.underlying)) {
    return Verdict{VerdictValue::False, std::move(witness)};
  }

  const IntersectionAutomaton upper = intersect(model, claim);
  if (stats) {
    stats->product_states = upper.underlying.states.size();
    stats->product_transitions = upper.underlying.transitions.size();
  }
  if (auto witness = find_accepting_lasso(upper.underlying)) {
    return Verdict{VerdictValue::Unknown, std::move(witness)};
  }
  return Verdict{VerdictValue::True, std::nullopt};
}

}  // namespace ibmc
