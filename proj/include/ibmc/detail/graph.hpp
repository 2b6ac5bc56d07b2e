#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ibmc/automata.hpp"

// Small adjacency-list view over an automaton plus an iterative Tarjan.
// Shared by the product and constraint computations; the oracle keeps its
// own traversal code on purpose.

namespace ibmc {
namespace detail {

struct Graph {
  std::vector<std::string> ids;  // sorted
  std::map<std::string, int> index;
  std::vector<std::vector<std::pair<int, const Transition*>>> succ;
};

/// allowed == nullptr takes every state; otherwise states outside the set
/// are dropped together with their transitions.
inline Graph build_graph(const Automaton& a, const std::set<std::string>* allowed = nullptr) {
  Graph g;
  for (const auto& id : a.states) {
    if (allowed && !allowed->count(id)) continue;
    g.ids.push_back(id);
  }
  for (int i = 0; i < static_cast<int>(g.ids.size()); ++i) g.index[g.ids[static_cast<std::size_t>(i)]] = i;
  g.succ.resize(g.ids.size());
  for (const auto& t : a.transitions) {
    auto from = g.index.find(t.from);
    auto to = g.index.find(t.to);
    if (from == g.index.end() || to == g.index.end()) continue;
    g.succ[static_cast<std::size_t>(from->second)].push_back({to->second, &t});
  }
  return g;
}

struct SccResult {
  std::vector<int> comp;
  std::vector<bool> nontrivial;  // component contains a cycle
};

inline SccResult tarjan(const Graph& g) {
  const int n = static_cast<int>(g.ids.size());
  SccResult res;
  res.comp.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), -1), num(static_cast<std::size_t>(n), -1);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  int counter = 0;

  struct Frame {
    int node;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (num[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = true;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      const auto& edges = g.succ[static_cast<std::size_t>(fr.node)];
      if (fr.edge < edges.size()) {
        const int to = edges[fr.edge++].first;
        if (num[static_cast<std::size_t>(to)] == -1) {
          num[static_cast<std::size_t>(to)] = low[static_cast<std::size_t>(to)] = counter++;
          stack.push_back(to);
          on_stack[static_cast<std::size_t>(to)] = true;
          frames.push_back({to, 0});
        } else if (on_stack[static_cast<std::size_t>(to)]) {
          low[static_cast<std::size_t>(fr.node)] =
              std::min(low[static_cast<std::size_t>(fr.node)], num[static_cast<std::size_t>(to)]);
        }
      } else {
        const int node = fr.node;
        frames.pop_back();
        if (!frames.empty()) {
          const int parent = frames.back().node;
          low[static_cast<std::size_t>(parent)] =
              std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(node)]);
        }
        if (low[static_cast<std::size_t>(node)] == num[static_cast<std::size_t>(node)]) {
          const int comp_id = static_cast<int>(res.nontrivial.size());
          int members = 0;
          while (true) {
            const int v = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(v)] = false;
            res.comp[static_cast<std::size_t>(v)] = comp_id;
            ++members;
            if (v == node) break;
          }
          res.nontrivial.push_back(members > 1);
        }
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    for (const auto& [to, t] : g.succ[static_cast<std::size_t>(v)]) {
      (void)t;
      if (to == v) res.nontrivial[static_cast<std::size_t>(res.comp[static_cast<std::size_t>(v)])] = true;
    }
  }
  return res;
}

inline std::set<std::string> forward_reachable(const Graph& g, const std::set<std::string>& from) {
  std::set<std::string> seen;
  std::deque<int> queue;
  for (const auto& id : from) {
    auto it = g.index.find(id);
    if (it != g.index.end() && seen.insert(id).second) queue.push_back(it->second);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& [to, t] : g.succ[static_cast<std::size_t>(v)]) {
      (void)t;
      if (seen.insert(g.ids[static_cast<std::size_t>(to)]).second) queue.push_back(to);
    }
  }
  return seen;
}

inline std::set<std::string> backward_reachable(const Graph& g, const std::set<std::string>& from) {
  std::vector<std::vector<int>> pred(g.ids.size());
  for (std::size_t v = 0; v < g.ids.size(); ++v) {
    for (const auto& [to, t] : g.succ[v]) {
      (void)t;
      pred[static_cast<std::size_t>(to)].push_back(static_cast<int>(v));
    }
  }
  std::set<std::string> seen;
  std::deque<int> queue;
  for (const auto& id : from) {
    auto it = g.index.find(id);
    if (it != g.index.end() && seen.insert(id).second) queue.push_back(it->second);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int p : pred[static_cast<std::size_t>(v)]) {
      if (seen.insert(g.ids[static_cast<std::size_t>(p)]).second) queue.push_back(p);
    }
  }
  return seen;
}

}  // namespace detail
}  // namespace ibmc
