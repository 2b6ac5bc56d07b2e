#include "ibmc/constraints.hpp"

#include <algorithm>

#include "ibmc/detail/graph.hpp"

namespace ibmc {

std::string to_string(SubPropertyKind k) { return k == SubPropertyKind::S ? "s" : "sp"; }

IntersectionAutomaton clean_intersection(const IntersectionAutomaton& i) {
  const detail::Graph g = detail::build_graph(i.underlying);
  const detail::SccResult scc = detail::tarjan(g);

  std::set<std::string> core;
  for (std::size_t v = 0; v < g.ids.size(); ++v) {
    const int comp = scc.comp[v];
    if (!scc.nontrivial[static_cast<std::size_t>(comp)]) continue;
    // Keep whole components that can satisfy the acceptance condition.
    bool has_accepting = false;
    for (std::size_t u = 0; u < g.ids.size(); ++u) {
      if (scc.comp[u] == comp && i.underlying.accepting.count(g.ids[u])) {
        has_accepting = true;
        break;
      }
    }
    if (has_accepting) core.insert(g.ids[v]);
  }
  const std::set<std::string> keep = detail::backward_reachable(g, core);

  IntersectionAutomaton out;
  out.underlying.kind = Kind::Ba;
  out.underlying.propositions = i.underlying.propositions;
  for (const auto& id : keep) {
    out.underlying.states.insert(id);
    out.info.emplace(id, i.info.at(id));
    if (i.underlying.initial.count(id)) out.underlying.initial.insert(id);
    if (i.underlying.accepting.count(id)) out.underlying.accepting.insert(id);
  }
  for (const auto& t : i.underlying.transitions) {
    if (!keep.count(t.from) || !keep.count(t.to)) continue;
    out.underlying.transitions.insert(t);
    if (i.delta_c.count(t)) out.delta_c.insert(t);
    if (i.delta_p.count(t)) out.delta_p.insert(t);
    auto origin = i.origin.find(t);
    if (origin != i.origin.end()) out.origin.emplace(t, origin->second);
  }
  return out;
}

std::map<std::string, SubPropertySkeleton> extract_subproperty_skeletons(
    const IntersectionAutomaton& icl, const Automaton& model) {
  std::map<std::string, SubPropertySkeleton> out;
  for (const auto& box : model.boxes) {
    SubPropertySkeleton sk;
    sk.box = box;
    sk.inner.kind = Kind::Ba;
    sk.inner.propositions = icl.underlying.propositions;
    out.emplace(box, std::move(sk));
  }

  for (const auto& [id, st] : icl.info) {
    if (!st.mixed) continue;
    auto it = out.find(st.model);
    if (it == out.end()) continue;  // box of some other automaton layer
    SubPropertySkeleton& sk = it->second;
    sk.inner.states.insert(id);
    if (icl.underlying.initial.count(id)) sk.inner.initial.insert(id);
    if (icl.underlying.accepting.count(id)) sk.inner.accepting.insert(id);
  }
  for (const auto& t : icl.underlying.transitions) {
    const ProductStateInfo& from = icl.info.at(t.from);
    const ProductStateInfo& to = icl.info.at(t.to);
    if (icl.delta_p.count(t)) {
      auto it = out.find(from.model);
      if (it != out.end() && it->second.inner.states.count(t.from) && it->second.inner.states.count(t.to)) {
        it->second.inner.transitions.insert(t);
      }
    }
    if (icl.delta_c.count(t)) {
      auto into = out.find(to.model);
      if (into != out.end() && into->second.inner.states.count(t.to)) {
        into->second.incoming.push_back({from.model, t.guard, t.to});
        into->second.incoming_origin.push_back(t);
      }
      auto from_box = out.find(from.model);
      if (from_box != out.end() && from_box->second.inner.states.count(t.from)) {
        from_box->second.outgoing.push_back({t.from, t.guard, to.model});
        from_box->second.outgoing_origin.push_back(t);
      }
    }
  }
  return out;
}

namespace {

std::set<std::string> universe(const IntersectionAutomaton& icl, const SubPropertySkeleton& sk,
                               SubPropertyKind kind) {
  std::set<std::string> u;
  for (const auto& [id, st] : icl.info) {
    if (kind == SubPropertyKind::S) {
      if (!st.mixed) u.insert(id);
    } else {
      if (!sk.inner.states.count(id)) u.insert(id);
    }
  }
  return u;
}

}  // namespace

GrSets compute_g_r(const IntersectionAutomaton& icl, const SubPropertySkeleton& sk,
                   SubPropertyKind kind) {
  const std::set<std::string> u = universe(icl, sk, kind);
  const detail::Graph sub = detail::build_graph(icl.underlying, &u);

  GrSets out;
  std::set<std::string> initial_in_u;
  for (const auto& id : icl.underlying.initial) {
    if (u.count(id)) initial_in_u.insert(id);
  }
  const std::set<std::string> forward = detail::forward_reachable(sub, initial_in_u);
  for (std::size_t idx = 0; idx < sk.incoming_origin.size(); ++idx) {
    if (forward.count(sk.incoming_origin[idx].from)) out.g.insert(idx);
  }

  // Backward search from the accepting cycles that live entirely in the
  // allowed universe.
  const detail::SccResult scc = detail::tarjan(sub);
  std::set<std::string> cores;
  for (std::size_t v = 0; v < sub.ids.size(); ++v) {
    const int comp = scc.comp[v];
    if (!scc.nontrivial[static_cast<std::size_t>(comp)]) continue;
    bool has_accepting = false;
    for (std::size_t w = 0; w < sub.ids.size(); ++w) {
      if (scc.comp[w] == comp && icl.underlying.accepting.count(sub.ids[w])) {
        has_accepting = true;
        break;
      }
    }
    if (has_accepting) cores.insert(sub.ids[v]);
  }
  const std::set<std::string> backward = detail::backward_reachable(sub, cores);
  for (std::size_t idx = 0; idx < sk.outgoing_origin.size(); ++idx) {
    if (backward.count(sk.outgoing_origin[idx].to)) out.r.insert(idx);
  }
  return out;
}

ReachabilityRelation compute_reachability(const IntersectionAutomaton& icl,
                                          const SubPropertySkeleton& sk, SubPropertyKind kind) {
  const std::set<std::string> u = universe(icl, sk, kind);
  const detail::Graph sub = detail::build_graph(icl.underlying, &u);

  // Reflexive-transitive closure inside the universe, one search per node.
  std::map<std::string, std::set<std::string>> reach;
  for (const auto& id : sub.ids) reach[id] = detail::forward_reachable(sub, {id});

  std::set<std::string> acc_model, acc_claim;
  for (const auto& id : sub.ids) {
    const ProductStateInfo& st = icl.info.at(id);
    if (st.model_accepting) acc_model.insert(id);
    if (st.claim_accepting) acc_claim.insert(id);
  }

  ReachabilityRelation out;
  for (std::size_t o = 0; o < sk.outgoing_origin.size(); ++o) {
    const Transition& gen_o = sk.outgoing_origin[o];
    for (std::size_t i = 0; i < sk.incoming_origin.size(); ++i) {
      const Transition& gen_i = sk.incoming_origin[i];
      const bool identical = gen_o == gen_i;
      const bool endpoints_in_u = u.count(gen_o.to) && u.count(gen_i.from);
      const bool connected = endpoints_in_u && reach.at(gen_o.to).count(gen_i.from);
      if (!identical && !connected) continue;
      bool gamma_m = false, gamma_a = false;
      if (connected) {
        for (const auto& acc : acc_model) {
          if (reach.at(gen_o.to).count(acc) && reach.at(acc).count(gen_i.from)) {
            gamma_m = true;
            break;
          }
        }
        for (const auto& acc : acc_claim) {
          if (reach.at(gen_o.to).count(acc) && reach.at(acc).count(gen_i.from)) {
            gamma_a = true;
            break;
          }
        }
      }
      out.k.push_back({o, i});
      out.gamma_m.push_back(gamma_m);
      out.gamma_a.push_back(gamma_a);
    }
  }
  return out;
}

std::map<std::string, Constraint> compute_constraint(const Automaton& model, const Automaton& claim) {
  const Verdict verdict = model_check(model, claim);
  if (verdict.value != VerdictValue::Unknown) {
    throw InputError("constraint computation requires a possibly satisfied claim, got verdict " +
                     to_string(verdict.value));
  }

  const IntersectionAutomaton icl = clean_intersection(intersect(model, claim));
  auto skeletons = extract_subproperty_skeletons(icl, model);

  std::map<std::string, Constraint> out;
  for (const auto& [box, sk] : skeletons) {
    Constraint c;
    c.box = box;
    for (SubPropertyKind kind : {SubPropertyKind::S, SubPropertyKind::Sp}) {
      SubProperty sp;
      sp.box = box;
      sp.kind = kind;
      sp.inner = sk.inner;
      sp.incoming = sk.incoming;
      sp.outgoing = sk.outgoing;
      const GrSets gr = compute_g_r(icl, sk, kind);
      sp.g = gr.g;
      sp.r = gr.r;
      ReachabilityRelation rel = compute_reachability(icl, sk, kind);
      sp.k = std::move(rel.k);
      sp.gamma_m = std::move(rel.gamma_m);
      sp.gamma_a = std::move(rel.gamma_a);
      (kind == SubPropertyKind::S ? c.s : c.sp) = std::move(sp);
    }

    // Bypass check: is a violating run possible without this box at all?
    Automaton without = icl.underlying;
    for (const auto& id : sk.inner.states) {
      without.states.erase(id);
      without.initial.erase(id);
      without.accepting.erase(id);
    }
    for (auto it = without.transitions.begin(); it != without.transitions.end();) {
      if (!without.states.count(it->from) || !without.states.count(it->to)) {
        it = without.transitions.erase(it);
      } else {
        ++it;
      }
    }
    c.y_witness = find_accepting_lasso(without);
    c.y_flag = c.y_witness.has_value();
    out.emplace(box, std::move(c));
  }
  return out;
}

}  // namespace ibmc
