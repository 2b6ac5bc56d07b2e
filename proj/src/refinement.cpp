#include "ibmc/refinement.hpp"

#include <algorithm>
#include <map>

namespace ibmc {

std::vector<Violation> validate_replacement(const Automaton& host, const Replacement& r) {
  std::vector<Violation> out;
  if (!host.is_box(r.box)) {
    out.push_back({"box-not-box", r.box, "replacement target is not a box of the host"});
    std::sort(out.begin(), out.end());
    return out;
  }
  for (const auto& v : validate(r.inner)) {
    out.push_back({"inner-" + v.code, v.subject, v.detail});
  }
  if (!host.is_initial(r.box) && !r.inner.initial.empty()) {
    for (const auto& id : r.inner.initial) {
      out.push_back({"initial-forbidden", id, "box is not initial in the host"});
    }
  }
  if (!host.is_accepting(r.box) && !r.inner.accepting.empty()) {
    for (const auto& id : r.inner.accepting) {
      out.push_back({"accepting-forbidden", id, "box is not accepting in the host"});
    }
  }

  // Every host transition touching the box needs a counterpart.
  for (const auto& t : host.transitions) {
    if (t.to == r.box && t.from != r.box) {
      const bool covered = std::any_of(r.incoming.begin(), r.incoming.end(), [&](const Transition& e) {
        return e.from == t.from && e.guard == t.guard && r.inner.states.count(e.to);
      });
      if (!covered) out.push_back({"missing-incoming", t.to_string(), ""});
    }
    if (t.from == r.box && t.to != r.box) {
      const bool covered = std::any_of(r.outgoing.begin(), r.outgoing.end(), [&](const Transition& e) {
        return e.to == t.to && e.guard == t.guard && r.inner.states.count(e.from);
      });
      if (!covered) out.push_back({"missing-outgoing", t.to_string(), ""});
    }
    if (t.from == r.box && t.to == r.box) {
      const bool covered = std::any_of(r.inner.transitions.begin(), r.inner.transitions.end(),
                                       [&](const Transition& e) { return e.guard == t.guard; });
      if (!covered) out.push_back({"missing-selfloop", t.to_string(), ""});
    }
  }

  // Entries must mirror host transitions and attach to declared states.
  for (const auto& e : r.incoming) {
    const bool mirrors = host.transitions.count({e.from, e.guard, r.box}) != 0;
    if (!mirrors) out.push_back({"stray-incoming", e.to_string(), "no matching host transition into the box"});
    if (!r.inner.states.count(e.to)) out.push_back({"stray-incoming", e.to_string(), "unknown inner target"});
  }
  for (const auto& e : r.outgoing) {
    const bool mirrors = host.transitions.count({r.box, e.guard, e.to}) != 0;
    if (!mirrors) out.push_back({"stray-outgoing", e.to_string(), "no matching host transition out of the box"});
    if (!r.inner.states.count(e.from)) out.push_back({"stray-outgoing", e.to_string(), "unknown inner source"});
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RefinementRelation identity_relation(const Automaton& a) {
  RefinementRelation rel;
  for (const auto& id : a.states) rel.pairs.insert({id, id});
  return rel;
}

Replacement rename_inner_states(const Replacement& r, const std::string& prefix) {
  Replacement out;
  out.box = r.box;
  out.inner.kind = r.inner.kind;
  out.inner.propositions = r.inner.propositions;
  auto rename = [&](const std::string& id) { return prefix + id; };
  for (const auto& id : r.inner.states) out.inner.states.insert(rename(id));
  for (const auto& id : r.inner.boxes) out.inner.boxes.insert(rename(id));
  for (const auto& id : r.inner.initial) out.inner.initial.insert(rename(id));
  for (const auto& id : r.inner.accepting) out.inner.accepting.insert(rename(id));
  for (const auto& t : r.inner.transitions) out.inner.transitions.insert({rename(t.from), t.guard, rename(t.to)});
  for (const auto& e : r.incoming) out.incoming.push_back({e.from, e.guard, rename(e.to)});
  for (const auto& e : r.outgoing) out.outgoing.push_back({rename(e.from), e.guard, e.to});
  return out;
}

Replacement replacement_completion(const Replacement& r) {
  Replacement out;
  out.box = r.box;
  out.inner = completion(r.inner);
  for (const auto& e : r.incoming) {
    if (out.inner.states.count(e.to)) out.incoming.push_back(e);
  }
  for (const auto& e : r.outgoing) {
    if (out.inner.states.count(e.from)) out.outgoing.push_back(e);
  }
  return out;
}

std::pair<Automaton, RefinementRelation> compose(const Automaton& host, const Replacement& r) {
  for (const auto& id : r.inner.states) {
    if (host.states.count(id) && id != r.box) {
      throw InputError("state id collision between host and replacement: " + id);
    }
    if (id == r.box) throw InputError("replacement reuses the box id as an inner state: " + id);
  }

  Automaton out;
  out.kind = Kind::Iba;
  out.propositions = merge(host.propositions, r.inner.propositions);
  for (const auto& id : host.states) {
    if (id != r.box) out.states.insert(id);
  }
  out.states.insert(r.inner.states.begin(), r.inner.states.end());
  for (const auto& id : host.boxes) {
    if (id != r.box) out.boxes.insert(id);
  }
  out.boxes.insert(r.inner.boxes.begin(), r.inner.boxes.end());
  for (const auto& id : host.initial) {
    if (id != r.box) out.initial.insert(id);
  }
  out.initial.insert(r.inner.initial.begin(), r.inner.initial.end());
  for (const auto& id : host.accepting) {
    if (id != r.box) out.accepting.insert(id);
  }
  out.accepting.insert(r.inner.accepting.begin(), r.inner.accepting.end());
  for (const auto& t : host.transitions) {
    if (t.from != r.box && t.to != r.box) out.transitions.insert(t);
  }
  out.transitions.insert(r.inner.transitions.begin(), r.inner.transitions.end());
  for (const auto& e : r.incoming) out.transitions.insert(e);
  for (const auto& e : r.outgoing) out.transitions.insert(e);

  RefinementRelation rel;
  for (const auto& id : host.states) {
    if (id != r.box) rel.pairs.insert({id, id});
  }
  for (const auto& id : r.inner.states) rel.pairs.insert({r.box, id});
  return {out, rel};
}

namespace {

void fail(RefinementCheck& res, int condition, std::string note) {
  res.ok = false;
  if (std::find(res.violated.begin(), res.violated.end(), condition) == res.violated.end()) {
    res.violated.push_back(condition);
  }
  res.notes.push_back(std::move(note));
}

}  // namespace

RefinementCheck check_refinement(const Automaton& abstract, const Automaton& concrete,
                                 const RefinementRelation& rel) {
  RefinementCheck res;

  const auto& ap_a = abstract.propositions.names;
  const auto& ap_c = concrete.propositions.names;
  if (!std::includes(ap_c.begin(), ap_c.end(), ap_a.begin(), ap_a.end())) {
    fail(res, 0, "concrete alphabet does not contain the abstract alphabet");
  }
  for (const auto& [qa, qc] : rel.pairs) {
    if (!abstract.states.count(qa)) fail(res, 0, "relation names unknown abstract state " + qa);
    if (!concrete.states.count(qc)) fail(res, 0, "relation names unknown concrete state " + qc);
  }
  if (!res.ok) return res;

  std::map<std::string, std::vector<std::string>> fwd;  // abstract -> concrete
  std::map<std::string, std::vector<std::string>> bwd;  // concrete -> abstract
  for (const auto& [qa, qc] : rel.pairs) {
    fwd[qa].push_back(qc);
    bwd[qc].push_back(qa);
  }
  auto related = [&](const std::string& qa, const std::string& qc) {
    return rel.pairs.count({qa, qc}) != 0;
  };

  // 1: each regular abstract state pairs with exactly one regular concrete state.
  for (const auto& qa : abstract.states) {
    if (abstract.is_box(qa)) continue;
    int regular_partners = 0;
    for (const auto& qc : fwd[qa]) {
      if (!concrete.is_box(qc)) ++regular_partners;
    }
    if (regular_partners != 1) {
      fail(res, 1, "regular state " + qa + " has " + std::to_string(regular_partners) + " regular partners");
    }
  }
  // 2: each concrete state pairs with exactly one abstract state.
  for (const auto& qc : concrete.states) {
    if (bwd[qc].size() != 1) {
      fail(res, 2, "concrete state " + qc + " has " + std::to_string(bwd[qc].size()) + " abstract partners");
    }
  }
  for (const auto& [qa, qc] : rel.pairs) {
    // 3: concrete initial implies abstract initial.
    if (concrete.is_initial(qc) && !abstract.is_initial(qa)) fail(res, 3, qc + " initial but " + qa + " is not");
    // 4: concrete box implies abstract box.
    if (concrete.is_box(qc) && !abstract.is_box(qa)) fail(res, 4, qc + " is a box but " + qa + " is not");
    // 5: concrete accepting implies abstract accepting.
    if (concrete.is_accepting(qc) && !abstract.is_accepting(qa)) {
      fail(res, 5, qc + " accepting but " + qa + " is not");
    }
    // 6: abstract initial regular states stay initial and regular.
    if (abstract.is_initial(qa) && !abstract.is_box(qa) &&
        !(concrete.is_initial(qc) && !concrete.is_box(qc))) {
      fail(res, 6, qa + " is initial+regular but " + qc + " is not");
    }
    // 7: abstract accepting regular states stay accepting and regular.
    if (abstract.is_accepting(qa) && !abstract.is_box(qa) &&
        !(concrete.is_accepting(qc) && !concrete.is_box(qc))) {
      fail(res, 7, qa + " is accepting+regular but " + qc + " is not");
    }
  }

  // 8: abstract transitions are simulated, either directly or inside the
  // refinement of a box (some related state fires the same guard into a
  // state related to the abstract target).
  for (const auto& [qa, qc] : rel.pairs) {
    for (const auto& ta : abstract.transitions) {
      if (ta.from != qa) continue;
      bool direct = false;
      for (const auto& tc : concrete.transitions) {
        if (tc.from == qc && tc.guard == ta.guard && related(ta.to, tc.to)) {
          direct = true;
          break;
        }
      }
      if (direct) continue;
      bool via_box = false;
      if (abstract.is_box(qa)) {
        for (const auto& tc : concrete.transitions) {
          if (tc.guard == ta.guard && related(qa, tc.from) && related(ta.to, tc.to)) {
            via_box = true;
            break;
          }
        }
      }
      if (!via_box) fail(res, 8, "no counterpart for " + ta.to_string() + " at pair (" + qa + "," + qc + ")");
    }
  }
  // 9: concrete transitions map back to abstract transitions or stay
  // inside the refinement of a box.
  for (const auto& [qa, qc] : rel.pairs) {
    for (const auto& tc : concrete.transitions) {
      if (tc.from != qc) continue;
      bool mapped = false;
      for (const auto& ta : abstract.transitions) {
        if (ta.from == qa && ta.guard == tc.guard && related(ta.to, tc.to)) {
          mapped = true;
          break;
        }
      }
      if (mapped) continue;
      if (abstract.is_box(qa) && related(qa, tc.to)) continue;
      fail(res, 9, "no abstract source for " + tc.to_string() + " at pair (" + qa + "," + qc + ")");
    }
  }
  return res;
}

RefinementCheck check_replacement_refinement(const Replacement& coarse, const Replacement& fine,
                                             const RefinementRelation& rel) {
  if (coarse.box != fine.box) throw InputError("replacements target different boxes");

  RefinementCheck res = check_refinement(coarse.inner, fine.inner, rel);
  if (!res.ok) {
    // Inner refinement failures count as condition 1 here.
    res.violated = {1};
  }
  auto related = [&](const std::string& qa, const std::string& qc) {
    return rel.pairs.count({qa, qc}) != 0;
  };

  // 2: every coarse incoming entry has a fine counterpart with related target.
  for (const auto& em : coarse.incoming) {
    const bool found = std::any_of(fine.incoming.begin(), fine.incoming.end(), [&](const Transition& en) {
      return en.guard == em.guard && related(em.to, en.to);
    });
    if (!found) fail(res, 2, "no fine incoming entry matches " + em.to_string());
  }
  // 3: every coarse outgoing entry has a fine counterpart with related source.
  for (const auto& em : coarse.outgoing) {
    const bool found = std::any_of(fine.outgoing.begin(), fine.outgoing.end(), [&](const Transition& en) {
      return en.guard == em.guard && related(em.from, en.from);
    });
    if (!found) fail(res, 3, "no fine outgoing entry matches " + em.to_string());
  }
  // 4: every fine incoming entry maps back to exactly one coarse entry.
  for (const auto& en : fine.incoming) {
    const auto count = std::count_if(coarse.incoming.begin(), coarse.incoming.end(), [&](const Transition& em) {
      return em.guard == en.guard && related(em.to, en.to);
    });
    if (count != 1) {
      fail(res, 4, en.to_string() + " maps to " + std::to_string(count) + " coarse incoming entries");
    }
  }
  // 5: every fine outgoing entry maps back to exactly one coarse entry.
  for (const auto& en : fine.outgoing) {
    const auto count = std::count_if(coarse.outgoing.begin(), coarse.outgoing.end(), [&](const Transition& em) {
      return em.guard == en.guard && related(em.from, en.from);
    });
    if (count != 1) {
      fail(res, 5, en.to_string() + " maps to " + std::to_string(count) + " coarse outgoing entries");
    }
  }
  return res;
}

}  // namespace ibmc
