#include "ibmc/replacement_check.hpp"

#include <algorithm>

namespace ibmc {

SubRepProduct intersect_subproperty_replacement(const SubProperty& s, const Replacement& r) {
  if (s.box != r.box) throw InputError("sub-property and replacement target different boxes");

  SubRepProduct out;
  std::vector<ProductSeed> seeds;

  // Incoming entries: same model-side source, jointly satisfiable guards,
  // one target per counter value.
  for (std::size_t ri = 0; ri < r.incoming.size(); ++ri) {
    for (std::size_t si = 0; si < s.incoming.size(); ++si) {
      if (r.incoming[ri].from != s.incoming[si].from) continue;
      auto guard = conjoin(r.incoming[ri].guard, s.incoming[si].guard);
      if (!guard) continue;
      for (int x = 0; x <= 2; ++x) {
        SubRepProduct::InEntry entry;
        entry.model_source = r.incoming[ri].from;
        entry.guard = *guard;
        entry.target = product_state_id(r.incoming[ri].to, s.incoming[si].to, x);
        entry.from_replacement = ri;
        entry.from_subproperty = si;
        if (s.g.count(si)) out.g.insert(out.incoming.size());
        out.incoming.push_back(entry);
        seeds.push_back({r.incoming[ri].to, s.incoming[si].to, x});
      }
    }
  }

  out.product = intersect(r.inner, s.inner, seeds);

  // Outgoing entries: same model-side target; only counters that actually
  // materialized can serve as sources.
  for (std::size_t ri = 0; ri < r.outgoing.size(); ++ri) {
    for (std::size_t si = 0; si < s.outgoing.size(); ++si) {
      if (r.outgoing[ri].to != s.outgoing[si].to) continue;
      auto guard = conjoin(r.outgoing[ri].guard, s.outgoing[si].guard);
      if (!guard) continue;
      for (int x = 0; x <= 2; ++x) {
        const std::string source = product_state_id(r.outgoing[ri].from, s.outgoing[si].from, x);
        if (!out.product.underlying.states.count(source)) continue;
        SubRepProduct::OutEntry entry;
        entry.source = source;
        entry.guard = *guard;
        entry.model_target = r.outgoing[ri].to;
        entry.from_replacement = ri;
        entry.from_subproperty = si;
        if (s.r.count(si)) out.r.insert(out.outgoing.size());
        out.outgoing.push_back(entry);
      }
    }
  }
  return out;
}

namespace {

// Counter carried by the connector edges derived from K. gm/ga say whether
// the abstracted outside path crosses a model/claim accepting state;
// model_acc/claim_acc refer to the landing state's components.
int connector_counter(int x, bool gm, bool ga, bool model_acc, bool claim_acc) {
  if (gm && ga) return 2;
  if (x == 1 && (ga || claim_acc)) return 2;
  if (x == 0 && gm && claim_acc) return 2;
  if (x == 0 && (gm || model_acc)) return 1;
  if (x == 2) return 0;
  return x;
}

}  // namespace

ApproxAutomaton build_approx(const SubProperty& s, const Replacement& r, ApproxKind kind) {
  if (kind == ApproxKind::Under && s.kind != SubPropertyKind::S) {
    throw InputError("under approximation requires the S sub-property");
  }
  if (kind == ApproxKind::Over && s.kind != SubPropertyKind::Sp) {
    throw InputError("over approximation requires the Sp sub-property");
  }
  const Replacement used = kind == ApproxKind::Under ? replacement_completion(r) : r;
  const SubRepProduct base = intersect_subproperty_replacement(s, used);

  ApproxAutomaton out;
  out.kind = kind;
  out.g_state = "g";
  out.r_state = "r";
  out.underlying = base.product.underlying;
  out.underlying.states.insert(out.g_state);
  out.underlying.states.insert(out.r_state);
  out.underlying.initial.insert(out.g_state);
  out.underlying.accepting.insert(out.r_state);
  out.underlying.transitions.insert({out.r_state, Guard::stutter(), out.r_state});

  for (std::size_t idx : base.g) {
    const auto& e = base.incoming[idx];
    out.underlying.transitions.insert({out.g_state, e.guard, e.target});
  }
  for (std::size_t idx : base.r) {
    const auto& e = base.outgoing[idx];
    out.underlying.transitions.insert({e.source, e.guard, out.r_state});
  }

  // Connector edges: one per K pair of the sub-property, per product
  // outgoing entry derived from its outgoing side, per distinct landing
  // pair of a product incoming entry derived from its incoming side.
  for (std::size_t kp = 0; kp < s.k.size(); ++kp) {
    const auto [o_idx, i_idx] = s.k[kp];
    const bool gm = s.gamma_m[kp];
    const bool ga = s.gamma_a[kp];
    for (const auto& eo : base.outgoing) {
      if (eo.from_subproperty != o_idx) continue;
      const ProductStateInfo& src = base.product.info.at(eo.source);
      std::set<std::pair<std::string, std::string>> landings;
      for (const auto& ei : base.incoming) {
        if (ei.from_subproperty != i_idx) continue;
        const ProductStateInfo& dst = base.product.info.at(ei.target);
        landings.insert({dst.model, dst.claim});
      }
      for (const auto& [q, p] : landings) {
        const int y = connector_counter(src.counter, gm, ga, used.inner.is_accepting(q),
                                        s.inner.is_accepting(p));
        out.underlying.transitions.insert({eo.source, Guard::epsilon(), product_state_id(q, p, y)});
      }
    }
  }
  return out;
}

Verdict check_replacement(const Constraint& c, const Replacement& r) {
  if (c.box != r.box) throw InputError("constraint and replacement target different boxes");
  if (c.s.kind != SubPropertyKind::S || c.sp.kind != SubPropertyKind::Sp) {
    throw InputError("constraint sub-properties are mislabeled");
  }

  const ApproxAutomaton under = build_approx(c.s, r, ApproxKind::Under);
  if (auto witness = find_accepting_lasso(under.underlying)) {
    return Verdict{VerdictValue::False, std::move(witness)};
  }
  const ApproxAutomaton over = build_approx(c.sp, r, ApproxKind::Over);
  if (auto witness = find_accepting_lasso(over.underlying)) {
    return Verdict{VerdictValue::Unknown, std::move(witness)};
  }
  if (c.y_flag) {
    return Verdict{VerdictValue::Unknown, c.y_witness};
  }
  return Verdict{VerdictValue::True, std::nullopt};
}

}  // namespace ibmc
