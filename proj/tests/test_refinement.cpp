#include "doctest.h"

#include <algorithm>

#include "generators.hpp"
#include "ibmc/fixtures.hpp"
#include "ibmc/oracle.hpp"
#include "ibmc/refinement.hpp"

using namespace ibmc;

TEST_CASE("validate_replacement on the partial sender") {
  const Automaton host = fixtures::load_automaton("m_send");
  const Replacement r = fixtures::load_replacement("r_send1");
  CHECK(validate_replacement(host, r).empty());

  Replacement missing = r;
  missing.incoming.clear();
  auto violations = validate_replacement(host, missing);
  REQUIRE_FALSE(violations.empty());
  CHECK(std::any_of(violations.begin(), violations.end(),
                    [](const Violation& v) { return v.code == "missing-incoming"; }));

  Replacement accepting = r;
  accepting.inner.accepting.insert("q15");
  violations = validate_replacement(host, accepting);
  CHECK(std::any_of(violations.begin(), violations.end(),
                    [](const Violation& v) { return v.code == "accepting-forbidden"; }));

  Replacement wrong_box = r;
  wrong_box.box = "q2";
  violations = validate_replacement(host, wrong_box);
  CHECK(std::any_of(violations.begin(), violations.end(),
                    [](const Violation& v) { return v.code == "box-not-box"; }));
}

TEST_CASE("compose plugs the sender into the protocol") {
  const Automaton host = fixtures::load_automaton("m_send");
  const Replacement r = fixtures::load_replacement("r_send1");
  const auto [composed, relation] = compose(host, r);

  CHECK_FALSE(composed.states.count("send1"));
  CHECK(composed.states.count("q14"));
  CHECK(composed.boxes == std::set<std::string>{"q16", "send2"});
  CHECK(composed.transitions.count({"q1", Guard::require({{"send", false}, {"start", true}}), "q14"}));
  CHECK(composed.transitions.count({"q17", Guard::require({{"fail", true}, {"send", false}}), "send2"}));
  CHECK(validate(composed).empty());

  // The canonical relation witnesses the refinement.
  const RefinementCheck check = check_refinement(host, composed, relation);
  CHECK_MESSAGE(check.ok, (check.notes.empty() ? std::string() : check.notes[0]));

  // Inner state ids that already exist in the host are rejected.
  Replacement clash = r;
  clash.inner.states.insert("q2");
  CHECK_THROWS_AS(compose(host, clash), InputError);
}

TEST_CASE("refinement check accepts the identity and the full implementation") {
  const Automaton m = fixtures::load_automaton("m_send");
  CHECK(check_refinement(m, m, identity_relation(m)).ok);

  const Automaton n = fixtures::load_automaton("n_fig3");
  const RefinementRelation rel = fixtures::load_relation("n_fig3");
  const RefinementCheck check = check_refinement(m, n, rel);
  CHECK_MESSAGE(check.ok, (check.notes.empty() ? std::string() : check.notes[0]));
}

TEST_CASE("refinement check rejects a regular state refined into a box") {
  Automaton abstract;
  abstract.kind = Kind::Iba;
  abstract.propositions.names = {"p"};
  abstract.states = {"s"};
  abstract.initial = {"s"};

  Automaton concrete = abstract;
  concrete.boxes = {"s"};

  const RefinementCheck check = check_refinement(abstract, concrete, identity_relation(abstract));
  CHECK_FALSE(check.ok);
  CHECK(std::find(check.violated.begin(), check.violated.end(), 4) != check.violated.end());
}

TEST_CASE("replacement refinement is reflexive and catches missing entries") {
  const Replacement r = fixtures::load_replacement("r_send1");
  CHECK(check_replacement_refinement(r, r, identity_relation(r.inner)).ok);

  Replacement pruned = r;
  pruned.incoming.clear();
  const RefinementCheck check = check_replacement_refinement(r, pruned, identity_relation(r.inner));
  CHECK_FALSE(check.ok);
  CHECK(std::find(check.violated.begin(), check.violated.end(), 2) != check.violated.end());
}

TEST_CASE("splitting an inner box yields a replacement refinement") {
  const Automaton host = fixtures::load_automaton("m_send");
  const Replacement coarse = fixtures::load_replacement("r_send1");

  // Refine the inner box q16 of the sender into a two-state wait machine.
  Replacement wait;
  wait.box = "q16";
  wait.inner.kind = Kind::Iba;
  wait.inner.propositions = coarse.inner.propositions;
  wait.inner.states = {"w1", "w2"};
  wait.inner.transitions.insert({"w1", Guard::require({{"wait", true}}), "w2"});
  wait.incoming = {{"q15", Guard::require({{"wait", true}}), "w1"}};
  wait.outgoing = {{"w2", Guard::require({{"timeout", true}}), "q17"},
                   {"w1", Guard::require({{"timeout", true}}), "q17"},
                   {"w2", Guard::require({{"ack", true}}), "q18"},
                   {"w1", Guard::require({{"ack", true}}), "q18"}};
  REQUIRE(validate_replacement(coarse.inner, wait).empty());

  Replacement fine = coarse;
  auto [refined_inner, inner_rel] = compose(coarse.inner, wait);
  fine.inner = refined_inner;

  const RefinementRelation rel = inner_rel;  // identity on survivors, q16 -> {w1, w2}
  const RefinementCheck check = check_replacement_refinement(coarse, fine, rel);
  CHECK_MESSAGE(check.ok, (check.notes.empty() ? std::string() : check.notes[0]));

  // The plugging principle: compositions with the two replacements refine
  // each other through the induced relation (identity outside the inner
  // box, the inner box mapped to the states that replaced it).
  const auto [with_coarse, rel_coarse] = compose(host, coarse);
  const auto [with_fine, rel_fine] = compose(host, fine);
  (void)rel_coarse;
  (void)rel_fine;
  RefinementRelation induced;
  for (const auto& id : with_coarse.states) {
    if (id != wait.box) induced.pairs.insert({id, id});
  }
  for (const auto& id : wait.inner.states) induced.pairs.insert({wait.box, id});
  const RefinementCheck plugged = check_refinement(with_coarse, with_fine, induced);
  CHECK_MESSAGE(plugged.ok, (plugged.notes.empty() ? std::string() : plugged.notes[0]));
}

TEST_CASE("refinement is reflexive and composition refines on random instances") {
  gen::Rng rng(555);
  const PropositionSet props = gen::props_n(2);
  int done = 0;
  while (done < 80) {
    gen::IbaOptions opt;
    opt.max_states = 4;
    opt.min_boxes = 1;
    const Automaton m = gen::random_iba(rng, props, opt);
    CHECK(check_refinement(m, m, identity_relation(m)).ok);
    if (m.boxes.empty()) continue;
    std::vector<std::string> boxes(m.boxes.begin(), m.boxes.end());
    const std::string box = boxes[static_cast<std::size_t>(gen::pick(rng, 0, static_cast<int>(boxes.size()) - 1))];
    const Replacement r = gen::random_replacement(rng, m, box, 3);
    REQUIRE(validate_replacement(m, r).empty());
    const auto [composed, rel] = compose(m, r);
    const RefinementCheck check = check_refinement(m, composed, rel);
    CHECK_MESSAGE(check.ok, (check.notes.empty() ? std::string() : check.notes[0]));
    ++done;
  }
}

TEST_CASE("refinement is transitive along composed replacements") {
  gen::Rng rng(556);
  const PropositionSet props = gen::props_n(2);
  int done = 0;
  while (done < 40) {
    gen::IbaOptions opt;
    opt.max_states = 3;
    opt.min_boxes = 1;
    const Automaton m = gen::random_iba(rng, props, opt);
    if (m.boxes.empty()) continue;
    std::vector<std::string> boxes(m.boxes.begin(), m.boxes.end());
    const std::string box = boxes[0];
    const Replacement r1 = gen::random_replacement(rng, m, box, 2);
    const auto [n, rel1] = compose(m, r1);
    if (n.boxes.empty()) {
      ++done;
      continue;
    }
    std::vector<std::string> boxes2(n.boxes.begin(), n.boxes.end());
    const std::string box2 = boxes2[static_cast<std::size_t>(gen::pick(rng, 0, static_cast<int>(boxes2.size()) - 1))];
    Replacement r2 = gen::random_replacement(rng, n, box2, 2);
    // Avoid id collisions with the first replacement's states.
    r2 = rename_inner_states(r2, "y");
    const auto [o, rel2] = compose(n, r2);

    RefinementRelation chained;
    for (const auto& [a, b] : rel1.pairs) {
      for (const auto& [b2, c] : rel2.pairs) {
        if (b == b2) chained.pairs.insert({a, c});
      }
    }
    const RefinementCheck check = check_refinement(m, o, chained);
    CHECK_MESSAGE(check.ok, (check.notes.empty() ? std::string() : check.notes[0]));
    ++done;
  }
}

TEST_CASE("language preservation under composition on bounded lassos") {
  gen::Rng rng(557);
  const PropositionSet props = gen::props_n(1);
  int done = 0;
  while (done < 40) {
    gen::IbaOptions opt;
    opt.max_states = 3;
    opt.min_boxes = 1;
    const Automaton m = gen::random_iba(rng, props, opt);
    if (m.boxes.empty()) continue;
    std::vector<std::string> boxes(m.boxes.begin(), m.boxes.end());
    const Replacement r = gen::random_replacement(rng, m, boxes[0], 2);
    const Automaton n = compose(m, r).first;
    ++done;
    oracle::for_each_lasso(props, 2, 2, [&](const LassoWord& w) {
      const auto before = oracle::classify_word(m, w);
      const auto after = oracle::classify_word(n, w);
      if (before == oracle::RunClassification::Definite) {
        CHECK(after == oracle::RunClassification::Definite);
      }
      if (before == oracle::RunClassification::Rejected) {
        CHECK(after == oracle::RunClassification::Rejected);
      }
      return true;
    });
  }
}
