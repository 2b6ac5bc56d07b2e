#include "doctest.h"

#include "generators.hpp"
#include "ibmc/fixtures.hpp"
#include "ibmc/oracle.hpp"
#include "ibmc/product.hpp"
#include "ibmc/refinement.hpp"

using namespace ibmc;

namespace {

Character chr(std::initializer_list<const char*> props) {
  Character c;
  for (const char* p : props) c.props.insert(p);
  return c;
}

}  // namespace

TEST_CASE("intersection of the send protocol with its claim") {
  const Automaton m = fixtures::load_automaton("m_send");
  const Automaton claim = fixtures::load_automaton("a_nphi");

  const IntersectionAutomaton lower = intersect(completion(m), claim);
  CHECK_FALSE(find_accepting_lasso(lower.underlying).has_value());

  const IntersectionAutomaton full = intersect(m, claim);
  CHECK(full.underlying.states.size() == 11);
  CHECK(find_accepting_lasso(full.underlying).has_value());

  // The canonical violating word is in the product language.
  const LassoWord violating{{chr({"start"}), chr({"send"}), chr({"fail"}), chr({"fail"})},
                            {chr({"abort"})}};
  CHECK(oracle::accepts_lasso(full.underlying, violating));

  // Mixed states are exactly the box-rooted ones, initial counters are 0,
  // accepting counters are 2.
  for (const auto& [id, st] : full.info) {
    CHECK(st.mixed == m.is_box(st.model));
    if (full.underlying.initial.count(id)) CHECK(st.counter == 0);
    if (full.underlying.accepting.count(id)) CHECK(st.counter == 2);
  }
  // Every stutter transition stays within one box.
  for (const auto& t : full.delta_p) {
    CHECK(full.info.at(t.from).model == full.info.at(t.to).model);
    CHECK(full.info.at(t.from).mixed);
  }
  // Tags cover all transitions.
  for (const auto& t : full.underlying.transitions) {
    CHECK((full.delta_c.count(t) || full.delta_p.count(t)));
  }
}

TEST_CASE("intersection with an acceptance-free claim is empty") {
  const Automaton m = fixtures::load_automaton("m_send");
  Automaton claim = fixtures::load_automaton("a_nphi");
  claim.accepting.clear();
  const IntersectionAutomaton product = intersect(m, claim);
  CHECK_FALSE(find_accepting_lasso(product.underlying).has_value());
}

TEST_CASE("emptiness witnesses") {
  Automaton one;
  one.kind = Kind::Ba;
  one.propositions.names = {"p"};
  one.states = {"s"};
  one.initial = {"s"};
  one.accepting = {"s"};
  one.transitions.insert({"s", Guard::top(), "s"});
  const auto witness = find_accepting_lasso(one);
  REQUIRE(witness.has_value());
  CHECK(witness->word.stem.empty());
  REQUIRE(witness->word.loop.size() == 1);
  CHECK(witness->word.loop[0].props.empty());

  Automaton dead;
  dead.kind = Kind::Ba;
  dead.propositions.names = {"p"};
  dead.states = {"s"};
  dead.initial = {"s"};
  CHECK_FALSE(find_accepting_lasso(dead).has_value());
}

TEST_CASE("model_check on the protocol fixtures") {
  const Automaton m = fixtures::load_automaton("m_send");
  const Automaton claim = fixtures::load_automaton("a_nphi");

  CheckStats stats;
  const Verdict v = model_check(m, claim, &stats);
  CHECK(v.value == VerdictValue::Unknown);
  REQUIRE(v.witness.has_value());
  CHECK(stats.product_states == 11);
  CHECK(stats.product_states <= 3 * m.states.size() * claim.states.size());

  // The Unknown witness is a possible behavior that violates the claim.
  CHECK(oracle::classify_word(m, v.witness->word) == oracle::RunClassification::Possible);
  bool crosses_box = false;
  const IntersectionAutomaton full = intersect(m, claim);
  for (const auto& id : v.witness->run_loop) crosses_box = crosses_box || full.info.at(id).mixed;
  for (const auto& id : v.witness->run_stem) crosses_box = crosses_box || full.info.at(id).mixed;
  CHECK(crosses_box);

  // A trivially true property: the negation has the empty language.
  PropositionSet props = m.propositions;
  const Automaton nothing = ltl_to_ba(ltl_not(ltl_true()), props);
  CHECK(model_check(m, nothing).value == VerdictValue::True);

  // Plugging the violating sender into the accepting-box variant makes the
  // claim definitely violated.
  const Automaton m_acc = fixtures::load_automaton("m_send_acc");
  const Replacement violating = fixtures::load_replacement("r_violating");
  CHECK(validate_replacement(m_acc, violating).empty());
  const auto [composed, rel] = compose(m_acc, violating);
  const Verdict vf = model_check(composed, claim);
  CHECK(vf.value == VerdictValue::False);
  REQUIRE(vf.witness.has_value());
  CHECK(oracle::classify_word(composed, vf.witness->word) == oracle::RunClassification::Definite);
  CHECK(oracle::accepts_lasso(claim, vf.witness->word));
  CHECK_FALSE(oracle::eval_ltl(parse_ltl("G(send -> F success)", composed.propositions), vf.witness->word));
}

TEST_CASE("claims with boxes are rejected") {
  const Automaton m = fixtures::load_automaton("m_send");
  Automaton bad_claim = fixtures::load_automaton("a_nphi");
  bad_claim.kind = Kind::Iba;
  bad_claim.boxes.insert("p1");
  CHECK_THROWS_AS(model_check(m, bad_claim), InputError);
  CHECK_THROWS_AS(intersect(m, bad_claim), InputError);
}

TEST_CASE("product language matches the membership oracle on random instances") {
  gen::Rng rng(2024);
  const PropositionSet props = gen::props_n(2);
  int instances = 0;
  while (instances < 60) {
    gen::IbaOptions opt;
    opt.max_states = 4;
    const Automaton m = gen::random_iba(rng, props, opt);
    const Automaton c = gen::random_claim(rng, props, 3);
    const IntersectionAutomaton product = intersect(m, c);
    CHECK(product.underlying.states.size() <= 3 * m.states.size() * c.states.size());
    ++instances;
    oracle::for_each_lasso(props, 2, 2, [&](const LassoWord& w) {
      const bool in_product = oracle::accepts_lasso(product.underlying, w);
      const auto cls = oracle::classify_word(m, w);
      const bool in_model = cls != oracle::RunClassification::Rejected;
      const bool in_claim = oracle::accepts_lasso(c, w);
      CHECK_MESSAGE(in_product == (in_model && in_claim),
                    "word ", w.to_string(), " product=", in_product, " model=", in_model,
                    " claim=", in_claim);
      return true;
    });
  }
}

TEST_CASE("witness replay and bounded agreement with the brute force verdict") {
  gen::Rng rng(777);
  PropositionSet props = gen::props_n(1);
  for (int i = 0; i < 60; ++i) {
    gen::IbaOptions opt;
    opt.max_states = 3;
    const Automaton m = gen::random_iba(rng, props, opt);
    const LtlPtr f = gen::random_formula(rng, props, 2);
    const Automaton claim = ltl_to_ba(ltl_not(f), props);
    const Verdict v = model_check(m, claim);
    const Verdict brute = oracle::brute_force_verdict(m, f, 4, 3);
    if (v.value == VerdictValue::True) {
      CHECK(brute.value == VerdictValue::True);
    } else {
      REQUIRE(v.witness.has_value());
      const LassoWord& w = v.witness->word;
      const auto cls = oracle::classify_word(m, w);
      CHECK_FALSE(oracle::eval_ltl(f, w));
      if (v.value == VerdictValue::False) CHECK(cls == oracle::RunClassification::Definite);
      if (v.value == VerdictValue::Unknown) CHECK(cls == oracle::RunClassification::Possible);
      if (w.stem.size() <= 4 && w.loop.size() <= 3) CHECK(brute.value == v.value);
    }
  }
}

TEST_CASE("verdicts are monotone under composition") {
  gen::Rng rng(31337);
  const PropositionSet props = gen::props_n(2);
  int done = 0;
  while (done < 80) {
    gen::IbaOptions opt;
    opt.max_states = 4;
    opt.min_boxes = 1;
    const Automaton m = gen::random_iba(rng, props, opt);
    if (m.boxes.empty()) continue;
    const Automaton c = gen::random_claim(rng, props, 2);
    std::vector<std::string> boxes(m.boxes.begin(), m.boxes.end());
    const std::string box = boxes[static_cast<std::size_t>(gen::pick(rng, 0, static_cast<int>(boxes.size()) - 1))];
    const Replacement r = gen::random_replacement(rng, m, box, 3);
    REQUIRE(validate_replacement(m, r).empty());
    const Verdict before = model_check(m, c);
    const Verdict after = model_check(compose(m, r).first, c);
    if (before.value == VerdictValue::True) CHECK(after.value == VerdictValue::True);
    if (before.value == VerdictValue::False) CHECK(after.value == VerdictValue::False);
    ++done;
  }
}
