#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"

using namespace grnhoare;
using namespace grnhoare::testing;

namespace {

bool valid_everywhere(const Network& net, const Assertion& a) {
  bool ok = true;
  for_all_pairs(net, [&](const State& s, const Valuation& k) { ok = ok && eval_assertion(a, s, k); });
  return ok;
}

AssertionPtr wp_of(const Network& net, const std::string& program, const AssertionPtr& q,
                   bool simplify_each_step = false) {
  return wp(net, *parse_program(net, program), q, {simplify_each_step}).wp;
}

}  // namespace

TEST(PhiOmega, FeedforwardSigmaOnly) {
  const Network net = feedforward();
  const int sigma = *net.find_multiplex("sigma");
  const std::vector<int> omega{sigma};
  // b is regulated by lambda (!c>=1) and sigma (a>=1); only sigma is active.
  const AssertionPtr expected = parse_assertion(net, "!(!(c>=1)) & a>=1");
  EXPECT_TRUE(equivalent(net, *phi_omega(net, 1, omega), *expected));
  EXPECT_TRUE(equivalent(net, *phi_omega(net, 1, omega), *parse_assertion(net, "c=1 & a=1")));
}

TEST(PhiOmega, UnregulatedVariableIsTrue) {
  const Network net = feedforward();
  EXPECT_EQ(phi_omega(net, 0, std::uint32_t{0})->kind, Assertion::Kind::True);
}

TEST(PhiOmega, Fig1BothResources) {
  const Network net = fig1();
  const std::vector<int> omega{*net.find_multiplex("mu1"), *net.find_multiplex("mu3")};
  EXPECT_TRUE(equivalent(net, *phi_omega(net, 0, omega), *parse_assertion(net, "a>=2 & !(b>=1)")));
}

TEST(PhiOmega, RejectsForeignMultiplex) {
  const Network net = feedforward();
  const std::vector<int> omega{*net.find_multiplex("l")};
  try {
    phi_omega(net, 1, omega);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAPredecessorSubset);
  }
}

TEST(PhiOmega, ExactlyOneHoldsAndMatchesResources) {
  std::mt19937 rng(31);
  for (int round = 0; round < 50; ++round) {
    const Network net = random_network(rng);
    const Valuation k{std::vector<int>(net.param_count(), 0)};
    for (const State& s : enumerate_states(net)) {
      for (std::size_t v = 0; v < net.variable_count(); ++v) {
        const std::uint32_t subsets = 1u << net.predecessors(v).size();
        int holding = 0;
        for (std::uint32_t mask = 0; mask < subsets; ++mask) {
          if (eval_assertion(*phi_omega(net, v, mask), s, k)) {
            ++holding;
            ASSERT_EQ(mask, resource_mask(net, s, v));
          }
        }
        ASSERT_EQ(holding, 1);
      }
    }
  }
}

TEST(PhiDirection, AgreesWithFocalLevel) {
  std::mt19937 rng(37);
  for (int round = 0; round < 40; ++round) {
    const Network net = random_network(rng);
    for (std::size_t v = 0; v < net.variable_count(); ++v) {
      const AssertionPtr up = phi_plus(net, v), down = phi_minus(net, v), eq = phi_eq(net, v);
      for_all_pairs(net, [&](const State& s, const Valuation& k) {
        const int f = focal_level(net, k, s, v);
        ASSERT_EQ(eval_assertion(*up, s, k), f > s[v]);
        ASSERT_EQ(eval_assertion(*down, s, k), f < s[v]);
        ASSERT_EQ(eval_assertion(*eq, s, k), f == s[v]);
      });
    }
  }
}

TEST(PhiDirection, StructuralValidities) {
  std::mt19937 rng(41);
  for (int round = 0; round < 30; ++round) {
    const Network net = random_network(rng);
    for (std::size_t v = 0; v < net.variable_count(); ++v) {
      const AssertionPtr up = phi_plus(net, v), down = phi_minus(net, v), eq = phi_eq(net, v);
      const int vi = static_cast<int>(v);
      const int bound = net.variable(v).bound;
      ASSERT_TRUE(valid_everywhere(net, *disj({up, down, eq})));
      ASSERT_TRUE(valid_everywhere(net, *negate(conj({up, down}))));
      ASSERT_TRUE(valid_everywhere(net, *implies(up, atom(Cmp::Lt, var_term(vi), constant(bound)))));
      ASSERT_TRUE(valid_everywhere(net, *implies(down, atom(Cmp::Gt, var_term(vi), constant(0)))));
    }
  }
}

TEST(WpStep, InstructionRules) {
  const Network net = feedforward();
  const AssertionPtr q = parse_assertion(net, "b=0");
  EXPECT_EQ(to_string(net, *wp_step(net, *assign(1, 1), q)), "1=0");
  EXPECT_EQ(to_string(net, *wp_step(net, *assert_program(parse_assertion(net, "a=1")), q)), "a=1 & b=0");

  const AssertionPtr inc_wp = wp_step(net, *inc(1), q);
  EXPECT_TRUE(structurally_equal(*inc_wp, *conj({phi_plus(net, 1), parse_assertion(net, "b+1=0")})));
  const AssertionPtr dec_wp = wp_step(net, *dec(1), q);
  EXPECT_TRUE(structurally_equal(*dec_wp, *conj({phi_minus(net, 1), parse_assertion(net, "b-1=0")})));
  EXPECT_THROW(wp_step(net, *epsilon(), q), Error);
}

TEST(WpCompound, RulesOnSmallPrograms) {
  const Network net = feedforward();
  const AssertionPtr q = parse_assertion(net, "b=1");
  EXPECT_EQ(wp_of(net, "eps", q), q);
  EXPECT_TRUE(structurally_equal(*wp_of(net, "forall(b:=1, eps)", q),
                                 *parse_assertion(net, "1=1 & b=1")));
  EXPECT_TRUE(structurally_equal(*wp_of(net, "exists(b:=0, eps)", q),
                                 *parse_assertion(net, "0=1 | b=1")));
  EXPECT_TRUE(structurally_equal(*wp_of(net, "if a=1 then b:=1 else eps end", q),
                                 *parse_assertion(net, "(a=1 & 1=1) | (!(a=1) & b=1)")));
}

TEST(WpChain, FeedforwardDerivations) {
  const Network net = feedforward();
  const AssertionPtr post = parse_assertion(net, "b=0");
  const AssertionPtr q1 = wp_of(net, "b-", post);
  EXPECT_TRUE(equivalent(net, *q1, *data_assertion(net, "q1")));
  const AssertionPtr q2 = wp(net, *parse_program(net, "c+"), q1).wp;
  EXPECT_TRUE(equivalent(net, *q2, *data_assertion(net, "q2")));
  EXPECT_TRUE(equivalent(net, *wp_of(net, "b+; c+; b-", post), *data_assertion(net, "q3")));
  EXPECT_TRUE(equivalent(net, *wp_of(net, "b+; b-", post), *data_assertion(net, "q4")));
  EXPECT_FALSE(check_satisfiability(net, *wp_of(net, "b+; b-", post)));
  EXPECT_TRUE(equivalent(net, *wp_of(net, "c+", post), *data_assertion(net, "q5")));
}

TEST(WpChain, SimplifiedDerivationPrintsCompactly) {
  const Network net = feedforward();
  const AssertionPtr s = wp_of(net, "c+", parse_assertion(net, "b=0"), true);
  EXPECT_TRUE(equivalent(net, *s, *data_assertion(net, "q5")));
  EXPECT_LE(node_count(*s), node_count(*data_assertion(net, "q5")));
}

TEST(WpOptions, SimplifyEachStepPreservesMeaning) {
  std::mt19937 rng(43);
  for (int round = 0; round < 120; ++round) {
    const Network net = random_network(rng, {3, 2, 2, 200});
    const ProgramPtr p = random_program(rng, net, 3);
    const AssertionPtr q = random_state_predicate(rng, net);
    const AssertionPtr plain = wp(net, *p, q).wp;
    const ProofOutcome simp = wp(net, *p, q, {true});
    EXPECT_TRUE(simp.simplified);
    ASSERT_TRUE(equivalent(net, *plain, *simp.wp)) << to_string(net, *p);
  }
}

TEST(WpWhile, VerificationConditionsInOrder) {
  const Network net = feedforward();
  const HoareTriple t = load_triple(net, "ffl_p4.triple");
  const DerivedTriple d = derive_triple(net, t);
  EXPECT_TRUE(structurally_equal(*d.outcome.wp, *t.program->invariant));
  ASSERT_EQ(d.outcome.vcs.size(), 2u);
  EXPECT_EQ(d.outcome.vcs[0].kind, VcKind::InvariantPreservation);
  EXPECT_EQ(d.outcome.vcs[1].kind, VcKind::LoopExit);
  EXPECT_EQ(d.outcome.vcs[0].origin.str(), t.program->loc.str());
  EXPECT_EQ(to_string(net, *d.outcome.vcs[1].formula), "!(b<1) & (b=0 & c=1) => b=1");
  EXPECT_TRUE(structurally_equal(*d.final_implication, *implies(t.pre, t.program->invariant)));
}

TEST(WpWhile, NestedLoopsReportInnerFirst) {
  const Network net = feedforward();
  const ProgramPtr p = parse_program(
      net, "while a<1 with true do a+ end; while b<1 with true do while c<1 with true do c+ end end");
  const ProofOutcome out = wp(net, *p, parse_assertion(net, "true"));
  ASSERT_EQ(out.vcs.size(), 6u);
  EXPECT_EQ(out.vcs[0].origin.str(), "1:1");
  EXPECT_EQ(out.vcs[2].origin.str(), "1:55");
  EXPECT_EQ(out.vcs[4].origin.str(), "1:32");
}

TEST(WpOracle, WeakestPreconditionMatchesExecutableRelation) {
  std::mt19937 rng(47);
  for (int round = 0; round < 80; ++round) {
    const Network net = random_network(rng);
    const ProgramPtr p = random_program(rng, net, 3);
    const AssertionPtr q = random_state_predicate(rng, net);
    const AssertionPtr w = wp(net, *p, q).wp;
    ValuationSpace space(net);
    for (std::uint64_t i = 0; i < space.size(); i += 1 + space.size() / 6) {
      const StateGraph g(net, space.at(i));
      for (StateIndex s = 0; s < g.state_count(); ++s) {
        const bool oracle = some_set_satisfies(g, rel(g, *p, s), *q);
        ASSERT_EQ(g.satisfies(s, *w), oracle) << to_string(net, *p) << " at " << state_label(g.state(s));
      }
    }
  }
}
