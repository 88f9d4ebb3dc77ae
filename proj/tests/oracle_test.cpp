#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"

using namespace grnhoare;
using namespace grnhoare::testing;

namespace {

using Status = RelationResult::Status;

StateIndex index_of(const Network& net, std::vector<int> levels) {
  return static_cast<StateIndex>(net.state_index(state(std::move(levels))));
}

ProgramPtr raw_seq(ProgramPtr a, ProgramPtr b) {
  return make_program({Program::Kind::Seq, -1, 0, nullptr, nullptr, {std::move(a), std::move(b)}, {}});
}

Valuation random_valuation(std::mt19937& rng, const Network& net) {
  ValuationSpace space(net);
  return space.at(std::uniform_int_distribution<std::uint64_t>(0, space.size() - 1)(rng));
}

}  // namespace

TEST(Relation, Fig1Forall) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  const RelationResult r = rel(g, *parse_program(net, "forall(a+, b+)"), index_of(net, {0, 0}));
  ASSERT_EQ(r.status, Status::Sets);
  EXPECT_EQ(r.sets, (std::vector<StateSet>{{index_of(net, {0, 1}), index_of(net, {1, 0})}}));
}

TEST(Relation, Fig1ThreeOutcomes) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  const RelationResult r =
      rel(g, *parse_program(net, "forall(a+, b+); exists(a+, b+); exists(eps, b+)"), index_of(net, {0, 0}));
  ASSERT_EQ(r.status, Status::Sets);
  const StateIndex s11 = index_of(net, {1, 1}), s20 = index_of(net, {2, 0}), s21 = index_of(net, {2, 1});
  EXPECT_EQ(r.sets, (std::vector<StateSet>{{s11}, {s11, s20}, {s11, s21}}));
}

TEST(Relation, EpsilonAssignAndAssert) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  const StateIndex s = index_of(net, {2, 0});
  EXPECT_EQ(rel(g, *epsilon(), s).sets, std::vector<StateSet>{{s}});
  EXPECT_EQ(rel(g, *parse_program(net, "a:=0"), s).sets, std::vector<StateSet>{{index_of(net, {0, 0})}});
  EXPECT_EQ(rel(g, *parse_program(net, "assert(a=2)"), s).sets, std::vector<StateSet>{{s}});
  EXPECT_EQ(rel(g, *parse_program(net, "assert(a=1)"), s).status, Status::Infeasible);
  // (2,0) only moves b upward.
  EXPECT_EQ(rel(g, *parse_program(net, "a-"), s).status, Status::Infeasible);
  EXPECT_EQ(rel(g, *parse_program(net, "forall(b+, a-)"), s).status, Status::Infeasible);
  EXPECT_EQ(rel(g, *parse_program(net, "exists(b+, a-)"), s).sets, std::vector<StateSet>{{index_of(net, {2, 1})}});
}

TEST(Relation, WhileRunsUntilGuardFails) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  const RelationResult r = rel(g, *parse_program(net, "while b<1 with true do exists(a+, b+) end"),
                               index_of(net, {0, 0}));
  ASSERT_EQ(r.status, Status::Sets);
  // (0,0)->(0,1); (0,0)->(1,0)->(1,1); (1,0)->(2,0)->(2,1).
  EXPECT_EQ(r.sets, (std::vector<StateSet>{{index_of(net, {0, 1})}, {index_of(net, {1, 1})},
                                           {index_of(net, {2, 1})}}));
}

TEST(Relation, FuelExhaustionOnDivergentLoop) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  const ProgramPtr spin = parse_program(net, "while true with true do eps end");
  EXPECT_EQ(rel(g, *spin, 0, {8, 1000}).status, Status::FuelExhausted);
  const HoareTriple t{parse_assertion(net, "true"), spin, parse_assertion(net, "true")};
  EXPECT_EQ(triple_holds(g, t, {8, 1000}).status, TripleVerdict::Status::Undetermined);
}

TEST(Relation, SetCapRaisesResultTooLarge) {
  const Network net = parse_network("network { var a: 0..1; var b: 0..1; var c: 0..1; }");
  const StateGraph g(net, Valuation{{1, 1, 1}});
  const ProgramPtr p = parse_program(net, "exists(a:=0, a:=1); exists(b:=0, b:=1); exists(c:=0, c:=1)");
  const ProgramPtr fan = forall({p, p});
  try {
    rel(g, *fan, 0, {256, 4});
    FAIL() << "expected ResultTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResultTooLarge);
  }
}

TEST(TripleHolds, Fig1Examples) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  EXPECT_EQ(triple_holds(g, load_triple(net, "fig1_ex1.triple")).status, TripleVerdict::Status::Holds);
  EXPECT_EQ(triple_holds(g, load_triple(net, "fig1_ex3.triple")).status, TripleVerdict::Status::Holds);
  const TripleVerdict v = triple_holds(g, load_triple(net, "fig1_ex2.triple"));
  EXPECT_EQ(v.status, TripleVerdict::Status::Fails);
  EXPECT_EQ(v.witness, state({2, 0}));
}

TEST(TripleHolds, FalsePreconditionHoldsVacuously) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  const HoareTriple t{truth(false), parse_program(net, "a-; a-; a-"), truth(false)};
  EXPECT_EQ(triple_holds(g, t).status, TripleVerdict::Status::Holds);
}

TEST(TripleHolds, DefiniteFailureBeatsExhaustion) {
  const Network net = fig1();
  const StateGraph g(net, fig1_valuation(net));
  const HoareTriple t{truth(true), parse_program(net, "if a=0 then while true with true do eps end else a- end"),
                      truth(true)};
  const TripleVerdict v = triple_holds(g, t, {4, 1000});
  EXPECT_EQ(v.status, TripleVerdict::Status::Fails);
}

TEST(RelationProperties, SetsAreNonEmptyAndCanonical) {
  std::mt19937 rng(53);
  for (int round = 0; round < 150; ++round) {
    const Network net = random_network(rng);
    const StateGraph g(net, random_valuation(rng, net));
    const ProgramPtr p = random_program(rng, net, 3);
    for (StateIndex s = 0; s < g.state_count(); ++s) {
      const RelationResult r = rel(g, *p, s);
      if (r.status != Status::Sets) {
        ASSERT_TRUE(r.sets.empty());
        continue;
      }
      ASSERT_FALSE(r.sets.empty());
      ASSERT_TRUE(std::is_sorted(r.sets.begin(), r.sets.end()));
      for (const StateSet& e : r.sets) {
        ASSERT_FALSE(e.empty());
        ASSERT_TRUE(std::is_sorted(e.begin(), e.end()));
        ASSERT_TRUE(std::adjacent_find(e.begin(), e.end()) == e.end());
      }
    }
  }
}

TEST(RelationProperties, SequenceIsAssociative) {
  std::mt19937 rng(59);
  for (int round = 0; round < 150; ++round) {
    const Network net = random_network(rng);
    const StateGraph g(net, random_valuation(rng, net));
    const ProgramPtr a = random_program(rng, net, 2), b = random_program(rng, net, 2),
                     c = random_program(rng, net, 2);
    const ProgramPtr left = raw_seq(raw_seq(a, b), c), right = raw_seq(a, raw_seq(b, c));
    for (StateIndex s = 0; s < g.state_count(); ++s) {
      const RelationResult l = rel(g, *left, s), r = rel(g, *right, s);
      ASSERT_EQ(l.status, r.status);
      ASSERT_EQ(l.sets, r.sets);
    }
  }
}

TEST(RelationProperties, QuantifierBranchesCommute) {
  std::mt19937 rng(61);
  for (int round = 0; round < 150; ++round) {
    const Network net = random_network(rng);
    const StateGraph g(net, random_valuation(rng, net));
    const ProgramPtr a = random_program(rng, net, 2), b = random_program(rng, net, 2);
    for (StateIndex s = 0; s < g.state_count(); ++s) {
      ASSERT_EQ(rel(g, *forall({a, b}), s).sets, rel(g, *forall({b, a}), s).sets);
      ASSERT_EQ(rel(g, *exists({a, b}), s).sets, rel(g, *exists({b, a}), s).sets);
    }
  }
}

TEST(RelationProperties, WhileUnrollsOnce) {
  std::mt19937 rng(67);
  int compared = 0;
  for (int round = 0; round < 150; ++round) {
    const Network net = random_network(rng);
    const StateGraph g(net, random_valuation(rng, net));
    const AssertionPtr guard = random_state_predicate(rng, net);
    const ProgramPtr body = random_program(rng, net, 2);
    const ProgramPtr loop = while_loop(guard, truth(true), body, {});
    const ProgramPtr unrolled = if_then_else(guard, raw_seq(body, loop), epsilon());
    for (StateIndex s = 0; s < g.state_count(); ++s) {
      const RelationResult l = rel(g, *loop, s, {32, 100000}), u = rel(g, *unrolled, s, {32, 100000});
      if (l.status == Status::FuelExhausted || u.status == Status::FuelExhausted) continue;
      ++compared;
      ASSERT_EQ(l.status, u.status);
      ASSERT_EQ(l.sets, u.sets);
    }
  }
  EXPECT_GT(compared, 100);
}
