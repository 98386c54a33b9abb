#include <gtest/gtest.h>

#include <haar/fixtures.hpp>
#include <haar/systems.hpp>

using namespace haar;

namespace
{

FiniteMap constant_map(std::vector<std::string> dom, std::string target)
{
  std::vector<std::size_t> of(dom.size(), 0);
  return FiniteMap(std::move(dom), {std::move(target)}, std::move(of));
}

// lambda^u({(u,v)}) = m(v) on a pair groupoid whose points are "1".."n".
FiberSystem pair_weighted(const Groupoid &g, const std::vector<Rational> &m)
{
  std::vector<Measure> ms(g.units().size());
  for (Arrow x = 0; x < g.size(); ++x)
    ms[g.unit_position(g.range(x))].set(x, m[g.unit_position(g.source(x))]);
  return FiberSystem(range_map(g), ms);
}

} // namespace

TEST(FullFiberSystem, CountingByDefault)
{
  auto b = full_fiber_system(constant_map({"z1", "z2"}, "u"));
  EXPECT_EQ(b.weight(0, 0), 1);
  EXPECT_EQ(b.weight(0, 1), 1);
  EXPECT_TRUE(check_system(b).passed());
}

TEST(FullFiberSystem, SuppliedWeightsPassThrough)
{
  auto b = full_fiber_system(constant_map({"z1", "z2"}, "u"), std::vector<Rational>{1, 2});
  EXPECT_EQ(b.weight(0, 0), 1);
  EXPECT_EQ(b.weight(0, 1), 2);
}

TEST(FullFiberSystem, TwoFibers)
{
  FiniteMap pi({"a", "b", "c"}, {"u", "v"}, {0, 0, 1});
  auto b = full_fiber_system(pi);
  EXPECT_EQ(b.measures[0].support(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(b.measures[1].support(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(b.measures[0].total(), 2);
}

TEST(FullFiberSystem, EmptyFiberRejected)
{
  FiniteMap pi({"a"}, {"u", "v"}, {0});
  EXPECT_THROW(full_fiber_system(pi), InputError);
}

TEST(FullFiberSystem, NonPositiveWeightRejected)
{
  EXPECT_THROW(full_fiber_system(constant_map({"z1", "z2"}, "u"), std::vector<Rational>{1, 0}), InputError);
  EXPECT_THROW(full_fiber_system(constant_map({"z1", "z2"}, "u"), std::vector<Rational>{1, -1}), InputError);
}

TEST(Measure, NegativeWeightRejected)
{
  Measure m;
  EXPECT_THROW(m.set(0, Rational(-1, 2)), InputError);
}

TEST(CheckSystem, AtomOutsideFiberIsContainmentViolation)
{
  FiniteMap pi({"a", "b", "c"}, {"u", "v"}, {0, 0, 1});
  auto b = full_fiber_system(pi);
  b.measures[0].set(2, 1);
  auto rep = check_system(b);
  ASSERT_TRUE(rep.has("support containment"));
  EXPECT_EQ(rep.first("support containment")->witnesses, (std::vector<std::string>{"u", "c"}));
}

TEST(CheckSystem, ZeroOnFiberElementIsNotFull)
{
  FiniteMap pi({"a", "b", "c"}, {"u", "v"}, {0, 0, 1});
  auto b = full_fiber_system(pi);
  b.measures[0].set(1, 0);
  auto rep = check_system(b);
  ASSERT_TRUE(rep.has("full"));
  EXPECT_EQ(rep.first("full")->witnesses, (std::vector<std::string>{"u", "b"}));
}

TEST(CheckSystem, ContinuityRecordedAsVacuous)
{
  auto rep = check_system(full_fiber_system(constant_map({"z"}, "u")));
  ASSERT_FALSE(rep.notes().empty());
  EXPECT_EQ(rep.notes().front().first, "continuity");
  EXPECT_EQ(rep.notes().front().second, "vacuous (finite discrete)");
}

TEST(CheckHaar, CountingOnPair2Passes)
{
  auto g = fixtures::pair2();
  EXPECT_TRUE(check_haar(g, full_fiber_system(range_map(g))).passed());
}

TEST(CheckHaar, WeightedPair3Passes)
{
  auto g = fixtures::pair3();
  EXPECT_TRUE(check_haar(g, pair_weighted(g, {1, 2, 3})).passed());
}

TEST(CheckHaar, NonInvariantZ2FailsWithWitnessG)
{
  auto g = fixtures::z2();
  auto lambda = full_fiber_system(range_map(g), std::vector<Rational>{1, 2});
  auto rep = check_haar(g, lambda);
  ASSERT_TRUE(rep.has("left invariance"));
  EXPECT_EQ(rep.first("left invariance")->witnesses.front(), "g");
}

TEST(CheckHaar, BaseMismatchIsAnError)
{
  auto g = fixtures::pair2();
  FiniteMap wrong(g.names(), g.unit_names(), {0, 0, 0, 0});
  EXPECT_THROW(check_haar(g, full_fiber_system(wrong, std::vector<Rational>{1, 1, 1, 1})), InputError);
}

TEST(CountingHaar, FiberSizes)
{
  auto g = fixtures::pair2();
  auto h = counting_haar(g);
  for (std::size_t u = 0; u < 2; ++u)
  {
    EXPECT_EQ(h.at_unit(u).support().size(), 2u);
    EXPECT_EQ(h.at_unit(u).total(), 2);
  }
  auto z = counting_haar(fixtures::z2());
  EXPECT_EQ(z.weight(0), 1);
  EXPECT_EQ(z.weight(1), 1);
}

TEST(CountingHaar, BlowUpFibersHaveFourAtoms)
{
  auto g = fixtures::z2();
  auto b = blow_up(g, {"z1", "z2"}, {0, 0});
  auto h = counting_haar(b.groupoid);
  for (std::size_t u = 0; u < 2; ++u)
  {
    EXPECT_EQ(h.at_unit(u).support().size(), 4u);
    for (const auto &[x, w] : h.at_unit(u).atoms())
      EXPECT_EQ(w, 1);
  }
}

TEST(HaarSystem, ConstructorRejectsNonInvariantFamily)
{
  auto g = fixtures::z2();
  EXPECT_THROW(HaarSystem(g, full_fiber_system(range_map(g), std::vector<Rational>{1, 2})), ValidationError);
}

TEST(PairWeighted, PassesIffStrictlyPositiveAndScaleInvariant)
{
  auto g = fixtures::pair3();
  const std::vector<std::vector<Rational>> ms = {
    {1, 2, 3}, {1, 0, 3}, {Rational(1, 3), Rational(5, 7), 2}, {0, 0, 0}, {4, 4, 4}};
  for (const auto &m : ms)
  {
    bool positive = std::all_of(m.begin(), m.end(), [](const Rational &v) { return v > 0; });
    EXPECT_EQ(check_haar(g, pair_weighted(g, m)).passed(), positive);
    std::vector<Rational> scaled;
    for (const auto &v : m)
      scaled.push_back(v * Rational(7, 2));
    EXPECT_EQ(check_haar(g, pair_weighted(g, scaled)).passed(), positive);
  }
}

TEST(Cutoff, SingleOrbitIndicator)
{
  FiniteMap q = constant_map({"1", "2", "3"}, "A");
  auto phi = cutoff_function(q, {{0}}, {{1}}, {{1, 0, 0}});
  EXPECT_EQ(phi.weights, (std::vector<Rational>{1, 0, 0}));
  EXPECT_TRUE(validate_cutoff(phi).passed());
}

TEST(Cutoff, IdentityMapWithSingletonCoverIsConstantOne)
{
  FiniteMap q({"1", "2"}, {"1", "2"}, {0, 1});
  auto phi = cutoff_function(q, {{0}, {1}}, {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
  EXPECT_EQ(phi.weights, (std::vector<Rational>{1, 1}));
}

TEST(Cutoff, RectangleOrbitRepresentatives)
{
  // Left PAIR3 orbits on {1,2,3} x {a,b} are the columns; pick (1,a) and (1,b).
  FiniteMap q({"1a", "1b", "2a", "2b", "3a", "3b"}, {"a", "b"}, {0, 1, 0, 1, 0, 1});
  auto phi = cutoff_function(q, {{0}, {1}}, {{1, 0}, {0, 1}}, {{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}});
  EXPECT_EQ(phi.weights, (std::vector<Rational>{1, 1, 0, 0, 0, 0}));
}

TEST(Cutoff, OverlappingCoverBlendsSections)
{
  FiniteMap q({"p", "q"}, {"x"}, {0, 0});
  auto phi = cutoff_function(q, {{0}, {0}}, {{Rational(1, 3)}, {Rational(2, 3)}}, {{3, 0}, {0, 3}});
  EXPECT_EQ(phi.weights, (std::vector<Rational>{1, 2}));
}

TEST(Cutoff, PartitionNotSummingToOneRejected)
{
  FiniteMap q = constant_map({"1", "2"}, "A");
  EXPECT_THROW(cutoff_function(q, {{0}}, {{Rational(1, 2)}}, {{1, 0}}), InputError);
}

TEST(Cutoff, UncoveredCoverSetRejectedWithWitness)
{
  FiniteMap q({"1", "2"}, {"A", "B"}, {0, 1});
  try
  {
    cutoff_function(q, {{0, 1}}, {{1, 1}}, {{1, 0}});
    FAIL() << "expected InputError";
  }
  catch (const InputError &e)
  {
    EXPECT_NE(std::string(e.what()).find("\"B\""), std::string::npos);
  }
}

TEST(Cutoff, ValidateFlagsOrbitWithoutPositiveWeight)
{
  Cutoff phi{FiniteMap({"1", "2"}, {"A", "B"}, {0, 1}), {1, 0}};
  auto rep = validate_cutoff(phi);
  ASSERT_TRUE(rep.has("positive over every orbit"));
  EXPECT_EQ(rep.first("positive over every orbit")->witnesses.front(), "B");
}
