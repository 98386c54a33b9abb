#include <gtest/gtest.h>

#include <random>

#include <haar/fixtures.hpp>
#include <haar/haar.hpp>

using namespace haar;

namespace
{

// (f*h)(x) straight from the definition: for every x, every y with r(y) = r(x).
GroupoidFunction naive_convolve(const Groupoid &g, const GroupoidFunction &f, const GroupoidFunction &h,
                                const FiberSystem &lambda)
{
  GroupoidFunction out(g.size());
  for (Arrow x = 0; x < g.size(); ++x)
    for (Arrow y = 0; y < g.size(); ++y)
      if (g.range(y) == g.range(x))
        out[x] += f[y] * h[g.compose(g.inverse(y), x)] * lambda.weight(g.unit_position(g.range(x)), y);
  return out;
}

using Matrix = std::vector<std::vector<Rational>>;

std::vector<std::string> points(std::size_t n)
{
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i)
    out.push_back(std::to_string(i));
  return out;
}

GroupoidFunction from_matrix(const Groupoid &g, const Matrix &m)
{
  GroupoidFunction f(g.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      f[g.index(pair_name(std::to_string(i + 1), std::to_string(j + 1)))] = m[i][j];
  return f;
}

// A diag(w) B.
Matrix weighted_product(const Matrix &a, const Matrix &b, const std::vector<Rational> &w)
{
  const std::size_t n = a.size();
  Matrix c(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        c[i][j] += a[i][k] * w[k] * b[k][j];
  return c;
}

Matrix random_matrix(std::size_t n, std::mt19937_64 &rng)
{
  std::uniform_int_distribution<int> d(-4, 4);
  Matrix m(n, std::vector<Rational>(n));
  for (auto &row : m)
    for (auto &v : row)
      v = d(rng);
  return m;
}

} // namespace

TEST(Convolve, Pair2MatrixExample)
{
  auto g = fixtures::pair2();
  auto lambda = counting_haar(g);
  Matrix f = {{1, 2}, {3, 4}}, id = {{1, 0}, {0, 1}};
  EXPECT_EQ(convolve(g, from_matrix(g, f), from_matrix(g, id), lambda.system()), from_matrix(g, f));
}

TEST(Convolve, MatchesWeightedMatrixProduct)
{
  std::mt19937_64 rng(7);
  for (std::size_t n = 1; n <= 4; ++n)
  {
    auto g = pair_groupoid(points(n));
    std::vector<Rational> w;
    for (std::size_t i = 0; i < n; ++i)
      w.push_back(Rational(i + 1, 2));
    auto lambda = source_weighted_haar(g, w);
    for (int trial = 0; trial < 5; ++trial)
    {
      auto a = random_matrix(n, rng), b = random_matrix(n, rng);
      EXPECT_EQ(convolve(g, from_matrix(g, a), from_matrix(g, b), lambda.system()),
                from_matrix(g, weighted_product(a, b, w)));
    }
  }
}

TEST(Convolve, MatchesDefinitionOnTransformationGroupoid)
{
  Groupoid t = transformation_groupoid(group_as_groupoid(cyclic_table(3)), {"a", "b", "c"},
                                       {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  auto lambda = source_weighted_haar(t, {1, 2, Rational(1, 3)});
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int trial = 0; trial < 10; ++trial)
  {
    GroupoidFunction f(t.size()), h(t.size());
    for (Arrow x = 0; x < t.size(); ++x)
    {
      f[x] = d(rng);
      h[x] = d(rng);
    }
    EXPECT_EQ(convolve(t, f, h, lambda.system()), naive_convolve(t, f, h, lambda.system()));
  }
}

TEST(Convolve, Z2GeneratorSquaresToIdentity)
{
  auto g = fixtures::z2();
  auto d = GroupoidFunction::delta(2, g.index("g"));
  EXPECT_EQ(convolve(g, d, d, counting_haar(g).system()), GroupoidFunction::delta(2, g.index("e")));
}

TEST(Convolve, UnitsAreLocalIdentities)
{
  auto g = fixtures::pair3();
  auto lambda = source_weighted_haar(g, {1, 2, 3});
  for (Arrow x = 0; x < g.size(); ++x)
  {
    auto dx = GroupoidFunction::delta(g.size(), x);
    // delta_{r(x)} * delta_x = lambda(r(x)) delta_x, so rescale by the unit weight.
    Arrow u = g.range(x);
    auto left = convolve(g, GroupoidFunction::delta(g.size(), u) * (1 / Rational(lambda.weight(u))), dx,
                         lambda.system());
    EXPECT_EQ(left, dx) << g.name(x);
  }
}

TEST(Convolve, Bilinear)
{
  auto g = fixtures::pair2();
  auto lambda = counting_haar(g).system();
  GroupoidFunction f({1, -2, 3, 0}), f2({0, 1, 1, 5}), h({2, 2, -1, 1});
  auto sum = f;
  sum += f2;
  auto lhs = convolve(g, sum, h, lambda);
  auto rhs = convolve(g, f, h, lambda);
  rhs += convolve(g, f2, h, lambda);
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(convolve(g, f * Rational(3, 4), h, lambda), convolve(g, f, h, lambda) * Rational(3, 4));
}

TEST(Convolve, NonInvariantZ2BreaksAssociativity)
{
  auto g = fixtures::z2();
  auto lambda = full_fiber_system(range_map(g), std::vector<Rational>{1, 2});
  auto d = GroupoidFunction::delta(2, g.index("g"));
  auto left = convolve(g, convolve(g, d, d, lambda), d, lambda);
  auto right = convolve(g, d, convolve(g, d, d, lambda), lambda);
  EXPECT_EQ(left, d * 2);
  EXPECT_EQ(right, d * 4);
}

TEST(Convolve, WrongBaseRejected)
{
  auto g = fixtures::pair2();
  EXPECT_THROW(convolve(g, GroupoidFunction(4), GroupoidFunction(4), counting_haar(fixtures::z2()).system()),
               InputError);
}

TEST(Associativity, WeightedPair3Passes)
{
  auto g = fixtures::pair3();
  auto rep = associativity_oracle(g, source_weighted_haar(g, {1, 2, 3}).system());
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(rep.exhaustive);
  EXPECT_EQ(rep.triples, 729u);
}

TEST(Associativity, NonInvariantZ2WitnessIsDeltaG)
{
  auto g = fixtures::z2();
  auto rep = associativity_oracle(g, full_fiber_system(range_map(g), std::vector<Rational>{1, 2}));
  ASSERT_FALSE(rep.passed());
  auto d = GroupoidFunction::delta(2, g.index("g"));
  EXPECT_EQ(rep.f, d);
  EXPECT_EQ(rep.h, d);
  EXPECT_EQ(rep.k, d);
  EXPECT_EQ(rep.left, d * 2);
  EXPECT_EQ(rep.right, d * 4);
  EXPECT_EQ(rep.first("associativity")->witnesses, (std::vector<std::string>{"1 d[g]", "1 d[g]", "1 d[g]"}));
}

TEST(Associativity, ScalingPreservesPass)
{
  for (const auto &g : {fixtures::pair3(), fixtures::z2(), blow_up(fixtures::z2(), {"a", "b"}, {0, 0}).groupoid})
  {
    auto lambda = counting_haar(g).system();
    for (auto &m : lambda.measures)
      for (auto [x, w] : m.atoms())
        m.set(x, w * 5);
    EXPECT_TRUE(associativity_oracle(g, lambda).passed());
  }
}

TEST(Associativity, RandomModeAboveLimit)
{
  auto g = pair_groupoid(points(5));
  auto good = associativity_oracle(g, source_weighted_haar(g, {1, 2, 3, 4, 5}).system(), 50, 3);
  EXPECT_FALSE(good.exhaustive);
  EXPECT_EQ(good.triples, 50u);
  EXPECT_TRUE(good.passed());
  auto bad_lambda = counting_haar(g).system();
  bad_lambda.measures[0].set(g.index("pair:1,2"), 7);
  EXPECT_FALSE(associativity_oracle(g, bad_lambda, 50, 3).passed());
}

TEST(Associativity, AgreesWithCheckHaarOnPerturbations)
{
  auto g = fixtures::pair3();
  auto base = source_weighted_haar(g, {1, 2, 3}).system();
  for (Arrow x = 0; x < g.size(); ++x)
  {
    auto lambda = base;
    auto u = g.unit_position(g.range(x));
    lambda.measures[u].set(x, lambda.weight(u, x) + 1);
    EXPECT_EQ(associativity_oracle(g, lambda).passed(), check_haar(g, lambda).passed()) << g.name(x);
  }
}
