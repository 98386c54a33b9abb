#ifndef HAAR_CONVOLUTION_HPP
#define HAAR_CONVOLUTION_HPP

// Convolution algebra of a finite groupoid with a measure family over the
// range map, and an associativity oracle. Associativity of the product is an
// independent certificate of left invariance: it does not use check_haar.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "groupoid.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "systems.hpp"

namespace haar
{

/// A signed rational function on the arrows of a groupoid.
class GroupoidFunction
{
public:
  GroupoidFunction() = default;
  explicit GroupoidFunction(std::size_t arrows) : _v(arrows, Rational(0)) {}
  explicit GroupoidFunction(std::vector<Rational> values) : _v(std::move(values)) {}

  static GroupoidFunction delta(std::size_t arrows, Arrow x)
  {
    GroupoidFunction f(arrows);
    f._v.at(x) = 1;
    return f;
  }

  std::size_t size() const { return _v.size(); }
  Rational &operator[](Arrow x) { return _v.at(x); }
  const Rational &operator[](Arrow x) const { return _v.at(x); }
  const std::vector<Rational> &values() const { return _v; }

  GroupoidFunction &operator+=(const GroupoidFunction &o)
  {
    if (o.size() != size())
      throw InputError("adding functions on different groupoids");
    for (std::size_t i = 0; i < _v.size(); ++i)
      _v[i] += o._v[i];
    return *this;
  }

  GroupoidFunction operator*(const Rational &c) const
  {
    GroupoidFunction out = *this;
    for (auto &x : out._v)
      x *= c;
    return out;
  }

  bool operator==(const GroupoidFunction &) const = default;

private:
  std::vector<Rational> _v;
};

inline std::string describe(const Groupoid &g, const GroupoidFunction &f)
{
  std::string s;
  for (Arrow x = 0; x < f.size(); ++x)
    if (f[x] != 0)
      s += (s.empty() ? "" : " + ") + to_string(f[x]) + " d[" + g.name(x) + "]";
  return s.empty() ? "0" : s;
}

/// (f*h)(x) = sum over y in G^{r(x)} of f(y) h(y^-1 x) lambda^{r(x)}({y}).
/// Summed over the supports: each y with f(y) != 0 meets each t with
/// h(t) != 0 and s(y) = r(t) exactly once, at x = yt.
inline GroupoidFunction convolve(const Groupoid &g, const GroupoidFunction &f, const GroupoidFunction &h,
                                 const FiberSystem &lambda)
{
  if (f.size() != g.size() || h.size() != g.size())
    throw InputError("convolve: functions are not on this groupoid");
  if (lambda.base != range_map(g))
    throw InputError("convolve: measure family is not over the range map of this groupoid");
  GroupoidFunction out(g.size());
  for (Arrow y = 0; y < g.size(); ++y)
  {
    if (f[y] == 0)
      continue;
    const Rational fy = f[y] * lambda.weight(g.unit_position(g.range(y)), y);
    if (fy == 0)
      continue;
    for (Arrow t : g.range_fiber(g.unit_position(g.source(y))))
      if (h[t] != 0)
        out[g.compose(y, t)] += fy * h[t];
  }
  return out;
}

struct AssociativityReport : ValidationReport
{
  using ValidationReport::ValidationReport;
  bool exhaustive = false;
  std::size_t triples = 0;
  // First violating triple and both bracketings.
  GroupoidFunction f, h, k, left, right;
};

/// Checks (f*h)*k = f*(h*k) exactly. Exhaustive over the indicator basis when
/// |G| <= exhaustive_limit, otherwise over `trials` random signed integer
/// combinations drawn from a seeded generator.
inline AssociativityReport associativity_oracle(const Groupoid &g, const FiberSystem &lambda, std::size_t trials = 200,
                                                std::uint64_t seed = 1, std::size_t exhaustive_limit = 16)
{
  AssociativityReport rep("associativity");
  const std::size_t n = g.size();
  auto fail = [&](const GroupoidFunction &f, const GroupoidFunction &h, const GroupoidFunction &k,
                  const GroupoidFunction &l, const GroupoidFunction &r) {
    rep.f = f;
    rep.h = h;
    rep.k = k;
    rep.left = l;
    rep.right = r;
    rep.add("associativity", {describe(g, f), describe(g, h), describe(g, k)},
            "(f*h)*k = " + describe(g, l) + " but f*(h*k) = " + describe(g, r));
  };

  if (n <= exhaustive_limit)
  {
    rep.exhaustive = true;
    // Non-units first: unit indicators are local identities, so triples made
    // only of non-units are the most informative witnesses.
    std::vector<Arrow> order;
    for (Arrow x = 0; x < n; ++x)
      if (!g.is_unit(x))
        order.push_back(x);
    for (Arrow x = 0; x < n; ++x)
      if (g.is_unit(x))
        order.push_back(x);
    std::vector<GroupoidFunction> basis;
    for (Arrow x = 0; x < n; ++x)
      basis.push_back(GroupoidFunction::delta(n, x));
    std::vector<GroupoidFunction> prod(n * n);
    for (Arrow a = 0; a < n; ++a)
      for (Arrow b = 0; b < n; ++b)
        prod[a * n + b] = convolve(g, basis[a], basis[b], lambda);
    for (Arrow a : order)
      for (Arrow b : order)
        for (Arrow c : order)
        {
          if (!rep.passed())
            break;
          ++rep.triples;
          auto l = convolve(g, prod[a * n + b], basis[c], lambda);
          auto r = convolve(g, basis[a], prod[b * n + c], lambda);
          if (l != r)
          {
            fail(basis[a], basis[b], basis[c], l, r);
            break;
          }
        }
  }
  else
  {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-3, 3);
    auto draw = [&] {
      GroupoidFunction f(n);
      for (Arrow x = 0; x < n; ++x)
        f[x] = coeff(rng);
      return f;
    };
    for (std::size_t t = 0; t < trials; ++t)
    {
      ++rep.triples;
      auto f = draw(), h = draw(), k = draw();
      auto l = convolve(g, convolve(g, f, h, lambda), k, lambda);
      auto r = convolve(g, f, convolve(g, h, k, lambda), lambda);
      if (l != r)
      {
        fail(f, h, k, l, r);
        break;
      }
    }
  }
  return rep;
}

} // namespace haar

#endif // HAAR_CONVOLUTION_HPP
