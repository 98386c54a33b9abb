#ifndef HAAR_SYSTEMS_HPP
#define HAAR_SYSTEMS_HPP

// Measures, pi-systems, Haar systems and cut-off functions over finite sets.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupoid.hpp"
#include "rational.hpp"
#include "report.hpp"

namespace haar
{

/// Finite measure as a sparse map point -> weight. Absent means 0; stored
/// weights are always positive.
class Measure
{
public:
  Measure() = default;

  Rational operator[](std::size_t point) const
  {
    auto it = _w.find(point);
    return it == _w.end() ? Rational(0) : it->second;
  }

  void set(std::size_t point, const Rational &w)
  {
    if (w < 0)
      throw InputError("measures are nonnegative; got weight " + to_string(w));
    if (w == 0)
      _w.erase(point);
    else
      _w[point] = w;
  }

  void add(std::size_t point, const Rational &w) { set(point, (*this)[point] + w); }

  std::vector<std::size_t> support() const
  {
    std::vector<std::size_t> s;
    for (const auto &[p, w] : _w)
      s.push_back(p);
    return s;
  }

  Rational total() const
  {
    Rational t = 0;
    for (const auto &[p, w] : _w)
      t += w;
    return t;
  }

  const std::map<std::size_t, Rational> &atoms() const { return _w; }

  bool operator==(const Measure &) const = default;

private:
  std::map<std::size_t, Rational> _w;
};

/// A map between finite named sets, as target indices.
struct FiniteMap
{
  std::vector<std::string> domain;
  std::vector<std::string> targets;
  std::vector<std::size_t> of;

  FiniteMap() = default;
  FiniteMap(std::vector<std::string> d, std::vector<std::string> t, std::vector<std::size_t> m)
    : domain(std::move(d)), targets(std::move(t)), of(std::move(m))
  {
    if (of.size() != domain.size())
      throw InputError("map must assign a target to every domain point");
    for (auto x : of)
      if (x >= targets.size())
        throw InputError("map points outside its target set");
  }

  std::size_t operator()(std::size_t y) const { return of.at(y); }

  std::vector<std::size_t> fiber(std::size_t x) const
  {
    std::vector<std::size_t> f;
    for (std::size_t y = 0; y < of.size(); ++y)
      if (of[y] == x)
        f.push_back(y);
    return f;
  }

  /// Targets with empty fiber.
  std::vector<std::size_t> unreached() const
  {
    std::vector<bool> hit(targets.size(), false);
    for (auto x : of)
      hit[x] = true;
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < targets.size(); ++x)
      if (!hit[x])
        out.push_back(x);
    return out;
  }

  bool operator==(const FiniteMap &) const = default;
};

/// The range map r : G -> G^0 with units identified by position.
inline FiniteMap range_map(const Groupoid &g) { return FiniteMap(g.names(), g.unit_names(), g.range_positions()); }

/// A pi-system: measures beta^x on Y, one per x in X. Support containment and
/// fullness are checked by check_system rather than enforced here, so that
/// defective systems can be represented.
struct FiberSystem
{
  FiniteMap base;
  std::vector<Measure> measures;

  FiberSystem() = default;
  FiberSystem(FiniteMap b, std::vector<Measure> m) : base(std::move(b)), measures(std::move(m))
  {
    if (measures.size() != base.targets.size())
      throw InputError("fiber system needs one measure per base point");
    for (const auto &mu : measures)
      for (const auto &[p, w] : mu.atoms())
        if (p >= base.domain.size())
          throw InputError("measure atom outside the domain");
  }

  Rational weight(std::size_t x, std::size_t y) const { return measures.at(x)[y]; }

  bool operator==(const FiberSystem &) const = default;
};

/// Containment supp beta^x in pi^-1(x) and fullness supp beta^x = pi^-1(x).
inline ValidationReport check_system(const FiberSystem &beta)
{
  ValidationReport rep("fiber system");
  const auto &pi = beta.base;
  for (std::size_t x = 0; x < beta.measures.size(); ++x)
  {
    for (const auto &[y, w] : beta.measures[x].atoms())
      if (pi(y) != x)
        rep.add("support containment", {pi.targets[x], pi.domain[y]},
                "atom of weight " + to_string(w) + " lies over " + pi.targets[pi(y)]);
    for (auto y : pi.fiber(x))
      if (beta.measures[x][y] == 0)
        rep.add("full", {pi.targets[x], pi.domain[y]}, "fiber element carries no weight");
    if (pi.fiber(x).empty())
      rep.add("full", {pi.targets[x]}, "fiber is empty");
  }
  rep.note("continuity", "vacuous (finite discrete)");
  return rep;
}

/// Full pi-system: counting measure on each fiber, or the supplied strictly
/// positive weights. pi must be onto.
inline FiberSystem full_fiber_system(const FiniteMap &pi, const std::optional<std::vector<Rational>> &weights = {})
{
  if (auto miss = pi.unreached(); !miss.empty())
    throw InputError("no full system exists: fiber over \"" + pi.targets[miss.front()] + "\" is empty");
  if (weights && weights->size() != pi.domain.size())
    throw InputError("one weight per domain point is required");
  std::vector<Measure> ms(pi.targets.size());
  for (std::size_t y = 0; y < pi.domain.size(); ++y)
  {
    Rational w = weights ? (*weights)[y] : Rational(1);
    if (w <= 0)
      throw InputError("weight of \"" + pi.domain[y] + "\" must be positive, got " + to_string(w));
    ms[pi(y)].set(y, w);
  }
  return FiberSystem(pi, std::move(ms));
}

/// Fullness plus pointwise left invariance
/// lambda^{r(x)}({z}) = lambda^{s(x)}({x^-1 z}) for every x and z in G^{r(x)}.
inline ValidationReport check_haar(const Groupoid &g, const FiberSystem &lambda)
{
  if (lambda.base != range_map(g))
    throw InputError("check_haar: base map of the system is not the range map of the groupoid");
  ValidationReport rep("haar system");
  rep.merge(check_system(lambda));
  for (Arrow x = 0; x < g.size(); ++x)
  {
    const std::size_t ru = g.unit_position(g.range(x)), su = g.unit_position(g.source(x));
    const Arrow xi = g.inverse(x);
    for (Arrow z : g.range_fiber(ru))
    {
      Rational lhs = lambda.weight(ru, z);
      Rational rhs = lambda.weight(su, g.compose(xi, z));
      if (lhs != rhs)
        rep.add("left invariance", {g.name(x), g.name(z)},
                "lambda^r(x)(z) = " + to_string(lhs) + " but lambda^s(x)(x^-1 z) = " + to_string(rhs));
    }
  }
  return rep;
}

/// A validated Haar system together with its groupoid.
class HaarSystem
{
public:
  HaarSystem(Groupoid g, FiberSystem lambda) : _g(std::move(g)), _lambda(std::move(lambda))
  {
    require(validate_groupoid(_g), "haar system: groupoid");
    require(check_haar(_g, _lambda), "haar system");
  }

  const Groupoid &groupoid() const { return _g; }
  const FiberSystem &system() const { return _lambda; }
  const Measure &at_unit(std::size_t unit_pos) const { return _lambda.measures.at(unit_pos); }
  Rational weight(Arrow x) const { return _lambda.weight(_g.unit_position(_g.range(x)), x); }

  bool operator==(const HaarSystem &o) const { return _g == o._g && _lambda == o._lambda; }

private:
  Groupoid _g;
  FiberSystem _lambda;
};

/// lambda^u({x}) = m(s(x)) for a positive weight m per unit. Left invariant for
/// any positive m; m = 1 is the counting Haar system.
inline HaarSystem source_weighted_haar(const Groupoid &g, const std::vector<Rational> &unit_weights)
{
  if (unit_weights.size() != g.units().size())
    throw InputError("one weight per unit is required");
  std::vector<Rational> w(g.size());
  for (Arrow x = 0; x < g.size(); ++x)
    w[x] = unit_weights[g.unit_position(g.source(x))];
  return HaarSystem(g, full_fiber_system(range_map(g), w));
}

/// Counting measures on the range fibers; a Haar system for every finite
/// (hence etale) groupoid.
inline HaarSystem counting_haar(const Groupoid &g)
{
  return HaarSystem(g, full_fiber_system(range_map(g)));
}

/// Cut-off function for a quotient map q : Z -> X. The pi-compact support
/// condition holds automatically because every subset of a finite space is
/// compact.
struct Cutoff
{
  FiniteMap quotient;
  std::vector<Rational> weights;

  static constexpr const char *compact_support = "automatic (finite)";

  bool operator==(const Cutoff &) const = default;
};

/// Nonnegativity and q({phi > 0}) = X.
inline ValidationReport validate_cutoff(const Cutoff &phi)
{
  ValidationReport rep("cutoff");
  const auto &q = phi.quotient;
  if (phi.weights.size() != q.domain.size())
  {
    rep.add("shape", {}, "one weight per point is required");
    return rep;
  }
  std::vector<bool> hit(q.targets.size(), false);
  for (std::size_t z = 0; z < q.domain.size(); ++z)
  {
    if (phi.weights[z] < 0)
      rep.add("nonnegative", {q.domain[z]});
    if (phi.weights[z] > 0)
      hit[q(z)] = true;
  }
  for (std::size_t x = 0; x < q.targets.size(); ++x)
    if (!hit[x])
      rep.add("positive over every orbit", {q.targets[x]});
  rep.note("pi-compact support", Cutoff::compact_support);
  return rep;
}

/// phi(z) = sum_i phi_i(z) alpha_i(q(z)) from a cover {V_i} of X, a partition
/// of unity alpha_i subordinate to it, and local sections phi_i >= 0 whose
/// positivity sets map onto V_i.
inline Cutoff cutoff_function(const FiniteMap &q,
                              const std::vector<std::vector<std::size_t>> &cover,
                              const std::vector<std::vector<Rational>> &partition,
                              const std::vector<std::vector<Rational>> &local_sections)
{
  const std::size_t nx = q.targets.size(), nz = q.domain.size(), m = cover.size();
  if (partition.size() != m || local_sections.size() != m)
    throw InputError("cut-off: cover, partition and local sections must have the same length");
  std::vector<bool> covered(nx, false);
  for (std::size_t i = 0; i < m; ++i)
  {
    if (partition[i].size() != nx || local_sections[i].size() != nz)
      throw InputError("cut-off: partition functions live on X and local sections on Z");
    std::vector<bool> in(nx, false);
    for (auto x : cover[i])
    {
      if (x >= nx)
        throw InputError("cut-off: cover set mentions a point outside X");
      in[x] = covered[x] = true;
    }
    for (std::size_t x = 0; x < nx; ++x)
    {
      if (partition[i][x] < 0)
        throw InputError("cut-off: partition function is negative at \"" + q.targets[x] + "\"");
      if (partition[i][x] > 0 && !in[x])
        throw InputError("cut-off: partition function " + std::to_string(i) + " is not supported in its cover set (at \"" +
                         q.targets[x] + "\")");
    }
    std::vector<bool> reached(nx, false);
    for (std::size_t z = 0; z < nz; ++z)
    {
      if (local_sections[i][z] < 0)
        throw InputError("cut-off: local section is negative at \"" + q.domain[z] + "\"");
      if (local_sections[i][z] > 0)
        reached[q(z)] = true;
    }
    for (auto x : cover[i])
      if (!reached[x])
        throw InputError("cut-off: local section " + std::to_string(i) + " does not cover \"" + q.targets[x] + "\"");
  }
  for (std::size_t x = 0; x < nx; ++x)
  {
    if (!covered[x])
      throw InputError("cut-off: cover misses \"" + q.targets[x] + "\"");
    Rational sum = 0;
    for (std::size_t i = 0; i < m; ++i)
      sum += partition[i][x];
    if (sum != 1)
      throw InputError("cut-off: partition of unity sums to " + to_string(sum) + " at \"" + q.targets[x] + "\"");
  }

  Cutoff phi{q, std::vector<Rational>(nz, Rational(0))};
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t i = 0; i < m; ++i)
      phi.weights[z] += local_sections[i][z] * partition[i][q(z)];
  require(validate_cutoff(phi), "cut-off");
  return phi;
}

/// Indicator of the given representatives, built with singleton cover sets.
/// `reps[x]` must lie over x.
inline Cutoff representative_cutoff(const FiniteMap &q, const std::vector<std::size_t> &reps)
{
  const std::size_t nx = q.targets.size(), nz = q.domain.size();
  if (reps.size() != nx)
    throw InputError("one representative per orbit is required");
  std::vector<std::vector<std::size_t>> cover;
  std::vector<std::vector<Rational>> alpha, sections;
  for (std::size_t x = 0; x < nx; ++x)
  {
    cover.push_back({x});
    alpha.emplace_back(nx, Rational(0));
    alpha.back()[x] = 1;
    sections.emplace_back(nz, Rational(0));
    sections.back().at(reps[x]) = 1;
  }
  return cutoff_function(q, cover, alpha, sections);
}

} // namespace haar

#endif // HAAR_SYSTEMS_HPP
