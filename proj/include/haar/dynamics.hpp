#ifndef HAAR_DYNAMICS_HPP
#define HAAR_DYNAMICS_HPP

// Groupoid actions on finite sets, orbit spaces, equivalences and the
// imprimitivity groupoid of a free action.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "groupoid.hpp"
#include "report.hpp"
#include "systems.hpp"

namespace haar
{

enum class Side
{
  left,
  right
};

inline const char *to_string(Side s) { return s == Side::left ? "left" : "right"; }

/// An action of a groupoid on a finite carrier through a moment map. The
/// table always stores a left action; a right action z.g is stored as the
/// left action g.z := z.g^-1 and `side` only records how it is presented.
class Action
{
public:
  Action() = default;

  /// `table[g * |Z| + z]` is g.z, npos where undefined.
  Action(Groupoid g, std::vector<std::string> carrier, std::vector<Arrow> moment, std::vector<std::size_t> table,
         Side side = Side::left)
    : _g(std::move(g)), _carrier(std::move(carrier)), _moment(std::move(moment)), _table(std::move(table)), _side(side)
  {
    const std::size_t nz = _carrier.size();
    if (_moment.size() != nz)
      throw InputError("action: moment map must cover the carrier");
    for (std::size_t z = 0; z < nz; ++z)
      if (_moment[z] >= _g.size() || !_g.is_unit(_moment[z]))
        throw InputError("action: moment map sends \"" + _carrier[z] + "\" to a non-unit");
    if (_table.size() != _g.size() * nz)
      throw InputError("action: table has the wrong size");
    for (auto t : _table)
      if (t != npos && t >= nz)
        throw InputError("action: table entry outside the carrier");
    for (std::size_t i = 0; i < nz; ++i)
      for (std::size_t j = i + 1; j < nz; ++j)
        if (_carrier[i] == _carrier[j])
          throw InputError("action: carrier lists \"" + _carrier[i] + "\" twice");
  }

  /// Right action given as `right[z * |G| + g]` = z.g, defined when moment(z) = r(g).
  static Action from_right(Groupoid g, std::vector<std::string> carrier, std::vector<Arrow> moment,
                           const std::vector<std::size_t> &right)
  {
    const std::size_t n = g.size(), nz = carrier.size();
    if (right.size() != n * nz)
      throw InputError("action: table has the wrong size");
    std::vector<std::size_t> table(n * nz, npos);
    for (Arrow a = 0; a < n; ++a)
      for (std::size_t z = 0; z < nz; ++z)
        table[a * nz + z] = right[z * n + g.inverse(a)];
    return Action(std::move(g), std::move(carrier), std::move(moment), std::move(table), Side::right);
  }

  const Groupoid &groupoid() const { return _g; }
  const std::vector<std::string> &carrier() const { return _carrier; }
  std::size_t size() const { return _carrier.size(); }
  Side side() const { return _side; }
  Arrow moment(std::size_t z) const { return _moment.at(z); }
  const std::vector<Arrow> &moments() const { return _moment; }
  std::size_t table_entry(Arrow g, std::size_t z) const { return _table.at(g * size() + z); }

  bool defined(Arrow g, std::size_t z) const { return _g.source(g) == _moment.at(z); }

  /// g.z for the stored left action.
  std::size_t act(Arrow g, std::size_t z) const
  {
    if (!defined(g, z))
      throw CompositionError("(" + _g.name(g) + ", " + _carrier.at(z) + ") is not in G*Z");
    auto out = table_entry(g, z);
    if (out == npos)
      throw CompositionError("action table has no entry for (" + _g.name(g) + ", " + _carrier[z] + ")");
    return out;
  }

  /// z.g for the presented right action, i.e. g^-1 . z.
  std::size_t act_right(std::size_t z, Arrow g) const { return act(_g.inverse(g), z); }

  std::size_t index(const std::string &token) const
  {
    for (std::size_t z = 0; z < size(); ++z)
      if (_carrier[z] == token)
        return z;
    throw InputError("unknown carrier point \"" + token + "\"");
  }

  /// The moment map as a map onto unit positions.
  FiniteMap moment_map() const
  {
    std::vector<std::size_t> of;
    for (auto u : _moment)
      of.push_back(_g.unit_position(u));
    return FiniteMap(_carrier, _g.unit_names(), std::move(of));
  }

  Action with_side(Side s) const
  {
    Action a = *this;
    a._side = s;
    return a;
  }

  bool operator==(const Action &o) const
  {
    return _g == o._g && _carrier == o._carrier && _moment == o._moment && _table == o._table && _side == o._side;
  }

private:
  Groupoid _g;
  std::vector<std::string> _carrier;
  std::vector<Arrow> _moment;
  std::vector<std::size_t> _table;
  Side _side = Side::left;
};

/// Right action <-> left action via g.z := z.g^-1. Since the table is always
/// the left form, this flips the presentation; applying it twice is the
/// identity.
inline Action opposite(const Action &a) { return a.with_side(a.side() == Side::left ? Side::right : Side::left); }

struct ActionReport : ValidationReport
{
  using ValidationReport::ValidationReport;
  bool free = true;
  std::vector<std::string> fixed_point_witness; // (g, z) with g.z = z, g not a unit
};

/// Checks the action laws exhaustively and records freeness separately.
/// An entry defined off G*Z is malformed input, not a law violation.
inline ActionReport validate_action(const Action &a)
{
  ActionReport rep("action");
  const Groupoid &g = a.groupoid();
  rep.merge(validate_groupoid(g), "groupoid: ");
  const std::size_t nz = a.size();
  for (Arrow x = 0; x < g.size(); ++x)
    for (std::size_t z = 0; z < nz; ++z)
      if (!a.defined(x, z) && a.table_entry(x, z) != npos)
        throw InputError("action defined off G*Z at (" + g.name(x) + ", " + a.carrier()[z] + ")");
  if (!rep.passed())
    return rep;

  for (std::size_t z = 0; z < nz; ++z)
  {
    const std::string &zn = a.carrier()[z];
    for (Arrow x = 0; x < g.size(); ++x)
    {
      if (!a.defined(x, z))
        continue;
      auto xz = a.table_entry(x, z);
      if (xz == npos)
      {
        rep.add("action domain", {g.name(x), zn}, "undefined on a pair of G*Z");
        continue;
      }
      if (a.moment(xz) != g.range(x))
        rep.add("moment equivariance", {g.name(x), zn});
      if (xz == z && !g.is_unit(x) && rep.free)
      {
        rep.free = false;
        rep.fixed_point_witness = {g.name(x), zn};
      }
    }
    if (a.table_entry(a.moment(z), z) != z)
      rep.add("unit acts trivially", {zn});
  }
  for (Arrow x = 0; x < g.size(); ++x)
    for (Arrow y = 0; y < g.size(); ++y)
    {
      if (!g.composable(x, y))
        continue;
      Arrow xy = g.compose(x, y);
      for (std::size_t z = 0; z < nz; ++z)
      {
        if (!a.defined(y, z))
          continue;
        auto yz = a.table_entry(y, z);
        if (yz == npos || !a.defined(x, yz))
          continue;
        if (a.table_entry(xy, z) != a.table_entry(x, yz))
          rep.add("compatibility", {g.name(x), g.name(y), a.carrier()[z]}, "(xy).z != x.(y.z)");
      }
    }
  rep.note("properness", "automatic (finite)");
  rep.note("free", rep.free ? "yes" : "no");
  return rep;
}

/// Orbit space with least-token representatives; classes are ordered by
/// representative and named "orbit:<rep>".
struct OrbitSpace
{
  FiniteMap quotient;
  std::vector<std::size_t> reps;
};

inline OrbitSpace orbit_space(const Action &a)
{
  const std::size_t nz = a.size();
  std::vector<std::size_t> root(nz);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t i) {
    while (root[i] != i)
      i = root[i] = root[root[i]];
    return i;
  };
  for (Arrow x = 0; x < a.groupoid().size(); ++x)
    for (std::size_t z = 0; z < nz; ++z)
      if (a.defined(x, z))
      {
        auto p = find(z), q = find(a.act(x, z));
        if (p != q)
          root[std::max(p, q)] = std::min(p, q);
      }
  std::map<std::size_t, std::size_t> best;
  for (std::size_t z = 0; z < nz; ++z)
  {
    auto r = find(z);
    auto it = best.find(r);
    if (it == best.end() || a.carrier()[z] < a.carrier()[it->second])
      best[r] = z;
  }
  OrbitSpace out;
  for (const auto &[r, z] : best)
    out.reps.push_back(z);
  std::sort(out.reps.begin(), out.reps.end(), [&](auto p, auto q) { return a.carrier()[p] < a.carrier()[q]; });
  std::vector<std::string> names;
  std::map<std::size_t, std::size_t> cls;
  for (std::size_t c = 0; c < out.reps.size(); ++c)
  {
    names.push_back("orbit:" + a.carrier()[out.reps[c]]);
    cls[find(out.reps[c])] = c;
  }
  std::vector<std::size_t> of(nz);
  for (std::size_t z = 0; z < nz; ++z)
    of[z] = cls[find(z)];
  out.quotient = FiniteMap(a.carrier(), std::move(names), std::move(of));
  return out;
}

/// A (G,H)-equivalence: a left G-action and a right H-action on one carrier.
struct Equivalence
{
  Action left;
  Action right;

  bool operator==(const Equivalence &) const = default;
};

/// The opposite module: Z^op as an (H,G)-equivalence.
inline Equivalence opposite(const Equivalence &e) { return {opposite(e.right), opposite(e.left)}; }

namespace detail
{

// Appends a violation unless the map z -> class(z) induced by a moment map is
// a bijection from orbits of `other` onto the units of `acting`.
inline void check_induced_bijection(ValidationReport &rep, const std::string &axiom, const Action &moment_side,
                                    const Action &other)
{
  const Groupoid &g = moment_side.groupoid();
  auto orbits = orbit_space(other);
  std::vector<std::size_t> orbit_of_unit(g.units().size(), npos);
  for (std::size_t z = 0; z < moment_side.size(); ++z)
  {
    auto u = g.unit_position(moment_side.moment(z));
    auto c = orbits.quotient(z);
    if (orbit_of_unit[u] == npos)
      orbit_of_unit[u] = c;
    else if (orbit_of_unit[u] != c)
      rep.add(axiom, {moment_side.carrier()[orbits.reps[orbit_of_unit[u]]], moment_side.carrier()[z]},
              "two orbits over unit " + g.name(g.units()[u]) + " (action not transitive on the fiber)");
  }
  for (std::size_t u = 0; u < orbit_of_unit.size(); ++u)
    if (orbit_of_unit[u] == npos)
      rep.add(axiom, {g.name(g.units()[u])}, "unit is not in the image of the moment map");
}

} // namespace detail

/// Commuting actions, freeness on both sides, and the induced bijections
/// Z/H -> G^0 and G\Z -> H^0 (equivalently fiberwise transitivity).
inline ValidationReport validate_equivalence(const Equivalence &e)
{
  ValidationReport rep("equivalence");
  auto lrep = validate_action(e.left);
  auto rrep = validate_action(e.right);
  rep.merge(lrep, "left action: ");
  rep.merge(rrep, "right action: ");
  if (e.left.carrier() != e.right.carrier())
    rep.add("same carrier", {}, "left and right actions act on different sets");
  if (e.left.side() != Side::left || e.right.side() != Side::right)
    rep.add("orientation", {}, "expected a left action and a right action");
  if (!rep.passed())
    return rep;

  const Groupoid &g = e.left.groupoid(), &h = e.right.groupoid();
  const auto &zs = e.left.carrier();
  const std::size_t nz = zs.size();
  if (!lrep.free)
    rep.add("left free", lrep.fixed_point_witness);
  if (!rrep.free)
    rep.add("right free", rrep.fixed_point_witness);

  for (std::size_t z = 0; z < nz; ++z)
  {
    for (Arrow x = 0; x < g.size(); ++x)
      if (e.left.defined(x, z) && e.right.moment(e.left.act(x, z)) != e.right.moment(z))
        rep.add("moment invariance", {g.name(x), zs[z]}, "left action moves the right moment");
    for (Arrow y = 0; y < h.size(); ++y)
      if (e.right.moment(z) == h.range(y) && e.left.moment(e.right.act_right(z, y)) != e.left.moment(z))
        rep.add("moment invariance", {zs[z], h.name(y)}, "right action moves the left moment");
  }
  if (!rep.passed())
    return rep;

  for (Arrow x = 0; x < g.size(); ++x)
    for (std::size_t z = 0; z < nz; ++z)
    {
      if (!e.left.defined(x, z))
        continue;
      for (Arrow y = 0; y < h.size(); ++y)
      {
        if (e.right.moment(z) != h.range(y))
          continue;
        auto a = e.right.act_right(e.left.act(x, z), y);
        auto b = e.left.act(x, e.right.act_right(z, y));
        if (a != b)
          rep.add("commuting actions", {g.name(x), zs[z], h.name(y)}, "(g.z).h != g.(z.h)");
      }
    }

  detail::check_induced_bijection(rep, "induced bijection Z/H -> G0", e.left, e.right);
  detail::check_induced_bijection(rep, "induced bijection G\\Z -> H0", e.right, e.left);
  rep.note("properness", "automatic (finite)");
  return rep;
}

/// nu^{r(g)}({g.z}) = nu^{s(g)}({z}) for all (g,z) in G*Z.
inline ValidationReport check_equivariant(const Action &a, const FiberSystem &nu)
{
  if (nu.base != a.moment_map())
    throw InputError("equivariance check: system is not over the moment map of the action");
  ValidationReport rep("equivariant system");
  const Groupoid &g = a.groupoid();
  for (Arrow x = 0; x < g.size(); ++x)
    for (std::size_t z = 0; z < a.size(); ++z)
      if (a.defined(x, z))
      {
        auto lhs = nu.weight(g.unit_position(g.range(x)), a.act(x, z));
        auto rhs = nu.weight(g.unit_position(g.source(x)), z);
        if (lhs != rhs)
          rep.add("equivariance", {g.name(x), a.carrier()[z]},
                  "nu^r(g)(g.z) = " + to_string(lhs) + " but nu^s(g)(z) = " + to_string(rhs));
      }
  return rep;
}

/// The imprimitivity groupoid: pairs (x,y) with equal moment modulo the
/// diagonal action, [x,y][y,z] = [x,z], [x,y]^-1 = [y,x]. Classes are named
/// "imp:x|y" after their least representative pair.
struct Imprimitivity
{
  Groupoid groupoid;
  std::vector<std::pair<std::size_t, std::size_t>> rep; // arrow -> representative pair
  std::map<std::pair<std::size_t, std::size_t>, Arrow> label; // pair -> arrow
  OrbitSpace orbits;                                          // unit space, orbit c <-> units()[c]
};

namespace detail
{

// The unique g with g.from = to, or npos.
inline Arrow translating_arrow(const Action &a, std::size_t from, std::size_t to)
{
  Arrow found = npos;
  for (Arrow x = 0; x < a.groupoid().size(); ++x)
    if (a.defined(x, from) && a.act(x, from) == to)
    {
      if (found != npos)
        throw InputError("imprimitivity: action is not free (two arrows translate " + a.carrier()[from] + " to " +
                         a.carrier()[to] + ")");
      found = x;
    }
  return found;
}

} // namespace detail

inline Imprimitivity imprimitivity_groupoid(const Action &a, Side orientation)
{
  if (orientation != a.side())
    throw InputError(std::string("imprimitivity: action is presented as a ") + to_string(a.side()) +
                     " action, not " + to_string(orientation));
  auto vr = validate_action(a);
  require(vr, "imprimitivity: action");
  if (!vr.free)
    throw ValidationError("imprimitivity: action is not free", [&] {
      ValidationReport r("action");
      r.add("free", vr.fixed_point_witness);
      return r;
    }());

  const auto &zs = a.carrier();
  const Groupoid &g = a.groupoid();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pidx;
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a.moment(x) == a.moment(y))
      {
        pidx[{x, y}] = pairs.size();
        pairs.emplace_back(x, y);
      }
  std::vector<std::size_t> root(pairs.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t i) {
    while (root[i] != i)
      i = root[i] = root[root[i]];
    return i;
  };
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (Arrow x = 0; x < g.size(); ++x)
      if (a.defined(x, pairs[p].first))
      {
        auto q = pidx.at({a.act(x, pairs[p].first), a.act(x, pairs[p].second)});
        auto rp = find(p), rq = find(q);
        if (rp != rq)
          root[std::max(rp, rq)] = std::min(rp, rq);
      }
  auto pair_less = [&](std::size_t p, std::size_t q) {
    return std::pair(zs[pairs[p].first], zs[pairs[p].second]) < std::pair(zs[pairs[q].first], zs[pairs[q].second]);
  };
  std::map<std::size_t, std::size_t> best;
  for (std::size_t p = 0; p < pairs.size(); ++p)
  {
    auto r = find(p);
    auto it = best.find(r);
    if (it == best.end() || pair_less(p, it->second))
      best[r] = p;
  }
  std::vector<std::size_t> classes;
  for (const auto &[r, p] : best)
    classes.push_back(p);
  std::sort(classes.begin(), classes.end(), pair_less);
  std::map<std::size_t, Arrow> arrow_of_root;
  for (Arrow c = 0; c < classes.size(); ++c)
    arrow_of_root[find(classes[c])] = c;

  Imprimitivity out;
  for (std::size_t p = 0; p < pairs.size(); ++p)
    out.label[pairs[p]] = arrow_of_root.at(find(p));
  auto cls = [&](std::size_t x, std::size_t y) { return out.label.at({x, y}); };

  const std::size_t n = classes.size();
  std::vector<std::string> names;
  std::vector<Arrow> range(n), source(n), inverse(n);
  for (Arrow c = 0; c < n; ++c)
  {
    auto [x, y] = pairs[classes[c]];
    out.rep.emplace_back(x, y);
    names.push_back("imp:" + zs[x] + "|" + zs[y]);
    range[c] = cls(x, x);
    source[c] = cls(y, y);
    inverse[c] = cls(y, x);
  }
  out.orbits = orbit_space(a);
  // Units in the order of the orbit space, so unit position c is orbit c.
  std::vector<Arrow> units;
  for (auto z : out.orbits.reps)
    units.push_back(cls(z, z));
  out.groupoid = detail::assemble(std::move(names), std::move(units), range, source, inverse, [&](Arrow p, Arrow q) {
    auto [x, y] = out.rep[p];
    auto [y2, z] = out.rep[q];
    Arrow t = detail::translating_arrow(a, y, y2);
    if (t == npos)
      throw InputError("imprimitivity: representatives of a composable pair are not in one orbit");
    return cls(x, a.act(g.inverse(t), z));
  });
  return out;
}

} // namespace haar

#endif // HAAR_DYNAMICS_HPP
