#ifndef HAAR_GROUPOID_HPP
#define HAAR_GROUPOID_HPP

// Finite groupoids stored as explicit tables, and exhaustive axiom checking.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "report.hpp"

namespace haar
{

/// Index of an arrow inside its groupoid. Units are arrows too.
using Arrow = std::size_t;
inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// A finite groupoid: opaque named arrows with range, source, inverse and an
/// explicit composition table. The constructor only checks that the tables are
/// well formed (right sizes, indices in range, distinct names); the groupoid
/// axioms are checked by validate_groupoid so that corrupted tables can be
/// represented and diagnosed.
class Groupoid
{
public:
  Groupoid() = default;

  /// `table[x * n + y]` is the product xy, or npos where undefined.
  Groupoid(std::vector<std::string> names,
           std::vector<Arrow> units,
           std::vector<Arrow> range,
           std::vector<Arrow> source,
           std::vector<Arrow> inverse,
           std::vector<Arrow> table)
    : _names(std::move(names)),
      _units(std::move(units)),
      _range(std::move(range)),
      _source(std::move(source)),
      _inverse(std::move(inverse)),
      _table(std::move(table))
  {
    const std::size_t n = _names.size();
    if (_range.size() != n || _source.size() != n || _inverse.size() != n || _table.size() != n * n)
      throw InputError("groupoid tables have inconsistent sizes");
    for (Arrow x = 0; x < n; ++x)
    {
      if (!_index.emplace(_names[x], x).second)
        throw InputError("duplicate element \"" + _names[x] + "\"");
      if (_range[x] >= n || _source[x] >= n || _inverse[x] >= n)
        throw InputError("structure map of \"" + _names[x] + "\" points outside the element set");
    }
    for (Arrow t : _table)
      if (t != npos && t >= n)
        throw InputError("composition table entry outside the element set");
    _unit_pos.assign(n, npos);
    for (std::size_t i = 0; i < _units.size(); ++i)
    {
      if (_units[i] >= n)
        throw InputError("unit outside the element set");
      if (_unit_pos[_units[i]] != npos)
        throw InputError("unit \"" + _names[_units[i]] + "\" listed twice");
      _unit_pos[_units[i]] = i;
    }
    _range_fibers.assign(_units.size(), {});
    _source_fibers.assign(_units.size(), {});
    for (Arrow x = 0; x < n; ++x)
    {
      if (_unit_pos[_range[x]] != npos)
        _range_fibers[_unit_pos[_range[x]]].push_back(x);
      if (_unit_pos[_source[x]] != npos)
        _source_fibers[_unit_pos[_source[x]]].push_back(x);
    }
  }

  /// Builds a groupoid from token-level data. Throws InputError naming the
  /// offending token when a triple or map references an unknown element.
  static Groupoid from_tokens(const std::vector<std::string> &elements,
                              const std::vector<std::string> &units,
                              const std::map<std::string, std::string> &range,
                              const std::map<std::string, std::string> &source,
                              const std::map<std::string, std::string> &inverse,
                              const std::vector<std::tuple<std::string, std::string, std::string>> &compose)
  {
    std::unordered_map<std::string, Arrow> idx;
    for (Arrow i = 0; i < elements.size(); ++i)
      if (!idx.emplace(elements[i], i).second)
        throw InputError("duplicate element \"" + elements[i] + "\"");
    auto lookup = [&](const std::string &tok, const char *where) {
      auto it = idx.find(tok);
      if (it == idx.end())
        throw InputError(std::string(where) + " references unknown element \"" + tok + "\"");
      return it->second;
    };
    const std::size_t n = elements.size();
    auto total = [&](const std::map<std::string, std::string> &m, const char *where) {
      std::vector<Arrow> out(n, npos);
      for (const auto &[k, v] : m)
        out[lookup(k, where)] = lookup(v, where);
      for (Arrow i = 0; i < n; ++i)
        if (out[i] == npos)
          throw InputError(std::string(where) + " has no entry for \"" + elements[i] + "\"");
      return out;
    };
    std::vector<Arrow> us;
    for (const auto &u : units)
      us.push_back(lookup(u, "units"));
    std::vector<Arrow> table(n * n, npos);
    for (const auto &[a, b, c] : compose)
    {
      Arrow x = lookup(a, "compose"), y = lookup(b, "compose"), z = lookup(c, "compose");
      if (table[x * n + y] != npos)
        throw InputError("compose lists (" + a + ", " + b + ") twice");
      table[x * n + y] = z;
    }
    return Groupoid(elements, std::move(us), total(range, "range"), total(source, "source"),
                    total(inverse, "inverse"), std::move(table));
  }

  std::size_t size() const { return _names.size(); }
  const std::vector<std::string> &names() const { return _names; }
  const std::string &name(Arrow x) const { return _names.at(x); }

  std::optional<Arrow> find(const std::string &token) const
  {
    auto it = _index.find(token);
    if (it == _index.end())
      return std::nullopt;
    return it->second;
  }

  Arrow index(const std::string &token) const
  {
    auto x = find(token);
    if (!x)
      throw InputError("unknown element \"" + token + "\"");
    return *x;
  }

  const std::vector<Arrow> &units() const { return _units; }
  bool is_unit(Arrow x) const { return _unit_pos.at(x) != npos; }
  /// Position of a unit within units(); npos for non-units.
  std::size_t unit_position(Arrow u) const { return _unit_pos.at(u); }

  Arrow range(Arrow x) const { return _range.at(x); }
  Arrow source(Arrow x) const { return _source.at(x); }
  Arrow inverse(Arrow x) const { return _inverse.at(x); }

  bool composable(Arrow x, Arrow y) const { return _source.at(x) == _range.at(y); }

  /// Raw table entry, npos where undefined. Used by validators.
  Arrow table_entry(Arrow x, Arrow y) const { return _table.at(x * size() + y); }

  /// The product xy. Non-composable pairs are a hard error.
  Arrow compose(Arrow x, Arrow y) const
  {
    if (!composable(x, y))
      throw CompositionError("(" + name(x) + ", " + name(y) + ") is not composable");
    Arrow z = table_entry(x, y);
    if (z == npos)
      throw CompositionError("composition table has no entry for (" + name(x) + ", " + name(y) + ")");
    return z;
  }

  /// G^u = r^{-1}(u), indexed by unit position.
  const std::vector<Arrow> &range_fiber(std::size_t unit_pos) const { return _range_fibers.at(unit_pos); }
  /// G_u = s^{-1}(u), indexed by unit position.
  const std::vector<Arrow> &source_fiber(std::size_t unit_pos) const { return _source_fibers.at(unit_pos); }

  /// Range map as unit positions, i.e. the base map of an r-system.
  std::vector<std::size_t> range_positions() const
  {
    std::vector<std::size_t> out(size());
    for (Arrow x = 0; x < size(); ++x)
      out[x] = _unit_pos[_range[x]];
    return out;
  }

  std::vector<std::string> unit_names() const
  {
    std::vector<std::string> out;
    for (Arrow u : _units)
      out.push_back(_names[u]);
    return out;
  }

  bool operator==(const Groupoid &o) const
  {
    return _names == o._names && _units == o._units && _range == o._range && _source == o._source &&
           _inverse == o._inverse && _table == o._table;
  }

private:
  std::vector<std::string> _names;
  std::vector<Arrow> _units;
  std::vector<Arrow> _range, _source, _inverse;
  std::vector<Arrow> _table;
  std::unordered_map<std::string, Arrow> _index;
  std::vector<std::size_t> _unit_pos;
  std::vector<std::vector<Arrow>> _range_fibers, _source_fibers;
};

/// Exhaustive check of every groupoid axiom; O(n^3) for associativity.
inline ValidationReport validate_groupoid(const Groupoid &g)
{
  ValidationReport rep("groupoid");
  const std::size_t n = g.size();
  auto nm = [&](Arrow x) { return g.name(x); };

  if (n == 0)
    rep.add("nonempty", {}, "groupoid has no elements");
  bool maps_ok = true;
  for (Arrow x = 0; x < n; ++x)
  {
    if (!g.is_unit(g.range(x)))
    {
      rep.add("range in units", {nm(x)}, "r(" + nm(x) + ") = " + nm(g.range(x)) + " is not a unit");
      maps_ok = false;
    }
    if (!g.is_unit(g.source(x)))
    {
      rep.add("source in units", {nm(x)}, "s(" + nm(x) + ") = " + nm(g.source(x)) + " is not a unit");
      maps_ok = false;
    }
  }
  for (Arrow u : g.units())
    if (g.range(u) != u || g.source(u) != u)
      rep.add("unit fixed by range/source", {nm(u)});

  // Domain of composition: exactly the composable pairs.
  for (Arrow x = 0; x < n; ++x)
    for (Arrow y = 0; y < n; ++y)
    {
      Arrow xy = g.table_entry(x, y);
      if (g.composable(x, y) && xy == npos)
        rep.add("composition domain", {nm(x), nm(y)}, "composable pair has no product");
      else if (!g.composable(x, y) && xy != npos)
        rep.add("composition domain", {nm(x), nm(y)}, "product defined on a non-composable pair");
      else if (xy != npos)
      {
        if (g.range(xy) != g.range(x))
          rep.add("range of product", {nm(x), nm(y)});
        if (g.source(xy) != g.source(y))
          rep.add("source of product", {nm(x), nm(y)});
      }
    }

  auto prod = [&](Arrow a, Arrow b) { return (a == npos || b == npos) ? npos : g.table_entry(a, b); };

  for (Arrow x = 0; x < n; ++x)
    for (Arrow y = 0; y < n; ++y)
    {
      Arrow xy = g.table_entry(x, y);
      if (xy == npos)
        continue;
      for (Arrow z = 0; z < n; ++z)
      {
        Arrow yz = g.table_entry(y, z);
        if (yz == npos)
          continue;
        Arrow lhs = prod(xy, z), rhs = prod(x, yz);
        if (lhs != rhs)
          rep.add("associativity", {nm(x), nm(y), nm(z)},
                  "(xy)z = " + (lhs == npos ? std::string("undefined") : nm(lhs)) +
                    ", x(yz) = " + (rhs == npos ? std::string("undefined") : nm(rhs)));
      }
    }

  if (maps_ok)
    for (Arrow x = 0; x < n; ++x)
    {
      if (g.table_entry(g.range(x), x) != x)
        rep.add("left unit law", {nm(x)});
      if (g.table_entry(x, g.source(x)) != x)
        rep.add("right unit law", {nm(x)});
    }

  for (Arrow x = 0; x < n; ++x)
  {
    Arrow xi = g.inverse(x);
    if (g.table_entry(x, xi) != g.range(x) || g.table_entry(xi, x) != g.source(x))
      rep.add("inverse law", {nm(x)}, "x x^-1 = r(x) and x^-1 x = s(x) must hold with x^-1 = " + nm(xi));
    if (g.inverse(xi) != x)
      rep.add("inverse involution", {nm(x)});
    if (g.range(xi) != g.source(x))
      rep.add("range of inverse", {nm(x)});
  }
  return rep;
}

namespace detail
{

inline std::vector<std::size_t> arrow_signature(const Groupoid &g, Arrow x)
{
  std::size_t ru = g.unit_position(g.range(x)), su = g.unit_position(g.source(x));
  std::size_t isotropy = 0;
  for (Arrow y : g.range_fiber(ru))
    if (g.source(y) == g.range(x))
      ++isotropy;
  std::size_t order = 0;
  if (g.range(x) == g.source(x))
  {
    Arrow p = x;
    order = 1;
    while (p != g.range(x) && order <= g.size())
    {
      p = g.table_entry(p, x);
      ++order;
      if (p == npos)
        break;
    }
  }
  return {g.is_unit(x) ? 1u : 0u, g.range_fiber(ru).size(), g.source_fiber(su).size(), isotropy,
          g.range(x) == g.source(x) ? 1u : 0u, order};
}

} // namespace detail

/// True iff `map` (indexed by arrows of a) is a bijection onto b preserving
/// units, range, source, inverse and composition.
inline bool is_isomorphism(const Groupoid &a, const Groupoid &b, const std::vector<Arrow> &map)
{
  if (a.size() != b.size() || map.size() != a.size() || a.units().size() != b.units().size())
    return false;
  std::vector<bool> hit(b.size(), false);
  for (Arrow x = 0; x < a.size(); ++x)
  {
    if (map[x] >= b.size() || hit[map[x]])
      return false;
    hit[map[x]] = true;
  }
  for (Arrow x = 0; x < a.size(); ++x)
  {
    if (a.is_unit(x) != b.is_unit(map[x]) || map[a.range(x)] != b.range(map[x]) ||
        map[a.source(x)] != b.source(map[x]) || map[a.inverse(x)] != b.inverse(map[x]))
      return false;
    for (Arrow y = 0; y < a.size(); ++y)
    {
      Arrow xy = a.table_entry(x, y), fxy = b.table_entry(map[x], map[y]);
      if ((xy == npos) != (fxy == npos) || (xy != npos && map[xy] != fxy))
        return false;
    }
  }
  return true;
}

/// Backtracking search for a groupoid isomorphism a -> b. Intended for
/// desk-scale inputs; candidates are pruned by fiber-size and order invariants.
inline std::optional<std::vector<Arrow>> find_isomorphism(const Groupoid &a, const Groupoid &b)
{
  const std::size_t n = a.size();
  if (n != b.size() || a.units().size() != b.units().size())
    return std::nullopt;
  std::vector<std::vector<std::size_t>> sig_a(n), sig_b(n);
  for (Arrow x = 0; x < n; ++x)
  {
    sig_a[x] = detail::arrow_signature(a, x);
    sig_b[x] = detail::arrow_signature(b, x);
  }
  {
    auto sa = sig_a, sb = sig_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb)
      return std::nullopt;
  }

  // Units first, then arrows grouped by (range, source) so constraints bite early.
  std::vector<Arrow> order(a.units());
  std::vector<Arrow> rest;
  for (Arrow x = 0; x < n; ++x)
    if (!a.is_unit(x))
      rest.push_back(x);
  std::stable_sort(rest.begin(), rest.end(), [&](Arrow x, Arrow y) {
    return std::pair(a.range(x), a.source(x)) < std::pair(a.range(y), a.source(y));
  });
  order.insert(order.end(), rest.begin(), rest.end());

  std::vector<Arrow> map(n, npos);
  std::vector<bool> used(n, false);

  auto consistent = [&](Arrow x, Arrow c) {
    if (map[a.range(x)] != npos && map[a.range(x)] != b.range(c))
      return false;
    if (map[a.source(x)] != npos && map[a.source(x)] != b.source(c))
      return false;
    if (map[a.inverse(x)] != npos && map[a.inverse(x)] != b.inverse(c))
      return false;
    for (Arrow y = 0; y < n; ++y)
    {
      if (map[y] == npos)
        continue;
      Arrow xy = a.table_entry(x, y), yx = a.table_entry(y, x);
      Arrow cy = b.table_entry(c, map[y]), yc = b.table_entry(map[y], c);
      if ((xy == npos) != (cy == npos) || (yx == npos) != (yc == npos))
        return false;
      if (xy != npos && map[xy] != npos && map[xy] != cy)
        return false;
      if (yx != npos && map[yx] != npos && map[yx] != yc)
        return false;
      if (xy == x && cy != c)
        return false;
    }
    return true;
  };

  auto search = [&](auto &&self, std::size_t k) -> bool {
    if (k == n)
      return is_isomorphism(a, b, map);
    Arrow x = order[k];
    for (Arrow c = 0; c < n; ++c)
    {
      if (used[c] || sig_a[x] != sig_b[c] || !consistent(x, c))
        continue;
      map[x] = c;
      used[c] = true;
      if (self(self, k + 1))
        return true;
      map[x] = npos;
      used[c] = false;
    }
    return false;
  };
  if (search(search, 0))
    return map;
  return std::nullopt;
}

/// Orbits of the canonical action x . s(x) = r(x) of G on its unit space.
/// Classes are numbered by their least-named unit; `rep[c]` is that unit.
struct UnitOrbits
{
  std::vector<std::size_t> of_unit; // unit position -> class
  std::vector<Arrow> rep;           // class -> representative unit
};

inline UnitOrbits unit_orbits(const Groupoid &g)
{
  const std::size_t k = g.units().size();
  // Union the units joined by some arrow; representative = least name.
  std::vector<std::size_t> root(k);
  for (std::size_t i = 0; i < k; ++i)
    root[i] = i;
  auto find = [&](std::size_t i) {
    while (root[i] != i)
      i = root[i] = root[root[i]];
    return i;
  };
  for (Arrow x = 0; x < g.size(); ++x)
  {
    std::size_t a = find(g.unit_position(g.range(x))), b = find(g.unit_position(g.source(x)));
    if (a != b)
      root[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, Arrow> best; // root -> least-named unit
  for (std::size_t i = 0; i < k; ++i)
  {
    auto r = find(i);
    Arrow u = g.units()[i];
    auto it = best.find(r);
    if (it == best.end() || g.name(u) < g.name(it->second))
      best[r] = u;
  }
  std::vector<Arrow> reps;
  for (const auto &[r, u] : best)
    reps.push_back(u);
  std::sort(reps.begin(), reps.end(), [&](Arrow x, Arrow y) { return g.name(x) < g.name(y); });
  UnitOrbits out;
  out.rep = reps;
  out.of_unit.assign(k, npos);
  for (std::size_t i = 0; i < k; ++i)
  {
    Arrow u = best[find(i)];
    out.of_unit[i] = static_cast<std::size_t>(std::find(reps.begin(), reps.end(), u) - reps.begin());
  }
  return out;
}

/// First arrow witnessing non-principality (a non-unit x with r(x) = s(x)).
inline std::optional<Arrow> isotropy_witness(const Groupoid &g)
{
  for (Arrow x = 0; x < g.size(); ++x)
    if (!g.is_unit(x) && g.range(x) == g.source(x))
      return x;
  return std::nullopt;
}

inline bool is_principal(const Groupoid &g) { return !isotropy_witness(g).has_value(); }

inline bool is_transitive(const Groupoid &g) { return unit_orbits(g).rep.size() == 1; }

} // namespace haar

#endif // HAAR_GROUPOID_HPP
