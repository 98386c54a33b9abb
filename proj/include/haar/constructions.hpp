#ifndef HAAR_CONSTRUCTIONS_HPP
#define HAAR_CONSTRUCTIONS_HPP

// Constructors for the groupoid shapes used throughout: pair and relation
// groupoids, groups, transformation groupoids, stability groups and blow-ups.
// Element names are canonical so that serialized output is reproducible.

#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "groupoid.hpp"

namespace haar
{

namespace detail
{

inline void require_distinct(const std::vector<std::string> &tokens, const char *what)
{
  std::set<std::string> seen;
  for (const auto &t : tokens)
    if (!seen.insert(t).second)
      throw InputError(std::string(what) + " lists \"" + t + "\" twice");
}

// Assembles a groupoid from arrows given as structure maps plus a product
// callback returning npos on non-composable pairs.
template <typename Product>
Groupoid assemble(std::vector<std::string> names, std::vector<Arrow> units, std::vector<Arrow> range,
                  std::vector<Arrow> source, std::vector<Arrow> inverse, Product &&product)
{
  const std::size_t n = names.size();
  std::vector<Arrow> table(n * n, npos);
  for (Arrow x = 0; x < n; ++x)
    for (Arrow y = 0; y < n; ++y)
      if (source[x] == range[y])
        table[x * n + y] = product(x, y);
  return Groupoid(std::move(names), std::move(units), std::move(range), std::move(source), std::move(inverse),
                  std::move(table));
}

} // namespace detail

/// Canonical name of the pair (u,v).
inline std::string pair_name(const std::string &u, const std::string &v) { return "pair:" + u + "," + v; }

/// Pair groupoid on `points`: arrows (u,v), r = first, s = second,
/// (u,v)(v,w) = (u,w), (u,v)^-1 = (v,u).
inline Groupoid pair_groupoid(const std::vector<std::string> &points)
{
  if (points.empty())
    throw InputError("pair groupoid needs at least one point");
  detail::require_distinct(points, "pair groupoid points");
  const std::size_t k = points.size();
  auto id = [k](std::size_t u, std::size_t v) { return u * k + v; };
  std::vector<std::string> names;
  std::vector<Arrow> units, range, source, inverse;
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = 0; v < k; ++v)
    {
      names.push_back(pair_name(points[u], points[v]));
      range.push_back(id(u, u));
      source.push_back(id(v, v));
      inverse.push_back(id(v, u));
    }
  for (std::size_t u = 0; u < k; ++u)
    units.push_back(id(u, u));
  return detail::assemble(std::move(names), std::move(units), std::move(range), std::move(source),
                          std::move(inverse), [&](Arrow x, Arrow y) { return id(x / k, y % k); });
}

/// A finite group as a multiplication table: product[i][j] = e_i e_j.
struct GroupTable
{
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> product;
};

/// Z/n with elements named "0".."n-1".
inline GroupTable cyclic_table(std::size_t n, const std::vector<std::string> &names = {})
{
  GroupTable t;
  for (std::size_t i = 0; i < n; ++i)
    t.elements.push_back(names.empty() ? std::to_string(i) : names.at(i));
  t.product.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      t.product[i][j] = (i + j) % n;
  return t;
}

/// One-unit groupoid from a group table. The table is checked to be a group:
/// closed, associative, with identity and inverses.
inline Groupoid group_as_groupoid(const GroupTable &t)
{
  const std::size_t n = t.elements.size();
  if (n == 0)
    throw InputError("group table is empty");
  detail::require_distinct(t.elements, "group table");
  if (t.product.size() != n)
    throw InputError("group table is not square");
  for (const auto &row : t.product)
  {
    if (row.size() != n)
      throw InputError("group table is not square");
    for (auto v : row)
      if (v >= n)
        throw InputError("group table entry outside the element set");
  }
  const auto &m = t.product;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (m[m[a][b]][c] != m[a][m[b][c]])
          throw InputError("group table is not associative at (" + t.elements[a] + ", " + t.elements[b] + ", " +
                           t.elements[c] + ")");
  std::size_t e = npos;
  for (std::size_t a = 0; a < n && e == npos; ++a)
  {
    bool ok = true;
    for (std::size_t b = 0; b < n && ok; ++b)
      ok = m[a][b] == b && m[b][a] == b;
    if (ok)
      e = a;
  }
  if (e == npos)
    throw InputError("group table has no identity");
  std::vector<Arrow> inverse(n, npos);
  for (std::size_t a = 0; a < n; ++a)
  {
    for (std::size_t b = 0; b < n; ++b)
      if (m[a][b] == e && m[b][a] == e)
        inverse[a] = b;
    if (inverse[a] == npos)
      throw InputError("group element \"" + t.elements[a] + "\" has no inverse");
  }
  return detail::assemble(t.elements, {e}, std::vector<Arrow>(n, e), std::vector<Arrow>(n, e), std::move(inverse),
                          [&](Arrow x, Arrow y) { return m[x][y]; });
}

inline std::string action_name(const std::string &g, const std::string &x) { return "act:" + g + "|" + x; }

/// Transformation groupoid of a group (one-unit groupoid) acting on `points`;
/// `action[g][i]` is the index of g.x_i. Arrows (g, x) with s = (e, x),
/// r = (e, g.x) and (g', g.x)(g, x) = (g'g, x).
inline Groupoid transformation_groupoid(const Groupoid &group, const std::vector<std::string> &points,
                                        const std::vector<std::vector<std::size_t>> &action)
{
  if (group.units().size() != 1)
    throw InputError("transformation groupoid needs a group (exactly one unit)");
  require(validate_groupoid(group), "transformation groupoid: group");
  detail::require_distinct(points, "transformation groupoid points");
  const std::size_t gn = group.size(), k = points.size();
  if (action.size() != gn)
    throw InputError("action table must have one row per group element");
  for (const auto &row : action)
  {
    if (row.size() != k)
      throw InputError("action table row has the wrong length");
    for (auto v : row)
      if (v >= k)
        throw InputError("action table entry outside the point set");
  }
  const Arrow e = group.units().front();
  for (std::size_t i = 0; i < k; ++i)
  {
    if (action[e][i] != i)
      throw InputError("action law violated: identity moves \"" + points[i] + "\"");
    for (Arrow a = 0; a < gn; ++a)
      for (Arrow b = 0; b < gn; ++b)
        if (action[group.compose(a, b)][i] != action[a][action[b][i]])
          throw InputError("action law violated: (gh).x != g.(h.x) for g = " + group.name(a) +
                           ", h = " + group.name(b) + ", x = " + points[i]);
  }
  // Arrow (g, x) has index x * gn + g.
  auto id = [gn](Arrow g, std::size_t x) { return x * gn + g; };
  std::vector<std::string> names;
  std::vector<Arrow> units, range, source, inverse;
  for (std::size_t x = 0; x < k; ++x)
    for (Arrow g = 0; g < gn; ++g)
    {
      names.push_back(action_name(group.name(g), points[x]));
      source.push_back(id(e, x));
      range.push_back(id(e, action[g][x]));
      inverse.push_back(id(group.inverse(g), action[g][x]));
    }
  for (std::size_t x = 0; x < k; ++x)
    units.push_back(id(e, x));
  return detail::assemble(std::move(names), std::move(units), std::move(range), std::move(source),
                          std::move(inverse),
                          [&](Arrow p, Arrow q) { return id(group.compose(p % gn, q % gn), q / gn); });
}

/// G_q = {(u,v) : q(u) = q(v)} for q : U -> V given as target indices.
/// q must be onto V.
inline Groupoid relation_groupoid(const std::vector<std::string> &domain, const std::vector<std::string> &targets,
                                  const std::vector<std::size_t> &q)
{
  if (domain.empty())
    throw InputError("relation groupoid needs a nonempty domain");
  detail::require_distinct(domain, "relation groupoid domain");
  if (q.size() != domain.size())
    throw InputError("quotient map must assign a target to every point");
  std::vector<bool> hit(targets.size(), false);
  for (auto t : q)
  {
    if (t >= targets.size())
      throw InputError("quotient map points outside the target set");
    hit[t] = true;
  }
  std::string missing;
  for (std::size_t t = 0; t < targets.size(); ++t)
    if (!hit[t])
      missing += (missing.empty() ? "" : ", ") + targets[t];
  if (!missing.empty())
    throw InputError("quotient map is not surjective; unreached targets: " + missing);

  const std::size_t k = domain.size();
  std::vector<std::vector<Arrow>> id(k, std::vector<Arrow>(k, npos));
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = 0; v < k; ++v)
      if (q[u] == q[v])
      {
        id[u][v] = coords.size();
        coords.emplace_back(u, v);
      }
  std::vector<std::string> names;
  std::vector<Arrow> units, range, source, inverse;
  for (auto [u, v] : coords)
  {
    names.push_back(pair_name(domain[u], domain[v]));
    range.push_back(id[u][u]);
    source.push_back(id[v][v]);
    inverse.push_back(id[v][u]);
  }
  for (std::size_t u = 0; u < k; ++u)
    units.push_back(id[u][u]);
  return detail::assemble(std::move(names), std::move(units), std::move(range), std::move(source),
                          std::move(inverse),
                          [&](Arrow x, Arrow y) { return id[coords[x].first][coords[y].second]; });
}

/// The isotropy group G_v^v as a one-unit groupoid, together with the arrows
/// of G it came from and the carrier G_v = s^{-1}(v).
struct StabilityGroup
{
  Groupoid group;
  std::vector<Arrow> embedding; // arrow of `group` -> arrow of G
  std::vector<Arrow> carrier;   // G_v, in arrow order of G
};

inline StabilityGroup stability_group(const Groupoid &g, Arrow v)
{
  if (v >= g.size() || !g.is_unit(v))
    throw InputError("stability group requested at a non-unit");
  StabilityGroup out;
  std::vector<Arrow> local(g.size(), npos);
  for (Arrow x = 0; x < g.size(); ++x)
  {
    if (g.source(x) == v)
      out.carrier.push_back(x);
    if (g.range(x) == v && g.source(x) == v)
    {
      local[x] = out.embedding.size();
      out.embedding.push_back(x);
    }
  }
  std::vector<std::string> names;
  std::vector<Arrow> inverse;
  for (Arrow x : out.embedding)
  {
    names.push_back(g.name(x));
    inverse.push_back(local[g.inverse(x)]);
  }
  const std::size_t n = names.size();
  const Arrow e = local[v];
  out.group = detail::assemble(std::move(names), {e}, std::vector<Arrow>(n, e), std::vector<Arrow>(n, e),
                               std::move(inverse), [&](Arrow a, Arrow b) {
                                 return local[g.compose(out.embedding[a], out.embedding[b])];
                               });
  return out;
}

inline std::string blowup_name(const std::string &z, const std::string &g, const std::string &w)
{
  return "blowup:" + z + "|" + g + "|" + w;
}

/// G[Z] = {(z,g,w) : f(z) = r(g), s(g) = f(w)} with (z,g,w)(w,g',v) = (z,gg',v)
/// and (z,g,w)^-1 = (w,g^-1,z). `coords[a]` holds (z, g, w) for arrow a.
struct BlowUp
{
  struct Coord
  {
    std::size_t z;
    Arrow g;
    std::size_t w;
  };
  Groupoid groupoid;
  std::vector<Coord> coords;
  std::vector<Arrow> unit_of_point; // z -> arrow (z, f(z), z)
};

/// `f[i]` is the unit (as an arrow of G) assigned to point i; f must be onto G^0.
inline BlowUp blow_up(const Groupoid &g, const std::vector<std::string> &points, const std::vector<Arrow> &f)
{
  detail::require_distinct(points, "blow-up points");
  if (f.size() != points.size())
    throw InputError("blow-up map must assign a unit to every point");
  std::vector<bool> hit(g.units().size(), false);
  for (std::size_t i = 0; i < f.size(); ++i)
  {
    if (f[i] >= g.size() || !g.is_unit(f[i]))
      throw InputError("blow-up map sends \"" + points[i] + "\" to a non-unit");
    hit[g.unit_position(f[i])] = true;
  }
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (!hit[i])
      throw InputError("blow-up map is not surjective; unit \"" + g.name(g.units()[i]) + "\" is not reached");

  const std::size_t k = points.size();
  BlowUp out;
  // index[z][w] lists arrows (z, g, w) keyed by g.
  std::vector<std::unordered_map<Arrow, Arrow>> index(k * k);
  for (std::size_t z = 0; z < k; ++z)
    for (Arrow a = 0; a < g.size(); ++a)
      if (g.range(a) == f[z])
        for (std::size_t w = 0; w < k; ++w)
          if (g.source(a) == f[w])
          {
            index[z * k + w][a] = out.coords.size();
            out.coords.push_back({z, a, w});
          }
  auto id = [&](std::size_t z, Arrow a, std::size_t w) { return index[z * k + w].at(a); };

  std::vector<std::string> names;
  std::vector<Arrow> units, range, source, inverse;
  for (const auto &c : out.coords)
  {
    names.push_back(blowup_name(points[c.z], g.name(c.g), points[c.w]));
    range.push_back(id(c.z, f[c.z], c.z));
    source.push_back(id(c.w, f[c.w], c.w));
    inverse.push_back(id(c.w, g.inverse(c.g), c.z));
  }
  for (std::size_t z = 0; z < k; ++z)
    units.push_back(id(z, f[z], z));
  out.unit_of_point = units;
  out.groupoid = detail::assemble(std::move(names), std::move(units), std::move(range), std::move(source),
                                  std::move(inverse), [&](Arrow x, Arrow y) {
                                    const auto &cx = out.coords[x];
                                    const auto &cy = out.coords[y];
                                    return id(cx.z, g.compose(cx.g, cy.g), cy.w);
                                  });
  return out;
}

} // namespace haar

#endif // HAAR_CONSTRUCTIONS_HPP
