#ifndef HAAR_EQUIVALENCES_HPP
#define HAAR_EQUIVALENCES_HPP

// Standard actions and equivalence bimodules: translations, the unit-space
// action, rectangles between relation groupoids, blow-up graphs, stability
// groups and orbit spaces of principal groupoids.

#include <map>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "dynamics.hpp"

namespace haar
{

/// G acting on its own arrows by left multiplication, moment r.
inline Action left_translation(const Groupoid &g)
{
  const std::size_t n = g.size();
  std::vector<std::size_t> table(n * n, npos);
  for (Arrow x = 0; x < n; ++x)
    for (Arrow z = 0; z < n; ++z)
      if (g.composable(x, z))
        table[x * n + z] = g.compose(x, z);
  std::vector<Arrow> moment(n);
  for (Arrow z = 0; z < n; ++z)
    moment[z] = g.range(z);
  return Action(g, g.names(), std::move(moment), std::move(table));
}

/// G acting on its own arrows by right multiplication z.x = zx, moment s.
inline Action right_translation(const Groupoid &g)
{
  const std::size_t n = g.size();
  std::vector<std::size_t> right(n * n, npos);
  for (Arrow z = 0; z < n; ++z)
    for (Arrow x = 0; x < n; ++x)
      if (g.composable(z, x))
        right[z * n + x] = g.compose(z, x);
  std::vector<Arrow> moment(n);
  for (Arrow z = 0; z < n; ++z)
    moment[z] = g.source(z);
  return Action::from_right(g, g.names(), std::move(moment), right);
}

/// The canonical action x.s(x) = r(x) on the unit space.
inline Action unit_space_action(const Groupoid &g)
{
  const std::size_t n = g.size(), k = g.units().size();
  std::vector<std::size_t> table(n * k, npos);
  for (Arrow x = 0; x < n; ++x)
    table[x * k + g.unit_position(g.source(x))] = g.unit_position(g.range(x));
  return Action(g, g.unit_names(), g.units(), std::move(table));
}

/// G as a (G,G)-equivalence over itself.
inline Equivalence self_equivalence(const Groupoid &g) { return {left_translation(g), right_translation(g)}; }

/// Rectangle bimodule {(u,w) : q(u) = p(w)} between the relation groupoids of
/// q : U -> V (acting on the left) and p : W -> V (acting on the right).
/// With V a point this is the rectangle U x W between pair groupoids.
inline Equivalence rectangle_equivalence(const std::vector<std::string> &u_points,
                                         const std::vector<std::string> &w_points,
                                         const std::vector<std::string> &v_points,
                                         const std::vector<std::size_t> &q,
                                         const std::vector<std::size_t> &p)
{
  Groupoid gl = relation_groupoid(u_points, v_points, q);
  Groupoid gr = relation_groupoid(w_points, v_points, p);
  std::vector<std::string> carrier;
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> idx;
  for (std::size_t u = 0; u < u_points.size(); ++u)
    for (std::size_t w = 0; w < w_points.size(); ++w)
      if (q[u] == p[w])
      {
        idx[{u, w}] = coords.size();
        coords.emplace_back(u, w);
        carrier.push_back("rect:" + u_points[u] + "|" + w_points[w]);
      }
  const std::size_t nz = carrier.size();
  auto unit_l = [&](std::size_t u) { return gl.index(pair_name(u_points[u], u_points[u])); };
  auto unit_r = [&](std::size_t w) { return gr.index(pair_name(w_points[w], w_points[w])); };

  std::vector<Arrow> lmoment(nz), rmoment(nz);
  for (std::size_t z = 0; z < nz; ++z)
  {
    lmoment[z] = unit_l(coords[z].first);
    rmoment[z] = unit_r(coords[z].second);
  }
  std::vector<std::size_t> ltable(gl.size() * nz, npos), rtable(nz * gr.size(), npos);
  for (std::size_t u1 = 0; u1 < u_points.size(); ++u1)
    for (std::size_t u2 = 0; u2 < u_points.size(); ++u2)
    {
      auto a = gl.find(pair_name(u_points[u1], u_points[u2]));
      if (!a)
        continue;
      for (std::size_t z = 0; z < nz; ++z)
        if (coords[z].first == u2)
          ltable[*a * nz + z] = idx.at({u1, coords[z].second});
    }
  for (std::size_t w1 = 0; w1 < w_points.size(); ++w1)
    for (std::size_t w2 = 0; w2 < w_points.size(); ++w2)
    {
      auto b = gr.find(pair_name(w_points[w1], w_points[w2]));
      if (!b)
        continue;
      for (std::size_t z = 0; z < nz; ++z)
        if (coords[z].second == w1)
          rtable[z * gr.size() + *b] = idx.at({coords[z].first, w2});
    }
  return {Action(gl, carrier, std::move(lmoment), std::move(ltable)),
          Action::from_right(gr, carrier, std::move(rmoment), rtable)};
}

/// The graph W = {(z,g) : f(z) = r(g)} of the blow-up homomorphism, a
/// (G[Z], G)-equivalence: (z,g,w).(w,g') = (z,gg') and (w,g').g = (w,g'g).
inline Equivalence blow_up_equivalence(const Groupoid &g, const std::vector<std::string> &points,
                                       const std::vector<Arrow> &f)
{
  BlowUp b = blow_up(g, points, f);
  const Groupoid &big = b.groupoid;
  std::vector<std::string> carrier;
  std::vector<std::pair<std::size_t, Arrow>> coords;
  std::map<std::pair<std::size_t, Arrow>, std::size_t> idx;
  for (std::size_t z = 0; z < points.size(); ++z)
    for (Arrow a = 0; a < g.size(); ++a)
      if (g.range(a) == f[z])
      {
        idx[{z, a}] = coords.size();
        coords.emplace_back(z, a);
        carrier.push_back("graph:" + points[z] + "|" + g.name(a));
      }
  const std::size_t nz = carrier.size();
  std::vector<Arrow> lmoment(nz), rmoment(nz);
  for (std::size_t i = 0; i < nz; ++i)
  {
    lmoment[i] = b.unit_of_point[coords[i].first];
    rmoment[i] = g.source(coords[i].second);
  }
  std::vector<std::size_t> ltable(big.size() * nz, npos), rtable(nz * g.size(), npos);
  for (Arrow x = 0; x < big.size(); ++x)
  {
    const auto &c = b.coords[x];
    for (std::size_t i = 0; i < nz; ++i)
      if (coords[i].first == c.w)
        ltable[x * nz + i] = idx.at({c.z, g.compose(c.g, coords[i].second)});
  }
  for (std::size_t i = 0; i < nz; ++i)
    for (Arrow a = 0; a < g.size(); ++a)
      if (g.composable(coords[i].second, a))
        rtable[i * g.size() + a] = idx.at({coords[i].first, g.compose(coords[i].second, a)});
  return {Action(big, carrier, std::move(lmoment), std::move(ltable)),
          Action::from_right(g, carrier, std::move(rmoment), rtable)};
}

/// G_v = s^-1(v) as a (G, G_v^v)-equivalence by left and right translation.
struct StabilityEquivalence
{
  StabilityGroup stability;
  Equivalence equivalence;
};

inline StabilityEquivalence stability_equivalence(const Groupoid &g, Arrow v)
{
  StabilityGroup st = stability_group(g, v);
  const auto &carrier_arrows = st.carrier;
  const std::size_t nz = carrier_arrows.size(), hn = st.group.size();
  std::vector<std::size_t> pos(g.size(), npos);
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < nz; ++i)
  {
    pos[carrier_arrows[i]] = i;
    carrier.push_back(g.name(carrier_arrows[i]));
  }
  std::vector<Arrow> lmoment(nz), rmoment(nz, st.group.units().front());
  std::vector<std::size_t> ltable(g.size() * nz, npos), rtable(nz * hn, npos);
  for (std::size_t i = 0; i < nz; ++i)
  {
    Arrow z = carrier_arrows[i];
    lmoment[i] = g.range(z);
    for (Arrow x = 0; x < g.size(); ++x)
      if (g.composable(x, z))
        ltable[x * nz + i] = pos[g.compose(x, z)];
    for (Arrow h = 0; h < hn; ++h)
      rtable[i * hn + h] = pos[g.compose(z, st.embedding[h])];
  }
  Equivalence e{Action(g, carrier, std::move(lmoment), std::move(ltable)),
                Action::from_right(st.group, carrier, std::move(rmoment), rtable)};
  return {std::move(st), std::move(e)};
}

/// For a principal groupoid, G^0 as a (G, G\G^0)-equivalence, the orbit space
/// viewed as a groupoid with only units (named "pair:c,c" for orbit c).
inline Equivalence orbit_equivalence(const Groupoid &g)
{
  if (auto w = isotropy_witness(g))
    throw InputError("orbit equivalence needs a principal groupoid; " + g.name(*w) + " is nontrivial isotropy");
  UnitOrbits orb = unit_orbits(g);
  std::vector<std::string> classes;
  for (Arrow u : orb.rep)
    classes.push_back("orbit:" + g.name(u));
  std::vector<std::size_t> ident(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    ident[c] = c;
  Groupoid h = relation_groupoid(classes, classes, ident);
  const std::size_t k = g.units().size();
  std::vector<Arrow> rmoment(k);
  std::vector<std::size_t> rtable(k * h.size(), npos);
  for (std::size_t z = 0; z < k; ++z)
  {
    rmoment[z] = h.units()[orb.of_unit[z]];
    rtable[z * h.size() + rmoment[z]] = z;
  }
  return {unit_space_action(g), Action::from_right(h, g.unit_names(), std::move(rmoment), rtable)};
}

} // namespace haar

#endif // HAAR_EQUIVALENCES_HPP
