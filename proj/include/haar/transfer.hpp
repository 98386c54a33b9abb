#ifndef HAAR_TRANSFER_HPP
#define HAAR_TRANSFER_HPP

// Haar system constructions: averaging a full system into an equivariant one,
// inducing Haar systems on imprimitivity groupoids and transporting them
// across an equivalence, plus the explicit formulas for principal and
// transitive groupoids and blow-ups.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "constructions.hpp"
#include "dynamics.hpp"
#include "equivalences.hpp"
#include "systems.hpp"

namespace haar
{

/// Dense rational table indexed by (row, column).
class Grid
{
public:
  Grid(std::size_t rows, std::size_t cols) : _rows(rows), _cols(cols), _v(rows * cols, Rational(0)) {}

  std::size_t rows() const { return _rows; }
  std::size_t cols() const { return _cols; }
  Rational &operator()(std::size_t i, std::size_t j) { return _v.at(i * _cols + j); }
  const Rational &operator()(std::size_t i, std::size_t j) const { return _v.at(i * _cols + j); }

  bool operator==(const Grid &) const = default;

private:
  std::size_t _rows, _cols;
  std::vector<Rational> _v;
};

namespace detail
{

inline void require_over_units(const Groupoid &g, const FiberSystem &beta, const char *who)
{
  if (beta.base.targets != g.unit_names())
    throw InputError(std::string(who) + ": system is not indexed by the unit space of the groupoid");
}

} // namespace detail

/// Phi(F)(g,u) = sum over z in rho^-1(u) of F(g,z) beta^u({z}); rows are arrows
/// of G, columns unit positions.
template <typename F>
Grid fiber_integrate(const Groupoid &g, F &&func, const FiberSystem &beta)
{
  detail::require_over_units(g, beta, "fiber_integrate");
  const std::size_t k = g.units().size();
  Grid out(g.size(), k);
  for (std::size_t u = 0; u < k; ++u)
  {
    const auto fiber = beta.base.fiber(u);
    for (Arrow x = 0; x < g.size(); ++x)
    {
      Rational acc = 0;
      for (auto z : fiber)
      {
        Rational w = beta.weight(u, z);
        if (w != 0)
          acc += Rational(func(x, z)) * w;
      }
      out(x, u) = acc;
    }
  }
  return out;
}

/// Psi_phi(f)(g) = sum over z in rho^-1(s(g)) of f(g.z) phi(z) beta^{s(g)}({z}),
/// computed as Phi(F)(g, s(g)) with F(g,z) = f(g.z) phi(z).
inline std::vector<Rational> psi_phi(const std::vector<Rational> &f, const Cutoff &phi, const FiberSystem &beta,
                                     const Action &a)
{
  const Groupoid &g = a.groupoid();
  if (f.size() != a.size() || phi.weights.size() != a.size())
    throw InputError("psi_phi: f and phi must be functions on the carrier");
  if (beta.base != a.moment_map())
    throw InputError("psi_phi: beta is not a system for the moment map");
  Grid big = fiber_integrate(
    g,
    [&](Arrow x, std::size_t z) -> Rational {
      if (!a.defined(x, z) || phi.weights[z] == 0)
        return 0;
      return f[a.act(x, z)] * phi.weights[z];
    },
    beta);
  std::vector<Rational> out(g.size());
  for (Arrow x = 0; x < g.size(); ++x)
    out[x] = big(x, g.unit_position(g.source(x)));
  return out;
}

/// nu^u(f) = sum over g in G^u of lambda^u({g}) Psi_phi(f)(g), evaluated on the
/// indicator basis of the carrier. The result is a full, equivariant system
/// for the moment map; both properties are re-verified before returning.
inline FiberSystem average_system(const HaarSystem &lambda, const Action &a, const FiberSystem &beta,
                                  const Cutoff &phi)
{
  const Groupoid &g = a.groupoid();
  if (!(lambda.groupoid() == g))
    throw InputError("average_system: Haar system and action live on different groupoids");
  require(validate_action(a), "average_system: action");
  if (beta.base != a.moment_map())
    throw InputError("average_system: beta is not a system for the moment map");
  require(check_system(beta), "average_system: beta");
  if (phi.quotient != orbit_space(a).quotient)
    throw InputError("average_system: cut-off is not over the orbit map of the action");
  require(validate_cutoff(phi), "average_system: cut-off");

  const std::size_t nz = a.size();
  std::vector<Measure> nu(g.units().size());
  std::vector<Rational> indicator(nz, Rational(0));
  for (std::size_t w = 0; w < nz; ++w)
  {
    indicator[w] = 1;
    auto psi = psi_phi(indicator, phi, beta, a);
    indicator[w] = 0;
    const std::size_t u = g.unit_position(a.moment(w));
    Rational total = 0;
    for (Arrow x : g.range_fiber(u))
      total += lambda.weight(x) * psi[x];
    nu[u].set(w, total);
  }
  FiberSystem out(a.moment_map(), std::move(nu));
  require(check_system(out), "average_system: internal fullness check");
  require(check_equivariant(a, out), "average_system: internal equivariance check");
  return out;
}

/// Invariant measure with full support for a group acting on a finite set:
/// the single measure produced by averaging beta with phi. Uses the counting
/// Haar measure on the group unless another is supplied.
inline Measure invariant_measure(const Action &a, const Measure &beta, const Cutoff &phi,
                                 const std::optional<HaarSystem> &haar = std::nullopt)
{
  const Groupoid &g = a.groupoid();
  if (g.units().size() != 1)
    throw InputError("invariant_measure: acting groupoid must be a group");
  FiberSystem system(a.moment_map(), {beta});
  require(check_system(system), "invariant_measure: beta");
  FiberSystem nu = average_system(haar ? *haar : counting_haar(g), a, system, phi);
  require(check_equivariant(a, nu), "invariant_measure: invariance");
  return nu.measures.front();
}

/// Weights of the induced system on the imprimitivity groupoid computed with a
/// chosen representative y per unit: lambda^{[y]}({[y,x]}) = nu^{rho(y)}({x}).
inline std::vector<Rational> imprimitivity_weights(const Imprimitivity &imp, const Action &a, const FiberSystem &nu,
                                                   const std::vector<std::size_t> &representatives)
{
  const Groupoid &h = imp.groupoid;
  if (representatives.size() != h.units().size())
    throw InputError("imprimitivity_weights: one representative per unit is required");
  std::vector<Rational> out(h.size(), Rational(0));
  std::vector<bool> seen(h.size(), false);
  for (std::size_t c = 0; c < representatives.size(); ++c)
  {
    const std::size_t y = representatives[c];
    if (imp.orbits.quotient(y) != c)
      throw InputError("imprimitivity_weights: representative lies in the wrong orbit");
    const std::size_t u = a.groupoid().unit_position(a.moment(y));
    for (std::size_t x = 0; x < a.size(); ++x)
      if (a.moment(x) == a.moment(y))
      {
        Arrow arrow = imp.label.at({y, x});
        out[arrow] = nu.weight(u, x);
        seen[arrow] = true;
      }
  }
  for (Arrow c = 0; c < h.size(); ++c)
    if (!seen[c])
      throw InputError("imprimitivity_weights: arrow " + h.name(c) + " not reached from the representatives");
  return out;
}

/// Haar system on the imprimitivity groupoid of a free action induced by a
/// full equivariant system nu for the moment map. Well-definedness is checked
/// by recomputing with every representative of every unit.
inline HaarSystem imprimitivity_haar(const Imprimitivity &imp, const Action &a, const FiberSystem &nu)
{
  if (nu.base != a.moment_map())
    throw InputError("imprimitivity_haar: nu is not a system for the moment map");
  require(check_system(nu), "imprimitivity_haar: nu");

  std::vector<std::size_t> reps = imp.orbits.reps;
  const auto canonical = imprimitivity_weights(imp, a, nu, reps);
  ValidationReport wd("imprimitivity haar");
  for (std::size_t y = 0; y < a.size(); ++y)
  {
    const std::size_t c = imp.orbits.quotient(y);
    auto alt = reps;
    alt[c] = y;
    const auto other = imprimitivity_weights(imp, a, nu, alt);
    for (Arrow x : imp.groupoid.range_fiber(c))
      if (other[x] != canonical[x])
      {
        wd.add("well-definedness", {a.carrier()[reps[c]], a.carrier()[y]},
               "representatives disagree on " + imp.groupoid.name(x) + ": " + to_string(canonical[x]) + " vs " +
                 to_string(other[x]));
        break;
      }
  }
  require(wd, "imprimitivity_haar");

  const Groupoid &h = imp.groupoid;
  std::vector<Measure> ms(h.units().size());
  for (Arrow x = 0; x < h.size(); ++x)
    ms[h.unit_position(h.range(x))].set(x, canonical[x]);
  return HaarSystem(h, FiberSystem(range_map(h), std::move(ms)));
}

inline HaarSystem imprimitivity_haar(const Action &a, const FiberSystem &nu)
{
  return imprimitivity_haar(imprimitivity_groupoid(a, a.side()), a, nu);
}

/// Optional overrides for the auxiliary choices of the transfer pipeline.
struct TransferOptions
{
  std::optional<std::vector<Rational>> beta_weights; // per carrier point, > 0
  std::optional<Cutoff> cutoff;
};

/// Everything the transfer pipeline produced, so the auxiliary choices can be
/// audited.
struct TransferResult
{
  HaarSystem haar;
  FiberSystem beta;
  Cutoff cutoff;
  FiberSystem nu;
  Imprimitivity imprimitivity;
  std::vector<Arrow> to_right; // imprimitivity arrow -> arrow of H
  bool default_beta;
  bool default_cutoff;
};

/// Haar system on H from a Haar system on G and a (G,H)-equivalence:
/// full system beta on the left moment map, cut-off phi for the left orbit
/// map, averaged system nu, induced Haar system on the imprimitivity groupoid
/// of the left action, transported to H along [x,y] -> the unique h with
/// x.h = y.
inline TransferResult transfer_haar(const HaarSystem &lambda, const Equivalence &e, const TransferOptions &opt = {})
{
  require(validate_equivalence(e), "transfer: equivalence");
  if (!(lambda.groupoid() == e.left.groupoid()))
    throw InputError("transfer: Haar system is not on the left groupoid of the equivalence");
  const Action &left = e.left;
  const Groupoid &h = e.right.groupoid();

  FiberSystem beta = full_fiber_system(left.moment_map(), opt.beta_weights);
  require(check_system(beta), "transfer: beta");

  OrbitSpace orbits = orbit_space(left);
  Cutoff phi = opt.cutoff ? *opt.cutoff : representative_cutoff(orbits.quotient, orbits.reps);
  require(validate_cutoff(phi), "transfer: cut-off");

  FiberSystem nu = average_system(lambda, left, beta, phi);

  Imprimitivity imp = imprimitivity_groupoid(left, Side::left);
  require(validate_groupoid(imp.groupoid), "transfer: imprimitivity groupoid");
  HaarSystem induced = imprimitivity_haar(imp, left, nu);

  std::vector<Arrow> to_right(imp.groupoid.size(), npos);
  for (Arrow c = 0; c < imp.groupoid.size(); ++c)
  {
    auto [x, y] = imp.rep[c];
    for (Arrow eta = 0; eta < h.size(); ++eta)
      if (e.right.moment(x) == h.range(eta) && e.right.act_right(x, eta) == y)
      {
        to_right[c] = eta;
        break;
      }
    if (to_right[c] == npos)
      throw InputError("transfer: no arrow of H carries " + left.carrier()[x] + " to " + left.carrier()[y]);
  }
  if (!is_isomorphism(imp.groupoid, h, to_right))
  {
    ValidationReport r("transfer");
    r.add("imprimitivity groupoid isomorphic to H", {}, "[x,y] -> h with x.h = y is not an isomorphism");
    throw ValidationError("transfer: identification with H", r);
  }

  std::vector<Measure> ms(h.units().size());
  for (Arrow c = 0; c < imp.groupoid.size(); ++c)
  {
    Arrow eta = to_right[c];
    ms[h.unit_position(h.range(eta))].set(eta, induced.weight(c));
  }
  HaarSystem out(h, FiberSystem(range_map(h), std::move(ms)));
  return {std::move(out),    std::move(beta),     std::move(phi), std::move(nu), std::move(imp),
          std::move(to_right), !opt.beta_weights, !opt.cutoff};
}

/// The orbit map q : G^0 -> G\G^0 of a groupoid, targets named "orbit:<rep>".
inline FiniteMap unit_orbit_map(const Groupoid &g)
{
  UnitOrbits orb = unit_orbits(g);
  std::vector<std::string> classes;
  for (Arrow u : orb.rep)
    classes.push_back("orbit:" + g.name(u));
  return FiniteMap(g.unit_names(), std::move(classes), orb.of_unit);
}

/// For principal G: lambda^u({x}) = beta^{q(u)}({s(x)}), i.e. delta_u x beta^{q(u)}
/// read through x -> (r(x), s(x)).
inline HaarSystem principal_haar(const Groupoid &g, const FiberSystem &beta)
{
  require(validate_groupoid(g), "principal_haar: groupoid");
  if (auto w = isotropy_witness(g))
    throw InputError("principal_haar: groupoid is not principal; witness " + g.name(*w));
  if (beta.base != unit_orbit_map(g))
    throw InputError("principal_haar: beta is not a system for the orbit map of the unit space");
  require(check_system(beta), "principal_haar: beta");
  std::vector<Measure> ms(g.units().size());
  const auto &q = beta.base;
  for (Arrow x = 0; x < g.size(); ++x)
  {
    const std::size_t ru = g.unit_position(g.range(x)), su = g.unit_position(g.source(x));
    ms[ru].set(x, beta.weight(q(ru), su));
  }
  return HaarSystem(g, FiberSystem(range_map(g), std::move(ms)));
}

/// Haar system on a transitive groupoid from a Haar measure on the stability
/// group at v, transferred across the equivalence G_v.
inline TransferResult transitive_haar(const Groupoid &g, Arrow v, const HaarSystem &mu)
{
  if (v >= g.size() || !g.is_unit(v))
    throw InputError("transitive_haar: v is not a unit");
  require(validate_groupoid(g), "transitive_haar: groupoid");
  if (!is_transitive(g))
    throw InputError("transitive_haar: groupoid is not transitive");
  auto se = stability_equivalence(g, v);
  if (!(mu.groupoid() == se.stability.group))
    throw InputError("transitive_haar: measure is not on the stability group at " + g.name(v));
  return transfer_haar(mu, opposite(se.equivalence));
}

/// Blow-up together with its Haar system
/// kappa^z({(z,g,w)}) = lambda^{f(z)}({g}) beta^{s(g)}({w}).
struct BlowUpHaar
{
  BlowUp blowup;
  HaarSystem haar;
};

inline BlowUpHaar blowup_haar(const HaarSystem &lambda, const std::vector<std::string> &points,
                              const std::vector<Arrow> &f, const FiberSystem &beta)
{
  const Groupoid &g = lambda.groupoid();
  BlowUp b = blow_up(g, points, f);
  std::vector<std::size_t> fpos;
  for (Arrow u : f)
    fpos.push_back(g.unit_position(u));
  if (beta.base != FiniteMap(points, g.unit_names(), fpos))
    throw InputError("blowup_haar: beta is not a system for the blow-up map");
  require(check_system(beta), "blowup_haar: beta");
  const Groupoid &big = b.groupoid;
  std::vector<Measure> ms(big.units().size());
  for (Arrow x = 0; x < big.size(); ++x)
  {
    const auto &c = b.coords[x];
    ms[big.unit_position(big.range(x))].set(x, lambda.weight(c.g) * beta.weight(g.unit_position(g.source(c.g)), c.w));
  }
  HaarSystem kappa(big, FiberSystem(range_map(big), std::move(ms)));
  return {std::move(b), std::move(kappa)};
}

} // namespace haar

#endif // HAAR_TRANSFER_HPP
