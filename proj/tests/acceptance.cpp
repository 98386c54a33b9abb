// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   acceptance [<haar-cli> <samples dir>]
//
// The CLI criterion needs the two arguments; ctest passes them.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <haar/fixtures.hpp>
#include <haar/haar.hpp>
#include <haar/io.hpp>

#include "support/random.hpp"

using namespace haar;
using namespace haar::testing;

namespace
{

std::string cli_path, samples_dir;

struct Failure
{
  std::string what;
};

void ensure(bool ok, const std::string &what)
{
  if (!ok)
    throw Failure{what};
}

// ---- independent checks, written against the definitions

// lambda^{r(x)}({x y}) = lambda^{s(x)}({y}) for all composable x, y.
bool invariant(const Groupoid &g, const FiberSystem &lambda)
{
  for (Arrow x = 0; x < g.size(); ++x)
    for (Arrow y = 0; y < g.size(); ++y)
      if (g.source(x) == g.range(y))
      {
        auto lhs = lambda.weight(g.unit_position(g.range(x)), g.compose(x, y));
        auto rhs = lambda.weight(g.unit_position(g.source(x)), y);
        if (lhs != rhs)
          return false;
      }
  return true;
}

// supp beta^x = pi^-1(x) with positive weights.
bool full(const FiberSystem &b)
{
  for (std::size_t x = 0; x < b.measures.size(); ++x)
  {
    const auto &m = b.measures[x];
    for (const auto &[y, w] : m.atoms())
      if (b.base(y) != x || w <= 0)
        return false;
    for (std::size_t y = 0; y < b.base.domain.size(); ++y)
      if (b.base(y) == x && m[y] <= 0)
        return false;
  }
  return true;
}

bool haar(const Groupoid &g, const FiberSystem &lambda)
{
  return lambda.base == range_map(g) && full(lambda) && invariant(g, lambda) && check_haar(g, lambda).passed();
}

bool equivariant(const Action &a, const FiberSystem &nu)
{
  const Groupoid &g = a.groupoid();
  for (Arrow x = 0; x < g.size(); ++x)
    for (std::size_t z = 0; z < a.size(); ++z)
      if (g.source(x) == a.moment(z) &&
          nu.weight(g.unit_position(g.range(x)), a.act(x, z)) != nu.weight(g.unit_position(g.source(x)), z))
        return false;
  return true;
}

std::vector<Rational> nu_oracle(const HaarSystem &lambda, const Action &a, const FiberSystem &beta,
                                const Cutoff &phi)
{
  const Groupoid &g = a.groupoid();
  std::vector<Rational> out(a.size(), Rational(0));
  for (std::size_t w = 0; w < a.size(); ++w)
    for (Arrow x = 0; x < g.size(); ++x)
      if (g.range(x) == a.moment(w))
      {
        auto z = a.act(g.inverse(x), w);
        out[w] += lambda.weight(x) * phi.weights[z] * beta.weight(g.unit_position(a.moment(z)), z);
      }
  return out;
}

std::vector<Rational> on_carrier(const Action &a, const FiberSystem &nu)
{
  std::vector<Rational> out;
  for (std::size_t z = 0; z < a.size(); ++z)
    out.push_back(nu.weight(a.groupoid().unit_position(a.moment(z)), z));
  return out;
}

// ---- criteria

std::vector<Groupoid> suite1;

std::string axioms()
{
  Rng rng(1);
  std::size_t corruptions = 0, largest = 0, arrows = 0;
  for (int i = 0; i < 500; ++i)
  {
    Groupoid g;
    switch (i % 5)
    {
    case 0:
      g = random_pair(rng, 40);
      break;
    case 1:
      g = random_group(rng, 40);
      break;
    case 2:
      g = random_transformation(rng, 40);
      break;
    case 3:
      g = random_relation(rng, 40);
      break;
    default:
      g = random_blowup(rng, 40);
    }
    largest = std::max(largest, g.size());
    arrows += g.size();
    ensure(g.size() <= 40, "groupoid with more than 40 arrows");
    auto rep = validate_groupoid(g);
    ensure(rep.passed(), "constructor output fails validation:\n" + [&] {
      std::ostringstream os;
      os << rep;
      return os.str();
    }());
    suite1.push_back(g);
  }
  for (std::size_t i = 0; corruptions < 100; ++i)
  {
    const Groupoid &g = suite1[i % suite1.size()];
    if (g.size() < 2)
      continue;
    std::string what;
    auto bad = corrupt(g, rng, &what);
    ensure(!validate_groupoid(bad).passed(), "corruption not detected: " + what);
    ++corruptions;
  }
  return "500 groupoids (100 per constructor, " + std::to_string(arrows) + " arrows, largest " +
         std::to_string(largest) + "), 100 corruptions detected";
}

std::string haar_checker()
{
  for (const auto &g : suite1)
    ensure(haar(g, counting_haar(g).system()), "counting system rejected");
  auto p3 = fixtures::pair3();
  ensure(check_haar(p3, source_weighted_haar(p3, {1, 2, 3}).system()).passed(), "PAIR3 m=(1,2,3) rejected");
  auto z2 = fixtures::z2();
  auto rep = check_haar(z2, full_fiber_system(range_map(z2), std::vector<Rational>{1, 2}));
  ensure(!rep.passed() && rep.first("left invariance") && rep.first("left invariance")->witnesses.front() == "g",
         "Z2 (1,2) not rejected with witness g");
  return std::to_string(suite1.size()) + " counting systems; PAIR3 (1,2,3) passes; Z2 (1,2) fails at g";
}

std::string averaging()
{
  Rng rng(3);
  for (int i = 0; i < 200; ++i)
  {
    auto a = random_action(rng, 12);
    auto lambda = random_haar(rng, a.groupoid());
    auto beta = random_full_system(rng, a.moment_map());
    auto phi = random_cutoff(rng, a);
    auto nu = average_system(lambda, a, beta, phi);
    ensure(nu.base == a.moment_map(), "nu is not over the moment map");
    ensure(full(nu), "nu is not full");
    ensure(equivariant(a, nu), "nu is not equivariant");
    ensure(on_carrier(a, nu) == nu_oracle(lambda, a, beta, phi), "nu differs from the point-mass formula");
  }
  auto a = fixtures::swap_action();
  auto nu = average_system(counting_haar(a.groupoid()), a,
                           full_fiber_system(a.moment_map(), std::vector<Rational>{1, 2}),
                           Cutoff{orbit_space(a).quotient, {1, 1}});
  ensure(on_carrier(a, nu) == std::vector<Rational>{3, 3}, "SWAP does not give (3,3)");
  return "200 random actions full, equivariant, equal to the formula; SWAP = (3,3)";
}

std::string transfer_criterion()
{
  Rng rng(4);
  for (int i = 0; i < 100; ++i)
  {
    auto e = random_equivalence(rng);
    auto lambda = random_haar(rng, e.left.groupoid());
    TransferOptions opt;
    if (i % 3 == 1)
      opt.beta_weights = positive_rationals(rng, e.left.size());
    if (i % 3 == 2)
      opt.cutoff = random_cutoff(rng, e.left);
    auto res = transfer_haar(lambda, e, opt);
    ensure(res.haar.groupoid() == e.right.groupoid(), "output is not on H");
    ensure(haar(e.right.groupoid(), res.haar.system()), "transferred system is not Haar");
  }
  auto e = fixtures::rect32();
  auto res = transfer_haar(source_weighted_haar(e.left.groupoid(), {1, 2, 3}), e, {std::nullopt, Cutoff{orbit_space(e.left).quotient, std::vector<Rational>(e.left.size(), 1)}});
  for (Arrow x = 0; x < res.haar.groupoid().size(); ++x)
    ensure(res.haar.weight(x) == 6, "RECT32 atom is " + to_string(res.haar.weight(x)) + ", not 6");
  return "100 random equivalences transfer to Haar systems; RECT32 atoms all 6";
}

std::string blowups()
{
  Rng rng(5);
  for (int i = 0; i < 100; ++i)
  {
    auto d = random_blowup_data(rng, 60);
    std::vector<std::size_t> fpos;
    for (Arrow u : d.f)
      fpos.push_back(d.base.unit_position(u));
    auto beta = random_full_system(rng, FiniteMap(d.points, d.base.unit_names(), fpos));
    auto b = blowup_haar(random_haar(rng, d.base), d.points, d.f, beta);
    ensure(haar(b.haar.groupoid(), b.haar.system()), "blow-up system is not Haar");
  }
  for (int i = 0; i < 20; ++i)
  {
    auto g = random_base(rng, 30);
    auto lambda = random_haar(rng, g);
    std::vector<std::size_t> ident(g.units().size());
    std::iota(ident.begin(), ident.end(), 0);
    auto beta = full_fiber_system(FiniteMap(g.unit_names(), g.unit_names(), ident));
    auto b = blowup_haar(lambda, g.unit_names(), g.units(), beta);
    std::vector<Arrow> relabel;
    for (Arrow x = 0; x < b.haar.groupoid().size(); ++x)
    {
      relabel.push_back(b.blowup.coords[x].g);
      ensure(b.haar.weight(x) == lambda.weight(relabel.back()), "identity blow-up changes a weight");
    }
    ensure(is_isomorphism(b.haar.groupoid(), g, relabel), "identity blow-up is not a relabeling");
  }
  return "100 random blow-ups Haar; 20 identity blow-ups reproduce lambda";
}

std::string imprimitivity()
{
  Rng rng(6);
  for (int i = 0; i < 100; ++i)
  {
    auto a = random_free_action(rng, 12);
    auto nu = average_system(random_haar(rng, a.groupoid()), a, random_full_system(rng, a.moment_map()),
                             random_cutoff(rng, a));
    auto imp = imprimitivity_groupoid(a, a.side());
    ensure(validate_groupoid(imp.groupoid).passed(), "imprimitivity groupoid fails validation");
    auto base = imprimitivity_weights(imp, a, nu, imp.orbits.reps);
    for (std::size_t y = 0; y < a.size(); ++y)
    {
      auto reps = imp.orbits.reps;
      reps[imp.orbits.quotient(y)] = y;
      ensure(imprimitivity_weights(imp, a, nu, reps) == base, "weights depend on the representative");
    }
    auto h = imprimitivity_haar(imp, a, nu);
    ensure(haar(h.groupoid(), h.system()), "induced system is not Haar");
  }
  auto a = opposite(fixtures::swap_action());
  auto h = imprimitivity_haar(a, full_fiber_system(a.moment_map(), std::vector<Rational>{5, 5}));
  ensure(find_isomorphism(h.groupoid(), fixtures::z2()).has_value(), "Z2-swap imprimitivity groupoid is not Z/2");
  ensure(h.weight(0) == 5 && h.weight(1) == 5, "Z2-swap Haar is not constant");
  return "100 free actions: valid groupoids, representative-independent Haar; Z2-swap gives Z/2, constant";
}

std::string specializations()
{
  Rng rng(7);
  std::size_t principal = 0, transitive = 0, invariant_count = 0;
  for (int i = 0; i < 40; ++i)
  {
    Groupoid g = coin(rng) ? random_relation(rng, 40) : random_pair(rng, 40);
    auto beta = random_full_system(rng, unit_orbit_map(g));
    auto lambda = principal_haar(g, beta);
    ensure(haar(g, lambda.system()), "principal_haar output is not Haar");
    ++principal;
  }
  for (int i = 0; i < 40; ++i)
  {
    Groupoid g = i % 4 == 0 ? random_group(rng, 12) : random_transitive(rng, 40);
    Arrow v = g.units()[uniform(rng, 0, g.units().size() - 1)];
    auto mu = random_haar(rng, stability_group(g, v).group);
    auto res = transitive_haar(g, v, mu);
    ensure(haar(g, res.haar.system()), "transitive_haar output is not Haar");
    ++transitive;
  }
  for (int i = 0; i < 40; ++i)
  {
    auto a = permutation_action(random_perm_group(rng, 12, 8));
    Measure beta;
    for (std::size_t z = 0; z < a.size(); ++z)
      beta.set(z, positive_rational(rng));
    auto mu = invariant_measure(a, beta, random_cutoff(rng, a));
    for (std::size_t z = 0; z < a.size(); ++z)
    {
      ensure(mu[z] > 0, "invariant measure lacks full support");
      for (Arrow x = 0; x < a.groupoid().size(); ++x)
        ensure(mu[a.act(x, z)] == mu[z], "invariant measure is not invariant");
    }
    ++invariant_count;
  }
  auto swap = fixtures::swap_action();
  Measure beta;
  beta.set(0, 1);
  beta.set(1, 2);
  auto mu = invariant_measure(swap, beta, Cutoff{orbit_space(swap).quotient, {1, 1}});
  ensure(mu[0] == 3 && mu[1] == 3, "SWAP invariant measure is not (3,3)");
  return std::to_string(principal) + " principal, " + std::to_string(transitive) + " transitive, " +
         std::to_string(invariant_count) + " invariant measures; SWAP = (3,3)";
}

std::string convolution()
{
  Rng rng(8);
  for (int i = 0; i < 150; ++i)
  {
    auto g = random_groupoid(rng, 12);
    auto lambda = random_haar(rng, g).system();
    ensure(check_haar(g, lambda).passed(), "random Haar system rejected");
    auto rep = associativity_oracle(g, lambda);
    ensure(rep.exhaustive, "associativity was not checked exhaustively");
    ensure(rep.passed(), "convolution is not associative for a Haar system");
  }
  std::uniform_int_distribution<int> coeff(-5, 5);
  for (std::size_t n = 1; n <= 4; ++n)
  {
    std::vector<std::string> pts;
    for (std::size_t i = 1; i <= n; ++i)
      pts.push_back(std::to_string(i));
    auto g = pair_groupoid(pts);
    auto lambda = counting_haar(g).system();
    auto at = [&](std::size_t i, std::size_t j) { return g.index(pair_name(pts[i], pts[j])); };
    for (int t = 0; t < 20; ++t)
    {
      GroupoidFunction f(g.size()), h(g.size()), expected(g.size());
      for (Arrow x = 0; x < g.size(); ++x)
      {
        f[x] = coeff(rng);
        h[x] = coeff(rng);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            expected[at(i, j)] += f[at(i, k)] * h[at(k, j)];
      ensure(convolve(g, f, h, lambda) == expected, "PAIR(" + std::to_string(n) + ") convolution is not the matrix product");
    }
  }
  auto z2 = fixtures::z2();
  auto rep = associativity_oracle(z2, full_fiber_system(range_map(z2), std::vector<Rational>{1, 2}));
  auto dg = GroupoidFunction::delta(2, z2.index("g"));
  ensure(!rep.passed() && rep.f == dg && rep.h == dg && rep.k == dg, "Z2 witness is not (dg, dg, dg)");
  ensure(rep.left == dg * 2 && rep.right == dg * 4, "Z2 bracketings are not 2dg vs 4dg");
  return "150 Haar systems associative (exhaustive, |G| <= 12); PAIR(n<=4) = matrix product; Z2 gives 2dg vs 4dg";
}

struct Run
{
  int code;
  std::string out;
};

Run run_cli(const std::string &args)
{
  std::string cmd = "\"" + cli_path + "\" " + args + " 2>/dev/null";
  FILE *p = popen(cmd.c_str(), "r");
  ensure(p != nullptr, "cannot start " + cli_path);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0)
    out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string cli()
{
  ensure(!cli_path.empty() && !samples_dir.empty(), "usage: acceptance <haar-cli> <samples dir>");
  std::size_t demos = 0, files = 0;
  for (const char *name : {"pair3-weighted", "rect32-transfer", "swap-average", "z2-nonassoc", "blowup-z2"})
  {
    auto a = run_cli(std::string("demo ") + name), b = run_cli(std::string("demo ") + name);
    ensure(a.code == 0 && b.code == 0, std::string("demo ") + name + " failed");
    ensure(a.out == b.out, std::string("demo ") + name + " is not byte-stable");
    auto j = nlohmann::json::parse(a.out);
    ensure(j.at("matches").get<bool>(), std::string("demo ") + name + " does not match its expected value");
    for (const auto &[key, sub] : j.at("fixture").items())
    {
      auto d = from_json(sub);
      ensure(parse(serialize(d)) == d, std::string("demo ") + name + " fixture " + key + " does not round-trip");
    }
    ++demos;
  }
  for (const auto &entry : std::filesystem::directory_iterator(std::filesystem::path(samples_dir) / "data"))
  {
    const auto path = entry.path();
    if (path.extension() != ".json" || path.filename().string().rfind("bad_", 0) == 0)
      continue;
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    auto d = parse(text);
    auto once = serialize(d);
    ensure(parse(once) == d, path.filename().string() + " does not round-trip");
    ensure(serialize(parse(once)) == once, path.filename().string() + " does not reserialize identically");
    ++files;
  }
  const std::string data = samples_dir + "/data/";
  ensure(run_cli("validate \"" + data + "pair2.json\"").code == 0, "validate on a valid file does not exit 0");
  auto bad = run_cli("validate \"" + data + "pair2_corrupt.json\"");
  ensure(bad.code == 1 && bad.out.find("inverse law") != std::string::npos,
         "corrupted PAIR2 does not exit 1 with the inverse law");
  ensure(run_cli("validate \"" + data + "bad_token.json\"").code == 2, "unknown token does not exit 2");
  ensure(run_cli("validate \"" + data + "bad_version.json\"").code == 2, "unknown version does not exit 2");
  ensure(run_cli("assoc-check --groupoid \"" + data + "z2.json\" --system \"" + data + "z2_skewed.json\"").code == 1,
         "failed associativity does not exit 1");
  return std::to_string(demos) + " demos byte-stable; " + std::to_string(files) +
         " sample documents round-trip; exit codes 0/1/2 honored";
}

} // namespace

int main(int argc, char **argv)
{
  if (argc >= 3)
  {
    cli_path = argv[1];
    samples_dir = argv[2];
  }
  struct Criterion
  {
    int id;
    const char *name;
    std::function<std::string()> run;
    double budget_s;
  };
  const Criterion criteria[] = {
    {1, "axiom suite", axioms, 5},
    {2, "Haar checker", haar_checker, 60},
    {3, "averaging", averaging, 60},
    {4, "transfer across equivalences", transfer_criterion, 60},
    {5, "blow-up", blowups, 60},
    {6, "imprimitivity", imprimitivity, 60},
    {7, "specializations", specializations, 60},
    {8, "convolution oracle", convolution, 60},
    {9, "CLI", cli, 60},
  };
  int failed = 0;
  for (const auto &c : criteria)
  {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try
    {
      detail = c.run();
    }
    catch (const Failure &f)
    {
      ok = false;
      detail = f.what;
    }
    catch (const std::exception &e)
    {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs > c.budget_s)
    {
      ok = false;
      detail += " (over the " + std::to_string(int(c.budget_s)) + " s budget)";
    }
    failed += !ok;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << detail << " ["
              << timing << "]" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " of 9 criteria failed" : "all 9 criteria passed") << std::endl;
  return failed ? 1 : 0;
}
