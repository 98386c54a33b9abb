#ifndef HAAR_TOOLS_DEMOS_HPP
#define HAAR_TOOLS_DEMOS_HPP

// Built-in demo corpus. Each demo carries its fixture, the computed result and
// the expected value written down by hand, so the output can be diffed.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <haar/fixtures.hpp>
#include <haar/haar.hpp>
#include <haar/io.hpp>

namespace haar::demos
{

using nlohmann::json;

inline json doc(const Payload &p, json metadata = nullptr) { return to_json(Document{p, std::move(metadata)}); }

inline json demo(const std::string &name, json fixture, json result, json expected, bool matches)
{
  return {{"version", format_version}, {"kind", "demo"},        {"name", name},        {"fixture", fixture},
          {"result", result},          {"expected", expected}, {"matches", matches}};
}

inline json pair3_weighted()
{
  auto g = fixtures::pair3();
  auto lambda = source_weighted_haar(g, {1, 2, 3}).system();
  auto haar = check_haar(g, lambda);
  auto assoc = associativity_oracle(g, lambda);
  json result = {{"check_haar", report_json(haar)}, {"associativity", report_json(assoc)}};
  json expected = {{"check_haar", {{"passed", true}}}, {"associativity", {{"passed", true}}}};
  return demo("pair3-weighted", {{"groupoid", doc(g)}, {"system", doc(lambda)}}, result, expected,
              haar.passed() && assoc.passed());
}

inline json rect32_transfer()
{
  auto e = fixtures::rect32();
  auto lambda = source_weighted_haar(e.left.groupoid(), {1, 2, 3});
  auto phi = Cutoff{orbit_space(e.left).quotient, std::vector<Rational>(e.left.size(), 1)};
  auto res = transfer_haar(lambda, e, {std::nullopt, phi});
  const Groupoid &h = e.right.groupoid();
  auto expected = full_fiber_system(range_map(h), std::vector<Rational>(h.size(), 6));
  return demo("rect32-transfer", {{"equivalence", doc(e)}, {"haar", doc(lambda.system())}, {"cutoff", doc(phi)}}, doc(res.haar.system()),
              doc(expected), res.haar.system() == expected);
}

inline json swap_average()
{
  auto a = fixtures::swap_action();
  auto lambda = counting_haar(a.groupoid());
  auto beta = full_fiber_system(a.moment_map(), std::vector<Rational>{1, 2});
  Cutoff phi{orbit_space(a).quotient, {1, 1}};
  auto nu = average_system(lambda, a, beta, phi);
  auto expected = full_fiber_system(a.moment_map(), std::vector<Rational>{3, 3});
  return demo("swap-average",
              {{"action", doc(a)}, {"haar", doc(lambda.system())}, {"beta", doc(beta)}, {"cutoff", doc(phi)}},
              doc(nu), doc(expected), nu == expected);
}

inline json z2_nonassoc()
{
  auto g = fixtures::z2();
  auto lambda = full_fiber_system(range_map(g), std::vector<Rational>{1, 2});
  auto rep = associativity_oracle(g, lambda);
  json result = report_json(rep);
  json witness = json::object();
  if (!rep.passed())
    witness = {{"f", describe(g, rep.f)},
               {"h", describe(g, rep.h)},
               {"k", describe(g, rep.k)},
               {"left", describe(g, rep.left)},
               {"right", describe(g, rep.right)}};
  result["witness"] = witness;
  json expected = {{"f", "1 d[g]"}, {"h", "1 d[g]"}, {"k", "1 d[g]"}, {"left", "2 d[g]"}, {"right", "4 d[g]"}};
  return demo("z2-nonassoc", {{"groupoid", doc(g)}, {"system", doc(lambda)}}, result, expected, witness == expected);
}

inline json blowup_z2()
{
  auto g = fixtures::z2();
  std::vector<std::string> points = {"z1", "z2"};
  std::vector<Arrow> f = {g.index("e"), g.index("e")};
  FiniteMap fmap(points, g.unit_names(), {0, 0});
  auto beta = full_fiber_system(fmap);
  auto lambda = counting_haar(g);
  auto b = blowup_haar(lambda, points, f, beta);
  const Groupoid &big = b.haar.groupoid();
  json atoms = json::object();
  for (std::size_t u = 0; u < big.units().size(); ++u)
  {
    json w = json::array();
    for (const auto &[x, v] : b.haar.at_unit(u).atoms())
      w.push_back(to_string(v));
    atoms[big.name(big.units()[u])] = w;
  }
  json summary = {{"arrows", big.size()}, {"units", big.units().size()}, {"atoms", atoms}};
  json four = json::array({"1", "1", "1", "1"});
  json expected = {{"arrows", 8},
                   {"units", 2},
                   {"atoms", {{big.name(big.units()[0]), four}, {big.name(big.units()[1]), four}}}};
  return demo("blowup-z2",
              {{"groupoid", doc(g)}, {"map", doc(fmap)}, {"fsystem", doc(beta)}, {"haar", doc(lambda.system())}},
              {{"groupoid", doc(big)}, {"haar", doc(b.haar.system())}, {"summary", summary}}, expected,
              summary == expected);
}

inline const std::map<std::string, std::function<json()>> &registry()
{
  static const std::map<std::string, std::function<json()>> r = {
    {"pair3-weighted", pair3_weighted}, {"rect32-transfer", rect32_transfer}, {"swap-average", swap_average},
    {"z2-nonassoc", z2_nonassoc},       {"blowup-z2", blowup_z2},
  };
  return r;
}

} // namespace haar::demos

#endif // HAAR_TOOLS_DEMOS_HPP
