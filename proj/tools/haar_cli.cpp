// haar-cli: validate documents, run the Haar system constructions on files,
// and print the demo corpus.
//
// Exit codes: 0 success, 1 validation failure, 2 input or schema error.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <haar/haar.hpp>
#include <haar/io.hpp>

#include "demos.hpp"

using namespace haar;
using nlohmann::json;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_input = 2;

Document load(const std::string &path)
{
  std::string text;
  if (path == "-")
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  else
  {
    std::ifstream in(path);
    if (!in)
      throw InputError("cannot read \"" + path + "\"");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try
  {
    return parse(text);
  }
  catch (const InputError &e)
  {
    throw InputError(path + ": " + e.what());
  }
}

template <typename T>
T load_as(const std::string &path)
{
  return expect<T>(load(path), path);
}

void emit(const json &j, const std::string &out)
{
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-")
  {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f)
    throw InputError("cannot write \"" + out + "\"");
  f << text;
}

int verdict(const ValidationReport &r, const std::string &out)
{
  emit(report_json(r), out);
  return r.passed() ? exit_ok : exit_invalid;
}

HaarSystem load_haar(const Groupoid &g, const std::string &path)
{
  return HaarSystem(g, load_as<FiberSystem>(path));
}

/// Function document on named points -> weights in the order of `points`.
std::vector<Rational> weights_on(const NamedFunction &f, const std::vector<std::string> &points,
                                 const std::string &what)
{
  std::vector<Rational> out;
  for (const auto &p : points)
  {
    auto it = f.values.find(p);
    if (it == f.values.end())
      throw InputError(what + ": no weight for \"" + p + "\"");
    out.push_back(it->second);
  }
  if (f.values.size() != points.size())
    throw InputError(what + ": weights mention points outside the carrier");
  return out;
}

json weights_json(const std::vector<std::string> &points, const std::vector<Rational> &w)
{
  json j = json::object();
  for (std::size_t i = 0; i < points.size(); ++i)
    j[points[i]] = to_string(w[i]);
  return j;
}

int cmd_validate(const std::string &file, const std::string &out)
{
  Document d = load(file);
  return std::visit(
    [&](const auto &v) -> int {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, Groupoid>)
        return verdict(validate_groupoid(v), out);
      else if constexpr (std::is_same_v<T, FiberSystem>)
        return verdict(check_system(v), out);
      else if constexpr (std::is_same_v<T, Action>)
        return verdict(validate_action(v), out);
      else if constexpr (std::is_same_v<T, Equivalence>)
        return verdict(validate_equivalence(v), out);
      else if constexpr (std::is_same_v<T, Cutoff>)
        return verdict(validate_cutoff(v), out);
      else if constexpr (std::is_same_v<T, FiniteMap>)
      {
        ValidationReport r("map");
        auto missed = v.unreached();
        std::string s;
        for (auto t : missed)
          s += (s.empty() ? "" : ", ") + v.targets[t];
        r.note("onto", missed.empty() ? "yes" : "no (" + s + ")");
        return verdict(r, out);
      }
      else
        return verdict(ValidationReport("function"), out);
    },
    d.payload);
}

struct TransferArgs
{
  std::string groupoid, haar, equivalence, beta, cutoff, out, groupoid_out;
};

int cmd_transfer(const TransferArgs &a)
{
  auto g = load_as<Groupoid>(a.groupoid);
  auto e = load_as<Equivalence>(a.equivalence);
  if (!(e.left.groupoid() == g))
    throw InputError("transfer: --groupoid is not the left groupoid of the equivalence");
  auto lambda = load_haar(g, a.haar);
  TransferOptions opt;
  if (!a.beta.empty())
    opt.beta_weights = weights_on(load_as<NamedFunction>(a.beta), e.left.carrier(), a.beta);
  if (!a.cutoff.empty())
    opt.cutoff = load_as<Cutoff>(a.cutoff);
  auto res = transfer_haar(lambda, e, opt);

  std::vector<Rational> beta_w, nu_w;
  for (std::size_t z = 0; z < e.left.size(); ++z)
  {
    auto u = g.unit_position(e.left.moment(z));
    beta_w.push_back(res.beta.weight(u, z));
    nu_w.push_back(res.nu.weight(u, z));
  }
  json meta = {
    {"beta",
     {{"default", res.default_beta},
      {"rule", res.default_beta ? "counting measure on each left moment fiber" : "supplied"},
      {"weights", weights_json(e.left.carrier(), beta_w)}}},
    {"cutoff",
     {{"default", res.default_cutoff},
      {"rule", res.default_cutoff ? "indicator of the least-name representative of each left orbit" : "supplied"},
      {"weights", weights_json(e.left.carrier(), res.cutoff.weights)}}},
    {"nu", weights_json(e.left.carrier(), nu_w)},
  };
  emit(to_json(Document{res.haar.system(), meta}), a.out);
  if (!a.groupoid_out.empty())
    emit(to_json(Document{res.haar.groupoid()}), a.groupoid_out);
  return exit_ok;
}

struct BlowUpArgs
{
  std::string groupoid, map, fsystem, haar, out, groupoid_out;
};

int cmd_blowup(const BlowUpArgs &a)
{
  auto g = load_as<Groupoid>(a.groupoid);
  require(validate_groupoid(g), "blowup: groupoid");
  auto m = load_as<FiniteMap>(a.map);
  std::vector<Arrow> f;
  for (std::size_t z = 0; z < m.domain.size(); ++z)
  {
    const auto &tok = m.targets[m(z)];
    auto u = g.find(tok);
    if (!u || !g.is_unit(*u))
      throw InputError("blowup: map sends \"" + m.domain[z] + "\" to \"" + tok + "\", not a unit");
    f.push_back(*u);
  }
  std::optional<FiberSystem> beta;
  if (!a.fsystem.empty())
  {
    beta = load_as<FiberSystem>(a.fsystem);
    std::vector<std::size_t> fpos;
    for (Arrow u : f)
      fpos.push_back(g.unit_position(u));
    if (beta->base != FiniteMap(m.domain, g.unit_names(), fpos))
      throw InputError("blowup: --fsystem is not a system over the map");
    require(check_system(*beta), "blowup: fsystem");
  }
  if (a.haar.empty())
  {
    emit(to_json(Document{blow_up(g, m.domain, f).groupoid}), a.out);
    return exit_ok;
  }
  if (!beta)
    throw InputError("blowup: --haar needs --fsystem");
  auto b = blowup_haar(load_haar(g, a.haar), m.domain, f, *beta);
  emit(to_json(Document{b.haar.system()}), a.out);
  if (!a.groupoid_out.empty())
    emit(to_json(Document{b.haar.groupoid()}), a.groupoid_out);
  return exit_ok;
}

struct ImprimitivityArgs
{
  std::string action, system, out, groupoid_out;
};

int cmd_imprimitivity(const ImprimitivityArgs &a)
{
  auto act = load_as<Action>(a.action);
  auto imp = imprimitivity_groupoid(act, act.side());
  if (a.system.empty())
  {
    emit(to_json(Document{imp.groupoid}), a.out);
    return exit_ok;
  }
  auto nu = load_as<FiberSystem>(a.system);
  if (nu.base != act.moment_map())
    throw InputError("imprimitivity: --system is not over the moment map of the action");
  require(check_system(nu), "imprimitivity: system");
  require(check_equivariant(act, nu), "imprimitivity: system");
  auto h = imprimitivity_haar(imp, act, nu);
  emit(to_json(Document{h.system()}), a.out);
  if (!a.groupoid_out.empty())
    emit(to_json(Document{h.groupoid()}), a.groupoid_out);
  return exit_ok;
}

int cmd_convolve(const std::string &groupoid, const std::string &system, const std::string &f, const std::string &h,
                 const std::string &out)
{
  auto g = load_as<Groupoid>(groupoid);
  require(validate_groupoid(g), "convolve: groupoid");
  auto lambda = load_as<FiberSystem>(system);
  auto r = convolve(g, bind(g, load_as<NamedFunction>(f)), bind(g, load_as<NamedFunction>(h)), lambda);
  emit(to_json(Document{unbind(g, r)}), out);
  return exit_ok;
}

int cmd_assoc(const std::string &groupoid, const std::string &system, std::size_t trials, std::uint64_t seed,
              const std::string &out)
{
  auto g = load_as<Groupoid>(groupoid);
  require(validate_groupoid(g), "assoc-check: groupoid");
  auto lambda = load_as<FiberSystem>(system);
  if (lambda.base != range_map(g))
    throw InputError("assoc-check: system is not over the range map of the groupoid");
  auto rep = associativity_oracle(g, lambda, trials, seed);
  json j = report_json(rep);
  j["exhaustive"] = rep.exhaustive;
  j["triples"] = rep.triples;
  if (!rep.passed())
    j["witness"] = {{"f", describe(g, rep.f)},
                    {"h", describe(g, rep.h)},
                    {"k", describe(g, rep.k)},
                    {"left", describe(g, rep.left)},
                    {"right", describe(g, rep.right)}};
  emit(j, out);
  return rep.passed() ? exit_ok : exit_invalid;
}

int cmd_demo(const std::string &name, const std::string &out)
{
  const auto &reg = demos::registry();
  auto it = reg.find(name);
  if (it == reg.end())
  {
    std::string names;
    for (const auto &[k, v] : reg)
      names += " " + k;
    throw InputError("unknown demo \"" + name + "\"; available:" + names);
  }
  json j = it->second();
  emit(j, out);
  return j["matches"].get<bool>() ? exit_ok : exit_invalid;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Finite groupoids, Haar systems and their transfer across equivalences"};
  app.require_subcommand(1);
  std::string out;

  std::string file;
  auto *validate = app.add_subcommand("validate", "Run the validator matching the document kind");
  validate->add_option("file", file, "Document ('-' for stdin)")->required();
  validate->add_option("--out", out, "Report file (default stdout)");

  std::string groupoid, system;
  auto *check = app.add_subcommand("check-haar", "Check that a system is a Haar system");
  check->add_option("--groupoid", groupoid)->required();
  check->add_option("--system", system)->required();
  check->add_option("--out", out);

  TransferArgs ta;
  auto *transfer = app.add_subcommand("transfer", "Transfer a Haar system across an equivalence");
  transfer->add_option("--groupoid", ta.groupoid, "Left groupoid G")->required();
  transfer->add_option("--haar", ta.haar, "Haar system on G")->required();
  transfer->add_option("--equivalence", ta.equivalence, "(G,H)-equivalence")->required();
  transfer->add_option("--beta", ta.beta, "Function document of positive weights on the carrier");
  transfer->add_option("--cutoff", ta.cutoff, "Cut-off document for the left orbit map");
  transfer->add_option("--out", ta.out, "Haar system on H (default stdout)");
  transfer->add_option("--groupoid-out", ta.groupoid_out, "Also write H");

  BlowUpArgs ba;
  auto *blowup = app.add_subcommand("blowup", "Build a blow-up and optionally its Haar system");
  blowup->add_option("--groupoid", ba.groupoid)->required();
  blowup->add_option("--map", ba.map, "Map document Z -> units")->required();
  blowup->add_option("--fsystem", ba.fsystem, "Full system over the map");
  blowup->add_option("--haar", ba.haar, "Haar system on the groupoid");
  blowup->add_option("--out", ba.out, "Blow-up groupoid, or its Haar system with --haar");
  blowup->add_option("--groupoid-out", ba.groupoid_out, "Blow-up groupoid when --haar is given");

  ImprimitivityArgs ia;
  auto *imp = app.add_subcommand("imprimitivity", "Build the imprimitivity groupoid of a free action");
  imp->add_option("--action", ia.action)->required();
  imp->add_option("--system", ia.system, "Full equivariant system over the moment map");
  imp->add_option("--out", ia.out, "Groupoid, or its Haar system with --system");
  imp->add_option("--groupoid-out", ia.groupoid_out, "Groupoid when --system is given");

  std::string f, h;
  auto *conv = app.add_subcommand("convolve", "Convolve two functions");
  conv->set_help_flag("--help", "Print this help message and exit");
  conv->add_option("--groupoid", groupoid)->required();
  conv->add_option("--system", system)->required();
  conv->add_option("--f", f)->required();
  conv->add_option("--h", h)->required();
  conv->add_option("--out", out);

  std::size_t trials = 200;
  std::uint64_t seed = 1;
  auto *assoc = app.add_subcommand("assoc-check", "Check associativity of convolution");
  assoc->add_option("--groupoid", groupoid)->required();
  assoc->add_option("--system", system)->required();
  assoc->add_option("--trials", trials, "Random triples when the groupoid is too large to enumerate")
    ->capture_default_str();
  assoc->add_option("--seed", seed)->capture_default_str();
  assoc->add_option("--out", out);

  std::string demo_name;
  auto *demo = app.add_subcommand("demo", "Print a built-in worked example");
  demo->add_option("name", demo_name, "pair3-weighted | rect32-transfer | swap-average | z2-nonassoc | blowup-z2")
    ->required();
  demo->add_option("--out", out);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try
  {
    if (*validate)
      return cmd_validate(file, out);
    if (*check)
    {
      auto g = load_as<Groupoid>(groupoid);
      require(validate_groupoid(g), "check-haar: groupoid");
      return verdict(check_haar(g, load_as<FiberSystem>(system)), out);
    }
    if (*transfer)
      return cmd_transfer(ta);
    if (*blowup)
      return cmd_blowup(ba);
    if (*imp)
      return cmd_imprimitivity(ia);
    if (*conv)
      return cmd_convolve(groupoid, system, f, h, out);
    if (*assoc)
      return cmd_assoc(groupoid, system, trials, seed, out);
    if (*demo)
      return cmd_demo(demo_name, out);
  }
  catch (const ValidationError &e)
  {
    std::cerr << "error: " << e.what() << "\n" << e.report();
    return exit_invalid;
  }
  catch (const std::invalid_argument &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  catch (const std::domain_error &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
