#ifndef HAAR_IO_HPP
#define HAAR_IO_HPP

// Versioned JSON documents for groupoids, systems, maps, actions,
// equivalences, cut-offs and functions. Output is canonical: object keys are
// sorted, arrays follow index order and rationals are reduced "p/q" strings,
// so serialize is byte-stable and parse(serialize(d)) == d.

#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "constructions.hpp"
#include "convolution.hpp"
#include "dynamics.hpp"
#include "groupoid.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "systems.hpp"

namespace haar
{

inline constexpr int format_version = 1;

/// A function on named elements, bound to a groupoid when used.
struct NamedFunction
{
  std::map<std::string, Rational> values;

  bool operator==(const NamedFunction &) const = default;
};

/// Schema violation; the message names the offending field or token.
class ParseError : public InputError
{
public:
  using InputError::InputError;
};

using Payload = std::variant<Groupoid, FiberSystem, FiniteMap, Action, Equivalence, Cutoff, NamedFunction>;

struct Document
{
  Payload payload;
  nlohmann::json metadata = nullptr;
  int version = format_version;

  bool operator==(const Document &o) const
  {
    return version == o.version && payload == o.payload && metadata == o.metadata;
  }
};

inline constexpr const char *payload_kinds[] = {"groupoid", "system", "map", "action", "equivalence", "cutoff",
                                                "function"};

inline std::string kind_of(const Payload &p) { return payload_kinds[p.index()]; }

template <typename T, std::size_t I = 0>
constexpr std::size_t payload_index()
{
  if constexpr (std::is_same_v<T, std::variant_alternative_t<I, Payload>>)
    return I;
  else
    return payload_index<T, I + 1>();
}

inline GroupoidFunction bind(const Groupoid &g, const NamedFunction &f)
{
  GroupoidFunction out(g.size());
  for (const auto &[name, v] : f.values)
  {
    auto x = g.find(name);
    if (!x)
      throw InputError("function mentions unknown element \"" + name + "\"");
    out[*x] = v;
  }
  return out;
}

/// Named form listing only nonzero values.
inline NamedFunction unbind(const Groupoid &g, const GroupoidFunction &f)
{
  NamedFunction out;
  for (Arrow x = 0; x < f.size(); ++x)
    if (f[x] != 0)
      out.values[g.name(x)] = f[x];
  return out;
}

namespace io_detail
{

using json = nlohmann::json;

inline const json &field(const json &j, const std::string &key, const std::string &path)
{
  if (!j.is_object())
    throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

inline std::string str(const json &j, const std::string &path)
{
  if (!j.is_string())
    throw ParseError(path + ": expected a string");
  return j.get<std::string>();
}

inline std::vector<std::string> strings(const json &j, const std::string &path)
{
  if (!j.is_array())
    throw ParseError(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(str(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline std::map<std::string, std::string> string_map(const json &j, const std::string &path)
{
  if (!j.is_object())
    throw ParseError(path + ": expected an object of strings");
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out[it.key()] = str(it.value(), path + "/" + it.key());
  return out;
}

inline Rational rational(const json &j, const std::string &path)
{
  try
  {
    if (j.is_number_integer())
      return Rational(j.get<long long>());
    if (j.is_string())
      return parse_rational(j.get<std::string>());
  }
  catch (const std::invalid_argument &e)
  {
    throw ParseError(path + ": " + e.what());
  }
  throw ParseError(path + ": expected a rational as \"p/q\"");
}

inline std::size_t position(const std::vector<std::string> &names, const std::string &token, const std::string &path)
{
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == token)
      return i;
  throw ParseError(path + ": unknown token \"" + token + "\"");
}

inline std::vector<std::size_t> total_map(const json &j, const std::vector<std::string> &domain,
                                          const std::vector<std::string> &targets, const std::string &path)
{
  auto m = string_map(j, path);
  std::vector<std::size_t> out(domain.size(), npos);
  for (const auto &[k, v] : m)
    out[position(domain, k, path)] = position(targets, v, path + "/" + k);
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (out[i] == npos)
      throw ParseError(path + ": no entry for \"" + domain[i] + "\"");
  return out;
}

template <typename F>
auto guarded(const std::string &path, F &&f) -> decltype(f())
{
  try
  {
    return f();
  }
  catch (const ParseError &)
  {
    throw;
  }
  catch (const std::invalid_argument &e)
  {
    throw ParseError(path + ": " + e.what());
  }
}

// ---- writers

inline json write_groupoid(const Groupoid &g)
{
  json j;
  j["kind"] = "groupoid";
  j["elements"] = g.names();
  j["units"] = g.unit_names();
  json r = json::object(), s = json::object(), inv = json::object(), comp = json::array();
  for (Arrow x = 0; x < g.size(); ++x)
  {
    r[g.name(x)] = g.name(g.range(x));
    s[g.name(x)] = g.name(g.source(x));
    inv[g.name(x)] = g.name(g.inverse(x));
    for (Arrow y = 0; y < g.size(); ++y)
      if (auto z = g.table_entry(x, y); z != npos)
        comp.push_back({g.name(x), g.name(y), g.name(z)});
  }
  j["range"] = r;
  j["source"] = s;
  j["inverse"] = inv;
  j["compose"] = comp;
  return j;
}

inline json write_map_fields(json j, const FiniteMap &m, const char *key)
{
  j["domain"] = m.domain;
  j["targets"] = m.targets;
  json o = json::object();
  for (std::size_t y = 0; y < m.domain.size(); ++y)
    o[m.domain[y]] = m.targets[m(y)];
  j[key] = o;
  return j;
}

inline json write_system(const FiberSystem &b)
{
  json j = write_map_fields(json{{"kind", "system"}}, b.base, "base");
  json ms = json::object();
  for (std::size_t x = 0; x < b.measures.size(); ++x)
  {
    json m = json::object();
    for (const auto &[y, w] : b.measures[x].atoms())
      m[b.base.domain[y]] = to_string(w);
    ms[b.base.targets[x]] = m;
  }
  j["measures"] = ms;
  return j;
}

inline json write_action(const Action &a)
{
  const Groupoid &g = a.groupoid();
  json j;
  j["kind"] = "action";
  j["side"] = to_string(a.side());
  j["groupoid"] = write_groupoid(g);
  j["carrier"] = a.carrier();
  json m = json::object();
  for (std::size_t z = 0; z < a.size(); ++z)
    m[a.carrier()[z]] = g.name(a.moment(z));
  j["moment"] = m;
  json act = json::array();
  if (a.side() == Side::left)
  {
    for (Arrow x = 0; x < g.size(); ++x)
      for (std::size_t z = 0; z < a.size(); ++z)
        if (auto t = a.table_entry(x, z); t != npos)
          act.push_back({g.name(x), a.carrier()[z], a.carrier()[t]});
  }
  else
  {
    for (std::size_t z = 0; z < a.size(); ++z)
      for (Arrow x = 0; x < g.size(); ++x)
        if (auto t = a.table_entry(g.inverse(x), z); t != npos)
          act.push_back({a.carrier()[z], g.name(x), a.carrier()[t]});
  }
  j["act"] = act;
  return j;
}

inline json write_payload(const Payload &p)
{
  return std::visit(
    [](const auto &v) -> json {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, Groupoid>)
        return write_groupoid(v);
      else if constexpr (std::is_same_v<T, FiberSystem>)
        return write_system(v);
      else if constexpr (std::is_same_v<T, FiniteMap>)
        return write_map_fields(json{{"kind", "map"}}, v, "map");
      else if constexpr (std::is_same_v<T, Action>)
        return write_action(v);
      else if constexpr (std::is_same_v<T, Equivalence>)
        return json{{"kind", "equivalence"}, {"left", write_action(v.left)}, {"right", write_action(v.right)}};
      else if constexpr (std::is_same_v<T, Cutoff>)
      {
        json j = write_map_fields(json{{"kind", "cutoff"}}, v.quotient, "quotient");
        json w = json::object();
        for (std::size_t z = 0; z < v.weights.size(); ++z)
          w[v.quotient.domain[z]] = to_string(v.weights[z]);
        j["weights"] = w;
        return j;
      }
      else
      {
        json w = json::object();
        for (const auto &[k, x] : v.values)
          w[k] = to_string(x);
        return json{{"kind", "function"}, {"values", w}};
      }
    },
    p);
}

// ---- readers

inline Groupoid read_groupoid(const json &j, const std::string &path);

inline std::vector<std::tuple<std::string, std::string, std::string>> triples(const json &j, const std::string &path)
{
  if (!j.is_array())
    throw ParseError(path + ": expected an array of triples");
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    const std::string p = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 3)
      throw ParseError(p + ": expected a triple");
    out.emplace_back(str(j[i][0], p + "/0"), str(j[i][1], p + "/1"), str(j[i][2], p + "/2"));
  }
  return out;
}

inline Groupoid read_groupoid(const json &j, const std::string &path)
{
  const std::string kind = str(field(j, "kind", path), path + "/kind");
  if (kind == "groupoid")
  {
    auto elements = strings(field(j, "elements", path), path + "/elements");
    auto units = strings(field(j, "units", path), path + "/units");
    auto r = string_map(field(j, "range", path), path + "/range");
    auto s = string_map(field(j, "source", path), path + "/source");
    auto inv = string_map(field(j, "inverse", path), path + "/inverse");
    auto comp = triples(field(j, "compose", path), path + "/compose");
    return guarded(path, [&] { return Groupoid::from_tokens(elements, units, r, s, inv, comp); });
  }
  if (kind == "pair")
  {
    auto pts = strings(field(j, "points", path), path + "/points");
    return guarded(path, [&] { return pair_groupoid(pts); });
  }
  if (kind == "group")
  {
    GroupTable t;
    t.elements = strings(field(j, "elements", path), path + "/elements");
    const auto &rows = field(j, "table", path);
    if (!rows.is_array())
      throw ParseError(path + "/table: expected an array of rows");
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
      auto row = strings(rows[i], path + "/table/" + std::to_string(i));
      std::vector<std::size_t> r;
      for (const auto &tok : row)
        r.push_back(position(t.elements, tok, path + "/table/" + std::to_string(i)));
      t.product.push_back(r);
    }
    return guarded(path, [&] { return group_as_groupoid(t); });
  }
  if (kind == "relation")
  {
    auto dom = strings(field(j, "domain", path), path + "/domain");
    auto tgt = strings(field(j, "targets", path), path + "/targets");
    auto q = total_map(field(j, "map", path), dom, tgt, path + "/map");
    return guarded(path, [&] { return relation_groupoid(dom, tgt, q); });
  }
  if (kind == "transformation")
  {
    Groupoid grp = read_groupoid(field(j, "group", path), path + "/group");
    auto pts = strings(field(j, "points", path), path + "/points");
    std::vector<std::vector<std::size_t>> act(grp.size(), std::vector<std::size_t>(pts.size(), npos));
    for (const auto &[g, x, gx] : triples(field(j, "action", path), path + "/action"))
    {
      auto a = grp.find(g);
      if (!a)
        throw ParseError(path + "/action: unknown token \"" + g + "\"");
      act[*a][position(pts, x, path + "/action")] = position(pts, gx, path + "/action");
    }
    for (const auto &row : act)
      for (auto v : row)
        if (v == npos)
          throw ParseError(path + "/action: action table is incomplete");
    return guarded(path, [&] { return transformation_groupoid(grp, pts, act); });
  }
  if (kind == "blowup")
  {
    Groupoid g = read_groupoid(field(j, "groupoid", path), path + "/groupoid");
    auto pts = strings(field(j, "points", path), path + "/points");
    auto m = string_map(field(j, "map", path), path + "/map");
    std::vector<Arrow> f(pts.size(), npos);
    for (const auto &[z, u] : m)
    {
      auto x = g.find(u);
      if (!x)
        throw ParseError(path + "/map: unknown token \"" + u + "\"");
      f[position(pts, z, path + "/map")] = *x;
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (f[i] == npos)
        throw ParseError(path + "/map: no entry for \"" + pts[i] + "\"");
    return guarded(path, [&] { return blow_up(g, pts, f).groupoid; });
  }
  throw ParseError(path + "/kind: \"" + kind + "\" does not describe a groupoid");
}

inline FiniteMap read_map_fields(const json &j, const char *key, const std::string &path)
{
  auto dom = strings(field(j, "domain", path), path + "/domain");
  auto tgt = strings(field(j, "targets", path), path + "/targets");
  auto of = total_map(field(j, key, path), dom, tgt, path + "/" + key);
  return guarded(path, [&] { return FiniteMap(dom, tgt, of); });
}

inline FiberSystem read_system(const json &j, const std::string &path)
{
  FiniteMap base = read_map_fields(j, "base", path);
  const auto &ms = field(j, "measures", path);
  if (!ms.is_object())
    throw ParseError(path + "/measures: expected an object");
  std::vector<Measure> measures(base.targets.size());
  for (auto it = ms.begin(); it != ms.end(); ++it)
  {
    const std::string p = path + "/measures/" + it.key();
    auto x = position(base.targets, it.key(), path + "/measures");
    if (!it.value().is_object())
      throw ParseError(p + ": expected an object");
    for (auto a = it.value().begin(); a != it.value().end(); ++a)
    {
      Rational w = rational(a.value(), p + "/" + a.key());
      guarded(p + "/" + a.key(), [&] {
        measures[x].set(position(base.domain, a.key(), p), w);
        return 0;
      });
    }
  }
  return FiberSystem(std::move(base), std::move(measures));
}

inline Action read_action(const json &j, const std::string &path)
{
  const std::string kind = str(field(j, "kind", path), path + "/kind");
  if (kind != "action")
    throw ParseError(path + "/kind: expected \"action\"");
  const std::string side = str(field(j, "side", path), path + "/side");
  if (side != "left" && side != "right")
    throw ParseError(path + "/side: expected \"left\" or \"right\"");
  Groupoid g = read_groupoid(field(j, "groupoid", path), path + "/groupoid");
  auto carrier = strings(field(j, "carrier", path), path + "/carrier");
  auto m = string_map(field(j, "moment", path), path + "/moment");
  std::vector<Arrow> moment(carrier.size(), npos);
  for (const auto &[z, u] : m)
  {
    auto x = g.find(u);
    if (!x)
      throw ParseError(path + "/moment: unknown token \"" + u + "\"");
    moment[position(carrier, z, path + "/moment")] = *x;
  }
  for (std::size_t i = 0; i < carrier.size(); ++i)
    if (moment[i] == npos)
      throw ParseError(path + "/moment: no entry for \"" + carrier[i] + "\"");
  const std::size_t n = g.size(), nz = carrier.size();
  auto arrow = [&](const std::string &tok) {
    auto x = g.find(tok);
    if (!x)
      throw ParseError(path + "/act: unknown token \"" + tok + "\"");
    return *x;
  };
  auto tr = triples(field(j, "act", path), path + "/act");
  if (side == "left")
  {
    std::vector<std::size_t> table(n * nz, npos);
    for (const auto &[x, z, xz] : tr)
      table[arrow(x) * nz + position(carrier, z, path + "/act")] = position(carrier, xz, path + "/act");
    return guarded(path, [&] { return Action(g, carrier, moment, table); });
  }
  std::vector<std::size_t> right(nz * n, npos);
  for (const auto &[z, x, zx] : tr)
    right[position(carrier, z, path + "/act") * n + arrow(x)] = position(carrier, zx, path + "/act");
  return guarded(path, [&] { return Action::from_right(g, carrier, moment, right); });
}

inline Payload read_payload(const json &j, const std::string &path)
{
  const std::string kind = str(field(j, "kind", path), path + "/kind");
  if (kind == "system")
    return read_system(j, path);
  if (kind == "map")
    return read_map_fields(j, "map", path);
  if (kind == "action")
    return read_action(j, path);
  if (kind == "equivalence")
    return Equivalence{read_action(field(j, "left", path), path + "/left"),
                       read_action(field(j, "right", path), path + "/right")};
  if (kind == "cutoff")
  {
    Cutoff c{read_map_fields(j, "quotient", path), {}};
    const auto &w = field(j, "weights", path);
    if (!w.is_object())
      throw ParseError(path + "/weights: expected an object");
    c.weights.assign(c.quotient.domain.size(), Rational(0));
    std::vector<bool> seen(c.weights.size(), false);
    for (auto it = w.begin(); it != w.end(); ++it)
    {
      auto z = position(c.quotient.domain, it.key(), path + "/weights");
      c.weights[z] = rational(it.value(), path + "/weights/" + it.key());
      seen[z] = true;
    }
    for (std::size_t z = 0; z < seen.size(); ++z)
      if (!seen[z])
        throw ParseError(path + "/weights: no entry for \"" + c.quotient.domain[z] + "\"");
    return c;
  }
  if (kind == "function")
  {
    NamedFunction f;
    const auto &v = field(j, "values", path);
    if (!v.is_object())
      throw ParseError(path + "/values: expected an object");
    for (auto it = v.begin(); it != v.end(); ++it)
      f.values[it.key()] = rational(it.value(), path + "/values/" + it.key());
    return f;
  }
  return read_groupoid(j, path);
}

} // namespace io_detail

inline nlohmann::json to_json(const Document &d)
{
  auto j = io_detail::write_payload(d.payload);
  j["version"] = d.version;
  if (!d.metadata.is_null())
    j["metadata"] = d.metadata;
  return j;
}

inline std::string serialize(const Document &d) { return to_json(d).dump(2) + "\n"; }

inline Document from_json(const nlohmann::json &j)
{
  const auto &v = io_detail::field(j, "version", "");
  if (!v.is_number_integer())
    throw ParseError("/version: expected an integer");
  if (v.get<int>() != format_version)
    throw ParseError("/version: unsupported format version " + std::to_string(v.get<int>()));
  Document d{io_detail::read_payload(j, ""), nullptr, format_version};
  if (auto it = j.find("metadata"); it != j.end())
    d.metadata = *it;
  return d;
}

inline Document parse(std::string_view text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text.begin(), text.end());
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

template <typename T>
const T &expect(const Document &d, const std::string &what)
{
  if (!std::holds_alternative<T>(d.payload))
    throw InputError(what + ": expected a \"" + payload_kinds[payload_index<T>()] + "\" document, got \"" +
                     kind_of(d.payload) + "\"");
  return std::get<T>(d.payload);
}

/// Reports are output-only documents.
inline nlohmann::json report_json(const ValidationReport &r)
{
  nlohmann::json j;
  j["version"] = format_version;
  j["kind"] = "report";
  j["subject"] = r.subject();
  j["passed"] = r.passed();
  nlohmann::json vs = nlohmann::json::array();
  for (const auto &v : r.violations())
    vs.push_back({{"axiom", v.axiom}, {"witnesses", v.witnesses}, {"detail", v.detail}});
  j["violations"] = vs;
  nlohmann::json notes = nlohmann::json::object();
  for (const auto &[k, v] : r.notes())
    notes[k] = v;
  j["notes"] = notes;
  return j;
}

} // namespace haar

#endif // HAAR_IO_HPP
