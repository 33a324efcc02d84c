#pragma once

// JSON forms of the library's objects. nlohmann::json keeps object keys
// sorted, so dumps are canonical.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fglaw/specialise.hpp"

namespace fglaw::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in '" + path.string() + "': " + e.what(), e.byte);
  }
}

namespace detail {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what(), 0);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rings.

inline json to_json(const RingSpec& s) {
  switch (s.kind()) {
    case RingKind::padic:
      return {{"kind", "p-adic"}, {"p", s.p()}, {"K", s.K()}};
    case RingKind::eqchar:
      return {{"kind", "eq-char"}, {"p", s.p()}, {"K", s.K()}};
    case RingKind::nested:
      return {{"kind", "nested"}, {"base", to_json(s.base())}, {"m", s.m()}, {"Dt", s.Dt()}};
  }
  return {};
}

inline RingSpec ring_from_json(const json& j) {
  const auto kind = detail::field<std::string>(j, "kind");
  if (kind == "p-adic") return RingSpec::padic(detail::field<std::uint64_t>(j, "p"), detail::field<int>(j, "K"));
  if (kind == "eq-char") return RingSpec::eqchar(detail::field<std::uint64_t>(j, "p"), detail::field<int>(j, "K"));
  if (kind == "nested")
    return RingSpec::nested(ring_from_json(j.at("base")), detail::field<int>(j, "m"), detail::field<int>(j, "Dt"));
  throw ParseError("unknown ring kind '" + kind + "'", 0);
}

/// "padic:p:K", "eqchar:p:K" or "nested:m:Dt:<base shorthand>".
inline RingSpec parse_ring_shorthand(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  auto num = [&](std::size_t i) -> std::uint64_t {
    if (i >= parts.size()) throw ParseError("ring shorthand '" + text + "' is too short", text.size());
    try {
      std::size_t used = 0;
      const auto v = std::stoull(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
      return v;
    } catch (const std::exception&) {
      throw ParseError("ring shorthand '" + text + "': '" + parts[i] + "' is not a number", 0);
    }
  };
  if (parts.empty()) throw ParseError("empty ring shorthand", 0);
  if ((parts[0] == "padic" || parts[0] == "eqchar") && parts.size() == 3) {
    const auto p = num(1);
    const int K = static_cast<int>(num(2));
    return parts[0] == "padic" ? RingSpec::padic(p, K) : RingSpec::eqchar(p, K);
  }
  if (parts[0] == "nested" && parts.size() >= 4) {
    const int m = static_cast<int>(num(1)), Dt = static_cast<int>(num(2));
    std::string base;
    for (std::size_t i = 3; i < parts.size(); ++i) base += (i > 3 ? ":" : "") + parts[i];
    return RingSpec::nested(parse_ring_shorthand(base), m, Dt);
  }
  throw ParseError("unrecognised ring shorthand '" + text + "'", 0);
}

inline Coefficient coefficient_from_json(const json& j, const SpecPtr& spec) {
  if (j.is_number_integer()) return Coefficient::from_int(spec, j.get<std::int64_t>());
  if (!j.is_string()) throw ParseError("coefficient must be a string or integer", 0);
  return Coefficient::parse(spec, j.get<std::string>());
}

inline json to_json(const CoeffTuple& c) {
  json a = json::array();
  for (const auto& x : c) a.push_back(x.to_string());
  return a;
}

inline CoeffTuple coeffs_from_json(const json& j, const SpecPtr& spec) {
  if (!j.is_array()) throw ParseError("expected an array of coefficients", 0);
  CoeffTuple out;
  for (const auto& x : j) out.push_back(coefficient_from_json(x, spec));
  return out;
}

// ---------------------------------------------------------------------------
// Series.

inline json to_json(const Series& s) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms()) terms.push_back(json::array({json(e), c.to_string()}));
  return {{"nvars", s.nvars()}, {"D", s.D()}, {"terms", terms}};
}

inline Series series_from_json(const json& j, const SpecPtr& spec) {
  Series s(spec, detail::field<std::size_t>(j, "nvars"), detail::field<int>(j, "D"));
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 2) throw ParseError("series term must be [exponent, coefficient]", 0);
    const auto e = t[0].get<Exponent>();
    if (e.size() != s.nvars()) throw ParseError("exponent length does not match nvars", 0);
    s.add_term(e, coefficient_from_json(t[1], spec));
  }
  return s;
}

inline json to_json(const SeriesTuple& t) {
  json a = json::array();
  for (const auto& s : t) a.push_back(to_json(s));
  return a;
}

inline SeriesTuple tuple_from_json(const json& j, const SpecPtr& spec) {
  if (!j.is_array()) throw ParseError("expected an array of series", 0);
  SeriesTuple out;
  for (const auto& s : j) out.push_back(series_from_json(s, spec));
  return out;
}

/// Human-readable tuple, one component per line.
inline std::string tuple_text(const SeriesTuple& t, const std::vector<std::string>& names = {}) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += "[" + std::to_string(i + 1) + "] " + t[i].to_string(names) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Laws and groups.

inline json to_json(const FormalGroupLaw& law) {
  return {{"d", law.d()}, {"D", law.D()}, {"spec", to_json(law.spec())}, {"F", to_json(law.F())}, {"I", to_json(law.I())}};
}

/// Raw F (and I when present) without verification, for checking.
struct RawLaw {
  SpecPtr spec;
  int D = 0;
  std::size_t d = 0;
  SeriesTuple F;
  std::optional<SeriesTuple> I;
};

inline RawLaw raw_law_from_json(const json& j) {
  RawLaw r;
  r.spec = make_spec(ring_from_json(j.at("spec")));
  r.D = detail::field<int>(j, "D");
  if (j.contains("builtin")) {
    r.d = j.value("d", std::size_t{1});
    const auto law = builtin_fgl(detail::field<std::string>(j, "builtin"), r.spec, r.D, r.d);
    r.F = law.F();
    r.I = law.I();
    return r;
  }
  r.F = tuple_from_json(j.at("F"), r.spec);
  r.d = r.F.size();
  if (j.contains("d") && detail::field<std::size_t>(j, "d") != r.d) throw ParseError("field 'd' disagrees with F", 0);
  for (const auto& s : r.F)
    if (s.D() != r.D) throw ParseError("series cutoff disagrees with field 'D'", 0);
  if (j.contains("I")) r.I = tuple_from_json(j.at("I"), r.spec);
  return r;
}

inline FormalGroupLaw fgl_from_json(const json& j) {
  RawLaw r = raw_law_from_json(j);
  if (r.I) return FormalGroupLaw(std::move(r.F), std::move(*r.I));
  return FormalGroupLaw(std::move(r.F));
}

inline json to_json(const FglReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"name", c.name}, {"pass", c.pass}};
    if (c.witness)
      e["witness"] = {{"component", c.witness->component + 1},
                      {"monomial", c.witness->monomial},
                      {"difference", c.witness->difference.to_string()}};
    checks.push_back(e);
  }
  return {{"d", r.d}, {"pass", r.pass()}, {"checks", checks}};
}

inline json to_json(const StandardGroup& G) { return {{"law", to_json(G.law())}, {"N", G.N()}}; }

inline FormalGroupLaw law_reference(const json& j, const fs::path& base_dir) {
  if (j.is_string()) return fgl_from_json(load_json_file(base_dir / j.get<std::string>()));
  return fgl_from_json(j);
}

/// {"law": <law object or path relative to base_dir>, "N": n}.
inline StandardGroup group_from_json(const json& j, const fs::path& base_dir = {}) {
  if (!j.contains("law")) throw ParseError("missing field 'law'", 0);
  return StandardGroup(law_reference(j.at("law"), base_dir), j.value("N", 1));
}

inline json to_json(const GroupElement& g) { return to_json(g.coords); }

// ---------------------------------------------------------------------------
// Extensions.

inline json to_json(const TransversalData& data) {
  json T{{"elements", data.T.names}, {"mul_table", data.T.mul}, {"inv", data.T.inv}, {"identity", data.T.identity}};
  json C = json::object();
  for (std::size_t t = 0; t < data.C.size(); ++t) C[data.T.names[t]] = to_json(data.C[t]);
  json A = json::object();
  for (const auto& [key, S] : data.A) A[key] = to_json(S);
  return {{"L", to_json(data.L)}, {"T", T}, {"C", C}, {"A", A}, {"split", data.split}};
}

inline CosetTable coset_table_from_json(const json& j) {
  if (j.contains("cyclic")) return CosetTable::cyclic(detail::field<std::size_t>(j, "cyclic"));
  CosetTable T;
  T.names = detail::field<std::vector<std::string>>(j, "elements");
  T.mul = detail::field<std::vector<std::vector<std::size_t>>>(j, "mul_table");
  T.inv = detail::field<std::vector<std::size_t>>(j, "inv");
  const json& id = j.at("identity");
  T.identity = id.is_string() ? T.index(id.get<std::string>()) : id.get<std::size_t>();
  return T;
}

/// Canonical form as written by to_json. Also accepts "T": {"cyclic": n}
/// and "action": "trivial" | "inversion" in place of "C" for split data.
inline TransversalData extension_from_json(const json& j, const fs::path& base_dir = {}) {
  StandardGroup L = group_from_json(j.at("L"), base_dir);
  CosetTable T = coset_table_from_json(j.at("T"));
  const auto& spec = L.spec_ptr();
  if (j.contains("action")) {
    const auto action = detail::field<std::string>(j, "action");
    if (action == "trivial") return direct_product(std::move(L), std::move(T));
    if (action == "inversion") {
      if (T.size() != 2) throw PreconditionError("the inversion action needs a coset group of order 2");
      return inversion_extension(std::move(L));
    }
    throw ParseError("unknown action '" + action + "'", 0);
  }
  std::vector<SeriesTuple> C(T.size());
  const json& cj = j.at("C");
  for (std::size_t t = 0; t < T.size(); ++t) {
    if (!cj.contains(T.names[t])) throw ParseError("no conjugation series for coset '" + T.names[t] + "'", 0);
    C[t] = tuple_from_json(cj.at(T.names[t]), spec);
  }
  std::map<std::string, SeriesTuple> A;
  if (j.contains("A"))
    for (const auto& [key, S] : j.at("A").items()) A.emplace(key, tuple_from_json(S, spec));
  const bool split = j.value("split", A.empty());
  if (split && A.empty()) return mk_split_extension(std::move(L), std::move(T), std::move(C));
  return make_transversal_data(std::move(L), std::move(T), std::move(C), std::move(A), split);
}

inline json to_json(const ValidationReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"axiom", f.axiom}, {"elements", f.elements}});
  return {{"mode", r.mode}, {"group_size", r.group_size}, {"checked", r.checked}, {"pass", r.pass()},
          {"failures", failures}};
}

inline json coset_names(const std::vector<std::size_t>& cosets, const TransversalData& data) {
  json a = json::array();
  for (auto t : cosets) a.push_back(data.T.names.at(t));
  return a;
}

inline json to_json(const MarginalWitness& w, const TransversalData& data) {
  return {{"cosets", coset_names(w.cosets, data)},
          {"component", w.witness.component + 1},
          {"monomial", w.witness.monomial},
          {"coefficient", w.witness.coefficient.to_string()}};
}

inline json to_json(const MarginalEntry& e, const TransversalData& data) {
  return {{"cosets", coset_names(e.cosets, data)}, {"target", data.T.names.at(e.target)}, {"constant", to_json(e.constant)}};
}

inline json to_json(const MarginalityResult& r, const TransversalData& data) {
  json out{{"all_constant", r.all_constant}};
  if (r.witness) out["witness"] = to_json(*r.witness, data);
  if (r.all_constant) {
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back(to_json(e, data));
    out["entries"] = entries;
    out["all_zero"] = r.all_zero();
    out["value_bound"] = r.value_bound;
    out["distinct_values"] = r.distinct_values;
  }
  return out;
}

inline json to_json(const ProbeReport& r, const TransversalData& data) {
  json levels = json::array();
  json m_l = json::object();
  for (const auto& lv : r.levels) {
    json e{{"l", lv.l}, {"status", lv.constant ? "constant" : "non-constant"}, {"symbolic_zero", lv.symbolic_zero},
           {"grid_vanishing_only", lv.grid_vanishing_only}};
    if (lv.constant) {
      json cs = json::array();
      for (const auto& c : lv.entries) cs.push_back(to_json(c, data));
      e["constants"] = cs;
    } else if (lv.witness) {
      e["witness"] = to_json(*lv.witness, data);
    }
    levels.push_back(e);
    json members = json::array();
    for (std::size_t i = 0; i < lv.in_m_l.size(); ++i)
      if (lv.in_m_l[i]) members.push_back(i);
    m_l[std::to_string(lv.l)] = members;
  }
  json grid_points = json::array();
  for (const auto& a : r.grid) grid_points.push_back(to_json(a));
  return {{"word", r.word.to_string()},
          {"lmax", r.lmax},
          {"levels", levels},
          {"grid", grid_points},
          {"m_l", m_l},
          {"min_l", r.min_l ? json(*r.min_l) : json(nullptr)},
          {"grid_vanishing_only", r.grid_vanishing_only},
          {"monotone_consistent", r.monotone_consistent}};
}

}  // namespace fglaw::io
