#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fglaw/stdgrp.hpp"
#include "fglaw/words.hpp"

namespace fglaw {

/// A finite group given by its multiplication table on named elements.
struct CosetTable {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> mul;
  std::vector<std::size_t> inv;
  std::size_t identity = 0;

  std::size_t size() const noexcept { return names.size(); }

  std::size_t index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw PreconditionError("unknown coset '" + name + "'");
  }

  /// Cyclic group of order n with elements "1", "s", "s^2", ...
  static CosetTable cyclic(std::size_t n) {
    if (n < 1) throw PreconditionError("cyclic group needs order >= 1");
    CosetTable t;
    for (std::size_t i = 0; i < n; ++i) t.names.push_back(i == 0 ? "1" : i == 1 ? "s" : "s^" + std::to_string(i));
    t.mul.assign(n, std::vector<std::size_t>(n));
    t.inv.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) t.mul[a][b] = (a + b) % n;
      t.inv[a] = (n - a) % n;
    }
    return t;
  }
};

/// First violated group axiom of a coset table, if any.
inline std::optional<std::string> coset_table_defect(const CosetTable& T) {
  const std::size_t n = T.size();
  if (n == 0) return "empty coset table";
  if (T.mul.size() != n || T.inv.size() != n || T.identity >= n) return "coset table has the wrong shape";
  for (const auto& row : T.mul) {
    if (row.size() != n) return "coset table has the wrong shape";
    for (auto v : row)
      if (v >= n) return "coset table entry out of range";
  }
  for (auto v : T.inv)
    if (v >= n) return "coset inverse out of range";
  std::set<std::string> seen(T.names.begin(), T.names.end());
  if (seen.size() != n) return "duplicate coset name";
  const auto& N = T.names;
  for (std::size_t a = 0; a < n; ++a) {
    if (T.mul[T.identity][a] != a || T.mul[a][T.identity] != a)
      return "identity fails at coset " + N[a];
    if (T.mul[a][T.inv[a]] != T.identity || T.mul[T.inv[a]][a] != T.identity)
      return "inverse fails at coset " + N[a];
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (T.mul[T.mul[a][b]][c] != T.mul[a][T.mul[b][c]])
          return "associativity fails at cosets (" + N[a] + "," + N[b] + "," + N[c] + ")";
  return std::nullopt;
}

/// Transversal data for H = T x L. C[t] is the conjugation series of t;
/// A holds correction series keyed "t*r" (product context) or "t^-1"
/// (inversion context), a missing key meaning the identity.
struct TransversalData {
  StandardGroup L;
  CosetTable T;
  std::vector<SeriesTuple> C;
  std::map<std::string, SeriesTuple> A;
  bool split = true;

  static std::string product_key(const CosetTable& T, std::size_t t, std::size_t r) {
    return T.names[t] + "*" + T.names[r];
  }
  static std::string inverse_key(const CosetTable& T, std::size_t t) { return T.names[t] + "^-1"; }

  const SeriesTuple* correction(const std::string& key) const {
    auto it = A.find(key);
    return it == A.end() ? nullptr : &it->second;
  }
};

struct HElement {
  std::size_t t = 0;
  GroupElement l;

  friend bool operator==(const HElement& a, const HElement& b) { return a.t == b.t && a.l == b.l; }
  friend bool operator<(const HElement& a, const HElement& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.l < b.l;
  }
};

inline std::string h_to_string(const HElement& x, const TransversalData& data) {
  return "(" + data.T.names.at(x.t) + "," + x.l.to_string() + ")";
}

namespace detail {

inline std::string witness_text(const SeriesWitness& w) {
  std::string e;
  for (std::size_t i = 0; i < w.monomial.size(); ++i) e += (i ? "," : "") + std::to_string(w.monomial[i]);
  return "component " + std::to_string(w.component + 1) + ", monomial [" + e + "], difference " +
         w.difference.to_string();
}

inline void check_self_map(const SeriesTuple& S, const StandardGroup& L, const std::string& what) {
  check_tuple(S);
  if (S.size() != L.d() || S[0].nvars() != L.d() || S[0].D() != L.law().D() ||
      !same_ring(S[0].spec_ptr(), L.spec_ptr()))
    throw IncompatibleError(what + " must be " + std::to_string(L.d()) + " series in " +
                            std::to_string(L.d()) + " variables over the group's ring and cutoff");
  for (const auto& s : S)
    if (!s.constant_term().is_zero()) throw PreconditionError(what + " has a nonzero constant term");
}

}  // namespace detail

/// Checks shapes and the coset table, and that C at the identity coset is X.
inline TransversalData make_transversal_data(StandardGroup L, CosetTable T, std::vector<SeriesTuple> C,
                                             std::map<std::string, SeriesTuple> A, bool split) {
  if (auto defect = coset_table_defect(T)) throw PreconditionError("coset table: " + *defect);
  if (C.size() != T.size())
    throw PreconditionError("need one conjugation series per coset, got " + std::to_string(C.size()));
  for (std::size_t t = 0; t < C.size(); ++t) detail::check_self_map(C[t], L, "C_" + T.names[t]);
  const SeriesTuple X = coordinates(L.spec_ptr(), L.d(), L.law().D(), 0, L.d());
  if (auto w = first_difference(C[T.identity], X))
    throw PreconditionError("C at the identity coset is not X: " + detail::witness_text(*w));
  if (split && !A.empty()) throw PreconditionError("split extension data carries correction series");
  for (const auto& [key, S] : A) {
    bool known = false;
    for (std::size_t t = 0; t < T.size() && !known; ++t) {
      known = key == TransversalData::inverse_key(T, t);
      for (std::size_t r = 0; r < T.size() && !known; ++r) known = key == TransversalData::product_key(T, t, r);
    }
    if (!known) throw PreconditionError("correction key '" + key + "' names no coset context");
    detail::check_self_map(S, L, "A_" + key);
  }
  return TransversalData{std::move(L), std::move(T), std::move(C), std::move(A), split};
}

/// Split extension by a right action t -> C_t of T on the law. Requires each
/// C_t to be an automorphism of F, C_1 = X and C_{tr} = C_r o C_t.
inline TransversalData mk_split_extension(StandardGroup L, CosetTable T, std::vector<SeriesTuple> action) {
  if (auto defect = coset_table_defect(T)) throw PreconditionError("coset table: " + *defect);
  if (action.size() != T.size()) throw PreconditionError("need one action series per coset");
  const auto& law = L.law();
  const std::size_t d = law.d();
  const auto& spec = law.spec_ptr();
  const SeriesTuple X2 = coordinates(spec, 2 * d, law.D(), 0, d);
  const SeriesTuple Y2 = coordinates(spec, 2 * d, law.D(), d, d);
  for (std::size_t t = 0; t < T.size(); ++t) {
    detail::check_self_map(action[t], L, "C_" + T.names[t]);
    const SeriesTuple lhs = compose(action[t], law.F());
    const SeriesTuple rhs = compose(law.F(), concat(compose(action[t], X2), compose(action[t], Y2)));
    if (auto w = first_difference(lhs, rhs))
      throw PreconditionError("C_" + T.names[t] + " is not an automorphism of the law: " +
                              detail::witness_text(*w));
  }
  for (std::size_t t = 0; t < T.size(); ++t)
    for (std::size_t r = 0; r < T.size(); ++r)
      if (auto w = first_difference(action[T.mul[t][r]], compose(action[r], action[t])))
        throw PreconditionError("action is not compatible: C_" + T.names[T.mul[t][r]] + " != C_" +
                                T.names[r] + " o C_" + T.names[t] + " at " + detail::witness_text(*w));
  return make_transversal_data(std::move(L), std::move(T), std::move(action), {}, true);
}

/// Direct product: every C_t is the identity series.
inline TransversalData direct_product(StandardGroup L, CosetTable T) {
  const SeriesTuple X = coordinates(L.spec_ptr(), L.d(), L.law().D(), 0, L.d());
  std::vector<SeriesTuple> action(T.size(), X);
  return mk_split_extension(std::move(L), std::move(T), std::move(action));
}

/// C2 acting on L by the formal inverse I.
inline TransversalData inversion_extension(StandardGroup L) {
  const SeriesTuple X = coordinates(L.spec_ptr(), L.d(), L.law().D(), 0, L.d());
  const SeriesTuple I = L.law().I();
  return mk_split_extension(std::move(L), CosetTable::cyclic(2), {X, I});
}

/// (t,l)(r,m) = (tr, A_{t*r}(F(C_r(l), m))).
inline HElement h_mul(const HElement& x, const HElement& y, const TransversalData& data) {
  const std::size_t tr = data.T.mul.at(x.t).at(y.t);
  CoeffTuple args = eval(data.C[y.t], x.l.coords);
  args.insert(args.end(), y.l.coords.begin(), y.l.coords.end());
  CoeffTuple v = eval(data.L.law().F(), args);
  if (const auto* A = data.correction(TransversalData::product_key(data.T, x.t, y.t))) v = eval(*A, v);
  HElement r{tr, GroupElement{std::move(v)}};
  data.L.check(r.l);
  return r;
}

/// (t,l)^-1 = (t^-1, A_{t^-1}(C_{t^-1}(I(l)))).
inline HElement h_inv(const HElement& x, const TransversalData& data) {
  const std::size_t ti = data.T.inv.at(x.t);
  CoeffTuple v = eval(data.C[ti], eval(data.L.law().I(), x.l.coords));
  if (const auto* A = data.correction(TransversalData::inverse_key(data.T, x.t))) v = eval(*A, v);
  HElement r{ti, GroupElement{std::move(v)}};
  data.L.check(r.l);
  return r;
}

inline HElement h_identity(const TransversalData& data) { return {data.T.identity, data.L.identity()}; }

/// Adapter exposing H to the generic word evaluator.
struct ExtensionGroup {
  using element_type = HElement;
  const TransversalData* data;

  HElement identity() const { return h_identity(*data); }
  HElement mul(const HElement& x, const HElement& y) const { return h_mul(x, y, *data); }
  HElement inv(const HElement& x) const { return h_inv(x, *data); }
};

inline HElement reduce(const HElement& x, const TransversalData& data, int M) {
  return {x.t, data.L.reduce(x.l, M)};
}

/// The finite group H / (1, (m^M)^d) on representatives (t, l mod m^M).
inline FiniteGroup<HElement> enumerate_extension_quotient(const TransversalData& data, int M,
                                                          std::size_t bound = enumeration_bound()) {
  check_quotient_level(data.L, M);
  const auto reps = quotient_representatives(data.L, M, bound);
  if (reps.size() > bound / data.T.size()) throw BoundError("extension quotient too large", reps.size() * data.T.size());
  std::vector<HElement> elements;
  for (std::size_t t = 0; t < data.T.size(); ++t)
    for (const auto& l : reps) elements.push_back({t, l});
  auto held = std::make_shared<const TransversalData>(data);
  return FiniteGroup<HElement>(
      std::move(elements), h_identity(data),
      [held, M](const HElement& a, const HElement& b) { return reduce(h_mul(a, b, *held), *held, M); },
      [held, M](const HElement& a) { return reduce(h_inv(a, *held), *held, M); });
}

// ---------------------------------------------------------------------------
// Validation.

struct ValidationMode {
  enum class Kind { exhaustive, sampled } kind = Kind::exhaustive;
  int M = 0;               // exhaustive: quotient level
  std::size_t samples = 0;  // sampled: number of random triples
  std::uint64_t seed = 0;

  static ValidationMode exhaustive(int M) { return {Kind::exhaustive, M, 0, 0}; }
  static ValidationMode sampled(std::size_t n, std::uint64_t seed = 1) { return {Kind::sampled, 0, n, seed}; }
};

struct ValidationFailure {
  std::string axiom;
  std::vector<std::string> elements;
};

struct ValidationReport {
  std::string mode;
  std::size_t group_size = 0;  // exhaustive only
  std::size_t checked = 0;     // triples (or elements) examined
  std::vector<ValidationFailure> failures;
  bool pass() const noexcept { return failures.empty(); }
};

/// Exhaustive at M = N+2 when the quotient fits the bound, else 1000
/// random triples at full precision.
inline ValidationMode default_validation_mode(const TransversalData& data,
                                              std::size_t bound = enumeration_bound()) {
  const int M = data.L.N() + 2;
  try {
    check_quotient_level(data.L, M);
    const auto n = quotient_representatives(data.L, M, bound).size() * data.T.size();
    if (n * n * n <= 64 * bound) return ValidationMode::exhaustive(M);
  } catch (const Error&) {
  }
  return ValidationMode::sampled(1000);
}

/// Checks identity, inverses and associativity of the H operation, after
/// the coset table itself. Failures stop at the first witness per axiom.
inline ValidationReport validate_transversal(const TransversalData& data, const ValidationMode& mode,
                                             std::size_t bound = enumeration_bound()) {
  ValidationReport report;
  if (auto defect = coset_table_defect(data.T)) {
    report.mode = "table";
    report.failures.push_back({"coset table", {*defect}});
    return report;
  }
  auto name = [&](const HElement& x) { return h_to_string(x, data); };

  if (mode.kind == ValidationMode::Kind::exhaustive) {
    report.mode = "exhaustive(M=" + std::to_string(mode.M) + ")";
    const auto H = enumerate_extension_quotient(data, mode.M, bound);
    const std::size_t n = H.size();
    report.group_size = n;
    if (n > 0 && n * n > 64 * bound / n) throw BoundError("too many triples to validate exhaustively", n * n * n);
    const std::size_t e = H.identity();
    bool id_ok = true, inv_ok = true, assoc_ok = true;
    for (std::size_t a = 0; a < n; ++a) {
      if (id_ok && (H.mul(e, a) != a || H.mul(a, e) != a)) {
        id_ok = false;
        report.failures.push_back({"identity", {name(H.element(a))}});
      }
      if (inv_ok && (H.mul(a, H.inv(a)) != e || H.mul(H.inv(a), a) != e)) {
        inv_ok = false;
        report.failures.push_back({"inverse", {name(H.element(a))}});
      }
      for (std::size_t b = 0; b < n && assoc_ok; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (H.mul(H.mul(a, b), c) != H.mul(a, H.mul(b, c))) {
            assoc_ok = false;
            report.failures.push_back(
                {"associativity", {name(H.element(a)), name(H.element(b)), name(H.element(c))}});
            break;
          }
    }
    report.checked = n * n * n;
    return report;
  }

  report.mode = "sampled(n=" + std::to_string(mode.samples) + ")";
  std::mt19937_64 rng(mode.seed);
  std::uniform_int_distribution<std::size_t> coset(0, data.T.size() - 1);
  auto draw = [&] {
    HElement x{coset(rng), {}};
    for (std::size_t i = 0; i < data.L.d(); ++i)
      x.l.coords.push_back(random_in_ideal(data.L.spec_ptr(), data.L.N(), rng));
    return x;
  };
  const HElement one = h_identity(data);
  bool id_ok = true, inv_ok = true, assoc_ok = true;
  for (std::size_t i = 0; i < mode.samples; ++i) {
    const HElement a = draw(), b = draw(), c = draw();
    if (id_ok && (!(h_mul(one, a, data) == a) || !(h_mul(a, one, data) == a))) {
      id_ok = false;
      report.failures.push_back({"identity", {name(a)}});
    }
    const HElement ai = h_inv(a, data);
    if (inv_ok && (!(h_mul(a, ai, data) == one) || !(h_mul(ai, a, data) == one))) {
      inv_ok = false;
      report.failures.push_back({"inverse", {name(a)}});
    }
    if (assoc_ok && !(h_mul(h_mul(a, b, data), c, data) == h_mul(a, h_mul(b, c, data), data))) {
      assoc_ok = false;
      report.failures.push_back({"associativity", {name(a), name(b), name(c)}});
    }
  }
  report.checked = mode.samples;
  return report;
}

// ---------------------------------------------------------------------------
// Word series on cosets.

struct CosetWordSeries {
  WordSeries series;
  std::size_t target = 0;  // coset of w(t_1, .., t_k)
};

/// W_{t_1..t_k}: the word map of `w` on t_1 L x .. x t_k L as d series in
/// d*k variables, folding the H operation symbolically over the letters.
inline CosetWordSeries coset_word_series(const WordExpr& w, const TransversalData& data,
                                         const std::vector<std::size_t>& cosets) {
  const std::size_t k = static_cast<std::size_t>(w.k());
  if (cosets.size() < k)
    throw PreconditionError("word needs " + std::to_string(k) + " cosets, got " + std::to_string(cosets.size()));
  for (auto t : cosets)
    if (t >= data.T.size()) throw PreconditionError("coset index out of range");
  const auto& law = data.L.law();
  const std::size_t d = law.d();
  const std::size_t n = d * k;
  const auto& spec = law.spec_ptr();
  const int D = law.D();

  struct Factor {
    std::size_t t;
    SeriesTuple Y;
  };
  std::vector<Factor> pos, neg;
  for (std::size_t i = 0; i < k; ++i) {
    const SeriesTuple X = coordinates(spec, n, D, i * d, d);
    pos.push_back({cosets[i], X});
    // (t,X)^-1 = (t^-1, A_{t^-1}(C_{t^-1}(I(X)))).
    const std::size_t ti = data.T.inv[cosets[i]];
    SeriesTuple Y = compose(data.C[ti], compose(law.I(), X));
    if (const auto* A = data.correction(TransversalData::inverse_key(data.T, cosets[i]))) Y = compose(*A, Y);
    neg.push_back({ti, std::move(Y)});
  }

  std::size_t g = data.T.identity;
  SeriesTuple V = zero_tuple(spec, n, D, d);
  for (const auto& l : w.letters()) {
    const Factor& f = l.exp > 0 ? pos[l.gen - 1] : neg[l.gen - 1];
    SeriesTuple next = compose(law.F(), concat(compose(data.C[f.t], V), f.Y));
    if (const auto* A = data.correction(TransversalData::product_key(data.T, g, f.t))) next = compose(*A, next);
    g = data.T.mul[g][f.t];
    V = std::move(next);
  }
  return {WordSeries{w, d, std::move(V)}, g};
}

/// Coset tuples of length k in lexicographic order, first coordinate slowest.
inline std::vector<std::vector<std::size_t>> coset_tuples(std::size_t T, std::size_t k,
                                                          std::size_t bound = enumeration_bound()) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > bound / T) throw BoundError("too many coset tuples", total * T);
    total *= T;
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(total);
  std::vector<std::size_t> idx(k, 0);
  for (std::size_t n = 0; n < total; ++n) {
    out.push_back(idx);
    for (std::size_t i = k; i-- > 0;) {
      if (++idx[i] < T) break;
      idx[i] = 0;
    }
  }
  return out;
}

struct MarginalEntry {
  std::vector<std::size_t> cosets;
  std::size_t target = 0;
  CoeffTuple constant;
};

struct MarginalWitness {
  std::vector<std::size_t> cosets;
  ConstancyWitness witness;
};

struct MarginalityResult {
  bool all_constant = false;
  std::vector<MarginalEntry> entries;      // complete when all_constant
  std::optional<MarginalWitness> witness;  // first non-constant coset tuple
  std::size_t value_bound = 0;             // |T|^k bound on |w{H}| when all constant
  std::size_t distinct_values = 0;         // distinct (target, constant) pairs
  bool all_zero() const {
    if (!all_constant) return false;
    for (const auto& e : entries)
      for (const auto& c : e.constant)
        if (!c.is_zero()) return false;
    return true;
  }
};

/// Runs is_constant on every coset word series; stops at the first
/// non-constant tuple.
inline MarginalityResult marginality_check(const WordExpr& w, const TransversalData& data,
                                           std::size_t bound = enumeration_bound()) {
  MarginalityResult r;
  const auto tuples = coset_tuples(data.T.size(), static_cast<std::size_t>(w.k()), bound);
  for (const auto& cosets : tuples) {
    const auto cw = coset_word_series(w, data, cosets);
    auto c = is_constant(cw.series.W);
    if (!c.constant) {
      r.witness = MarginalWitness{cosets, *c.witness};
      r.entries.clear();
      return r;
    }
    r.entries.push_back({cosets, cw.target, std::move(c.value)});
  }
  r.all_constant = true;
  r.value_bound = tuples.size();
  std::set<std::pair<std::size_t, CoeffTuple>> values;
  for (const auto& e : r.entries)
    values.emplace(e.target, e.constant);
  r.distinct_values = values.size();
  return r;
}

/// Same tables; law, C and A transported along phi.
inline TransversalData transport_atlas(const TransversalData& data, const CoeffMap& phi) {
  StandardGroup L(transport_fgl(data.L.law(), phi), data.L.N());
  std::vector<SeriesTuple> C;
  for (const auto& c : data.C) C.push_back(transport(c, phi));
  std::map<std::string, SeriesTuple> A;
  for (const auto& [key, S] : data.A) A.emplace(key, transport(S, phi));
  return make_transversal_data(std::move(L), data.T, std::move(C), std::move(A), data.split);
}

}  // namespace fglaw
