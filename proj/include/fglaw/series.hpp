#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fglaw/coeff_map.hpp"
#include "fglaw/monomial.hpp"
#include "fglaw/ring.hpp"

namespace fglaw {

/// Truncated multivariate power series over a coefficient ring: all terms
/// have total degree < D and nonzero coefficients.
class Series {
 public:
  using TermMap = std::map<Exponent, Coefficient, GradedLexLess>;

  Series() = default;
  Series(SpecPtr spec, std::size_t nvars, int D) : spec_(std::move(spec)), nvars_(nvars), D_(D) {
    if (!spec_) throw PreconditionError("series needs a ring");
    if (D_ < 1) throw PreconditionError("degree cutoff D must be >= 1");
  }

  static Series constant(const SpecPtr& spec, std::size_t nvars, int D, const Coefficient& c) {
    Series s(spec, nvars, D);
    s.add_term(Exponent(nvars, 0), c);
    return s;
  }

  /// The coordinate series X_{i+1} (0-based index).
  static Series variable(const SpecPtr& spec, std::size_t nvars, int D, std::size_t i) {
    if (i >= nvars) throw PreconditionError("variable index out of range");
    Series s(spec, nvars, D);
    s.add_term(unit_exponent(nvars, i), Coefficient::one(spec));
    return s;
  }

  static Series from_terms(const SpecPtr& spec, std::size_t nvars, int D,
                           const std::vector<std::pair<Exponent, Coefficient>>& terms) {
    Series s(spec, nvars, D);
    for (const auto& [e, c] : terms) s.add_term(e, c);
    return s;
  }

  const RingSpec& spec() const { return *spec_; }
  const SpecPtr& spec_ptr() const noexcept { return spec_; }
  std::size_t nvars() const noexcept { return nvars_; }
  int D() const noexcept { return D_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Coefficient coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coefficient::zero(spec_) : it->second;
  }
  Coefficient constant_term() const { return coefficient(Exponent(nvars_, 0)); }

  /// Adds c*X^e; drops terms of degree >= D and cancelled coefficients.
  void add_term(const Exponent& e, const Coefficient& c) {
    if (e.size() != nvars_) throw IncompatibleError("exponent length does not match nvars");
    if (!same_ring(c.spec_ptr(), spec_)) throw IncompatibleError("coefficient ring mismatch");
    if (total_degree(e) >= D_ || c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  /// Homogeneous component of total degree `k`.
  Series homogeneous_part(int k) const {
    Series s(spec_, nvars_, D_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == k) s.terms_.emplace(e, c);
    return s;
  }

  friend Series operator+(const Series& a, const Series& b) {
    check_shape(a, b);
    Series r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend Series operator-(const Series& a, const Series& b) {
    check_shape(a, b);
    Series r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  Series operator-() const {
    Series r(spec_, nvars_, D_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  friend Series operator*(const Series& a, const Series& b) {
    check_shape(a, b);
    Series r(a.spec_, a.nvars_, a.D_);
    for (const auto& [ea, ca] : a.terms_) {
      const int da = total_degree(ea);
      for (const auto& [eb, cb] : b.terms_) {
        // Terms are sorted by degree, so the rest of b is truncated away.
        if (da + total_degree(eb) >= a.D_) break;
        r.add_term(add_exponents(ea, eb), ca * cb);
      }
    }
    return r;
  }

  friend Series operator*(const Coefficient& c, const Series& s) {
    Series r(s.spec_, s.nvars_, s.D_);
    for (const auto& [e, v] : s.terms_) r.add_term(e, c * v);
    return r;
  }

  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.nvars_ != b.nvars_ || a.D_ != b.D_ || !same_ring(a.spec_, b.spec_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ib = b.terms_.begin();
    for (const auto& [e, c] : a.terms_) {
      if (e != ib->first || !(c == ib->second)) return false;
      ++ib;
    }
    return true;
  }

  /// Human-readable rendering, e.g. "X1 + 3*X1*X2^2".
  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += i < names.size() ? names[i] : "X" + std::to_string(i + 1);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      std::string cs = c.to_string();
      if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
      if (!out.empty()) out += " + ";
      if (mono.empty())
        out += cs;
      else if (cs == "1")
        out += mono;
      else
        out += cs + "*" + mono;
    }
    return out;
  }

 private:
  static void check_shape(const Series& a, const Series& b) {
    if (a.nvars_ != b.nvars_ || a.D_ != b.D_)
      throw IncompatibleError("series shape mismatch");
    if (!same_ring(a.spec_, b.spec_)) throw IncompatibleError("series ring mismatch");
  }

  SpecPtr spec_;
  std::size_t nvars_ = 0;
  int D_ = 1;
  TermMap terms_;
};

/// A tuple of series sharing ring, variable count and cutoff.
using SeriesTuple = std::vector<Series>;

inline void check_tuple(const SeriesTuple& t) {
  if (t.empty()) throw PreconditionError("series tuple must be nonempty");
  for (const auto& s : t)
    if (s.nvars() != t[0].nvars() || s.D() != t[0].D() || !same_ring(s.spec_ptr(), t[0].spec_ptr()))
      throw IncompatibleError("series tuple is not homogeneous");
}

/// Coordinate series (X_{first+1}, ..., X_{first+count}) in `nvars` variables.
inline SeriesTuple coordinates(const SpecPtr& spec, std::size_t nvars, int D, std::size_t first,
                               std::size_t count) {
  SeriesTuple out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(Series::variable(spec, nvars, D, first + i));
  return out;
}

inline SeriesTuple zero_tuple(const SpecPtr& spec, std::size_t nvars, int D, std::size_t count) {
  return SeriesTuple(count, Series(spec, nvars, D));
}

inline SeriesTuple add(const SeriesTuple& a, const SeriesTuple& b) {
  if (a.size() != b.size()) throw IncompatibleError("tuple length mismatch");
  SeriesTuple r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
  return r;
}

inline SeriesTuple concat(const SeriesTuple& a, const SeriesTuple& b) {
  SeriesTuple r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

namespace detail {

/// Substitutes `args` (series in a common ring/shape) for the variables of
/// every component of `outer`, treating `outer` as the polynomial it stores.
/// Monomial products are memoised across components.
inline SeriesTuple substitute(const SeriesTuple& outer, const SeriesTuple& args) {
  check_tuple(outer);
  check_tuple(args);
  if (outer[0].nvars() != args.size())
    throw IncompatibleError("outer series has " + std::to_string(outer[0].nvars()) +
                            " variables but " + std::to_string(args.size()) + " arguments");
  if (!same_ring(outer[0].spec_ptr(), args[0].spec_ptr()))
    throw IncompatibleError("composition ring mismatch");
  const auto& spec = args[0].spec_ptr();
  const std::size_t n = args[0].nvars();
  const int D = args[0].D();
  const std::size_t m = args.size();

  std::map<Exponent, Series> cache;
  cache.emplace(Exponent(m, 0), Series::constant(spec, n, D, Coefficient::one(spec)));
  auto power = [&](auto&& self, const Exponent& e) -> const Series& {
    if (auto it = cache.find(e); it != cache.end()) return it->second;
    std::size_t i = 0;
    while (e[i] == 0) ++i;
    Exponent prev = e;
    --prev[i];
    Series value = self(self, prev) * args[i];
    return cache.emplace(e, std::move(value)).first->second;
  };

  SeriesTuple out;
  for (const auto& g : outer) {
    Series acc(spec, n, D);
    for (const auto& [e, c] : g.terms()) {
      const Series& mono = power(power, e);
      for (const auto& [f, v] : mono.terms()) acc.add_term(f, c * v);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace detail

/// G(F_1, ..., F_m) truncated to degree < D. Every F_i must have zero
/// constant term.
inline SeriesTuple compose(const SeriesTuple& G, const SeriesTuple& F) {
  check_tuple(F);
  for (std::size_t i = 0; i < F.size(); ++i)
    if (!F[i].constant_term().is_zero())
      throw PreconditionError("substitution not supported at truncation: argument " +
                              std::to_string(i + 1) + " has a nonzero constant term");
  if (!G.empty() && G[0].D() != F[0].D()) throw IncompatibleError("degree cutoff mismatch");
  return detail::substitute(G, F);
}

inline Series compose(const Series& g, const SeriesTuple& F) { return compose(SeriesTuple{g}, F)[0]; }

/// Substitution allowing argument constants in the maximal ideal. The outer
/// series is treated as the polynomial it stores, so the result is exact
/// only modulo the m-adic tail that truncation already discards.
inline SeriesTuple substitute_shifted(const SeriesTuple& G, const SeriesTuple& F) {
  check_tuple(F);
  for (std::size_t i = 0; i < F.size(); ++i)
    if (!F[i].constant_term().in_ideal_power(1))
      throw PreconditionError("argument " + std::to_string(i + 1) +
                              " has a constant term outside the maximal ideal");
  return detail::substitute(G, F);
}

/// Applies a coefficient homomorphism to every coefficient.
inline Series transport(const Series& s, const CoeffMap& phi) {
  if (!same_ring(s.spec_ptr(), phi.source))
    throw IncompatibleError("map " + phi.name + " does not apply to " + s.spec().describe());
  Series r(phi.target, s.nvars(), s.D());
  for (const auto& [e, c] : s.terms()) r.add_term(e, phi(c));
  return r;
}

inline SeriesTuple transport(const SeriesTuple& t, const CoeffMap& phi) {
  SeriesTuple r;
  for (const auto& s : t) r.push_back(transport(s, phi));
  return r;
}

/// Pointwise evaluation at arguments in the maximal ideal.
inline CoeffTuple eval(const SeriesTuple& F, std::span<const Coefficient> x) {
  check_tuple(F);
  const std::size_t n = F[0].nvars();
  if (x.size() != n)
    throw IncompatibleError("evaluation needs " + std::to_string(n) + " arguments, got " +
                            std::to_string(x.size()));
  const auto& spec = F[0].spec_ptr();
  for (std::size_t i = 0; i < n; ++i) {
    if (!same_ring(x[i].spec_ptr(), spec)) throw IncompatibleError("argument ring mismatch");
    if (!x[i].in_ideal_power(1))
      throw PreconditionError("argument " + std::to_string(i + 1) +
                              " lies outside the maximal ideal");
  }
  const int D = F[0].D();
  std::vector<std::vector<Coefficient>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    powers[i].push_back(Coefficient::one(spec));
    for (int e = 1; e < D; ++e) powers[i].push_back(powers[i].back() * x[i]);
  }
  CoeffTuple out;
  for (const auto& s : F) {
    Coefficient acc = Coefficient::zero(spec);
    for (const auto& [e, c] : s.terms()) {
      Coefficient v = c;
      for (std::size_t i = 0; i < n && !v.is_zero(); ++i)
        if (e[i] != 0) v *= powers[i][e[i]];
      acc += v;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

inline Coefficient eval(const Series& f, std::span<const Coefficient> x) {
  return eval(SeriesTuple{f}, x)[0];
}

struct ConstancyWitness {
  std::size_t component;
  Exponent monomial;
  Coefficient coefficient;
};

struct ConstancyResult {
  bool constant = false;
  CoeffTuple value;                        // set when constant
  std::optional<ConstancyWitness> witness;  // set when not constant
};

/// Decides whether every term of positive degree vanishes. The witness is
/// the graded-lex smallest offending monomial (lowest component on ties).
inline ConstancyResult is_constant(const SeriesTuple& F) {
  check_tuple(F);
  ConstancyResult r;
  for (std::size_t j = 0; j < F.size(); ++j)
    for (const auto& [e, c] : F[j].terms()) {
      if (total_degree(e) == 0) continue;
      if (!r.witness || GradedLexLess{}(e, r.witness->monomial))
        r.witness = ConstancyWitness{j, e, c};
      break;  // first positive-degree term is the smallest in this component
    }
  if (r.witness) return r;
  r.constant = true;
  for (const auto& s : F) r.value.push_back(s.constant_term());
  return r;
}

/// Reindexes `s` into `nvars` variables, its variables becoming
/// X_{offset+1}, ..., X_{offset+s.nvars()}.
inline Series embed(const Series& s, std::size_t nvars, std::size_t offset) {
  if (offset + s.nvars() > nvars) throw PreconditionError("embedding out of range");
  Series r(s.spec_ptr(), nvars, s.D());
  for (const auto& [e, c] : s.terms()) {
    Exponent f(nvars, 0);
    for (std::size_t i = 0; i < e.size(); ++i) f[offset + i] = e[i];
    r.add_term(f, c);
  }
  return r;
}

inline SeriesTuple embed(const SeriesTuple& t, std::size_t nvars, std::size_t offset) {
  SeriesTuple r;
  for (const auto& s : t) r.push_back(embed(s, nvars, offset));
  return r;
}

}  // namespace fglaw
