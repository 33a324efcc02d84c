#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fglaw/error.hpp"
#include "fglaw/monomial.hpp"

namespace fglaw {

enum class RingKind { padic, eqchar, nested };

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// A truncated pro-p coefficient ring.
///
///  - padic:  Z/p^K, standing for Z_p at precision K.
///  - eqchar: F_p[t]/(t^K), standing for F_p[[t]] at precision K.
///  - nested: B[t1..tm]/(t)^Dt over a padic or eqchar base B.
///
/// The maximal ideal is (p), (t) or (m_B, t1..tm) respectively.
class RingSpec {
 public:
  static RingSpec padic(std::uint64_t p, int K) {
    check_prime(p);
    if (K < 1) throw PreconditionError("precision K must be >= 1");
    std::uint64_t mod = 1;
    for (int i = 0; i < K; ++i) {
      if (mod > (std::uint64_t{1} << 62) / p)
        throw PreconditionError("p^K does not fit in 62 bits");
      mod *= p;
    }
    RingSpec s;
    s.kind_ = RingKind::padic;
    s.p_ = p;
    s.K_ = K;
    s.modulus_ = mod;
    return s;
  }

  static RingSpec eqchar(std::uint64_t p, int K) {
    check_prime(p);
    if (p >= (std::uint64_t{1} << 31)) throw PreconditionError("p too large");
    if (K < 1) throw PreconditionError("precision K must be >= 1");
    RingSpec s;
    s.kind_ = RingKind::eqchar;
    s.p_ = p;
    s.K_ = K;
    s.modulus_ = p;
    return s;
  }

  static RingSpec nested(const RingSpec& base, int m, int Dt) {
    if (base.kind_ == RingKind::nested)
      throw PreconditionError("nested rings take a padic or eqchar base");
    if (m < 1) throw PreconditionError("nested ring needs m >= 1");
    if (Dt < 1) throw PreconditionError("nested ring needs Dt >= 1");
    RingSpec s = base;
    s.kind_ = RingKind::nested;
    s.base_ = std::make_shared<const RingSpec>(base);
    s.m_ = m;
    s.Dt_ = Dt;
    return s;
  }

  RingKind kind() const noexcept { return kind_; }
  std::uint64_t p() const noexcept { return p_; }
  /// Coefficient precision (of the base ring, for nested specs).
  int K() const noexcept { return K_; }
  int m() const noexcept { return m_; }
  int Dt() const noexcept { return Dt_; }
  bool is_nested() const noexcept { return kind_ == RingKind::nested; }
  /// Kind of the innermost ring.
  RingKind base_kind() const noexcept { return is_nested() ? base_->kind_ : kind_; }
  const RingSpec& base() const {
    if (!base_) throw PreconditionError("ring is not nested");
    return *base_;
  }
  const std::shared_ptr<const RingSpec>& base_ptr() const {
    if (!base_) throw PreconditionError("ring is not nested");
    return base_;
  }
  /// p^K for padic rings, p otherwise.
  std::uint64_t modulus() const noexcept { return modulus_; }

  friend bool operator==(const RingSpec& a, const RingSpec& b) {
    if (a.kind_ != b.kind_ || a.p_ != b.p_ || a.K_ != b.K_) return false;
    if (a.kind_ != RingKind::nested) return true;
    return a.m_ == b.m_ && a.Dt_ == b.Dt_ && *a.base_ == *b.base_;
  }

  std::string describe() const {
    switch (kind_) {
      case RingKind::padic:
        return "Z/" + std::to_string(p_) + "^" + std::to_string(K_);
      case RingKind::eqchar:
        return "F_" + std::to_string(p_) + "[t]/t^" + std::to_string(K_);
      case RingKind::nested:
        return base_->describe() + "[t1..t" + std::to_string(m_) + "]/deg" +
               std::to_string(Dt_);
    }
    return {};
  }

 private:
  static void check_prime(std::uint64_t p) {
    if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  }

  RingKind kind_ = RingKind::padic;
  std::uint64_t p_ = 2;
  int K_ = 1;
  std::uint64_t modulus_ = 2;
  std::shared_ptr<const RingSpec> base_;
  int m_ = 0;
  int Dt_ = 0;
};

using SpecPtr = std::shared_ptr<const RingSpec>;

inline SpecPtr make_spec(RingSpec s) { return std::make_shared<const RingSpec>(std::move(s)); }

inline bool same_ring(const SpecPtr& a, const SpecPtr& b) {
  return a == b || (a && b && *a == *b);
}

class Coefficient;

struct NestedTerm {
  Exponent t;  // exponents of t1..tm
  std::shared_ptr<const Coefficient> c;
};

/// An element of a truncated coefficient ring in canonical form.
///
/// Payloads: padic residue in [0, p^K); eqchar digit vector of length K,
/// low degree first; nested list of (t-exponent, nonzero base coefficient)
/// in graded-lex order with every exponent of total degree < Dt.
class Coefficient {
 public:
  using Digits = std::vector<std::uint32_t>;
  using Terms = std::vector<NestedTerm>;

  Coefficient() = default;
  explicit Coefficient(SpecPtr spec) : spec_(std::move(spec)) {
    switch (spec_->kind()) {
      case RingKind::padic: payload_ = std::uint64_t{0}; break;
      case RingKind::eqchar: payload_ = Digits(spec_->K(), 0); break;
      case RingKind::nested: payload_ = Terms{}; break;
    }
  }

  static Coefficient zero(const SpecPtr& spec) { return Coefficient(spec); }
  static Coefficient one(const SpecPtr& spec) { return from_int(spec, 1); }

  static Coefficient from_int(const SpecPtr& spec, std::int64_t v) {
    Coefficient c(spec);
    switch (spec->kind()) {
      case RingKind::padic: {
        const auto mod = static_cast<std::int64_t>(spec->modulus());
        std::int64_t r = v % mod;
        if (r < 0) r += mod;
        c.payload_ = static_cast<std::uint64_t>(r);
        break;
      }
      case RingKind::eqchar: {
        const auto p = static_cast<std::int64_t>(spec->p());
        std::int64_t r = v % p;
        if (r < 0) r += p;
        std::get<Digits>(c.payload_)[0] = static_cast<std::uint32_t>(r);
        break;
      }
      case RingKind::nested: {
        auto base = spec->base_ptr();
        c = from_base(spec, from_int(base, v));
        break;
      }
    }
    return c;
  }

  /// Padic residue given directly (reduced mod p^K).
  static Coefficient from_residue(const SpecPtr& spec, std::uint64_t r) {
    if (spec->kind() != RingKind::padic) throw PreconditionError("from_residue needs a padic ring");
    Coefficient c(spec);
    c.payload_ = r % spec->modulus();
    return c;
  }

  static Coefficient from_digits(const SpecPtr& spec, Digits d) {
    if (spec->kind() != RingKind::eqchar) throw PreconditionError("from_digits needs an eqchar ring");
    d.resize(spec->K(), 0);
    for (auto& x : d) x %= spec->p();
    Coefficient c(spec);
    c.payload_ = std::move(d);
    return c;
  }

  /// Embeds a base-ring coefficient as a constant of a nested ring.
  static Coefficient from_base(const SpecPtr& nested, const Coefficient& b) {
    if (!nested->is_nested() || !(nested->base() == b.spec()))
      throw IncompatibleError("base coefficient does not match nested ring");
    Coefficient c(nested);
    if (!b.is_zero())
      std::get<Terms>(c.payload_)
          .push_back({Exponent(nested->m(), 0), std::make_shared<const Coefficient>(b)});
    return c;
  }

  /// The ring generator: t for eqchar rings; t_i (1-based) for nested
  /// rings, where index 0 selects the base variable t of an eqchar base.
  static Coefficient generator(const SpecPtr& spec, int index = 0) {
    switch (spec->kind()) {
      case RingKind::padic:
        throw PreconditionError("padic rings have no variable");
      case RingKind::eqchar: {
        if (index != 0) throw PreconditionError("eqchar ring has a single variable t");
        Digits d(spec->K(), 0);
        if (spec->K() > 1) d[1] = 1;
        return from_digits(spec, std::move(d));
      }
      case RingKind::nested: {
        if (index == 0) return from_base(spec, generator(spec->base_ptr(), 0));
        if (index < 1 || index > spec->m())
          throw PreconditionError("variable t" + std::to_string(index) + " out of range");
        Coefficient c(spec);
        if (spec->Dt() > 1) {
          Exponent e(spec->m(), 0);
          e[index - 1] = 1;
          std::get<Terms>(c.payload_)
              .push_back({e, std::make_shared<const Coefficient>(one(spec->base_ptr()))});
        }
        return c;
      }
    }
    return Coefficient(spec);
  }

  /// Builds a nested coefficient from (t-exponent, base coefficient) pairs;
  /// duplicates are summed and out-of-range terms dropped.
  static Coefficient from_terms(const SpecPtr& spec,
                                const std::vector<std::pair<Exponent, Coefficient>>& terms) {
    if (!spec->is_nested()) throw PreconditionError("from_terms needs a nested ring");
    std::map<Exponent, Coefficient, GradedLexLess> acc;
    for (const auto& [e, c] : terms) {
      if (e.size() != static_cast<std::size_t>(spec->m()))
        throw IncompatibleError("t-exponent has wrong length");
      if (!(c.spec() == spec->base())) throw IncompatibleError("term coefficient ring mismatch");
      if (total_degree(e) >= spec->Dt()) continue;
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(e, c);
      else
        it->second = it->second + c;
    }
    return from_map(spec, acc);
  }

  const RingSpec& spec() const { return *spec_; }
  const SpecPtr& spec_ptr() const noexcept { return spec_; }

  std::uint64_t residue() const { return std::get<std::uint64_t>(payload_); }
  const Digits& digits() const { return std::get<Digits>(payload_); }
  const Terms& terms() const { return std::get<Terms>(payload_); }

  bool is_zero() const {
    if (auto r = std::get_if<std::uint64_t>(&payload_)) return *r == 0;
    if (auto d = std::get_if<Digits>(&payload_)) {
      for (auto x : *d)
        if (x != 0) return false;
      return true;
    }
    return std::get<Terms>(payload_).empty();
  }

  /// Largest N with this element in m^N; nullopt stands for +infinity
  /// (the element is zero at precision). Nested weight of c*t^a is
  /// valuation(c) + |a|.
  std::optional<int> valuation() const {
    switch (spec_->kind()) {
      case RingKind::padic: {
        auto r = residue();
        if (r == 0) return std::nullopt;
        int v = 0;
        while (r % spec_->p() == 0) {
          r /= spec_->p();
          ++v;
        }
        return v;
      }
      case RingKind::eqchar: {
        const auto& d = digits();
        for (std::size_t i = 0; i < d.size(); ++i)
          if (d[i] != 0) return static_cast<int>(i);
        return std::nullopt;
      }
      case RingKind::nested: {
        std::optional<int> best;
        for (const auto& term : terms()) {
          const int w = *term.c->valuation() + total_degree(term.t);
          if (!best || w < *best) best = w;
        }
        return best;
      }
    }
    return std::nullopt;
  }

  /// True iff the element lies in m^n.
  bool in_ideal_power(int n) const {
    auto v = valuation();
    return !v || *v >= n;
  }

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    check_same(a, b);
    return combine(a, b, +1);
  }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    check_same(a, b);
    return combine(a, b, -1);
  }
  Coefficient operator-() const { return Coefficient(spec_) - *this; }

  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    check_same(a, b);
    Coefficient r(a.spec_);
    switch (a.spec_->kind()) {
      case RingKind::padic: {
        const unsigned __int128 prod =
            static_cast<unsigned __int128>(a.residue()) * b.residue();
        r.payload_ = static_cast<std::uint64_t>(prod % a.spec_->modulus());
        break;
      }
      case RingKind::eqchar: {
        const auto& x = a.digits();
        const auto& y = b.digits();
        const std::uint64_t p = a.spec_->p();
        Digits out(x.size(), 0);
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] == 0) continue;
          for (std::size_t j = 0; i + j < x.size(); ++j)
            out[i + j] = static_cast<std::uint32_t>(
                (out[i + j] + static_cast<std::uint64_t>(x[i]) * y[j]) % p);
        }
        r.payload_ = std::move(out);
        break;
      }
      case RingKind::nested: {
        const int Dt = a.spec_->Dt();
        std::map<Exponent, Coefficient, GradedLexLess> acc;
        for (const auto& s : a.terms())
          for (const auto& u : b.terms()) {
            Exponent e = add_exponents(s.t, u.t);
            if (total_degree(e) >= Dt) continue;
            Coefficient prod = *s.c * *u.c;
            auto it = acc.find(e);
            if (it == acc.end())
              acc.emplace(std::move(e), std::move(prod));
            else
              it->second = it->second + prod;
          }
        r = from_map(a.spec_, acc);
        break;
      }
    }
    return r;
  }

  Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
  Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
  Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }

  Coefficient pow(std::uint64_t n) const {
    Coefficient result = one(spec_);
    Coefficient base = *this;
    while (n > 0) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return result;
  }

  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    if (!same_ring(a.spec_, b.spec_)) return false;
    return compare_payload(a, b) == 0;
  }

  /// Total order on coefficients of one ring, for use as map keys.
  friend bool operator<(const Coefficient& a, const Coefficient& b) {
    return compare_payload(a, b) < 0;
  }

  /// Reduces modulo m^M, keeping the canonical representative whose
  /// monomials all have weight < M.
  Coefficient reduce_mod_ideal_power(int M) const {
    switch (spec_->kind()) {
      case RingKind::padic: {
        if (M >= spec_->K()) return *this;
        std::uint64_t pm = 1;
        for (int i = 0; i < std::max(M, 0); ++i) pm *= spec_->p();
        return from_residue(spec_, residue() % pm);
      }
      case RingKind::eqchar: {
        Digits d = digits();
        for (std::size_t i = std::max(M, 0); i < d.size(); ++i) d[i] = 0;
        return from_digits(spec_, std::move(d));
      }
      case RingKind::nested: {
        std::map<Exponent, Coefficient, GradedLexLess> acc;
        for (const auto& term : terms()) {
          const int deg = total_degree(term.t);
          if (deg >= M) continue;
          acc.emplace(term.t, term.c->reduce_mod_ideal_power(M - deg));
        }
        return from_map(spec_, acc);
      }
    }
    return *this;
  }

  std::string to_string() const {
    switch (spec_->kind()) {
      case RingKind::padic:
        return std::to_string(residue());
      case RingKind::eqchar: {
        std::string out;
        const auto& d = digits();
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (d[i] == 0) continue;
          if (!out.empty()) out += "+";
          if (i == 0) {
            out += std::to_string(d[i]);
            continue;
          }
          if (d[i] != 1) out += std::to_string(d[i]) + "*";
          out += "t";
          if (i > 1) out += "^" + std::to_string(i);
        }
        return out.empty() ? "0" : out;
      }
      case RingKind::nested: {
        std::string out;
        for (const auto& term : terms()) {
          if (!out.empty()) out += "+";
          std::string mono;
          for (std::size_t i = 0; i < term.t.size(); ++i) {
            if (term.t[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "t" + std::to_string(i + 1);
            if (term.t[i] > 1) mono += "^" + std::to_string(term.t[i]);
          }
          std::string cs = term.c->to_string();
          if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
          if (mono.empty())
            out += cs;
          else if (cs == "1")
            out += mono;
          else
            out += cs + "*" + mono;
        }
        return out.empty() ? "0" : out;
      }
    }
    return {};
  }

  /// Parses the coefficient grammar: integers, `t` (eqchar variable),
  /// `t1`..`tm` (nested variables), `+ - * ^` and parentheses.
  static Coefficient parse(const SpecPtr& spec, std::string_view text);

 private:
  using Payload = std::variant<std::uint64_t, Digits, Terms>;

  static void check_same(const Coefficient& a, const Coefficient& b) {
    if (!a.spec_ || !b.spec_) throw PreconditionError("uninitialised coefficient");
    if (!same_ring(a.spec_, b.spec_))
      throw IncompatibleError("incompatible rings: " + a.spec_->describe() + " vs " +
                              b.spec_->describe());
  }

  static Coefficient from_map(const SpecPtr& spec,
                              const std::map<Exponent, Coefficient, GradedLexLess>& acc) {
    Coefficient c(spec);
    auto& out = std::get<Terms>(c.payload_);
    for (const auto& [e, v] : acc)
      if (!v.is_zero()) out.push_back({e, std::make_shared<const Coefficient>(v)});
    return c;
  }

  static Coefficient combine(const Coefficient& a, const Coefficient& b, int sign) {
    Coefficient r(a.spec_);
    switch (a.spec_->kind()) {
      case RingKind::padic: {
        const std::uint64_t mod = a.spec_->modulus();
        const std::uint64_t y = sign > 0 ? b.residue() : (mod - b.residue()) % mod;
        r.payload_ = (a.residue() + y) % mod;  // both < 2^62
        break;
      }
      case RingKind::eqchar: {
        const std::uint32_t p = static_cast<std::uint32_t>(a.spec_->p());
        Digits out = a.digits();
        const auto& y = b.digits();
        for (std::size_t i = 0; i < out.size(); ++i) {
          const std::uint32_t yi = sign > 0 ? y[i] : (p - y[i]) % p;
          out[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(out[i]) + yi) % p);
        }
        r.payload_ = std::move(out);
        break;
      }
      case RingKind::nested: {
        std::map<Exponent, Coefficient, GradedLexLess> acc;
        for (const auto& s : a.terms()) acc.emplace(s.t, *s.c);
        for (const auto& u : b.terms()) {
          auto it = acc.find(u.t);
          const Coefficient v = sign > 0 ? *u.c : -*u.c;
          if (it == acc.end())
            acc.emplace(u.t, v);
          else
            it->second = it->second + v;
        }
        r = from_map(a.spec_, acc);
        break;
      }
    }
    return r;
  }

  static int compare_payload(const Coefficient& a, const Coefficient& b) {
    if (a.payload_.index() != b.payload_.index())
      return a.payload_.index() < b.payload_.index() ? -1 : 1;
    if (auto x = std::get_if<std::uint64_t>(&a.payload_)) {
      const auto y = std::get<std::uint64_t>(b.payload_);
      return *x == y ? 0 : (*x < y ? -1 : 1);
    }
    if (auto x = std::get_if<Digits>(&a.payload_)) {
      const auto& y = std::get<Digits>(b.payload_);
      return *x == y ? 0 : (*x < y ? -1 : 1);
    }
    const auto& x = std::get<Terms>(a.payload_);
    const auto& y = std::get<Terms>(b.payload_);
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i].t != y[i].t) return GradedLexLess{}(x[i].t, y[i].t) ? -1 : 1;
      if (int c = compare_payload(*x[i].c, *y[i].c); c != 0) return c;
    }
    return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
  }

  SpecPtr spec_;
  Payload payload_;
};

using CoeffTuple = std::vector<Coefficient>;

namespace detail {

class CoefficientParser {
 public:
  CoefficientParser(const SpecPtr& spec, std::string_view text) : spec_(spec), text_(text) {}

  Coefficient run() {
    Coefficient v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("coefficient: " + what, pos_);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Coefficient expr() {
    int sign = 1;
    if (eat('-'))
      sign = -1;
    else
      eat('+');
    Coefficient acc = term();
    if (sign < 0) acc = -acc;
    while (true) {
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  Coefficient term() {
    Coefficient acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  Coefficient factor() {
    Coefficient base = primary();
    if (eat('^')) {
      skip_ws();
      const std::size_t start = pos_;
      std::uint64_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        n = n * 10 + static_cast<std::uint64_t>(text_[pos_++] - '0');
      if (pos_ == start) fail("expected exponent");
      base = base.pow(n);
    }
    return base;
  }

  Coefficient primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Coefficient v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return integer();
    if (c == 't') {
      ++pos_;
      const std::size_t start = pos_;
      int idx = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        idx = idx * 10 + (text_[pos_++] - '0');
      const bool indexed = pos_ != start;
      if (!indexed) {
        if (spec_->base_kind() != RingKind::eqchar) fail("variable t needs an eqchar ring");
        return Coefficient::generator(spec_, 0);
      }
      if (!spec_->is_nested() || idx < 1 || idx > spec_->m()) fail("unknown variable");
      return Coefficient::generator(spec_, idx);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Coefficient integer() {
    // Horner in the ring keeps arbitrarily long literals exact modulo p^K.
    const Coefficient ten = Coefficient::from_int(spec_, 10);
    Coefficient acc = Coefficient::zero(spec_);
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      acc = acc * ten + Coefficient::from_int(spec_, text_[pos_++] - '0');
    return acc;
  }

  SpecPtr spec_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Coefficient Coefficient::parse(const SpecPtr& spec, std::string_view text) {
  return detail::CoefficientParser(spec, text).run();
}

/// Evaluates a nested coefficient at a point of the base maximal ideal:
/// the specialisation map s_a : B[[t1..tm]] -> B.
inline Coefficient specialise_coeff(const Coefficient& a, std::span<const Coefficient> point) {
  const RingSpec& spec = a.spec();
  if (!spec.is_nested()) throw PreconditionError("specialise_coeff needs a nested ring");
  if (point.size() != static_cast<std::size_t>(spec.m()))
    throw PreconditionError("point has " + std::to_string(point.size()) + " entries, expected " +
                            std::to_string(spec.m()));
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (!(point[i].spec() == spec.base()))
      throw IncompatibleError("point entry " + std::to_string(i + 1) + " is not in the base ring");
    if (!point[i].in_ideal_power(1))
      throw PreconditionError("point entry " + std::to_string(i + 1) +
                              " has valuation 0; points must lie in the maximal ideal");
  }
  const SpecPtr base = point.empty() ? spec.base_ptr() : point[0].spec_ptr();
  std::vector<std::vector<Coefficient>> powers(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    powers[i].push_back(Coefficient::one(base));
    for (int e = 1; e < spec.Dt(); ++e) powers[i].push_back(powers[i].back() * point[i]);
  }
  Coefficient sum = Coefficient::zero(base);
  for (const auto& term : a.terms()) {
    Coefficient v = *term.c;
    for (std::size_t i = 0; i < term.t.size(); ++i)
      if (term.t[i] != 0) v *= powers[i][term.t[i]];
    sum += v;
  }
  return sum;
}

/// Lists canonical representatives of m^N / m^M in a deterministic order.
/// Requires 0 <= N <= M; throws BoundError beyond `bound` elements.
inline std::vector<Coefficient> ideal_quotient_representatives(const SpecPtr& spec, int N, int M,
                                                               std::size_t bound) {
  if (N < 0 || M < N) throw PreconditionError("need 0 <= N <= M");
  auto checked_pow = [&](std::uint64_t p, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) {
      if (r > bound / p + 1) throw BoundError("ideal quotient too large", r * p);
      r *= p;
    }
    return r;
  };
  const std::uint64_t p = spec->p();
  switch (spec->kind()) {
    case RingKind::padic: {
      const int hi = std::min(M, spec->K());
      const int lo = std::min(N, hi);
      const std::size_t count = checked_pow(p, hi - lo);
      if (count > bound) throw BoundError("ideal quotient too large", count);
      std::uint64_t pn = 1;
      for (int i = 0; i < lo; ++i) pn *= p;
      std::vector<Coefficient> out;
      out.reserve(count);
      for (std::size_t j = 0; j < count; ++j) out.push_back(Coefficient::from_residue(spec, pn * j));
      return out;
    }
    case RingKind::eqchar: {
      const int hi = std::min(M, spec->K());
      const int lo = std::min(N, hi);
      const std::size_t count = checked_pow(p, hi - lo);
      if (count > bound) throw BoundError("ideal quotient too large", count);
      std::vector<Coefficient> out;
      out.reserve(count);
      for (std::size_t j = 0; j < count; ++j) {
        Coefficient::Digits d(spec->K(), 0);
        std::size_t x = j;
        for (int i = lo; i < hi; ++i) {
          d[i] = static_cast<std::uint32_t>(x % p);
          x /= p;
        }
        out.push_back(Coefficient::from_digits(spec, std::move(d)));
      }
      return out;
    }
    case RingKind::nested: {
      const SpecPtr base = spec->base_ptr();
      std::vector<Exponent> monos;
      std::vector<std::vector<Coefficient>> choices;
      std::size_t total = 1;
      for_each_exponent(spec->m(), std::min(M, spec->Dt()), [&](const Exponent& e) {
        const int deg = total_degree(e);
        auto reps = ideal_quotient_representatives(base, std::max(N - deg, 0), M - deg, bound);
        if (reps.size() > 1) {
          if (total > bound / reps.size()) throw BoundError("ideal quotient too large", total * reps.size());
          total *= reps.size();
        }
        monos.push_back(e);
        choices.push_back(std::move(reps));
      });
      std::vector<Coefficient> out;
      out.reserve(total);
      std::vector<std::size_t> idx(monos.size(), 0);
      while (true) {
        std::vector<std::pair<Exponent, Coefficient>> terms;
        for (std::size_t i = 0; i < monos.size(); ++i) terms.emplace_back(monos[i], choices[i][idx[i]]);
        out.push_back(Coefficient::from_terms(spec, terms));
        // Odometer with the last monomial fastest.
        std::size_t i = monos.size();
        while (i > 0) {
          --i;
          if (++idx[i] < choices[i].size()) break;
          idx[i] = 0;
          if (i == 0) return out;
        }
        if (monos.empty()) return out;
      }
    }
  }
  return {};
}

/// Draws an element of m^N at full precision.
template <typename Rng>
Coefficient random_in_ideal(const SpecPtr& spec, int N, Rng& rng) {
  const std::uint64_t p = spec->p();
  switch (spec->kind()) {
    case RingKind::padic: {
      if (N >= spec->K()) return Coefficient::zero(spec);
      std::uint64_t pn = 1;
      for (int i = 0; i < N; ++i) pn *= p;
      std::uniform_int_distribution<std::uint64_t> dist(0, spec->modulus() / pn - 1);
      return Coefficient::from_residue(spec, pn * dist(rng));
    }
    case RingKind::eqchar: {
      std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
      Coefficient::Digits d(spec->K(), 0);
      for (int i = std::max(N, 0); i < spec->K(); ++i) d[i] = static_cast<std::uint32_t>(dist(rng));
      return Coefficient::from_digits(spec, std::move(d));
    }
    case RingKind::nested: {
      const SpecPtr base = spec->base_ptr();
      std::vector<std::pair<Exponent, Coefficient>> terms;
      for_each_exponent(spec->m(), spec->Dt(), [&](const Exponent& e) {
        terms.emplace_back(e, random_in_ideal(base, std::max(N - total_degree(e), 0), rng));
      });
      return Coefficient::from_terms(spec, terms);
    }
  }
  return Coefficient::zero(spec);
}

}  // namespace fglaw
