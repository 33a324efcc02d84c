#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fglaw/fgl.hpp"
#include "fglaw/finite_group.hpp"

namespace fglaw {

/// An element of a standard group: its coordinate tuple in (m^N)^d.
struct GroupElement {
  CoeffTuple coords;

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.coords == b.coords; }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                        b.coords.end());
  }

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) out += (i ? "," : "") + coords[i].to_string();
    return out + ")";
  }
};

/// The R-standard group of level N on (m^N)^d whose multiplication is the
/// formal group law. Elements are their own coordinates.
class StandardGroup {
 public:
  using element_type = GroupElement;

  StandardGroup(FormalGroupLaw law, int N) : law_(std::move(law)), N_(N) {
    if (N_ < 1) throw PreconditionError("level N must be >= 1");
  }

  const FormalGroupLaw& law() const noexcept { return law_; }
  int N() const noexcept { return N_; }
  std::size_t d() const noexcept { return law_.d(); }
  const SpecPtr& spec_ptr() const { return law_.spec_ptr(); }

  bool contains(const GroupElement& x) const {
    if (x.coords.size() != d()) return false;
    for (const auto& c : x.coords)
      if (!same_ring(c.spec_ptr(), spec_ptr()) || !c.in_ideal_power(N_)) return false;
    return true;
  }

  void check(const GroupElement& x) const {
    if (x.coords.size() != d())
      throw IncompatibleError("element has " + std::to_string(x.coords.size()) +
                              " coordinates, group dimension is " + std::to_string(d()));
    for (const auto& c : x.coords) {
      if (!same_ring(c.spec_ptr(), spec_ptr()))
        throw IncompatibleError("element coordinate lies in " + c.spec().describe() +
                                ", group ring is " + spec_ptr()->describe());
      if (!c.in_ideal_power(N_))
        throw PreconditionError("coordinate " + c.to_string() + " is not in m^" + std::to_string(N_));
    }
  }

  GroupElement element(CoeffTuple coords) const {
    GroupElement x{std::move(coords)};
    check(x);
    return x;
  }

  GroupElement identity() const { return {CoeffTuple(d(), Coefficient::zero(spec_ptr()))}; }

  GroupElement mul(const GroupElement& x, const GroupElement& y) const {
    check(x);
    check(y);
    CoeffTuple args = x.coords;
    args.insert(args.end(), y.coords.begin(), y.coords.end());
    GroupElement r{eval(law_.F(), args)};
    check(r);
    return r;
  }

  GroupElement inv(const GroupElement& x) const {
    check(x);
    GroupElement r{eval(law_.I(), x.coords)};
    check(r);
    return r;
  }

  /// Square-and-multiply; negative exponents go through the inverse.
  GroupElement pow(const GroupElement& x, std::int64_t n) const {
    GroupElement base = n < 0 ? inv(x) : x;
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    GroupElement result = identity();
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return result;
  }

  /// C_g(X) = F(I(g), F(X, g)), so C_g(x) = g^-1 x g. The constant term,
  /// which is pure truncation residue, is dropped so that C_g(0) = 0.
  SeriesTuple conj_series(const GroupElement& g) const {
    check(g);
    const auto& spec = spec_ptr();
    const std::size_t dd = d();
    const int D = law_.D();
    auto constants = [&](const CoeffTuple& c) {
      SeriesTuple t;
      for (const auto& v : c) t.push_back(Series::constant(spec, dd, D, v));
      return t;
    };
    const SeriesTuple X = coordinates(spec, dd, D, 0, dd);
    const SeriesTuple xg = substitute_shifted(law_.F(), concat(X, constants(g.coords)));
    SeriesTuple C = substitute_shifted(law_.F(), concat(constants(inv(g).coords), xg));
    for (auto& s : C) s -= Series::constant(spec, dd, D, s.constant_term());
    return C;
  }

  /// Reduction of coordinates modulo (m^M)^d.
  GroupElement reduce(const GroupElement& x, int M) const {
    GroupElement r;
    for (const auto& c : x.coords) r.coords.push_back(c.reduce_mod_ideal_power(M));
    return r;
  }

 private:
  FormalGroupLaw law_;
  int N_;
};

/// Checks that the finite quotient (m^N/m^M)^d is computed exactly at the
/// ring's precision and series cutoff.
inline void check_quotient_level(const StandardGroup& G, int M) {
  const RingSpec& s = *G.spec_ptr();
  if (M <= G.N()) throw PreconditionError("quotient level M must exceed N");
  if (M > s.K())
    throw PreconditionError("quotient level M=" + std::to_string(M) + " exceeds precision K=" +
                            std::to_string(s.K()));
  if (s.is_nested() && M > s.Dt())
    throw PreconditionError("quotient level M exceeds the t-degree cutoff Dt");
  if (static_cast<long>(G.N()) * G.law().D() < M)
    throw PreconditionError("series cutoff too small for the quotient: need N*D >= M");
}

/// Coordinate representatives of (m^N/m^M)^d, first coordinate slowest.
inline std::vector<GroupElement> quotient_representatives(const StandardGroup& G, int M,
                                                          std::size_t bound) {
  const auto reps = ideal_quotient_representatives(G.spec_ptr(), G.N(), M, bound);
  std::size_t total = 1;
  for (std::size_t i = 0; i < G.d(); ++i) {
    if (total > bound / reps.size()) throw BoundError("quotient too large", total * reps.size());
    total *= reps.size();
  }
  std::vector<GroupElement> out;
  out.reserve(total);
  std::vector<std::size_t> idx(G.d(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    GroupElement x;
    for (std::size_t i = 0; i < G.d(); ++i) x.coords.push_back(reps[idx[i]]);
    out.push_back(std::move(x));
    for (std::size_t i = G.d(); i-- > 0;) {
      if (++idx[i] < reps.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

using QuotientGroup = FiniteGroup<GroupElement>;

/// The finite group (m^N/m^M)^d with the law's operations reduced mod m^M.
inline QuotientGroup enumerate_quotient(const StandardGroup& G, int M,
                                        std::size_t bound = enumeration_bound()) {
  check_quotient_level(G, M);
  auto elements = quotient_representatives(G, M, bound);
  return QuotientGroup(
      std::move(elements), G.identity(),
      [G, M](const GroupElement& a, const GroupElement& b) { return G.reduce(G.mul(a, b), M); },
      [G, M](const GroupElement& a) { return G.reduce(G.inv(a), M); });
}

}  // namespace fglaw
