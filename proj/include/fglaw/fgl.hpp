#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fglaw/series.hpp"

namespace fglaw {

/// First disagreement between two tuples: lhs - rhs at the graded-lex
/// smallest monomial where they differ.
struct SeriesWitness {
  std::size_t component = 0;
  Exponent monomial;
  Coefficient difference;
};

inline std::optional<SeriesWitness> first_difference(const SeriesTuple& lhs, const SeriesTuple& rhs) {
  if (lhs.size() != rhs.size()) throw IncompatibleError("tuple length mismatch");
  std::optional<SeriesWitness> best;
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    const Series diff = lhs[j] - rhs[j];
    if (diff.is_zero()) continue;
    const auto& [e, c] = *diff.terms().begin();
    if (!best || GradedLexLess{}(e, best->monomial)) best = SeriesWitness{j, e, c};
  }
  return best;
}

struct AxiomCheck {
  std::string name;
  bool pass = false;
  std::optional<SeriesWitness> witness;
  std::size_t nvars = 0;  // variables of the witness monomial
};

struct FglReport {
  std::size_t d = 0;
  std::vector<AxiomCheck> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline std::size_t law_dimension(const SeriesTuple& F) {
  check_tuple(F);
  const std::size_t d = F.size();
  if (F[0].nvars() != 2 * d)
    throw IncompatibleError("a " + std::to_string(d) + "-dimensional law needs " +
                            std::to_string(2 * d) + " variables, got " +
                            std::to_string(F[0].nvars()));
  for (std::size_t j = 0; j < d; ++j)
    if (!F[j].constant_term().is_zero())
      throw PreconditionError("law component " + std::to_string(j + 1) +
                              " has a nonzero constant term");
  return d;
}

/// F(A, B) for tuples A, B of d series in a common variable set.
inline SeriesTuple apply_law(const SeriesTuple& F, const SeriesTuple& A, const SeriesTuple& B) {
  return compose(F, concat(A, B));
}

}  // namespace detail

/// Checks the unit laws and associativity symbolically at truncation.
inline FglReport verify_fgl(const SeriesTuple& F) {
  const std::size_t d = detail::law_dimension(F);
  const auto& spec = F[0].spec_ptr();
  const int D = F[0].D();
  FglReport report;
  report.d = d;

  const SeriesTuple X = coordinates(spec, d, D, 0, d);
  const SeriesTuple O = zero_tuple(spec, d, D, d);
  auto record = [&](std::string name, const SeriesTuple& lhs, const SeriesTuple& rhs,
                    std::size_t nvars) {
    auto w = first_difference(lhs, rhs);
    report.checks.push_back({std::move(name), !w.has_value(), std::move(w), nvars});
  };
  record("right unit F(X,0) = X", detail::apply_law(F, X, O), X, d);
  record("left unit F(0,X) = X", detail::apply_law(F, O, X), X, d);

  const SeriesTuple X3 = coordinates(spec, 3 * d, D, 0, d);
  const SeriesTuple Y3 = coordinates(spec, 3 * d, D, d, d);
  const SeriesTuple Z3 = coordinates(spec, 3 * d, D, 2 * d, d);
  record("associativity F(F(X,Y),Z) = F(X,F(Y,Z))",
         detail::apply_law(F, detail::apply_law(F, X3, Y3), Z3),
         detail::apply_law(F, X3, detail::apply_law(F, Y3, Z3)), 3 * d);
  return report;
}

/// The unique I with I(0) = 0 and F(X, I(X)) = 0 at truncation, solved
/// degree by degree: the linear part of F in Y is the identity, so the
/// degree-k slice of F(X, I) fixes the degree-k slice of I.
inline SeriesTuple formal_inverse(const SeriesTuple& F) {
  const std::size_t d = detail::law_dimension(F);
  const auto& spec = F[0].spec_ptr();
  const int D = F[0].D();
  const Coefficient one = Coefficient::one(spec);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < 2 * d; ++i) {
      const Coefficient expect = (i % d == j) ? one : Coefficient::zero(spec);
      if (D > 1 && !(F[j].coefficient(unit_exponent(2 * d, i)) == expect))
        throw PreconditionError("linear part of the law is not X + Y; no formal inverse");
    }
  }
  const SeriesTuple X = coordinates(spec, d, D, 0, d);
  SeriesTuple I;
  for (const auto& x : X) I.push_back(-x);
  for (int k = 2; k < D; ++k) {
    const SeriesTuple E = detail::apply_law(F, X, I);
    for (std::size_t j = 0; j < d; ++j) I[j] -= E[j].homogeneous_part(k);
  }
  return I;
}

/// A d-dimensional formal group law with its cached formal inverse.
class FormalGroupLaw {
 public:
  explicit FormalGroupLaw(SeriesTuple F) : F_(std::move(F)) {
    d_ = detail::law_dimension(F_);
    require_valid();
    I_ = formal_inverse(F_);
  }

  /// Uses a supplied inverse after checking F(X, I(X)) = F(I(X), X) = 0.
  FormalGroupLaw(SeriesTuple F, SeriesTuple I) : F_(std::move(F)), I_(std::move(I)) {
    d_ = detail::law_dimension(F_);
    require_valid();
    check_tuple(I_);
    if (I_.size() != d_ || I_[0].nvars() != d_ || I_[0].D() != F_[0].D() ||
        !same_ring(I_[0].spec_ptr(), F_[0].spec_ptr()))
      throw IncompatibleError("inverse has the wrong shape");
    const SeriesTuple X = coordinates(spec_ptr(), d_, D(), 0, d_);
    const SeriesTuple O = zero_tuple(spec_ptr(), d_, D(), d_);
    if (first_difference(detail::apply_law(F_, X, I_), O) ||
        first_difference(detail::apply_law(F_, I_, X), O))
      throw PreconditionError("supplied series is not the formal inverse of the law");
  }

  std::size_t d() const noexcept { return d_; }
  int D() const { return F_[0].D(); }
  const SpecPtr& spec_ptr() const { return F_[0].spec_ptr(); }
  const RingSpec& spec() const { return F_[0].spec(); }
  const SeriesTuple& F() const noexcept { return F_; }
  const SeriesTuple& I() const noexcept { return I_; }

  friend bool operator==(const FormalGroupLaw& a, const FormalGroupLaw& b) {
    return a.F_ == b.F_ && a.I_ == b.I_;
  }

 private:
  void require_valid() const {
    const FglReport r = verify_fgl(F_);
    for (const auto& c : r.checks)
      if (!c.pass) throw PreconditionError("not a formal group law: " + c.name + " fails");
  }

  std::size_t d_ = 0;
  SeriesTuple F_;
  SeriesTuple I_;
};

/// Built-in laws: "additive" (any d), "multiplicative" (X+Y+XY, d=1) and
/// "heisenberg" (d=3, unitriangular 3x3 matrix coordinates).
inline FormalGroupLaw builtin_fgl(std::string_view name, const SpecPtr& spec, int D,
                                  std::size_t d = 1) {
  if (D < 2) throw PreconditionError("built-in laws need D >= 2");
  auto var = [&](std::size_t n, std::size_t i) { return Series::variable(spec, n, D, i); };
  if (name == "additive") {
    if (d < 1) throw PreconditionError("additive law needs d >= 1");
    SeriesTuple F;
    for (std::size_t j = 0; j < d; ++j) F.push_back(var(2 * d, j) + var(2 * d, d + j));
    return FormalGroupLaw(std::move(F));
  }
  if (name == "multiplicative") {
    if (D < 3) throw PreconditionError("multiplicative law needs D >= 3");
    return FormalGroupLaw({var(2, 0) + var(2, 1) + var(2, 0) * var(2, 1)});
  }
  if (name == "heisenberg") {
    if (D < 3) throw PreconditionError("heisenberg law needs D >= 3");
    // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')
    return FormalGroupLaw({var(6, 0) + var(6, 3), var(6, 1) + var(6, 4),
                           var(6, 2) + var(6, 5) + var(6, 0) * var(6, 4)});
  }
  throw PreconditionError("unknown built-in law '" + std::string(name) + "'");
}

/// F_phi with cached inverse I_phi; the transported law is re-verified.
inline FormalGroupLaw transport_fgl(const FormalGroupLaw& law, const CoeffMap& phi) {
  SeriesTuple F = transport(law.F(), phi);
  SeriesTuple I = transport(law.I(), phi);
  return FormalGroupLaw(std::move(F), std::move(I));
}

/// Variable names X1..Xd, Y1..Yd for a law's 2d variables.
inline std::vector<std::string> law_variable_names(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < d; ++i) names.push_back("X" + std::to_string(i + 1));
  for (std::size_t i = 0; i < d; ++i) names.push_back("Y" + std::to_string(i + 1));
  return names;
}

}  // namespace fglaw
