#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fglaw/ring.hpp"

namespace fglaw {

/// A local ring homomorphism between truncated coefficient rings, applied
/// coefficient-wise when transporting series.
struct CoeffMap {
  std::string name;
  SpecPtr source;
  SpecPtr target;
  std::function<Coefficient(const Coefficient&)> fn;

  Coefficient operator()(const Coefficient& c) const {
    if (!same_ring(c.spec_ptr(), source))
      throw IncompatibleError("map " + name + " expects " + source->describe() + ", got " +
                              c.spec().describe());
    return fn(c);
  }
};

inline CoeffMap identity_map(const SpecPtr& spec) {
  return {"identity", spec, spec, [](const Coefficient& c) { return c; }};
}

/// s_a : B[[t1..tm]] -> B, evaluation of the t-variables at `point`.
inline CoeffMap specialisation_map(const SpecPtr& nested, CoeffTuple point) {
  if (!nested->is_nested()) throw PreconditionError("specialisation needs a nested ring");
  if (point.size() != static_cast<std::size_t>(nested->m()))
    throw PreconditionError("specialisation point has wrong length");
  for (const auto& a : point) {
    if (!(a.spec() == nested->base())) throw IncompatibleError("point entry not in base ring");
    if (!a.in_ideal_power(1))
      throw PreconditionError("specialisation point must lie in the maximal ideal");
  }
  std::string name = "s(";
  for (std::size_t i = 0; i < point.size(); ++i) name += (i ? "," : "") + point[i].to_string();
  name += ")";
  return {name, nested, nested->base_ptr(),
          [point = std::move(point)](const Coefficient& c) { return specialise_coeff(c, point); }};
}

namespace detail {

inline RingSpec lowered_spec(const RingSpec& s, int K) {
  switch (s.kind()) {
    case RingKind::padic: return RingSpec::padic(s.p(), K);
    case RingKind::eqchar: return RingSpec::eqchar(s.p(), K);
    case RingKind::nested: return RingSpec::nested(lowered_spec(s.base(), K), s.m(), s.Dt());
  }
  return s;
}

inline Coefficient lower(const Coefficient& c, const SpecPtr& target) {
  switch (target->kind()) {
    case RingKind::padic: return Coefficient::from_residue(target, c.residue());
    case RingKind::eqchar: {
      auto d = c.digits();
      d.resize(target->K());
      return Coefficient::from_digits(target, std::move(d));
    }
    case RingKind::nested: {
      std::vector<std::pair<Exponent, Coefficient>> terms;
      for (const auto& t : c.terms()) terms.emplace_back(t.t, lower(*t.c, target->base_ptr()));
      return Coefficient::from_terms(target, terms);
    }
  }
  return c;
}

}  // namespace detail

/// Reduction to a lower coefficient precision K' <= K (same kind, same m, Dt).
inline CoeffMap precision_map(const SpecPtr& spec, int K) {
  if (K < 1 || K > spec->K()) throw PreconditionError("target precision must be in [1, K]");
  SpecPtr target = make_spec(detail::lowered_spec(*spec, K));
  return {"precision(" + std::to_string(K) + ")", spec, target,
          [target](const Coefficient& c) { return detail::lower(c, target); }};
}

/// The residue map mod p (precision 1).
inline CoeffMap residue_map(const SpecPtr& spec) {
  CoeffMap m = precision_map(spec, 1);
  m.name = "residue";
  return m;
}

}  // namespace fglaw
