#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fglaw/atlas.hpp"

namespace fglaw {

/// Grid of specialisation points in (m_B)^m for the base ring B of a nested
/// ring. p-adic: entries p*j for 0 <= j < p^(depth-1); eq-char: t*q(t) with
/// deg q < depth-1, q read from the base-p digits of j. First coordinate
/// varies slowest.
inline std::vector<CoeffTuple> grid(const SpecPtr& base, int m, int depth,
                                    std::size_t bound = enumeration_bound()) {
  if (depth < 1) throw PreconditionError("grid depth must be >= 1");
  if (m < 1) throw PreconditionError("grid needs m >= 1 variables");
  if (base->is_nested()) throw PreconditionError("grid points live in a p-adic or eq-char base ring");
  const std::uint64_t p = base->p();
  std::size_t per = 1;
  for (int i = 1; i < depth; ++i) {
    if (per > bound / p) throw BoundError("grid too large", per * p);
    per *= p;
  }
  std::vector<Coefficient> values;
  for (std::size_t j = 0; j < per; ++j) {
    if (base->kind() == RingKind::padic) {
      const auto v = static_cast<unsigned __int128>(p) * j % base->modulus();
      values.push_back(Coefficient::from_residue(base, static_cast<std::uint64_t>(v)));
    } else {
      Coefficient::Digits d(base->K(), 0);
      std::size_t x = j;
      for (int i = 1; i < depth && i < base->K(); ++i) {
        d[i] = static_cast<std::uint32_t>(x % p);
        x /= p;
      }
      values.push_back(Coefficient::from_digits(base, std::move(d)));
    }
  }
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) {
    if (total > bound / per) throw BoundError("grid too large", total * per);
    total *= per;
  }
  std::vector<CoeffTuple> out;
  out.reserve(total);
  std::vector<std::size_t> idx(m, 0);
  for (std::size_t n = 0; n < total; ++n) {
    CoeffTuple pt;
    for (int i = 0; i < m; ++i) pt.push_back(values[idx[i]]);
    out.push_back(std::move(pt));
    for (std::size_t i = m; i-- > 0;) {
      if (++idx[i] < per) break;
      idx[i] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact kernel test.

using BigInt = boost::multiprecision::cpp_int;

/// Polynomial in t1..tm with exact integer coefficients.
struct ExactPolynomial {
  std::size_t nvars = 0;
  std::map<std::vector<int>, BigInt> terms;

  void add_term(const std::vector<int>& e, const BigInt& c) {
    if (e.size() != nvars) throw IncompatibleError("exponent length mismatch");
    auto& slot = terms[e];
    slot += c;
    if (slot == 0) terms.erase(e);
  }

  bool is_zero() const noexcept { return terms.empty(); }

  int degree_in(std::size_t i) const {
    int d = -1;
    for (const auto& [e, c] : terms) d = std::max(d, e[i]);
    return d;
  }

  BigInt eval(const std::vector<BigInt>& point) const {
    if (point.size() != nvars) throw IncompatibleError("point length mismatch");
    BigInt sum = 0;
    for (const auto& [e, c] : terms) {
      BigInt v = c;
      for (std::size_t i = 0; i < nvars; ++i) v *= boost::multiprecision::pow(point[i], e[i]);
      sum += v;
    }
    return sum;
  }
};

struct KernelResult {
  bool zero = false;
  std::optional<std::vector<BigInt>> witness;  // grid point with a nonzero value
};

/// Decides c == 0 from its values on the product grid values[0] x .. x
/// values[m-1]. Sound and complete when variable i has more distinct grid
/// values than deg_i(c); otherwise a precondition error is raised.
inline KernelResult kernel_grid_test(const ExactPolynomial& c, const std::vector<std::vector<BigInt>>& values) {
  if (values.size() != c.nvars)
    throw PreconditionError("grid has " + std::to_string(values.size()) + " axes, polynomial has " +
                            std::to_string(c.nvars) + " variables");
  for (std::size_t i = 0; i < c.nvars; ++i) {
    const std::set<BigInt> distinct(values[i].begin(), values[i].end());
    if (distinct.size() != values[i].size()) throw PreconditionError("grid axis repeats a value");
    const int deg = c.degree_in(i);
    if (deg >= static_cast<int>(distinct.size()))
      throw PreconditionError("degree " + std::to_string(deg) + " in t" + std::to_string(i + 1) + " needs at least " +
                              std::to_string(deg + 1) + " distinct grid values, got " +
                              std::to_string(distinct.size()));
  }
  KernelResult r;
  std::size_t total = 1;
  for (const auto& v : values) total *= v.size();
  std::vector<std::size_t> idx(c.nvars, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<BigInt> pt;
    for (std::size_t i = 0; i < c.nvars; ++i) pt.push_back(values[i][idx[i]]);
    if (c.eval(pt) != 0) {
      r.witness = std::move(pt);
      return r;
    }
    for (std::size_t i = c.nvars; i-- > 0;) {
      if (++idx[i] < values[i].size()) break;
      idx[i] = 0;
    }
  }
  r.zero = true;
  return r;
}

/// Truncated coefficients cannot be certified: precision alone creates
/// elements killed by every specialisation (p*t1 at K=2).
inline KernelResult kernel_grid_test(const Coefficient&, const std::vector<std::vector<BigInt>>&) {
  throw PreconditionError("exact representation required");
}

// ---------------------------------------------------------------------------
// Specialised constants.

struct SpecialisedConstants {
  std::vector<CoeffTuple> values;  // s_a(c) per grid point
  std::vector<bool> zero_at;       // s_a(c) == 0
  bool symbolic_zero = false;      // c == 0 at the ring's precision
  bool grid_vanishing_only = false;
};

inline SpecialisedConstants specialise_probe_constants(const CoeffTuple& c, const std::vector<CoeffTuple>& points) {
  SpecialisedConstants r;
  r.symbolic_zero = true;
  for (const auto& x : c) r.symbolic_zero = r.symbolic_zero && x.is_zero();
  bool all = true;
  for (const auto& a : points) {
    CoeffTuple v;
    bool zero = true;
    for (const auto& x : c) {
      v.push_back(specialise_coeff(x, a));
      zero = zero && v.back().is_zero();
    }
    r.values.push_back(std::move(v));
    r.zero_at.push_back(zero);
    all = all && zero;
  }
  r.grid_vanishing_only = all && !points.empty() && !r.symbolic_zero;
  return r;
}

// ---------------------------------------------------------------------------
// Conciseness probe.

struct ProbeLevel {
  long l = 0;
  bool constant = false;
  std::optional<MarginalWitness> witness;  // first non-constant coset tuple
  std::vector<MarginalEntry> entries;      // constants per coset tuple
  bool symbolic_zero = false;
  std::vector<bool> in_m_l;                // per grid point: w^l vanishes after s_a
  bool grid_vanishing_only = false;
};

struct ProbeReport {
  WordExpr word;
  long lmax = 0;
  std::vector<CoeffTuple> grid;
  std::vector<ProbeLevel> levels;
  std::optional<long> min_l;
  std::vector<long> grid_vanishing_only;
  bool monotone_consistent = true;
};

/// For l = 1..lmax: coset word series of w^l, constancy per coset tuple, and
/// membership of every grid point a in m_l (all s_a-transported series
/// vanish). min_l is the least l whose constants are all exactly zero.
inline ProbeReport concision_probe(const WordExpr& w, const TransversalData& data, long lmax,
                                   const std::vector<CoeffTuple>& points,
                                   std::size_t bound = enumeration_bound()) {
  if (lmax < 1) throw PreconditionError("L_max must be >= 1");
  const auto& spec = data.L.spec_ptr();
  if (!spec->is_nested()) throw PreconditionError("the probe runs over a nested ring P[[t1..tm]]");
  std::vector<CoeffMap> maps;
  for (const auto& a : points) maps.push_back(specialisation_map(spec, a));

  ProbeReport report{w, lmax, points, {}, std::nullopt, {}, true};
  const auto tuples = coset_tuples(data.T.size(), static_cast<std::size_t>(w.k()), bound);
  for (long l = 1; l <= lmax; ++l) {
    const WordExpr wl = word_power(w, l);
    ProbeLevel level;
    level.l = l;
    level.constant = true;
    level.in_m_l.assign(points.size(), true);
    for (const auto& cosets : tuples) {
      const auto cw = coset_word_series(wl, data, cosets);
      auto c = is_constant(cw.series.W);
      if (c.constant) {
        level.entries.push_back({cosets, cw.target, std::move(c.value)});
      } else if (level.constant) {
        level.constant = false;
        level.witness = MarginalWitness{cosets, *c.witness};
      }
      for (std::size_t i = 0; i < maps.size(); ++i) {
        if (!level.in_m_l[i]) continue;
        for (const auto& s : transport(cw.series.W, maps[i]))
          if (!s.is_zero()) {
            level.in_m_l[i] = false;
            break;
          }
      }
    }
    if (!level.constant) level.entries.clear();
    level.symbolic_zero = level.constant;
    for (const auto& e : level.entries)
      for (const auto& x : e.constant) level.symbolic_zero = level.symbolic_zero && x.is_zero();
    bool all_grid = !points.empty();
    for (bool b : level.in_m_l) all_grid = all_grid && b;
    level.grid_vanishing_only = all_grid && !level.symbolic_zero;
    if (level.grid_vanishing_only) report.grid_vanishing_only.push_back(l);
    if (level.symbolic_zero && !report.min_l) report.min_l = l;
    report.levels.push_back(std::move(level));
  }
  for (const auto& lv : report.levels) {
    if (!lv.symbolic_zero) continue;
    for (long j = 2 * lv.l; j <= lmax; j += lv.l)
      if (!report.levels[j - 1].symbolic_zero) report.monotone_consistent = false;
  }
  return report;
}

struct CoherencePoint {
  CoeffTuple point;
  bool agree = true;
  std::string detail;  // first disagreement, if any
};

struct CoherenceReport {
  std::vector<CoherencePoint> points;
  bool agree() const {
    for (const auto& p : points)
      if (!p.agree) return false;
    return true;
  }
};

/// Two routes to the specialised word map of w^l: transport the coset word
/// series (and constants) along s_a, or transport the atlas first and
/// recompute. Compares series, target cosets and marginality constants.
inline CoherenceReport transport_coherence(const WordExpr& w, const TransversalData& data, long l,
                                           const std::vector<CoeffTuple>& points,
                                           std::size_t bound = enumeration_bound()) {
  const WordExpr wl = word_power(w, l);
  const auto tuples = coset_tuples(data.T.size(), static_cast<std::size_t>(w.k()), bound);
  std::vector<CosetWordSeries> here;
  for (const auto& cosets : tuples) here.push_back(coset_word_series(wl, data, cosets));
  const auto marg = marginality_check(wl, data, bound);

  CoherenceReport report;
  for (const auto& a : points) {
    const auto phi = specialisation_map(data.L.spec_ptr(), a);
    const auto moved = transport_atlas(data, phi);
    CoherencePoint cp{a, true, {}};
    for (std::size_t i = 0; i < tuples.size() && cp.agree; ++i) {
      const auto there = coset_word_series(wl, moved, tuples[i]);
      if (there.target != here[i].target || !(there.series.W == transport(here[i].series.W, phi))) {
        cp.agree = false;
        cp.detail = "coset word series differ at coset tuple " + std::to_string(i);
      }
    }
    if (cp.agree && marg.all_constant) {
      const auto marg_there = marginality_check(wl, moved, bound);
      if (!marg_there.all_constant) {
        cp.agree = false;
        cp.detail = "transported data is not marginal";
      }
      for (std::size_t i = 0; i < marg.entries.size() && cp.agree; ++i) {
        CoeffTuple sc;
        for (const auto& x : marg.entries[i].constant) sc.push_back(phi(x));
        if (!(sc == marg_there.entries[i].constant) || marg.entries[i].target != marg_there.entries[i].target) {
          cp.agree = false;
          cp.detail = "constants differ at coset tuple " + std::to_string(i);
        }
      }
    }
    report.points.push_back(std::move(cp));
  }
  return report;
}

}  // namespace fglaw
