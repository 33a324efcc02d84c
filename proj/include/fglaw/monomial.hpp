#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace fglaw {

/// Exponent vector of a monomial.
using Exponent = std::vector<std::uint16_t>;

inline int total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

/// Graded-lex order: lower total degree first; within a degree the
/// lexicographically larger exponent comes first, so X1 precedes X2.
struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

inline Exponent unit_exponent(std::size_t nvars, std::size_t i) {
  Exponent e(nvars, 0);
  e[i] = 1;
  return e;
}

inline Exponent add_exponents(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

/// Calls `f` on every exponent vector of `nvars` variables with total degree
/// below `bound`, in graded-lex order.
template <typename Fn>
void for_each_exponent(std::size_t nvars, int bound, Fn&& f) {
  Exponent e(nvars, 0);
  for (int deg = 0; deg < bound; ++deg) {
    // Enumerate compositions of `deg` into `nvars` parts, first part largest
    // first, which is graded-lex within the degree.
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
      if (nvars == 0) {
        if (left == 0) f(e);
        return;
      }
      if (i + 1 == nvars) {
        e[i] = static_cast<std::uint16_t>(left);
        f(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[i] = static_cast<std::uint16_t>(v);
        self(self, i + 1, left - v);
      }
    };
    rec(rec, 0, deg);
  }
}

}  // namespace fglaw
