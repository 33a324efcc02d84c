// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes. argv[1] is the fglaw executable, used for
// the determinism criterion.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fglaw/io.hpp"
#include "oracles/oracles.hpp"

using namespace fglaw;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

#define REQUIRE(cond, msg)                    \
  do {                                        \
    if (!(cond)) return Outcome{false, msg}; \
  } while (0)

SpecPtr padic(std::uint64_t p, int K) { return make_spec(RingSpec::padic(p, K)); }
Coefficient C(const SpecPtr& s, std::int64_t v) { return Coefficient::from_int(s, v); }

Series from_poly(const oracle::Poly& p, const SpecPtr& s, int D) {
  Series out(s, p.nvars, D);
  for (const auto& [e, c] : p.terms) out.add_term(Exponent(e.begin(), e.end()), C(s, c));
  return out;
}

template <typename Rng>
GroupElement random_element(const StandardGroup& G, Rng& rng) {
  GroupElement g;
  for (std::size_t i = 0; i < G.d(); ++i) g.coords.push_back(random_in_ideal(G.spec_ptr(), G.N(), rng));
  return g;
}

template <typename Rng>
Series random_series(const SpecPtr& s, std::size_t nvars, int D, Rng& rng, double density) {
  std::bernoulli_distribution keep(density);
  Series out(s, nvars, D);
  for_each_exponent(nvars, D, [&](const Exponent& e) {
    if (total_degree(e) > 0 && keep(rng)) out.add_term(e, random_in_ideal(s, 0, rng));
  });
  return out;
}

oracle::HeisTriple to_triple(const GroupElement& g) {
  return {static_cast<long long>(g.coords[0].residue()), static_cast<long long>(g.coords[1].residue()),
          static_cast<long long>(g.coords[2].residue())};
}

std::vector<std::string> catalogue() { return {"additive1", "additive2", "additive3", "multiplicative", "heisenberg"}; }

FormalGroupLaw catalogue_law(const std::string& name, const SpecPtr& s, int D) {
  if (name.rfind("additive", 0) == 0) return builtin_fgl("additive", s, D, std::stoul(name.substr(8)));
  return builtin_fgl(name, s, D);
}

// 1
Outcome fgl_axioms() {
  const auto s = padic(3, 6);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& name : catalogue()) {
    const auto law = catalogue_law(name, s, 8);
    REQUIRE(verify_fgl(law.F()).pass(), name + " fails verify_fgl");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(secs < 10, "took " + std::to_string(secs) + " s");
  return {true, "5 laws at D=8 over Z/3^6"};
}

// 2
Outcome formal_inverse() {
  const auto s = padic(3, 6);
  const int D = 10;
  const auto mult = builtin_fgl("multiplicative", s, D);
  const auto b = oracle::geometric_inverse_coefficients(D);
  Series expect(s, 1, D);
  for (int k = 1; k < D; ++k) expect.add_term({static_cast<std::uint16_t>(k)}, C(s, -b[k - 1]));
  REQUIRE(mult.I()[0] == expect, "multiplicative inverse differs from the geometric series");

  using oracle::Poly;
  const Poly zero = Poly::constant(3, 0), one = Poly::constant(3, 1);
  const auto inv = oracle::unitriangular_inverse(
      oracle::heis(Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2), zero, one), zero, one);
  const auto heis = builtin_fgl("heisenberg", s, 6);
  REQUIRE(heis.I()[0] == from_poly(inv[0][1], s, 6) && heis.I()[1] == from_poly(inv[1][2], s, 6) &&
              heis.I()[2] == from_poly(inv[0][2], s, 6),
          "heisenberg inverse differs from the matrix inverse");

  for (const auto& name : catalogue()) {
    const auto law = catalogue_law(name, s, 8);
    const auto X = coordinates(s, law.d(), law.D(), 0, law.d());
    for (const auto& c : compose(law.F(), concat(X, law.I()))) REQUIRE(c.is_zero(), name + ": F(X,I(X)) != 0");
  }
  return {true, "geometric and matrix oracles, F(X,I(X)) = 0 for 5 laws"};
}

// 3
Outcome transport_composition() {
  const auto n = make_spec(RingSpec::nested(RingSpec::padic(2, 4), 2, 4));
  const auto pts = grid(n->base_ptr(), 2, 3);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const SeriesTuple G{random_series(n, 2, 6, rng, 0.3), random_series(n, 2, 6, rng, 0.3)};
    const SeriesTuple F{random_series(n, 3, 6, rng, 0.2), random_series(n, 3, 6, rng, 0.2)};
    const auto phi = specialisation_map(n, pts[pick(rng)]);
    REQUIRE(transport(compose(G, F), phi) == compose(transport(G, phi), transport(F, phi)),
            "pair " + std::to_string(trial) + " differs");
  }
  return {true, "50 random pairs over Z_2[[t1,t2]], " + std::to_string(pts.size()) + "-point grid"};
}

// 4
Outcome symbolic_pointwise() {
  const auto start = std::chrono::steady_clock::now();
  const auto law = builtin_fgl("heisenberg", padic(2, 5), 5);
  const StandardGroup G(law, 1);
  std::mt19937_64 rng(4);
  for (const char* text : {"x1", "[x1,x2]", "x1^3 [x2,x1]^2"}) {
    const auto w = parse_word(text);
    const auto W = word_series(w, law).W;
    for (int i = 0; i < 100; ++i) {
      std::vector<GroupElement> args;
      CoeffTuple flat;
      for (int j = 0; j < w.k(); ++j) {
        args.push_back(random_element(G, rng));
        flat.insert(flat.end(), args.back().coords.begin(), args.back().coords.end());
      }
      REQUIRE(eval(W, flat) == eval_word(w, G, args).coords, std::string("mismatch for ") + text);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(secs < 30, "took " + std::to_string(secs) + " s");
  return {true, "3 words x 100 tuples"};
}

// 5
Outcome heisenberg_commutator() {
  using oracle::Poly;
  const Poly zero = Poly::constant(6, 0), one = Poly::constant(6, 1);
  const auto x = oracle::heis(Poly::var(6, 0), Poly::var(6, 1), Poly::var(6, 2), zero, one);
  const auto y = oracle::heis(Poly::var(6, 3), Poly::var(6, 4), Poly::var(6, 5), zero, one);
  const auto c = oracle::mat_mul(oracle::mat_mul(oracle::unitriangular_inverse(x, zero, one),
                                                 oracle::unitriangular_inverse(y, zero, one), zero),
                                 oracle::mat_mul(x, y, zero), zero);
  for (const auto& s : {padic(2, 5), padic(3, 6)}) {
    const int D = 6;
    const auto W = word_series(parse_word("[x1,x2]"), builtin_fgl("heisenberg", s, D)).W;
    const SeriesTuple expect{from_poly(c[0][1], s, D), from_poly(c[1][2], s, D), from_poly(c[0][2], s, D)};
    REQUIRE(W == expect, "commutator series differs over " + s->describe());
    const auto X1 = Series::variable(s, 6, D, 0), X2 = Series::variable(s, 6, D, 1);
    const auto Y1 = Series::variable(s, 6, D, 3), Y2 = Series::variable(s, 6, D, 4);
    REQUIRE(W[0].is_zero() && W[1].is_zero() && W[2] == X1 * Y2 - X2 * Y1, "not (0,0,X1Y2-X2Y1)");
  }
  return {true, "(0,0,X1*Y2-X2*Y1) over Z/2^5 and Z/3^6"};
}

// 6
Outcome finite_quotient() {
  const auto start = std::chrono::steady_clock::now();
  const StandardGroup G(builtin_fgl("heisenberg", padic(2, 5), 5), 1);
  const auto comm = parse_word("[x1,x2]");
  std::string detail;
  for (int M : {3, 4}) {
    const auto Q = enumerate_quotient(G, M);
    const long long mod = 1LL << M;
    const oracle::HeisenbergMatrices mats{mod};
    std::vector<oracle::HeisTriple> elems;
    for (long long a = 0; a < mod; a += 2)
      for (long long b = 0; b < mod; b += 2)
        for (long long c = 0; c < mod; c += 2) elems.push_back({a, b, c});
    std::set<oracle::HeisTriple> image;
    for (const auto& x : elems)
      for (const auto& y : elems) image.insert(mats.commutator(x, y));
    std::set<oracle::HeisTriple> verbal = image;
    for (bool grew = true; grew;) {
      grew = false;
      const std::vector<oracle::HeisTriple> cur(verbal.begin(), verbal.end());
      for (const auto& a : cur)
        for (const auto& b : cur) grew |= verbal.insert(mats.mul(a, b)).second;
    }
    std::set<oracle::HeisTriple> got_image, got_verbal;
    for (auto i : word_image(comm, Q)) got_image.insert(to_triple(Q.element(i)));
    for (auto i : verbal_subgroup(comm, Q)) got_verbal.insert(to_triple(Q.element(i)));
    REQUIRE(Q.size() == elems.size(), "quotient size mismatch at M=" + std::to_string(M));
    REQUIRE(got_image == image, "image mismatch at M=" + std::to_string(M));
    REQUIRE(got_verbal == verbal, "verbal subgroup mismatch at M=" + std::to_string(M));
    detail += "M=" + std::to_string(M) + ": " + std::to_string(Q.size()) + " elements, image " +
              std::to_string(image.size()) + ", verbal " + std::to_string(verbal.size()) + "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(secs < 60, "took " + std::to_string(secs) + " s");
  return {true, detail.substr(0, detail.size() - 2)};
}

// 7
Outcome atlas_axioms() {
  const auto data = inversion_extension(StandardGroup(builtin_fgl("additive", padic(2, 4), 4), 1));
  const auto r = validate_transversal(data, ValidationMode::exhaustive(4));
  REQUIRE(r.pass(), r.failures.front().axiom + " fails");
  REQUIRE(r.group_size == 16, "unexpected group size " + std::to_string(r.group_size));
  return {true, "C2-inversion over additive Z/2^4, M=4: " + std::to_string(r.group_size) + " elements, " +
                    std::to_string(r.checked) + " triples, 0 failures"};
}

// 8
Outcome marginality() {
  const auto dp = direct_product(StandardGroup(builtin_fgl("additive", padic(2, 4), 4), 1), CosetTable::cyclic(2));
  const auto comm = marginality_check(parse_word("[x1,x2]"), dp);
  REQUIRE(comm.all_constant && comm.all_zero(), "direct product [x1,x2] not all zero");

  const auto s = padic(3, 3);
  const auto inv = inversion_extension(StandardGroup(builtin_fgl("additive", s, 4), 1));
  const auto sq = parse_word("x1^2");
  const auto r = marginality_check(sq, inv);
  REQUIRE(!r.all_constant && r.witness, "no witness for x1^2 at p=3");
  const std::size_t coset = r.witness->cosets.at(0);

  // Brute force: two elements of the witness coset with different values of w.
  const auto H = enumerate_extension_quotient(inv, 3);
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (H.element(i).t != coset) continue;
    if (!first) {
      first = i;
      continue;
    }
    const auto v1 = eval_word(sq, H, {*first}), v2 = eval_word(sq, H, {i});
    if (v1 != v2)
      return {true, "direct product all zero; p=3 witness coset " + inv.T.names[coset] + " coefficient " +
                        r.witness->witness.coefficient.to_string() + ", w(" +
                        h_to_string(H.element(*first), inv) + ")=" + h_to_string(H.element(v1), inv) + " != w(" +
                        h_to_string(H.element(i), inv) + ")=" + h_to_string(H.element(v2), inv)};
  }
  return {false, "no brute-force pair with differing values"};
}

// 9
Outcome probe() {
  const auto additive = [](const SpecPtr& s) { return StandardGroup(builtin_fgl("additive", s, 4), 1); };
  const auto sq = parse_word("x1^2");

  const auto e2 = make_spec(RingSpec::nested(RingSpec::eqchar(2, 3), 1, 3));
  const auto inv2 = inversion_extension(additive(e2));
  const auto pts2 = grid(e2->base_ptr(), 1, 3);
  const auto r2 = concision_probe(sq, inv2, 3, pts2);
  REQUIRE(r2.min_l && *r2.min_l == 1, "p=2 inversion: min_l != 1");

  const auto n3 = make_spec(RingSpec::nested(RingSpec::padic(3, 3), 1, 3));
  const auto r3 = concision_probe(sq, inversion_extension(additive(n3)), 3, grid(n3->base_ptr(), 1, 2));
  REQUIRE(!r3.min_l, "p=3 inversion: unexpected min_l");
  for (const auto& lv : r3.levels) REQUIRE(lv.witness, "p=3 level without witness");

  const auto n2 = make_spec(RingSpec::nested(RingSpec::padic(2, 4), 1, 4));
  const auto dp = direct_product(additive(n2), CosetTable::cyclic(2));
  const auto rd = concision_probe(parse_word("[x1,x2]"), dp, 2, grid(n2->base_ptr(), 1, 3));
  REQUIRE(rd.min_l && *rd.min_l == 1, "direct product: min_l != 1");

  REQUIRE(pts2.size() == 4, "coherence grid is not 4 points");
  const auto coh = transport_coherence(sq, inv2, 1, pts2);
  REQUIRE(coh.agree(), "transport coherence disagrees");
  return {true, "p=2 min_l=1; p=3 none <= 3 with witness; direct product min_l=1; coherence on 4 points"};
}

// 10
Outcome kernel_grid() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> deg(0, 3), coef(-9, 9), nterms(1, 6);
  const std::vector<BigInt> axis{0, 1, 2, 3};
  const std::vector<std::vector<BigInt>> g{axis, axis};
  int zeros = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ExactPolynomial c{2, {}};
    std::vector<std::pair<std::vector<int>, BigInt>> added;
    for (int i = nterms(rng); i > 0; --i) {
      std::vector<int> e{deg(rng), deg(rng)};
      const BigInt v = BigInt(coef(rng)) * BigInt("123456789012345678901234567890");
      c.add_term(e, v);
      added.emplace_back(e, v);
    }
    if (trial % 2 == 0)
      for (const auto& [e, v] : added) c.add_term(e, -v);
    zeros += c.is_zero();
    REQUIRE(kernel_grid_test(c, g).zero == c.is_zero(), "misclassified polynomial " + std::to_string(trial));
  }

  const auto k2 = make_spec(RingSpec::nested(RingSpec::padic(2, 2), 1, 2));
  const auto b2 = k2->base_ptr();
  const auto pt = specialise_probe_constants({Coefficient::parse(k2, "2*t1")}, {{C(b2, 0)}, {C(b2, 2)}});
  REQUIRE(pt.grid_vanishing_only && !pt.symbolic_zero, "p*t1 not reported as grid-vanishing-only");
  return {true, "100 polynomials (" + std::to_string(zeros) + " zero) on 4x4; 2*t1 at K=2 grid-vanishing-only"};
}

// 11
std::vector<std::string> documented_commands(const std::string& readme) {
  std::ifstream in(readme);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (line.rfind("fglaw ", 0) == 0) out.push_back(line.substr(6));
  return out;
}

std::pair<int, std::string> shell(const std::string& cmd) {
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
  return {pclose(pipe), output};
}

Outcome determinism(const std::string& binary) {
  REQUIRE(!binary.empty(), "fglaw executable path not given");
  const std::string src = FGLAW_SOURCE_DIR;
  const auto cmds = documented_commands(src + "/README.md");
  REQUIRE(!cmds.empty(), "no documented commands found in README.md");
  for (const auto& c : cmds) {
    const std::string line = "cd '" + src + "' && '" + binary + "' " + c + " 2>&1";
    const auto a = shell(line), b = shell(line);
    REQUIRE(a.first >= 0 && !a.second.empty(), "no output from: fglaw " + c);
    REQUIRE(a == b, "output differs between runs: fglaw " + c);
  }
  return {true, std::to_string(cmds.size()) + " documented commands byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"FGL axiom suite", [] { return fgl_axioms(); }},
      {"formal inverse oracles", [] { return formal_inverse(); }},
      {"transport-composition law", [] { return transport_composition(); }},
      {"symbolic/pointwise equivalence", [] { return symbolic_pointwise(); }},
      {"heisenberg commutator series", [] { return heisenberg_commutator(); }},
      {"finite-quotient brute force", [] { return finite_quotient(); }},
      {"atlas group axioms", [] { return atlas_axioms(); }},
      {"marginality", [] { return marginality(); }},
      {"probe end-to-end", [] { return probe(); }},
      {"kernel grid test", [] { return kernel_grid(); }},
      {"CLI determinism", [&] { return determinism(binary); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << " (" << secs << " s): " << o.detail;
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
