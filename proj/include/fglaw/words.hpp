#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fglaw/fgl.hpp"
#include "fglaw/finite_group.hpp"

namespace fglaw {

struct Letter {
  int gen = 1;  // 1-based generator index
  int exp = 1;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A freely reduced word in the free group on x1..xk.
class WordExpr {
 public:
  WordExpr() = default;

  /// Freely reduces `letters`; `k` must cover every generator used.
  WordExpr(int k, const std::vector<Letter>& letters) : k_(k) {
    if (k_ < 1) throw PreconditionError("a word needs k >= 1 variables");
    for (const auto& l : letters) {
      if (l.gen < 1 || l.gen > k_) throw PreconditionError("generator index out of range");
      if (l.exp != 1 && l.exp != -1) throw PreconditionError("letter exponent must be +-1");
      if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().exp == -l.exp)
        letters_.pop_back();
      else
        letters_.push_back(l);
    }
  }

  int k() const noexcept { return k_; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  bool is_empty() const noexcept { return letters_.empty(); }
  std::size_t length() const noexcept { return letters_.size(); }

  WordExpr inverse() const {
    std::vector<Letter> r;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.push_back({it->gen, -it->exp});
    return WordExpr(k_, r);
  }

  friend WordExpr operator*(const WordExpr& a, const WordExpr& b) {
    std::vector<Letter> r = a.letters_;
    r.insert(r.end(), b.letters_.begin(), b.letters_.end());
    return WordExpr(std::max(a.k_, b.k_), r);
  }

  friend bool operator==(const WordExpr& a, const WordExpr& b) {
    return a.k_ == b.k_ && a.letters_ == b.letters_;
  }

  /// Canonical text with runs collapsed: "x1^-1 x2^-1 x1 x2", "x1^3".
  /// The empty word prints as "1".
  std::string to_string() const {
    if (letters_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < letters_.size();) {
      std::size_t j = i;
      while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
      const long run = static_cast<long>(j - i) * letters_[i].exp;
      if (!out.empty()) out += " ";
      out += "x" + std::to_string(letters_[i].gen);
      if (run != 1) out += "^" + std::to_string(run);
      i = j;
    }
    return out;
  }

 private:
  int k_ = 1;
  std::vector<Letter> letters_;
};

namespace detail {

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  WordExpr run() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty word");
    auto letters = sequence();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return WordExpr(max_gen_, letters);
  }

 private:
  using Letters = std::vector<Letter>;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError("word: " + what, pos_); }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  static Letters inverse(const Letters& w) {
    Letters r;
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back({it->gen, -it->exp});
    return r;
  }
  static Letters commutator(const Letters& u, const Letters& v) {
    Letters r = inverse(u);
    const Letters vi = inverse(v);
    r.insert(r.end(), vi.begin(), vi.end());
    r.insert(r.end(), u.begin(), u.end());
    r.insert(r.end(), v.begin(), v.end());
    return r;
  }

  Letters sequence() {
    Letters out;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      if (c == '*' || c == '.') {
        ++pos_;
        continue;
      }
      if (c != 'x' && c != '(' && c != '[') break;
      Letters item = power();
      out.insert(out.end(), item.begin(), item.end());
    }
    return out;
  }

  Letters power() {
    Letters base = atom();
    if (!peek('^')) return base;
    ++pos_;
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) negative = text_[pos_++] == '-';
    const std::size_t start = pos_;
    long n = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      n = n * 10 + (text_[pos_++] - '0');
      if (n > 1'000'000) fail("exponent too large");
    }
    if (pos_ == start) fail("expected integer exponent");
    const Letters unit = negative ? inverse(base) : base;
    Letters out;
    for (long i = 0; i < n; ++i) out.insert(out.end(), unit.begin(), unit.end());
    return out;
  }

  Letters atom() {
    skip_ws();
    const char c = text_[pos_];
    if (c == 'x') {
      ++pos_;
      const std::size_t start = pos_;
      int idx = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        idx = idx * 10 + (text_[pos_++] - '0');
        if (idx > 10'000) fail("generator index too large");
      }
      if (pos_ == start || idx < 1) fail("expected generator index >= 1");
      max_gen_ = std::max(max_gen_, idx);
      return {{idx, 1}};
    }
    if (c == '(') {
      ++pos_;
      Letters inner = sequence();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    // Left-normed brackets: [u,v,w] = [[u,v],w].
    ++pos_;
    Letters acc = sequence();
    int parts = 1;
    while (peek(',')) {
      ++pos_;
      acc = commutator(acc, sequence());
      ++parts;
    }
    if (parts < 2) fail("commutator needs at least two entries");
    if (!peek(']')) fail("expected ']'");
    ++pos_;
    return acc;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int max_gen_ = 0;
};

}  // namespace detail

/// Parses generators x1..xk, juxtaposition, `^n`, `[u,v]` = u^-1 v^-1 u v
/// and parentheses. k is the highest generator index mentioned.
inline WordExpr parse_word(std::string_view text) { return detail::WordParser(text).run(); }

/// w^l as a freely reduced word.
inline WordExpr word_power(const WordExpr& w, long l) {
  if (l < 1) throw PreconditionError("word power needs l >= 1");
  std::vector<Letter> r;
  for (long i = 0; i < l; ++i) r.insert(r.end(), w.letters().begin(), w.letters().end());
  return WordExpr(w.k(), r);
}

/// Left-to-right evaluation of `w` in any group exposing identity(),
/// mul() and inv().
template <typename Group>
typename Group::element_type eval_word(const WordExpr& w, const Group& G,
                                       std::span<const typename Group::element_type> args) {
  using E = typename Group::element_type;
  if (args.size() < static_cast<std::size_t>(w.k()))
    throw PreconditionError("word needs " + std::to_string(w.k()) + " arguments, got " +
                            std::to_string(args.size()));
  std::vector<std::optional<E>> inverses(args.size());
  E acc = G.identity();
  for (const auto& l : w.letters()) {
    const std::size_t i = static_cast<std::size_t>(l.gen - 1);
    if (l.exp > 0) {
      acc = G.mul(acc, args[i]);
    } else {
      if (!inverses[i]) inverses[i] = G.inv(args[i]);
      acc = G.mul(acc, *inverses[i]);
    }
  }
  return acc;
}

template <typename Group>
typename Group::element_type eval_word(const WordExpr& w, const Group& G,
                                       const std::vector<typename Group::element_type>& args) {
  return eval_word(w, G, std::span<const typename Group::element_type>(args));
}

/// The word map of `w` on a standard group as a tuple of d series in d*k
/// variables (block i holds the coordinates of x_i).
struct WordSeries {
  WordExpr word;
  std::size_t d = 0;
  SeriesTuple W;
};

inline WordSeries word_series(const WordExpr& w, const FormalGroupLaw& law) {
  const std::size_t d = law.d();
  const std::size_t k = static_cast<std::size_t>(w.k());
  const std::size_t n = d * k;
  const auto& spec = law.spec_ptr();
  const int D = law.D();
  std::vector<SeriesTuple> blocks, inv_blocks;
  for (std::size_t i = 0; i < k; ++i) {
    blocks.push_back(coordinates(spec, n, D, i * d, d));
    inv_blocks.push_back(compose(law.I(), blocks.back()));
  }
  SeriesTuple V = zero_tuple(spec, n, D, d);
  for (const auto& l : w.letters()) {
    const std::size_t i = static_cast<std::size_t>(l.gen - 1);
    V = compose(law.F(), concat(V, l.exp > 0 ? blocks[i] : inv_blocks[i]));
  }
  return {w, d, std::move(V)};
}

/// Variable names for k blocks of d coordinates: X, Y, Z blocks for k <= 3,
/// otherwise X<block>_<coordinate>.
inline std::vector<std::string> block_variable_names(std::size_t d, std::size_t k) {
  std::vector<std::string> names;
  static const char* letters[] = {"X", "Y", "Z"};
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t i = 0; i < d; ++i)
      names.push_back(k <= 3 ? std::string(letters[b]) + std::to_string(i + 1)
                             : "X" + std::to_string(b + 1) + "_" + std::to_string(i + 1));
  return names;
}

// ---------------------------------------------------------------------------
// Brute force on finite groups.

/// Value of w on every k-tuple of elements; tuple (a_1..a_k) sits at index
/// a_1*n^(k-1) + ... + a_k.
template <typename E>
std::vector<std::uint32_t> word_value_table(const WordExpr& w, const FiniteGroup<E>& G,
                                            std::size_t bound = enumeration_bound()) {
  const std::size_t n = G.size();
  const std::size_t k = static_cast<std::size_t>(w.k());
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > bound / n) throw BoundError("too many word arguments to enumerate", total * n);
    total *= n;
  }
  std::vector<std::uint32_t> values(total);
  std::vector<std::size_t> args(k, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    values[idx] = static_cast<std::uint32_t>(eval_word(w, G, args));
    for (std::size_t i = k; i-- > 0;) {
      if (++args[i] < n) break;
      args[i] = 0;
    }
  }
  return values;
}

/// w{G}: the set of word values, as sorted element indices.
template <typename E>
std::vector<std::size_t> word_image(const WordExpr& w, const FiniteGroup<E>& G,
                                    std::size_t bound = enumeration_bound()) {
  const auto values = word_value_table(w, G, bound);
  std::set<std::size_t> image(values.begin(), values.end());
  return {image.begin(), image.end()};
}

/// The subgroup generated by `gens`, by breadth-first closure.
template <typename E>
std::vector<std::size_t> generated_subgroup(const FiniteGroup<E>& G, const std::vector<std::size_t>& gens) {
  std::vector<std::size_t> step;
  for (auto g : gens) {
    step.push_back(g);
    step.push_back(G.inv(g));
  }
  std::vector<char> seen(G.size(), 0);
  std::deque<std::size_t> queue{G.identity()};
  seen[G.identity()] = 1;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (auto s : step) {
      const std::size_t y = G.mul(x, s);
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < G.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

/// w(G) = <w{G}>.
template <typename E>
std::vector<std::size_t> verbal_subgroup(const WordExpr& w, const FiniteGroup<E>& G,
                                         std::size_t bound = enumeration_bound()) {
  return generated_subgroup(G, word_image(w, G, bound));
}

/// w*(G): elements g with w(x_1, .., g x_i, .., x_k) = w(x_1, .., x_k) for
/// every position i and every tuple.
template <typename E>
std::vector<std::size_t> marginal_subgroup(const WordExpr& w, const FiniteGroup<E>& G,
                                           std::size_t bound = enumeration_bound()) {
  const auto values = word_value_table(w, G, bound);
  const std::size_t n = G.size();
  const std::size_t k = static_cast<std::size_t>(w.k());
  std::vector<std::size_t> stride(k, 1);
  for (std::size_t i = k; i-- > 1;) stride[i - 1] = stride[i] * n;
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < n; ++g) {
    bool marginal = true;
    for (std::size_t idx = 0; idx < values.size() && marginal; ++idx)
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t xi = (idx / stride[i]) % n;
        const std::size_t moved = idx - xi * stride[i] + G.mul(g, xi) * stride[i];
        if (values[moved] != values[idx]) {
          marginal = false;
          break;
        }
      }
    if (marginal) out.push_back(g);
  }
  return out;
}

}  // namespace fglaw
