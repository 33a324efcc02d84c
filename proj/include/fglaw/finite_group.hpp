#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fglaw/error.hpp"

namespace fglaw {

inline constexpr std::size_t kDefaultEnumerationBound = 1'000'000;

/// Enumeration size bound; the FGLAW_ENUM_BOUND environment variable
/// overrides the default of 10^6.
inline std::size_t enumeration_bound() {
  if (const char* env = std::getenv("FGLAW_ENUM_BOUND")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultEnumerationBound;
}

/// A finite group on canonical representatives `E`, addressed by index.
/// Products are tabulated up to `table_limit` elements and computed on
/// demand beyond that.
template <typename E>
class FiniteGroup {
 public:
  using element_type = std::size_t;
  using MulFn = std::function<E(const E&, const E&)>;
  using InvFn = std::function<E(const E&)>;

  FiniteGroup(std::vector<E> elements, const E& identity, MulFn mul, InvFn inv,
              std::size_t table_limit = 2048)
      : elements_(std::move(elements)), mul_(std::move(mul)) {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (!index_.emplace(elements_[i], i).second)
        throw PreconditionError("duplicate element in finite group");
    identity_ = index(identity);
    inv_.reserve(elements_.size());
    for (const auto& e : elements_) inv_.push_back(static_cast<std::uint32_t>(index(inv(e))));
    if (elements_.size() <= table_limit) {
      const std::size_t n = elements_.size();
      table_.resize(n * n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          table_[a * n + b] = static_cast<std::uint32_t>(index(mul_(elements_[a], elements_[b])));
    }
  }

  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t identity() const noexcept { return identity_; }

  std::size_t mul(std::size_t a, std::size_t b) const {
    if (!table_.empty()) return table_[a * elements_.size() + b];
    return index(mul_(elements_[a], elements_[b]));
  }
  std::size_t inv(std::size_t a) const { return inv_[a]; }

  const E& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<E>& elements() const noexcept { return elements_; }

  std::size_t index(const E& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) throw Error("element is not a canonical representative of the quotient");
    return it->second;
  }

 private:
  std::vector<E> elements_;
  std::map<E, std::size_t> index_;
  MulFn mul_;
  std::size_t identity_ = 0;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint32_t> table_;
};

}  // namespace fglaw
