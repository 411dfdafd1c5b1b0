#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace homchar {

/// Fixed-length exponent vector.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t length) : e_(length, 0) {}
  MultiIndex(std::initializer_list<std::uint32_t> exps) : e_(exps) {}
  explicit MultiIndex(std::vector<std::uint32_t> exps) : e_(std::move(exps)) {}

  std::size_t size() const { return e_.size(); }
  std::uint32_t operator[](std::size_t i) const { return e_[i]; }
  void set(std::size_t i, std::uint32_t v) { e_[i] = v; }
  std::span<const std::uint32_t> exponents() const { return e_; }

  std::uint64_t degree() const;
  bool is_zero() const { return degree() == 0; }

  /// Componentwise sum (monomial product). Lengths must agree.
  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex scaled(std::uint32_t k) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::uint32_t> e_;
};

/// Graded lexicographic order, leading term first: higher total degree
/// sorts earlier; ties broken by lexicographically larger exponent vector.
struct GrlexDesc {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    auto da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return b < a;
  }
};

}  // namespace homchar
