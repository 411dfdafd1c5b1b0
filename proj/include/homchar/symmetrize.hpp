#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homchar/equation.hpp"
#include "homchar/rational.hpp"

namespace homchar {

/// Largest N for which the S_N enumeration oracle runs (8! = 40320).
inline constexpr unsigned kBruteForceMaxN = 8;
/// Largest order handled by polarization_check.
inline constexpr unsigned kPolarizationMaxN = 4;

/// Substitution pattern: how many of the N arguments of the symmetrized
/// form are x, y, z or 1. Token names other than x, y, z are accepted by the
/// parser and rejected at evaluation.
struct BlockPattern {
  std::map<std::string, unsigned> marked;
  unsigned ones = 0;

  unsigned total() const;
  /// "{x:1,y:1,1:2}"
  std::string to_string() const;
  static BlockPattern parse(std::string_view text);

  /// {x:1, 1:N-1}
  static BlockPattern eq_dep(unsigned N);
  /// {x:1, y:1, 1:N-2}
  static BlockPattern eq_lc(unsigned N);
  static BlockPattern diagonal(unsigned N);
};

/// Exponents of (x, y, z) in an argument monomial.
using ArgMonomial = std::array<unsigned, 3>;

/// One product  f_row(1)^ones * prod f_row(arg).  `args` holds the non-unit
/// arguments sorted in descending order.
struct IdentityKey {
  std::size_t row = 0;
  std::vector<ArgMonomial> args;
  unsigned ones = 0;

  friend bool operator==(const IdentityKey&, const IdentityKey&) = default;
};

/// Canonical order: by row, then more unit factors first, then arguments.
struct IdentityKeyLess {
  bool operator()(const IdentityKey& a, const IdentityKey& b) const;
};

struct IdentityRow {
  std::string name;
  unsigned p = 1;
  unsigned q = 1;
  friend bool operator==(const IdentityRow&, const IdentityRow&) = default;
};

/// Exact linear combination of products of f_i values, read as "... = 0".
class AbstractIdentity {
 public:
  using TermMap = std::map<IdentityKey, Rational, IdentityKeyLess>;

  AbstractIdentity() = default;
  explicit AbstractIdentity(std::vector<IdentityRow> rows) : rows_(std::move(rows)) {}

  const std::vector<IdentityRow>& rows() const { return rows_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const IdentityKey& key) const;

  void add(const IdentityKey& key, const Rational& coeff);
  AbstractIdentity scaled(const Rational& r) const;
  /// Scales to coprime integer coefficients with a positive factor.
  AbstractIdentity primitive() const;

  /// "f(x) + g(1)*g(x) + h(1)^3*h(x) = 0"
  std::string to_string() const;

  friend bool operator==(const AbstractIdentity&, const AbstractIdentity&) = default;

 private:
  std::vector<IdentityRow> rows_;
  TermMap terms_;
};

std::string render_arg(const ArgMonomial& m);
std::vector<IdentityRow> identity_rows(const Equation& eq);

/// Fraction of permutations in S_N that place the marked tokens so that
/// tokens in the same group share one block of size p and different groups
/// occupy different blocks. `group_sizes` lists the size of each group.
Rational pattern_weight(unsigned p, unsigned N, std::span<const unsigned> group_sizes);

/// F(pattern) = 0 for the symmetrized N-additive form, with coefficients
/// from multiset block-occupancy counts.
AbstractIdentity evaluate_pattern(const Equation& eq, const BlockPattern& pattern);

/// Same contract as evaluate_pattern by explicit enumeration of S_N
/// (OpenMP-parallel over permutation ranks). Requires N <= 8.
AbstractIdentity brute_force_pattern(const Equation& eq, const BlockPattern& pattern);
/// Serial reference for brute_force_pattern.
AbstractIdentity brute_force_pattern_serial(const Equation& eq, const BlockPattern& pattern);

/// Substitutes the x-linear identity `a` (with x -> m) into `b` to cancel
/// every single-argument term  f_t(1)^{q_t-1} f_t(m)  of the target row,
/// then scales to a primitive integer form.
AbstractIdentity eliminate_dependence(const AbstractIdentity& a, const AbstractIdentity& b,
                                      std::size_t target_row);

/// Linear combination of values of a symmetric multilinear form A on
/// multisets of formal vectors.
struct MultilinearExpr {
  std::vector<std::string> vectors;
  std::map<std::vector<unsigned>, Rational> terms;  // multiplicity per vector -> coeff

  std::string to_string() const;
  friend bool operator==(const MultilinearExpr&, const MultilinearExpr&) = default;
};

struct PolarizationProof {
  unsigned n = 0;
  /// Expansion of each A*(x + j*y) entering the n-th difference.
  std::vector<std::string> trace;
  MultilinearExpr iterated;           // Delta_y^n A*(x)
  MultilinearExpr iterated_expected;  // n! A*(y)
  MultilinearExpr mixed;              // Delta_{y1..yn} A*(x)
  MultilinearExpr mixed_expected;     // n! A(y1,...,yn)
  MultilinearExpr overflow;           // Delta_{y1..y(n+1)} A*(x), must vanish
  bool verified = false;
};

/// Symbolic check of the polarization identities for a generic symmetric
/// n-linear form, 1 <= n <= 4.
PolarizationProof polarization_check(unsigned n);

}  // namespace homchar
