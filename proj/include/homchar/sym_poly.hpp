#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homchar/multi_index.hpp"
#include "homchar/unknown_poly.hpp"

namespace homchar {

enum class SymbolKind {
  Hom,       // field homomorphism phi_j, multiplicative: phi(x^k) = phi(x)^k
  LogDeriv,  // logarithmic derivative a_r = d_r(x)/x, additive on the multiplicative group
};

/// Formal base variable indices: x = 1, y = 2, z = 3.
inline constexpr int kBaseX = 1;
inline constexpr int kBaseY = 2;
inline constexpr int kBaseZ = 3;

std::string base_var_name(int base_var);

struct SymbolId {
  SymbolKind kind = SymbolKind::Hom;
  int index = 1;
  int base_var = kBaseX;

  friend auto operator<=>(const SymbolId&, const SymbolId&) = default;
  friend bool operator==(const SymbolId&, const SymbolId&) = default;

  /// "phi1(x)", "a2(y)".
  std::string to_string() const;
};

inline SymbolId hom(int index, int base_var = kBaseX) { return {SymbolKind::Hom, index, base_var}; }
inline SymbolId logderiv(int index, int base_var = kBaseX) {
  return {SymbolKind::LogDeriv, index, base_var};
}

/// Declared symbol universe, kept sorted by (kind, index, base_var).
class SymbolSpace {
 public:
  SymbolSpace() = default;
  explicit SymbolSpace(std::vector<SymbolId> symbols);

  std::size_t size() const { return symbols_.size(); }
  const SymbolId& at(std::size_t i) const { return symbols_[i]; }
  const std::vector<SymbolId>& symbols() const { return symbols_; }
  std::optional<std::size_t> position(const SymbolId& s) const;

  friend bool operator==(const SymbolSpace&, const SymbolSpace&) = default;

 private:
  std::vector<SymbolId> symbols_;
};

using SymbolSpacePtr = std::shared_ptr<const SymbolSpace>;
SymbolSpacePtr make_symbol_space(std::vector<SymbolId> symbols);
/// Union of two spaces (sorted, deduplicated).
SymbolSpacePtr merge_symbol_spaces(const SymbolSpace& a, const SymbolSpace& b);

/// Sparse polynomial in formal symbols with UnknownPoly coefficients.
/// Iteration is in GrlexDesc order, which is also the rendering order.
class SymPoly {
 public:
  using TermMap = std::map<MultiIndex, UnknownPoly, GrlexDesc>;

  SymPoly(SymbolSpacePtr symbols, UnknownSpacePtr unknowns)
      : symbols_(std::move(symbols)), unknowns_(std::move(unknowns)) {}

  static SymPoly constant(SymbolSpacePtr symbols, UnknownSpacePtr unknowns, const Rational& c);
  static SymPoly constant(SymbolSpacePtr symbols, const UnknownPoly& c);
  static SymPoly symbol(SymbolSpacePtr symbols, UnknownSpacePtr unknowns, const SymbolId& s,
                        std::uint32_t power = 1);
  static SymPoly monomial(SymbolSpacePtr symbols, const MultiIndex& mono, const UnknownPoly& c);

  const SymbolSpacePtr& symbols() const { return symbols_; }
  const UnknownSpacePtr& unknowns() const { return unknowns_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const MultiIndex& mono, const UnknownPoly& coeff);

  SymPoly& operator+=(const SymPoly& o);
  SymPoly& operator-=(const SymPoly& o);
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
  SymPoly operator-() const { return scaled(Rational(-1)); }
  SymPoly scaled(const Rational& r) const;
  SymPoly scaled(const UnknownPoly& r) const;

  /// Re-expresses this polynomial over larger symbol and unknown universes.
  SymPoly embed(const SymbolSpacePtr& symbols, const UnknownSpacePtr& unknowns) const;

  /// Exponent sum over LogDeriv symbols, maximised over terms.
  std::uint64_t logderiv_degree() const;

  /// Canonical text: terms in GrlexDesc order, factors in symbol-space order,
  /// explicit '*' and '^'. Example: "-16*phi1(x)^4*a1(x)^2 - 20*phi1(x)^4".
  std::string to_string() const;

  friend bool operator==(const SymPoly& a, const SymPoly& b);

 private:
  void check_same_universe(const SymPoly& o) const;

  SymbolSpacePtr symbols_;
  UnknownSpacePtr unknowns_;
  TermMap terms_;
};

enum class ArithOp { Add, Sub, Mul };
SymPoly poly_arith(const SymPoly& p, const SymPoly& q, ArithOp op);

/// Exact e-th power via the multinomial theorem.
SymPoly poly_pow(const SymPoly& p, unsigned e);

/// Applies x -> x^k on base_var: Hom exponents multiply by k, each LogDeriv
/// factor a_r scales by k (a_r^m contributes k^m).
SymPoly substitute_power(const SymPoly& p, int base_var, unsigned k);

/// Applies x -> x^e1 * y^e2 * ... on base_var, mapping into `target`:
/// phi(x) -> prod phi(v)^ev and a(x) -> sum ev * a(v).
SymPoly substitute_monomial(const SymPoly& p, int base_var,
                            const std::vector<std::pair<int, unsigned>>& monomial,
                            const SymbolSpacePtr& target);

/// x -> 1 on base_var: Hom symbols become 1, LogDeriv symbols become 0.
SymPoly eval_at_one(const SymPoly& p, int base_var);

std::vector<std::pair<MultiIndex, UnknownPoly>> collect_coefficients(const SymPoly& p);

/// Renders a symbol monomial such as "phi1(x)^2*a1(x)"; "" for 1.
std::string render_symbol_monomial(const MultiIndex& mono, const SymbolSpace& space);

}  // namespace homchar
