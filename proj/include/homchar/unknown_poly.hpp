#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homchar/multi_index.hpp"
#include "homchar/rational.hpp"

namespace homchar {

/// Ordered set of names for the unknown constants (c_{i,j}, g(1), ...).
class UnknownSpace {
 public:
  UnknownSpace() = default;
  explicit UnknownSpace(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  friend bool operator==(const UnknownSpace&, const UnknownSpace&) = default;

 private:
  std::vector<std::string> names_;
};

using UnknownSpacePtr = std::shared_ptr<const UnknownSpace>;

UnknownSpacePtr make_unknown_space(std::vector<std::string> names);
/// Shared instance with no unknowns; coefficients over it are plain rationals.
const UnknownSpacePtr& empty_unknown_space();

/// Polynomial over Q in the unknowns of a space. Never stores zero terms.
class UnknownPoly {
 public:
  using TermMap = std::map<MultiIndex, Rational, GrlexDesc>;

  UnknownPoly() : UnknownPoly(empty_unknown_space()) {}
  explicit UnknownPoly(UnknownSpacePtr space) : space_(std::move(space)) {}

  static UnknownPoly constant(UnknownSpacePtr space, const Rational& value);
  static UnknownPoly variable(UnknownSpacePtr space, std::size_t index, std::uint32_t power = 1);
  static UnknownPoly variable(UnknownSpacePtr space, const std::string& name, std::uint32_t power = 1);

  const UnknownSpacePtr& space() const { return space_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (zero when absent).
  Rational constant_term() const;
  std::uint64_t degree() const;

  /// Adds coeff * x^mono in place.
  void add_term(const MultiIndex& mono, const Rational& coeff);

  UnknownPoly& operator+=(const UnknownPoly& o);
  UnknownPoly& operator-=(const UnknownPoly& o);
  friend UnknownPoly operator+(UnknownPoly a, const UnknownPoly& b) { return a += b; }
  friend UnknownPoly operator-(UnknownPoly a, const UnknownPoly& b) { return a -= b; }
  friend UnknownPoly operator*(const UnknownPoly& a, const UnknownPoly& b);
  UnknownPoly operator-() const;
  UnknownPoly scaled(const Rational& r) const;
  UnknownPoly pow(unsigned e) const;

  /// Re-expresses this polynomial over a space containing all of its names.
  UnknownPoly embed(const UnknownSpacePtr& target) const;

  std::complex<double> evaluate(std::span<const std::complex<double>> values) const;
  Rational evaluate(std::span<const Rational> values) const;

  /// Canonical text, e.g. "c1^2 + 2*c1*c2 - 3/2".
  std::string to_string() const;

  friend bool operator==(const UnknownPoly& a, const UnknownPoly& b);

 private:
  void check_same_space(const UnknownPoly& o) const;

  UnknownSpacePtr space_;
  TermMap terms_;
};

bool same_space(const UnknownSpacePtr& a, const UnknownSpacePtr& b);

/// Renders a monomial c1^2*c3 over the given names; "" for the unit monomial.
std::string render_monomial(const MultiIndex& mono, const std::vector<std::string>& names);

}  // namespace homchar
