#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homchar/rational.hpp"

namespace homchar {

/// Gaussian rational re + im*i, used for fixed term multipliers.
struct ComplexRational {
  Rational re;
  Rational im;

  bool is_real() const { return im.is_zero(); }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  /// "3/2" when real, otherwise "(a+bi)".
  std::string to_string() const;

  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
};

/// One summand  scalar * name^q(x^p).
struct EquationTerm {
  std::string function_name;
  unsigned q = 1;
  unsigned p = 1;
  std::optional<ComplexRational> scalar;

  unsigned degree() const { return p * q; }
  ComplexRational multiplier() const { return scalar.value_or(ComplexRational{Rational(1), Rational(0)}); }

  friend bool operator==(const EquationTerm&, const EquationTerm&) = default;
};

/// Parses  term (('+'|'-') term)* '=' '0'  with
///   term := [scalar '*'] ident ['^' nat] '(' 'x' ['^' nat] ')'
///   scalar := rational | '(' complex ')'
/// A leading or joining '-' folds into the scalar.
std::vector<EquationTerm> parse_equation(std::string_view text);
std::string print_equation(std::span<const EquationTerm> terms);

struct ExponentRow {
  unsigned p = 1;
  unsigned q = 1;
  friend bool operator==(const ExponentRow&, const ExponentRow&) = default;
};

struct ValidationReport {
  bool distinct_p = false;
  bool distinct_q = false;
  bool common_product = false;
  std::optional<unsigned> N;
  std::vector<unsigned> products;
  bool valid = false;
  std::vector<std::string> messages;
};

/// Checks the admissibility condition: pairwise distinct p, pairwise
/// distinct q, and a common product p*q = N > 1.
ValidationReport check_condition_C(std::span<const ExponentRow> rows);

/// Validated exponent rows, sorted by ascending q (so descending p).
class ExponentProfile {
 public:
  /// Throws ValidationError if the rows violate the admissibility condition.
  static ExponentProfile from_rows(std::vector<ExponentRow> rows);

  const std::vector<ExponentRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  const ExponentRow& operator[](std::size_t i) const { return rows_[i]; }
  unsigned N() const { return n_; }
  std::string to_string() const;

  friend bool operator==(const ExponentProfile&, const ExponentProfile&) = default;

 private:
  std::vector<ExponentRow> rows_;
  unsigned n_ = 0;
};

/// Parses "[(6,2),(4,3)]" as (p,q) pairs.
std::vector<ExponentRow> parse_profile_rows(std::string_view text);

/// An admissible single-degree equation: profile plus per-row name and
/// multiplier, all in profile order.
struct Equation {
  ExponentProfile profile;
  std::vector<std::string> names;
  std::vector<ComplexRational> scalars;

  std::size_t size() const { return profile.size(); }
  /// Default names f1..fn and unit multipliers.
  static Equation from_profile(const ExponentProfile& profile);
  /// Throws UnsupportedError if a multiplier is not rational.
  std::vector<Rational> real_scalars() const;
  std::vector<EquationTerm> terms() const;
};

/// Validates and sorts terms into an Equation. Rejects repeated names.
Equation make_equation(std::span<const EquationTerm> terms);

struct DegreeGroup {
  unsigned N = 0;
  std::vector<EquationTerm> terms;
  /// N == 1: the group is f(x) alone and is excluded from analysis.
  bool degenerate = false;
};

/// Groups terms by p*q, ascending N; each group is an independent equation.
std::vector<DegreeGroup> degree_split(std::span<const EquationTerm> terms);

/// True iff every q is even; then real-valued additive solutions vanish.
bool real_even_note(const ExponentProfile& profile);

}  // namespace homchar
