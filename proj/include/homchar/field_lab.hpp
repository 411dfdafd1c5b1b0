#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homchar/equation.hpp"
#include "homchar/rational.hpp"
#include "homchar/sym_poly.hpp"
#include "homchar/verify.hpp"

namespace homchar {

/// Largest numerator/denominator degree a rational function may reach.
inline constexpr unsigned kRatFuncDegreeCap = 24;

/// a + b*sqrt(d) in Q(sqrt(d)), d square-free and not 0 or 1.
class QuadElem {
 public:
  QuadElem(long d, Rational a, Rational b = Rational(0));

  long d() const { return d_; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  /// a^2 - d*b^2
  Rational norm() const;
  QuadElem conj() const { return {d_, a_, -b_}; }
  QuadElem inverse() const;
  QuadElem from_rational(const Rational& r) const { return {d_, r}; }

  QuadElem& operator+=(const QuadElem& o);
  QuadElem& operator-=(const QuadElem& o);
  QuadElem& operator*=(const QuadElem& o);
  QuadElem& operator/=(const QuadElem& o) { return *this *= o.inverse(); }
  friend QuadElem operator+(QuadElem x, const QuadElem& y) { return x += y; }
  friend QuadElem operator-(QuadElem x, const QuadElem& y) { return x -= y; }
  friend QuadElem operator*(QuadElem x, const QuadElem& y) { return x *= y; }
  friend QuadElem operator/(QuadElem x, const QuadElem& y) { return x /= y; }
  QuadElem operator-() const { return {d_, -a_, -b_}; }
  friend bool operator==(const QuadElem&, const QuadElem&) = default;

  /// "1 + sqrt(2)", "-1/2*sqrt(3)", "0"
  std::string to_string() const;

 private:
  void check(const QuadElem& o) const;
  long d_;
  Rational a_, b_;
};

bool is_square_free(long d);
/// Identity embedding or conjugation a + b*sqrt(d) -> a - b*sqrt(d).
QuadElem embed_quad(const QuadElem& e, bool conj);
/// An element on which the identity and conjugate embeddings differ.
QuadElem separating_witness(long d);

/// Dense polynomial in t over Q, lowest degree first, no trailing zeros.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rational> coeffs);
  static QPoly constant(const Rational& c);
  static QPoly t();

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational leading() const;
  Rational evaluate(const Rational& t) const;
  QPoly derivative() const;
  QPoly monic() const;

  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  QPoly operator-() const;
  QPoly scaled(const Rational& r) const;
  friend bool operator==(const QPoly&, const QPoly&) = default;

  /// Quotient and remainder; throws DomainError on a zero divisor.
  static std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
  /// Monic gcd (zero if both are zero).
  static QPoly gcd(QPoly a, QPoly b);

  /// "t^2 - 3", "1/2*t + 1", "0"
  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Element of Q(t): coprime numerator and monic denominator. Degrees above
/// kRatFuncDegreeCap raise CapExceeded.
class RatFunc {
 public:
  RatFunc() : num_(), den_(QPoly::constant(Rational(1))) {}
  RatFunc(const Rational& c) : RatFunc(QPoly::constant(c)) {}  // NOLINT(google-explicit-constructor)
  explicit RatFunc(QPoly num, QPoly den = QPoly::constant(Rational(1)));
  static RatFunc t() { return RatFunc(QPoly::t()); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  RatFunc inverse() const;
  RatFunc from_rational(const Rational& r) const { return RatFunc(r); }
  /// Value at a rational point; DomainError at a pole.
  Rational evaluate(const Rational& t) const;

  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o) { return *this *= o.inverse(); }
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  RatFunc operator-() const { return RatFunc(-num_, den_); }
  friend bool operator==(const RatFunc&, const RatFunc&) = default;

  /// "t^2 - 3", "(1)/(t^2 + t)"
  std::string to_string() const;

 private:
  void normalize();
  QPoly num_, den_;
};

/// Formal d/dt by the quotient rule.
RatFunc derive_ratfunc(const RatFunc& r);

template <class F>
F field_pow(const F& x, unsigned e) {
  F result = x.from_rational(Rational(1));
  F base = x;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return result;
}

/// How the symbols of a candidate are interpreted in a concrete field.
struct Bindings {
  enum class FieldKind { RationalFunctions, Quadratic };
  enum class HomKind { Identity, Conjugate };

  FieldKind field = FieldKind::RationalFunctions;
  long d = 0;  // for Quadratic
  std::map<int, HomKind> hom;
  std::set<int> logderiv;  // a_r bound to d/dt
  std::map<std::string, Rational> constants;

  /// {"phi1": "id" | "conj(d)", "a1": "dlog(t)", "G": "3/2"}. Mixing
  /// conj(d) with dlog(t) is rejected: Q(sqrt(d)) only carries the zero
  /// derivation.
  static Bindings parse_json(std::string_view text);
  /// Fills in defaults for `cand`: phi_j -> id, a_r -> dlog(t) on Q(t), and
  /// each unbound constant -> a seeded random nonzero rational.
  void complete_for(const Candidate& cand, std::uint64_t seed);
  /// Canonical JSON text of the bindings (sorted keys).
  std::string to_json() const;
};

/// Exact value of a candidate row at `point`. The field type must match
/// bindings.field. Throws DomainError at point 0 if a LogDeriv symbol occurs.
RatFunc eval_candidate(const SymPoly& row, const Bindings& b, const RatFunc& point);
QuadElem eval_candidate(const SymPoly& row, const Bindings& b, const QuadElem& point);

template <class F>
struct AdditivityResult {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<std::pair<F, F>> witness;
  std::optional<F> defect;  // f(u+v) - f(u) - f(v) at the witness
};

template <class F>
struct EquationOracleResult {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<F> witness;
  std::optional<F> residual;
};

template <class F>
AdditivityResult<F> additivity_oracle(const SymPoly& row, const Bindings& b,
                                      const std::vector<std::pair<F, F>>& pairs);

template <class F>
EquationOracleResult<F> equation_oracle(const Equation& eq, const Candidate& cand, const Bindings& b,
                                        const std::vector<F>& points);

/// Seeded random nonzero elements of Q(t): ratios of polynomials of degree
/// at most 2 with small integer coefficients.
std::vector<RatFunc> sample_ratfuncs(std::size_t count, std::uint64_t seed);
/// Seeded random nonzero elements of Q(sqrt(d)) with small rational parts.
std::vector<QuadElem> sample_quads(long d, std::size_t count, std::uint64_t seed);
/// Consecutive pairs (s[0], s[1]), (s[1], s[2]), ... cycling to length count.
template <class F>
std::vector<std::pair<F, F>> sample_pairs(const std::vector<F>& samples) {
  std::vector<std::pair<F, F>> out;
  for (std::size_t i = 0; i < samples.size(); ++i) out.emplace_back(samples[i], samples[(i + 1) % samples.size()]);
  return out;
}

}  // namespace homchar
