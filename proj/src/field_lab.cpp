#include "homchar/field_lab.hpp"

#include <json.hpp>

#include <random>
#include <regex>

#include "homchar/errors.hpp"
#include "render_util.hpp"

namespace homchar {

// ---------------------------------------------------------------------------
// Q(sqrt(d))

bool is_square_free(long d) {
  long m = d < 0 ? -d : d;
  if (m == 0) return false;
  for (long k = 2; k * k <= m; ++k) {
    if (m % (k * k) == 0) return false;
  }
  return true;
}

QuadElem::QuadElem(long d, Rational a, Rational b) : d_(d), a_(std::move(a)), b_(std::move(b)) {
  if (d == 1 || !is_square_free(d)) {
    throw ValidationError("sqrt(" + std::to_string(d) + ") does not define a quadratic field (need square-free d != 0, 1)");
  }
}

void QuadElem::check(const QuadElem& o) const {
  if (o.d_ != d_) {
    throw UniverseMismatch("elements of Q(sqrt(" + std::to_string(d_) + ")) and Q(sqrt(" + std::to_string(o.d_) +
                           ")) do not combine");
  }
}

Rational QuadElem::norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

QuadElem QuadElem::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero in Q(sqrt(" + std::to_string(d_) + "))");
  Rational n = norm();
  return {d_, a_ / n, -b_ / n};
}

QuadElem& QuadElem::operator+=(const QuadElem& o) {
  check(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadElem& QuadElem::operator-=(const QuadElem& o) {
  check(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadElem& QuadElem::operator*=(const QuadElem& o) {
  check(o);
  Rational a = a_ * o.a_ + Rational(d_) * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

std::string QuadElem::to_string() const {
  detail::SignedTermJoiner join;
  join.add(a_, "");
  join.add(b_, "sqrt(" + std::to_string(d_) + ")");
  return join.str();
}

QuadElem embed_quad(const QuadElem& e, bool conj) { return conj ? e.conj() : e; }

QuadElem separating_witness(long d) { return {d, Rational(0), Rational(1)}; }

// ---------------------------------------------------------------------------
// Q[t]

QPoly::QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly QPoly::constant(const Rational& c) { return QPoly(std::vector<Rational>{c}); }

QPoly QPoly::t() { return QPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

void QPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational QPoly::leading() const { return c_.empty() ? Rational(0) : c_.back(); }

Rational QPoly::evaluate(const Rational& t) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

QPoly QPoly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Rational(static_cast<long>(k)));
  return QPoly(std::move(d));
}

QPoly QPoly::monic() const { return is_zero() ? *this : scaled(leading().inverse()); }

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return QPoly(std::move(r));
}

QPoly QPoly::operator-() const { return scaled(Rational(-1)); }

QPoly QPoly::scaled(const Rational& r) const {
  std::vector<Rational> out;
  for (const auto& c : c_) out.push_back(c * r);
  return QPoly(std::move(out));
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> q(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0, Rational(0));
  QPoly r = a;
  const Rational lead = b.leading();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    auto shift = static_cast<std::size_t>(r.degree() - b.degree());
    Rational f = r.leading() / lead;
    q[shift] = f;
    std::vector<Rational> sub(shift + b.c_.size(), Rational(0));
    for (std::size_t k = 0; k < b.c_.size(); ++k) sub[shift + k] = b.c_[k] * f;
    r -= QPoly(std::move(sub));
  }
  return {QPoly(std::move(q)), r};
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::string QPoly::to_string() const {
  detail::SignedTermJoiner join;
  for (std::size_t k = c_.size(); k-- > 0;) {
    std::string body = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
    join.add(c_[k], body);
  }
  return join.str();
}

// ---------------------------------------------------------------------------
// Q(t)

RatFunc::RatFunc(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = QPoly::constant(Rational(1));
    return;
  }
  if (den_.degree() > 0) {
    auto g = QPoly::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = QPoly::divmod(num_, g).first;
      den_ = QPoly::divmod(den_, g).first;
    }
  }
  Rational lead = den_.leading();
  if (!lead.is_one()) {
    num_ = num_.scaled(lead.inverse());
    den_ = den_.monic();
  }
  if (num_.degree() > static_cast<int>(kRatFuncDegreeCap) || den_.degree() > static_cast<int>(kRatFuncDegreeCap)) {
    throw CapExceeded("rational function degree exceeds cap " + std::to_string(kRatFuncDegreeCap));
  }
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero in Q(t)");
  return RatFunc(den_, num_);
}

Rational RatFunc::evaluate(const Rational& t) const {
  Rational d = den_.evaluate(t);
  if (d.is_zero()) throw DomainError("pole at t = " + t.to_string());
  return num_.evaluate(t) / d;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (den_ == o.den_) {
    *this = RatFunc(num_ + o.num_, den_);
  } else {
    *this = RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  *this = RatFunc(num_ * o.num_, den_ * o.den_);
  return *this;
}

std::string RatFunc::to_string() const {
  if (den_.degree() == 0) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RatFunc derive_ratfunc(const RatFunc& r) {
  const auto& n = r.num();
  const auto& d = r.den();
  return RatFunc(n.derivative() * d - n * d.derivative(), d * d);
}

// ---------------------------------------------------------------------------
// Bindings

Bindings Bindings::parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("bindings are not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("bindings must be a JSON object");
  static const std::regex phi_re("phi([0-9]*)");
  static const std::regex a_re("a([0-9]*)");
  static const std::regex conj_re("conj\\((-?[0-9]+)\\)");
  auto index_of = [](const std::smatch& m) { return m[1].length() ? std::stoi(m[1]) : 1; };

  Bindings b;
  std::optional<long> d;
  for (const auto& [key, value] : j.items()) {
    std::smatch m;
    std::string v = value.is_string() ? value.get<std::string>() : value.dump();
    if (std::regex_match(key, m, phi_re)) {
      std::smatch vm;
      if (v == "id") {
        b.hom[index_of(m)] = HomKind::Identity;
      } else if (std::regex_match(v, vm, conj_re)) {
        long dv = std::stol(vm[1]);
        if (d && *d != dv) throw ValidationError("bindings use two different quadratic fields");
        d = dv;
        b.hom[index_of(m)] = HomKind::Conjugate;
      } else {
        throw ValidationError("binding for " + key + " must be \"id\" or \"conj(d)\", got " + v);
      }
    } else if (std::regex_match(key, m, a_re)) {
      if (v != "dlog(t)") throw ValidationError("binding for " + key + " must be \"dlog(t)\", got " + v);
      b.logderiv.insert(index_of(m));
    } else {
      try {
        b.constants[key] = Rational::parse(v);
      } catch (const Error&) {
        throw ValidationError("constant " + key + " must be a rational number, got " + v);
      }
    }
  }
  if (d) {
    if (!b.logderiv.empty()) {
      throw ValidationError("cannot mix conj(d) and dlog(t): Q(sqrt(d)) only carries the zero derivation");
    }
    b.field = FieldKind::Quadratic;
    b.d = *d;
    QuadElem probe(b.d, Rational(0));  // validates d
    (void)probe;
  }
  return b;
}

void Bindings::complete_for(const Candidate& cand, std::uint64_t seed) {
  for (const auto& s : cand.symbols()->symbols()) {
    if (s.kind == SymbolKind::Hom) {
      hom.try_emplace(s.index, HomKind::Identity);
    } else if (!logderiv.count(s.index)) {
      if (field == FieldKind::Quadratic) {
        throw ValidationError("a" + std::to_string(s.index) + " needs a derivation, unavailable on Q(sqrt(d))");
      }
      logderiv.insert(s.index);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(1, 9), den(1, 4), sign(0, 1);
  for (const auto& name : cand.unknowns()->names()) {
    if (constants.count(name)) continue;
    long n = num(rng) * (sign(rng) ? -1 : 1);
    constants[name] = Rational(n, den(rng));
  }
}

std::string Bindings::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [idx, kind] : hom) {
    j["phi" + std::to_string(idx)] = kind == HomKind::Identity ? "id" : "conj(" + std::to_string(d) + ")";
  }
  for (int idx : logderiv) j["a" + std::to_string(idx)] = "dlog(t)";
  for (const auto& [name, v] : constants) j[name] = v.to_string();
  return j.dump();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::vector<Rational> constant_values(const SymPoly& row, const Bindings& b) {
  std::vector<Rational> vals;
  for (const auto& name : row.unknowns()->names()) {
    auto it = b.constants.find(name);
    if (it == b.constants.end()) throw ValidationError("constant " + name + " is unbound");
    vals.push_back(it->second);
  }
  return vals;
}

template <class F, class LogDerivFn, class ConjFn>
F eval_generic(const SymPoly& row, const Bindings& b, const F& point, LogDerivFn logderiv_of, ConjFn conj_of) {
  const auto& space = *row.symbols();
  std::vector<F> sym_vals;
  for (const auto& s : space.symbols()) {
    if (s.base_var != kBaseX) throw ValidationError("candidate symbol " + s.to_string() + " is not a function of x");
    if (s.kind == SymbolKind::Hom) {
      auto it = b.hom.find(s.index);
      if (it == b.hom.end()) throw ValidationError("phi" + std::to_string(s.index) + " is unbound");
      sym_vals.push_back(it->second == Bindings::HomKind::Identity ? point : conj_of(point));
    } else {
      if (!b.logderiv.count(s.index)) throw ValidationError("a" + std::to_string(s.index) + " is unbound");
      if (point.is_zero()) throw DomainError("a" + std::to_string(s.index) + "(0) = d(0)/0 is undefined");
      sym_vals.push_back(logderiv_of(point));
    }
  }
  auto consts = constant_values(row, b);
  F sum = point.from_rational(Rational(0));
  for (const auto& [m, c] : row.terms()) {
    F term = point.from_rational(c.evaluate(std::span<const Rational>(consts)));
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) term *= field_pow(sym_vals[i], m[i]);
    }
    sum += term;
  }
  return sum;
}

}  // namespace

RatFunc eval_candidate(const SymPoly& row, const Bindings& b, const RatFunc& point) {
  if (b.field != Bindings::FieldKind::RationalFunctions) throw UniverseMismatch("bindings target Q(sqrt(d)), not Q(t)");
  return eval_generic(
      row, b, point, [](const RatFunc& x) { return derive_ratfunc(x) / x; },
      [](const RatFunc&) -> RatFunc { throw ValidationError("conj(d) binding is not available on Q(t)"); });
}

QuadElem eval_candidate(const SymPoly& row, const Bindings& b, const QuadElem& point) {
  if (b.field != Bindings::FieldKind::Quadratic) throw UniverseMismatch("bindings target Q(t), not Q(sqrt(d))");
  if (point.d() != b.d) throw UniverseMismatch("point lies outside the bound quadratic field");
  return eval_generic(
      row, b, point,
      [](const QuadElem&) -> QuadElem { throw ValidationError("dlog(t) binding is not available on Q(sqrt(d))"); },
      [](const QuadElem& x) { return x.conj(); });
}

// Re-raises evaluation failures with the offending sample attached.
template <class F, class Fn>
auto at_sample(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " at sample " + where);
  } catch (const CapExceeded& e) {
    throw CapExceeded(std::string(e.what()) + " at sample " + where);
  }
}

template <class F>
AdditivityResult<F> additivity_oracle(const SymPoly& row, const Bindings& b,
                                      const std::vector<std::pair<F, F>>& pairs) {
  AdditivityResult<F> res;
  for (const auto& [u, v] : pairs) {
    F defect = at_sample<F>("(" + u.to_string() + ", " + v.to_string() + ")", [&] {
      return eval_candidate(row, b, u + v) - eval_candidate(row, b, u) - eval_candidate(row, b, v);
    });
    ++res.checked;
    if (!defect.is_zero()) {
      res.holds = false;
      res.witness = std::make_pair(u, v);
      res.defect = defect;
      break;
    }
  }
  return res;
}

template <class F>
EquationOracleResult<F> equation_oracle(const Equation& eq, const Candidate& cand, const Bindings& b,
                                        const std::vector<F>& points) {
  if (cand.size() != eq.size()) throw ValidationError("row count mismatch between candidate and equation");
  auto scalars = eq.real_scalars();
  EquationOracleResult<F> res;
  for (const auto& x : points) {
    F total = at_sample<F>(x.to_string(), [&] {
      F sum = x.from_rational(Rational(0));
      for (std::size_t i = 0; i < eq.size(); ++i) {
        const auto& row = eq.profile[i];
        F val = eval_candidate(cand.rows[i], b, field_pow(x, row.p));
        sum += field_pow(val, row.q) * x.from_rational(scalars[i]);
      }
      return sum;
    });
    ++res.checked;
    if (!total.is_zero()) {
      res.holds = false;
      res.witness = x;
      res.residual = total;
      break;
    }
  }
  return res;
}

template AdditivityResult<RatFunc> additivity_oracle(const SymPoly&, const Bindings&,
                                                     const std::vector<std::pair<RatFunc, RatFunc>>&);
template AdditivityResult<QuadElem> additivity_oracle(const SymPoly&, const Bindings&,
                                                      const std::vector<std::pair<QuadElem, QuadElem>>&);
template EquationOracleResult<RatFunc> equation_oracle(const Equation&, const Candidate&, const Bindings&,
                                                       const std::vector<RatFunc>&);
template EquationOracleResult<QuadElem> equation_oracle(const Equation&, const Candidate&, const Bindings&,
                                                        const std::vector<QuadElem>&);

// ---------------------------------------------------------------------------
// Sampling. Leading coefficients are kept positive so sums of samples never
// cancel to zero.

std::vector<RatFunc> sample_ratfuncs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coeff(-4, 4), lead(1, 4), deg(0, 2), den_deg(0, 1);
  auto poly = [&](int degree) {
    std::vector<Rational> c;
    for (int k = 0; k < degree; ++k) c.push_back(Rational(coeff(rng)));
    c.push_back(Rational(lead(rng)));
    return QPoly(std::move(c));
  };
  std::vector<RatFunc> out;
  while (out.size() < count) {
    int nd = static_cast<int>(deg(rng));
    int dd = static_cast<int>(den_deg(rng));
    QPoly num = poly(std::max(nd, 1));
    QPoly den = dd == 0 ? QPoly::constant(Rational(1)) : poly(1).monic();
    out.emplace_back(num, den);
  }
  return out;
}

std::vector<QuadElem> sample_quads(long d, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(1, 9), bnum(0, 9), den(1, 5);
  std::vector<QuadElem> out;
  while (out.size() < count) out.emplace_back(d, Rational(num(rng), den(rng)), Rational(bnum(rng), den(rng)));
  return out;
}

}  // namespace homchar
