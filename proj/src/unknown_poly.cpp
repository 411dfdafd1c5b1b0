#include "homchar/unknown_poly.hpp"

#include "homchar/errors.hpp"
#include "render_util.hpp"

namespace homchar {

UnknownSpace::UnknownSpace(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw ValidationError("duplicate unknown name '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> UnknownSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

UnknownSpacePtr make_unknown_space(std::vector<std::string> names) {
  return std::make_shared<const UnknownSpace>(std::move(names));
}

const UnknownSpacePtr& empty_unknown_space() {
  static const UnknownSpacePtr empty = std::make_shared<const UnknownSpace>();
  return empty;
}

bool same_space(const UnknownSpacePtr& a, const UnknownSpacePtr& b) {
  return a == b || *a == *b;
}

UnknownPoly UnknownPoly::constant(UnknownSpacePtr space, const Rational& value) {
  UnknownPoly p(std::move(space));
  p.add_term(MultiIndex(p.space_->size()), value);
  return p;
}

UnknownPoly UnknownPoly::variable(UnknownSpacePtr space, std::size_t index, std::uint32_t power) {
  UnknownPoly p(std::move(space));
  if (index >= p.space_->size()) throw UniverseMismatch("unknown index out of range");
  MultiIndex m(p.space_->size());
  m.set(index, power);
  p.add_term(m, Rational(1));
  return p;
}

UnknownPoly UnknownPoly::variable(UnknownSpacePtr space, const std::string& name, std::uint32_t power) {
  auto idx = space->index_of(name);
  if (!idx) throw UniverseMismatch("unknown '" + name + "' not in space");
  return variable(std::move(space), *idx, power);
}

bool UnknownPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
}

Rational UnknownPoly::constant_term() const {
  auto it = terms_.find(MultiIndex(space_->size()));
  return it == terms_.end() ? Rational(0) : it->second;
}

std::uint64_t UnknownPoly::degree() const {
  return terms_.empty() ? 0 : terms_.begin()->first.degree();
}

void UnknownPoly::add_term(const MultiIndex& mono, const Rational& coeff) {
  if (mono.size() != space_->size()) throw UniverseMismatch("monomial length does not match unknown space");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void UnknownPoly::check_same_space(const UnknownPoly& o) const {
  if (!same_space(space_, o.space_)) throw UniverseMismatch("unknown spaces differ");
}

UnknownPoly& UnknownPoly::operator+=(const UnknownPoly& o) {
  check_same_space(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

UnknownPoly& UnknownPoly::operator-=(const UnknownPoly& o) {
  check_same_space(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

UnknownPoly operator*(const UnknownPoly& a, const UnknownPoly& b) {
  a.check_same_space(b);
  UnknownPoly r(a.space_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma + mb, ca * cb);
  }
  return r;
}

UnknownPoly UnknownPoly::operator-() const { return scaled(Rational(-1)); }

UnknownPoly UnknownPoly::scaled(const Rational& r) const {
  UnknownPoly out(space_);
  if (r.is_zero()) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * r);
  return out;
}

UnknownPoly UnknownPoly::pow(unsigned e) const {
  UnknownPoly result = constant(space_, Rational(1));
  UnknownPoly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

UnknownPoly UnknownPoly::embed(const UnknownSpacePtr& target) const {
  if (same_space(space_, target)) {
    UnknownPoly r = *this;
    r.space_ = target;
    return r;
  }
  std::vector<std::size_t> map(space_->size());
  for (std::size_t i = 0; i < space_->size(); ++i) {
    auto idx = target->index_of(space_->name(i));
    if (!idx) throw UniverseMismatch("unknown '" + space_->name(i) + "' missing from target space");
    map[i] = *idx;
  }
  UnknownPoly r(target);
  for (const auto& [m, c] : terms_) {
    MultiIndex t(target->size());
    for (std::size_t i = 0; i < m.size(); ++i) t.set(map[i], m[i]);
    r.add_term(t, c);
  }
  return r;
}

std::complex<double> UnknownPoly::evaluate(std::span<const std::complex<double>> values) const {
  if (values.size() != space_->size()) throw UniverseMismatch("value count does not match unknown space");
  std::complex<double> sum = 0.0;
  for (const auto& [m, c] : terms_) {
    std::complex<double> t = c.to_double();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::uint32_t k = 0; k < m[i]; ++k) t *= values[i];
    }
    sum += t;
  }
  return sum;
}

Rational UnknownPoly::evaluate(std::span<const Rational> values) const {
  if (values.size() != space_->size()) throw UniverseMismatch("value count does not match unknown space");
  Rational sum;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) t *= values[i].pow(m[i]);
    }
    sum += t;
  }
  return sum;
}

std::string render_monomial(const MultiIndex& mono, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < mono.size(); ++i) {
    if (mono[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (mono[i] != 1) out += '^' + std::to_string(mono[i]);
  }
  return out;
}

std::string UnknownPoly::to_string() const {
  detail::SignedTermJoiner join;
  for (const auto& [m, c] : terms_) {
    join.add(c, render_monomial(m, space_->names()));
  }
  return join.str();
}

bool operator==(const UnknownPoly& a, const UnknownPoly& b) {
  return same_space(a.space_, b.space_) && a.terms_ == b.terms_;
}

}  // namespace homchar
