#include "homchar/sym_poly.hpp"

#include <algorithm>

#include "homchar/errors.hpp"
#include "render_util.hpp"

namespace homchar {

namespace {

// Above this many multinomial compositions poly_pow switches to repeated squaring.
constexpr double kMaxCompositions = 200000.0;

double composition_count(unsigned e, std::size_t m) {
  // C(e + m - 1, m - 1), computed in floating point only as a size estimate.
  double r = 1.0;
  for (std::size_t i = 1; i < m; ++i) {
    r = r * static_cast<double>(e + i) / static_cast<double>(i);
    if (r > kMaxCompositions * 10) break;
  }
  return r;
}

}  // namespace

std::string base_var_name(int base_var) {
  switch (base_var) {
    case kBaseX: return "x";
    case kBaseY: return "y";
    case kBaseZ: return "z";
    default: return "v" + std::to_string(base_var);
  }
}

std::string SymbolId::to_string() const {
  return (kind == SymbolKind::Hom ? "phi" : "a") + std::to_string(index) + "(" +
         base_var_name(base_var) + ")";
}

SymbolSpace::SymbolSpace(std::vector<SymbolId> symbols) : symbols_(std::move(symbols)) {
  std::sort(symbols_.begin(), symbols_.end());
  symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
}

std::optional<std::size_t> SymbolSpace::position(const SymbolId& s) const {
  auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
  if (it == symbols_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - symbols_.begin());
}

SymbolSpacePtr make_symbol_space(std::vector<SymbolId> symbols) {
  return std::make_shared<const SymbolSpace>(std::move(symbols));
}

SymbolSpacePtr merge_symbol_spaces(const SymbolSpace& a, const SymbolSpace& b) {
  std::vector<SymbolId> all = a.symbols();
  all.insert(all.end(), b.symbols().begin(), b.symbols().end());
  return make_symbol_space(std::move(all));
}

namespace {
bool same_symbols(const SymbolSpacePtr& a, const SymbolSpacePtr& b) { return a == b || *a == *b; }
}  // namespace

SymPoly SymPoly::constant(SymbolSpacePtr symbols, UnknownSpacePtr unknowns, const Rational& c) {
  auto coeff = UnknownPoly::constant(unknowns, c);
  return constant(std::move(symbols), coeff);
}

SymPoly SymPoly::constant(SymbolSpacePtr symbols, const UnknownPoly& c) {
  SymPoly p(std::move(symbols), c.space());
  p.add_term(MultiIndex(p.symbols_->size()), c);
  return p;
}

SymPoly SymPoly::symbol(SymbolSpacePtr symbols, UnknownSpacePtr unknowns, const SymbolId& s,
                        std::uint32_t power) {
  auto pos = symbols->position(s);
  if (!pos) throw UniverseMismatch("symbol " + s.to_string() + " not declared in universe");
  SymPoly p(std::move(symbols), std::move(unknowns));
  MultiIndex m(p.symbols_->size());
  m.set(*pos, power);
  p.add_term(m, UnknownPoly::constant(p.unknowns_, Rational(1)));
  return p;
}

SymPoly SymPoly::monomial(SymbolSpacePtr symbols, const MultiIndex& mono, const UnknownPoly& c) {
  SymPoly p(std::move(symbols), c.space());
  p.add_term(mono, c);
  return p;
}

void SymPoly::add_term(const MultiIndex& mono, const UnknownPoly& coeff) {
  if (mono.size() != symbols_->size()) throw UniverseMismatch("monomial length does not match symbol universe");
  if (!same_space(coeff.space(), unknowns_)) throw UniverseMismatch("coefficient unknown space differs");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void SymPoly::check_same_universe(const SymPoly& o) const {
  if (!same_symbols(symbols_, o.symbols_)) throw UniverseMismatch("symbol universes differ");
  if (!same_space(unknowns_, o.unknowns_)) throw UniverseMismatch("unknown spaces differ");
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
  check_same_universe(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
  check_same_universe(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
  a.check_same_universe(b);
  SymPoly r(a.symbols_, a.unknowns_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma + mb, ca * cb);
  }
  return r;
}

SymPoly SymPoly::scaled(const Rational& r) const {
  SymPoly out(symbols_, unknowns_);
  if (r.is_zero()) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c.scaled(r));
  return out;
}

SymPoly SymPoly::scaled(const UnknownPoly& r) const {
  SymPoly out(symbols_, unknowns_);
  for (const auto& [m, c] : terms_) out.add_term(m, c * r);
  return out;
}

SymPoly SymPoly::embed(const SymbolSpacePtr& symbols, const UnknownSpacePtr& unknowns) const {
  std::vector<std::size_t> map(symbols_->size());
  for (std::size_t i = 0; i < symbols_->size(); ++i) {
    auto pos = symbols->position(symbols_->at(i));
    if (!pos) throw UniverseMismatch("symbol " + symbols_->at(i).to_string() + " missing from target universe");
    map[i] = *pos;
  }
  SymPoly r(symbols, unknowns);
  for (const auto& [m, c] : terms_) {
    MultiIndex t(symbols->size());
    for (std::size_t i = 0; i < m.size(); ++i) t.set(map[i], m[i]);
    r.add_term(t, c.embed(unknowns));
  }
  return r;
}

std::uint64_t SymPoly::logderiv_degree() const {
  std::uint64_t best = 0;
  for (const auto& [m, c] : terms_) {
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (symbols_->at(i).kind == SymbolKind::LogDeriv) d += m[i];
    }
    best = std::max(best, d);
  }
  return best;
}

std::string render_symbol_monomial(const MultiIndex& mono, const SymbolSpace& space) {
  std::string out;
  for (std::size_t i = 0; i < mono.size(); ++i) {
    if (mono[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += space.at(i).to_string();
    if (mono[i] != 1) out += '^' + std::to_string(mono[i]);
  }
  return out;
}

std::string SymPoly::to_string() const {
  detail::SignedTermJoiner join;
  for (const auto& [m, c] : terms_) {
    std::string body = render_symbol_monomial(m, *symbols_);
    if (c.is_constant()) {
      join.add(c.constant_term(), body);
    } else if (c.terms().size() == 1) {
      const auto& [um, uc] = *c.terms().begin();
      std::string ubody = render_monomial(um, c.space()->names());
      join.add(uc, body.empty() ? ubody : ubody + "*" + body);
    } else {
      std::string grouped = "(" + c.to_string() + ")";
      join.add_raw(false, body.empty() ? grouped : grouped + "*" + body);
    }
  }
  return join.str();
}

bool operator==(const SymPoly& a, const SymPoly& b) {
  return same_symbols(a.symbols_, b.symbols_) && same_space(a.unknowns_, b.unknowns_) &&
         a.terms_ == b.terms_;
}

SymPoly poly_arith(const SymPoly& p, const SymPoly& q, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return p + q;
    case ArithOp::Sub: return p - q;
    case ArithOp::Mul: return p * q;
  }
  throw UnsupportedError("unknown arithmetic op");
}

namespace {

SymPoly pow_by_squaring(const SymPoly& p, unsigned e) {
  SymPoly result = SymPoly::constant(p.symbols(), p.unknowns(), Rational(1));
  SymPoly base = p;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

struct MultinomialExpander {
  const std::vector<std::pair<MultiIndex, UnknownPoly>>& terms;
  unsigned e;
  std::vector<std::vector<UnknownPoly>> coeff_pow;  // coeff_pow[i][k] = c_i^k
  std::vector<mpz_class> fact;
  SymPoly& out;

  void run(std::size_t idx, unsigned remaining, const MultiIndex& mono, const UnknownPoly& coeff,
           const mpz_class& denom) {
    if (idx + 1 == terms.size()) {
      unsigned k = remaining;
      MultiIndex m = mono + terms[idx].first.scaled(k);
      UnknownPoly c = coeff * coeff_pow[idx][k];
      Rational multinomial(fact[e], denom * fact[k]);
      out.add_term(m, c.scaled(multinomial));
      return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
      run(idx + 1, remaining - k, mono + terms[idx].first.scaled(k), coeff * coeff_pow[idx][k],
          denom * fact[k]);
    }
  }
};

}  // namespace

SymPoly poly_pow(const SymPoly& p, unsigned e) {
  if (e == 0) return SymPoly::constant(p.symbols(), p.unknowns(), Rational(1));
  if (p.is_zero()) return p;
  auto terms = collect_coefficients(p);
  if (composition_count(e, terms.size()) > kMaxCompositions) return pow_by_squaring(p, e);

  SymPoly out(p.symbols(), p.unknowns());
  std::vector<std::vector<UnknownPoly>> cp(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    cp[i].push_back(UnknownPoly::constant(p.unknowns(), Rational(1)));
    for (unsigned k = 1; k <= e; ++k) cp[i].push_back(cp[i].back() * terms[i].second);
  }
  std::vector<mpz_class> fact;
  for (unsigned k = 0; k <= e; ++k) fact.push_back(factorial(k));
  MultinomialExpander ex{terms, e, std::move(cp), std::move(fact), out};
  ex.run(0, e, MultiIndex(p.symbols()->size()), UnknownPoly::constant(p.unknowns(), Rational(1)),
         mpz_class(1));
  return out;
}

SymPoly substitute_power(const SymPoly& p, int base_var, unsigned k) {
  if (k == 0) throw ValidationError("substitute_power requires k >= 1");
  const auto& space = *p.symbols();
  SymPoly out(p.symbols(), p.unknowns());
  for (const auto& [m, c] : p.terms()) {
    MultiIndex nm = m;
    unsigned logderiv_exp = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto& s = space.at(i);
      if (s.base_var != base_var || m[i] == 0) continue;
      if (s.kind == SymbolKind::Hom) {
        nm.set(i, m[i] * k);
      } else {
        logderiv_exp += m[i];
      }
    }
    out.add_term(nm, c.scaled(Rational(static_cast<long>(k)).pow(logderiv_exp)));
  }
  return out;
}

SymPoly substitute_monomial(const SymPoly& p, int base_var,
                            const std::vector<std::pair<int, unsigned>>& monomial,
                            const SymbolSpacePtr& target) {
  const auto& space = *p.symbols();
  SymPoly out(target, p.unknowns());
  auto unit = UnknownPoly::constant(p.unknowns(), Rational(1));
  for (const auto& [m, c] : p.terms()) {
    MultiIndex kept(target->size());
    SymPoly term = SymPoly::constant(target, unit);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      const auto& s = space.at(i);
      if (s.base_var != base_var) {
        auto pos = target->position(s);
        if (!pos) throw UniverseMismatch("symbol " + s.to_string() + " missing from target universe");
        kept.set(*pos, kept[*pos] + m[i]);
        continue;
      }
      if (s.kind == SymbolKind::Hom) {
        for (const auto& [v, ev] : monomial) {
          if (ev == 0) continue;
          SymbolId img{SymbolKind::Hom, s.index, v};
          auto pos = target->position(img);
          if (!pos) throw UniverseMismatch("symbol " + img.to_string() + " missing from target universe");
          kept.set(*pos, kept[*pos] + ev * m[i]);
        }
      } else {
        SymPoly lin(target, p.unknowns());
        for (const auto& [v, ev] : monomial) {
          if (ev == 0) continue;
          lin += SymPoly::symbol(target, p.unknowns(), SymbolId{SymbolKind::LogDeriv, s.index, v})
                     .scaled(Rational(static_cast<long>(ev)));
        }
        term = term * poly_pow(lin, m[i]);
      }
    }
    out += term * SymPoly::monomial(target, kept, c);
  }
  return out;
}

SymPoly eval_at_one(const SymPoly& p, int base_var) {
  const auto& space = *p.symbols();
  SymPoly out(p.symbols(), p.unknowns());
  for (const auto& [m, c] : p.terms()) {
    MultiIndex nm = m;
    bool vanishes = false;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto& s = space.at(i);
      if (s.base_var != base_var || m[i] == 0) continue;
      if (s.kind == SymbolKind::LogDeriv) {
        vanishes = true;
        break;
      }
      nm.set(i, 0);
    }
    if (!vanishes) out.add_term(nm, c);
  }
  return out;
}

std::vector<std::pair<MultiIndex, UnknownPoly>> collect_coefficients(const SymPoly& p) {
  return {p.terms().begin(), p.terms().end()};
}

}  // namespace homchar
