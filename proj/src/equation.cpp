#include "homchar/equation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "homchar/errors.hpp"
#include "lexer.hpp"

namespace homchar {

using detail::Tok;
using detail::TokenCursor;

std::string ComplexRational::to_string() const {
  if (is_real()) return re.to_string();
  std::string out = "(";
  if (!re.is_zero()) out += re.to_string();
  if (im.sign() < 0) {
    out += "-";
  } else if (!re.is_zero()) {
    out += "+";
  }
  Rational mag = im.abs();
  if (!mag.is_one()) out += mag.to_string();
  return out + "i)";
}

namespace {

Rational parse_rational(TokenCursor& cur) {
  const auto& num = cur.expect(Tok::Number, "number");
  Rational r = Rational::parse(num.text);
  if (cur.accept(Tok::Slash)) {
    const auto& den = cur.expect(Tok::Number, "denominator");
    if (den.text.find_first_not_of('0') == std::string::npos) {
      throw ParseError("zero denominator", den.line, den.column);
    }
    r /= Rational::parse(den.text);
  }
  return r;
}

bool at_imag_unit(const TokenCursor& cur) {
  return cur.peek().kind == Tok::Ident && cur.peek().text == "i";
}

// Inside parentheses: [sign] (rational ['i'] | 'i') [(+|-) (rational 'i' | 'i')]
ComplexRational parse_complex_body(TokenCursor& cur) {
  ComplexRational z{Rational(0), Rational(0)};
  auto part = [&](bool negative, bool& imaginary) {
    Rational r(1);
    if (at_imag_unit(cur)) {
      cur.next();
      imaginary = true;
    } else {
      r = parse_rational(cur);
      imaginary = false;
      if (at_imag_unit(cur)) {
        cur.next();
        imaginary = true;
      }
    }
    return negative ? -r : r;
  };
  bool neg = false;
  if (cur.accept(Tok::Minus)) {
    neg = true;
  } else {
    cur.accept(Tok::Plus);
  }
  bool imag = false;
  Rational first = part(neg, imag);
  (imag ? z.im : z.re) = first;
  if (!imag && (cur.at(Tok::Plus) || cur.at(Tok::Minus))) {
    bool neg2 = cur.next().kind == Tok::Minus;
    bool imag2 = false;
    Rational second = part(neg2, imag2);
    if (!imag2) cur.fail("expected imaginary part ending in 'i'");
    z.im = second;
  }
  return z;
}

ComplexRational parse_scalar(TokenCursor& cur) {
  if (cur.accept(Tok::LParen)) {
    auto z = parse_complex_body(cur);
    cur.expect(Tok::RParen, "')'");
    return z;
  }
  return ComplexRational{parse_rational(cur), Rational(0)};
}

EquationTerm parse_term(TokenCursor& cur) {
  EquationTerm term;
  if (cur.at(Tok::Number) || cur.at(Tok::LParen)) {
    term.scalar = parse_scalar(cur);
    cur.expect(Tok::Star, "'*' after scalar");
  }
  const auto& name = cur.expect(Tok::Ident, "function name");
  if (name.text == "x") throw ParseError("syntax error: 'x' is reserved for the argument", name.line, name.column);
  term.function_name = name.text;
  if (cur.accept(Tok::Caret)) {
    const auto& t = cur.expect(Tok::Number, "outer exponent");
    term.q = detail::parse_nat(t);
    if (term.q == 0) throw ParseError("outer exponent must be positive", t.line, t.column);
  }
  cur.expect(Tok::LParen, "'('");
  const auto& arg = cur.expect(Tok::Ident, "'x'");
  if (arg.text != "x") throw ParseError("syntax error: argument must be 'x'", arg.line, arg.column);
  if (cur.accept(Tok::Caret)) {
    const auto& t = cur.expect(Tok::Number, "inner exponent");
    term.p = detail::parse_nat(t);
    if (term.p == 0) throw ParseError("inner exponent must be positive", t.line, t.column);
  }
  cur.expect(Tok::RParen, "')'");
  return term;
}

void apply_sign(EquationTerm& term, bool negative) {
  if (!negative) return;
  auto s = term.multiplier();
  term.scalar = ComplexRational{-s.re, -s.im};
}

}  // namespace

std::vector<EquationTerm> parse_equation(std::string_view text) {
  TokenCursor cur(detail::tokenize(text));
  if (cur.at(Tok::End)) cur.fail("empty equation");
  std::vector<EquationTerm> terms;
  bool negative = false;
  if (cur.accept(Tok::Minus)) {
    negative = true;
  } else {
    cur.accept(Tok::Plus);
  }
  auto first = parse_term(cur);
  apply_sign(first, negative);
  terms.push_back(std::move(first));
  while (cur.at(Tok::Plus) || cur.at(Tok::Minus)) {
    const auto op = cur.next();
    negative = op.kind == Tok::Minus;
    if (!cur.at(Tok::Number) && !cur.at(Tok::LParen) && !cur.at(Tok::Ident)) {
      throw ParseError("syntax error: '" + op.text + "' is not followed by a term", op.line, op.column);
    }
    auto t = parse_term(cur);
    apply_sign(t, negative);
    terms.push_back(std::move(t));
  }
  cur.expect(Tok::Equals, "'=' or another term");
  const auto& rhs = cur.peek();
  if (rhs.kind == Tok::End) cur.fail("expected right-hand side");
  if (rhs.kind == Tok::Number && rhs.text.find_first_not_of('0') == std::string::npos) {
    cur.next();
    cur.expect(Tok::End, "end of input");
    return terms;
  }
  throw UnsupportedError("unsupported form: right-hand side must be the literal 0 (line " +
                         std::to_string(rhs.line) + ", column " + std::to_string(rhs.column) + ")");
}

std::string print_equation(std::span<const EquationTerm> terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    std::string scalar;
    bool negative = false;
    if (t.scalar) {
      const auto& s = *t.scalar;
      if (s.is_real() && s.re == Rational(-1)) {
        negative = true;
      } else if (s.is_real() && s.re.sign() < 0) {
        negative = true;
        scalar = (-s.re).to_string() + "*";
      } else if (s.is_real()) {
        scalar = s.re.to_string() + "*";
      } else {
        scalar = s.to_string() + "*";
      }
    }
    if (i == 0) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += scalar + t.function_name;
    if (t.q != 1) out += "^" + std::to_string(t.q);
    out += "(x";
    if (t.p != 1) out += "^" + std::to_string(t.p);
    out += ")";
  }
  return out + " = 0";
}

ValidationReport check_condition_C(std::span<const ExponentRow> rows) {
  ValidationReport r;
  std::set<unsigned> ps, qs, prods;
  for (const auto& row : rows) {
    ps.insert(row.p);
    qs.insert(row.q);
    prods.insert(row.p * row.q);
    r.products.push_back(row.p * row.q);
  }
  r.distinct_p = ps.size() == rows.size();
  r.distinct_q = qs.size() == rows.size();
  r.common_product = !rows.empty() && prods.size() == 1;
  if (r.common_product) r.N = *prods.begin();
  if (rows.empty()) r.messages.push_back("no terms");
  if (!r.distinct_p) r.messages.push_back("inner exponents p are not pairwise distinct");
  if (!r.distinct_q) r.messages.push_back("outer exponents q are not pairwise distinct");
  if (!r.common_product && !rows.empty()) r.messages.push_back("products p*q differ");
  if (r.N && *r.N <= 1) r.messages.push_back("common degree N must exceed 1");
  r.valid = r.distinct_p && r.distinct_q && r.common_product && r.N && *r.N > 1;
  return r;
}

ExponentProfile ExponentProfile::from_rows(std::vector<ExponentRow> rows) {
  auto report = check_condition_C(rows);
  if (!report.valid) {
    std::string msg = "exponent profile violates the admissibility condition:";
    for (const auto& m : report.messages) msg += " " + m + ";";
    throw ValidationError(msg);
  }
  std::sort(rows.begin(), rows.end(), [](const ExponentRow& a, const ExponentRow& b) { return a.q < b.q; });
  ExponentProfile prof;
  prof.rows_ = std::move(rows);
  prof.n_ = *report.N;
  return prof;
}

std::string ExponentProfile::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i) out += ",";
    out += "(" + std::to_string(rows_[i].p) + "," + std::to_string(rows_[i].q) + ")";
  }
  return out + "]";
}

std::vector<ExponentRow> parse_profile_rows(std::string_view text) {
  TokenCursor cur(detail::tokenize(text));
  std::vector<ExponentRow> rows;
  cur.expect(Tok::LBracket, "'['");
  if (!cur.at(Tok::RBracket)) {
    do {
      cur.expect(Tok::LParen, "'('");
      ExponentRow r;
      r.p = detail::parse_nat(cur.expect(Tok::Number, "p"));
      cur.expect(Tok::Comma, "','");
      r.q = detail::parse_nat(cur.expect(Tok::Number, "q"));
      cur.expect(Tok::RParen, "')'");
      if (r.p == 0 || r.q == 0) cur.fail("exponents must be positive");
      rows.push_back(r);
    } while (cur.accept(Tok::Comma));
  }
  cur.expect(Tok::RBracket, "']'");
  cur.expect(Tok::End, "end of input");
  return rows;
}

Equation Equation::from_profile(const ExponentProfile& profile) {
  Equation eq{profile, {}, {}};
  for (std::size_t i = 0; i < profile.size(); ++i) {
    eq.names.push_back("f" + std::to_string(i + 1));
    eq.scalars.push_back({Rational(1), Rational(0)});
  }
  return eq;
}

std::vector<Rational> Equation::real_scalars() const {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (!scalars[i].is_real()) {
      throw UnsupportedError("term '" + names[i] + "' has non-real multiplier " + scalars[i].to_string() +
                             "; exact layers work over Q");
    }
    out.push_back(scalars[i].re);
  }
  return out;
}

std::vector<EquationTerm> Equation::terms() const {
  std::vector<EquationTerm> out;
  for (std::size_t i = 0; i < size(); ++i) {
    EquationTerm t{names[i], profile[i].q, profile[i].p, std::nullopt};
    if (!(scalars[i] == ComplexRational{Rational(1), Rational(0)})) t.scalar = scalars[i];
    out.push_back(std::move(t));
  }
  return out;
}

Equation make_equation(std::span<const EquationTerm> terms) {
  std::set<std::string> seen;
  std::vector<ExponentRow> rows;
  for (const auto& t : terms) {
    if (!seen.insert(t.function_name).second) {
      throw ValidationError("function '" + t.function_name + "' appears in more than one term");
    }
    rows.push_back({t.p, t.q});
  }
  auto profile = ExponentProfile::from_rows(rows);
  Equation eq{profile, {}, {}};
  // Rows are sorted by q, and q is distinct, so each row has exactly one source term.
  for (const auto& row : profile.rows()) {
    auto it = std::find_if(terms.begin(), terms.end(), [&](const EquationTerm& t) { return t.q == row.q; });
    eq.names.push_back(it->function_name);
    eq.scalars.push_back(it->multiplier());
  }
  return eq;
}

std::vector<DegreeGroup> degree_split(std::span<const EquationTerm> terms) {
  std::map<unsigned, std::vector<EquationTerm>> groups;
  for (const auto& t : terms) groups[t.degree()].push_back(t);
  std::vector<DegreeGroup> out;
  for (auto& [n, ts] : groups) out.push_back({n, std::move(ts), n == 1});
  return out;
}

bool real_even_note(const ExponentProfile& profile) {
  return std::all_of(profile.rows().begin(), profile.rows().end(),
                     [](const ExponentRow& r) { return r.q % 2 == 0; });
}

}  // namespace homchar
