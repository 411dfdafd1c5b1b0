#include "homchar/verify.hpp"

#include <algorithm>
#include <memory>
#include <regex>
#include <set>

#include "homchar/errors.hpp"
#include "lexer.hpp"

namespace homchar {

using detail::Tok;
using detail::TokenCursor;

namespace {

struct Node {
  enum class Kind { Number, Symbol, Constant, Add, Sub, Mul, Div, Pow, Neg } kind;
  Rational value;
  SymbolId symbol;
  std::string name;
  unsigned exponent = 0;
  std::unique_ptr<Node> lhs, rhs;
  std::size_t line = 0, column = 0;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_node(Node::Kind k, const detail::Token& at) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->line = at.line;
  n->column = at.column;
  return n;
}

NodePtr binary(Node::Kind k, NodePtr a, NodePtr b, const detail::Token& at) {
  auto n = make_node(k, at);
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : cur_(detail::tokenize(text)) {}

  NodePtr parse() {
    auto e = expr();
    if (!cur_.at(Tok::End)) cur_.fail("unexpected " + detail::describe(cur_.peek()));
    return e;
  }

 private:
  NodePtr expr() {
    const auto start = cur_.peek();
    NodePtr e;
    if (cur_.accept(Tok::Minus)) {
      auto n = make_node(Node::Kind::Neg, start);
      n->lhs = term();
      e = std::move(n);
    } else {
      cur_.accept(Tok::Plus);
      e = term();
    }
    while (cur_.at(Tok::Plus) || cur_.at(Tok::Minus)) {
      const auto op = cur_.next();
      e = binary(op.kind == Tok::Plus ? Node::Kind::Add : Node::Kind::Sub, std::move(e), term(), op);
    }
    return e;
  }

  bool starts_factor() const { return cur_.at(Tok::Number) || cur_.at(Tok::Ident) || cur_.at(Tok::LParen); }

  NodePtr term() {
    auto e = unary();
    for (;;) {
      const auto op = cur_.peek();
      if (cur_.accept(Tok::Star)) {
        e = binary(Node::Kind::Mul, std::move(e), unary(), op);
      } else if (cur_.accept(Tok::Slash)) {
        e = binary(Node::Kind::Div, std::move(e), unary(), op);
      } else if (starts_factor()) {
        e = binary(Node::Kind::Mul, std::move(e), power(), op);
      } else {
        return e;
      }
    }
  }

  NodePtr unary() {
    const auto start = cur_.peek();
    if (cur_.accept(Tok::Minus)) {
      auto n = make_node(Node::Kind::Neg, start);
      n->lhs = unary();
      return n;
    }
    return power();
  }

  NodePtr power() {
    auto base = atom();
    const auto op = cur_.peek();
    if (cur_.accept(Tok::Caret)) {
      auto n = make_node(Node::Kind::Pow, op);
      n->lhs = std::move(base);
      n->exponent = detail::parse_nat(cur_.expect(Tok::Number, "exponent"));
      return n;
    }
    return base;
  }

  NodePtr atom() {
    const auto t = cur_.peek();
    if (cur_.accept(Tok::Number)) {
      auto n = make_node(Node::Kind::Number, t);
      n->value = Rational::parse(t.text);
      return n;
    }
    if (cur_.accept(Tok::LParen)) {
      auto e = expr();
      cur_.expect(Tok::RParen, "')'");
      return e;
    }
    if (cur_.accept(Tok::Ident)) return identifier(t);
    cur_.fail("expected a number, symbol or '(', found " + detail::describe(t));
  }

  NodePtr identifier(const detail::Token& t) {
    static const std::regex sym_re("(phi|a)([0-9]*)");
    std::smatch m;
    if (t.text == "i") {
      throw UnsupportedError("complex literal 'i' is not supported in exact verification (line " +
                             std::to_string(t.line) + ", column " + std::to_string(t.column) + ")");
    }
    if (t.text == "x" || t.text == "y" || t.text == "z") {
      throw ParseError("bare variable '" + t.text + "' is not a symbol; write phi1 for the identity homomorphism",
                       t.line, t.column);
    }
    if (std::regex_match(t.text, m, sym_re)) {
      int index = 1;
      if (m[2].length() > 0) {
        if (m[2].length() > 6) throw ParseError("symbol index too large", t.line, t.column);
        index = std::stoi(m[2]);
        if (index == 0) throw ParseError("symbol indices start at 1", t.line, t.column);
      }
      auto n = make_node(Node::Kind::Symbol, t);
      n->symbol = m[1] == "phi" ? hom(index) : logderiv(index);
      // Optional "(x)" argument as in the canonical rendering.
      if (cur_.at(Tok::LParen) && cur_.peek(1).kind == Tok::Ident && cur_.peek(1).text == "x" &&
          cur_.peek(2).kind == Tok::RParen) {
        cur_.next();
        cur_.next();
        cur_.next();
      }
      return n;
    }
    auto n = make_node(Node::Kind::Constant, t);
    n->name = t.text;
    return n;
  }

  TokenCursor cur_;
};

void collect(const Node& n, std::set<SymbolId>& syms, std::set<std::string>& consts) {
  if (n.kind == Node::Kind::Symbol) syms.insert(n.symbol);
  if (n.kind == Node::Kind::Constant) consts.insert(n.name);
  if (n.lhs) collect(*n.lhs, syms, consts);
  if (n.rhs) collect(*n.rhs, syms, consts);
}

SymPoly build(const Node& n, const SymbolSpacePtr& syms, const UnknownSpacePtr& unk) {
  switch (n.kind) {
    case Node::Kind::Number:
      return SymPoly::constant(syms, unk, n.value);
    case Node::Kind::Symbol:
      return SymPoly::symbol(syms, unk, n.symbol);
    case Node::Kind::Constant:
      return SymPoly::constant(syms, UnknownPoly::variable(unk, n.name));
    case Node::Kind::Add:
      return build(*n.lhs, syms, unk) + build(*n.rhs, syms, unk);
    case Node::Kind::Sub:
      return build(*n.lhs, syms, unk) - build(*n.rhs, syms, unk);
    case Node::Kind::Mul:
      return build(*n.lhs, syms, unk) * build(*n.rhs, syms, unk);
    case Node::Kind::Neg:
      return -build(*n.lhs, syms, unk);
    case Node::Kind::Pow:
      return poly_pow(build(*n.lhs, syms, unk), n.exponent);
    case Node::Kind::Div: {
      auto d = build(*n.rhs, syms, unk);
      bool rational_constant = d.terms().size() == 1 && d.terms().begin()->first.is_zero() &&
                               d.terms().begin()->second.is_constant();
      if (!rational_constant) {
        throw ParseError(d.is_zero() ? "division by zero" : "division is only allowed by nonzero rational constants",
                         n.line, n.column);
      }
      return build(*n.lhs, syms, unk).scaled(d.terms().begin()->second.constant_term().inverse());
    }
  }
  throw Error("unreachable");
}

}  // namespace

const SymbolSpacePtr& Candidate::symbols() const {
  if (rows.empty()) throw ValidationError("empty candidate");
  return rows.front().symbols();
}

const UnknownSpacePtr& Candidate::unknowns() const {
  if (rows.empty()) throw ValidationError("empty candidate");
  return rows.front().unknowns();
}

std::string Candidate::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) out += names[i] + " = " + rows[i].to_string() + "\n";
  return out;
}

SymPoly parse_candidate_expression(std::string_view text) {
  auto ast = ExprParser(text).parse();
  std::set<SymbolId> syms;
  std::set<std::string> consts;
  collect(*ast, syms, consts);
  return build(*ast, make_symbol_space({syms.begin(), syms.end()}), make_unknown_space({consts.begin(), consts.end()}));
}

Candidate make_candidate(std::vector<std::string> names, const std::vector<std::string>& expressions) {
  if (names.size() != expressions.size()) throw ValidationError("candidate names and expressions differ in count");
  std::vector<NodePtr> asts;
  std::set<SymbolId> syms;
  std::set<std::string> consts;
  for (const auto& e : expressions) {
    asts.push_back(ExprParser(e).parse());
    collect(*asts.back(), syms, consts);
  }
  auto sym_space = make_symbol_space({syms.begin(), syms.end()});
  auto unk_space = make_unknown_space({consts.begin(), consts.end()});
  Candidate cand;
  cand.names = std::move(names);
  for (const auto& a : asts) cand.rows.push_back(build(*a, sym_space, unk_space));
  return cand;
}

Candidate parse_candidate_file(std::string_view text, const Equation& eq) {
  std::vector<std::string> exprs(eq.size());
  std::vector<bool> seen(eq.size(), false);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eqpos = line.find('=');
    if (eqpos == std::string::npos) throw ParseError("expected 'name = expression'", line_no, 1);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string name = trim(line.substr(0, eqpos));
    std::string rhs = trim(line.substr(eqpos + 1));
    auto it = std::find(eq.names.begin(), eq.names.end(), name);
    if (it == eq.names.end()) {
      throw ValidationError("line " + std::to_string(line_no) + ": '" + name + "' is not a function of the equation");
    }
    auto idx = static_cast<std::size_t>(it - eq.names.begin());
    if (seen[idx]) throw ValidationError("line " + std::to_string(line_no) + ": '" + name + "' defined twice");
    if (rhs.empty()) throw ParseError("empty expression for '" + name + "'", line_no, eqpos + 2);
    try {
      ExprParser(rhs).parse();
    } catch (const ParseError& e) {
      throw ParseError(e.message() + " in definition of " + name, line_no, eqpos + 1 + e.column());
    }
    seen[idx] = true;
    exprs[idx] = rhs;
  }
  for (std::size_t i = 0; i < eq.size(); ++i) {
    if (!seen[i]) throw ValidationError("row count mismatch: no candidate for '" + eq.names[i] + "'");
  }
  return make_candidate(eq.names, exprs);
}

std::vector<SymPoly> equation_terms(const Equation& eq, const Candidate& cand) {
  if (cand.size() != eq.size()) throw ValidationError("row count mismatch between candidate and equation");
  auto scalars = eq.real_scalars();
  std::vector<SymPoly> out;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    const auto& row = eq.profile[i];
    out.push_back(poly_pow(substitute_power(cand.rows[i], kBaseX, row.p), row.q).scaled(scalars[i]));
  }
  return out;
}

SymPoly check_equation(const Equation& eq, const Candidate& cand) {
  auto terms = equation_terms(eq, cand);
  SymPoly total(cand.symbols(), cand.unknowns());
  for (const auto& t : terms) total += t;
  return total;
}

SymPoly check_pattern_identity(const Equation& eq, const Candidate& cand, const BlockPattern& pattern) {
  if (cand.size() != eq.size()) throw ValidationError("row count mismatch between candidate and equation");
  auto identity = evaluate_pattern(eq, pattern);

  std::vector<SymbolId> target_syms;
  for (const auto& s : cand.symbols()->symbols()) {
    for (int v : {kBaseX, kBaseY, kBaseZ}) target_syms.push_back({s.kind, s.index, v});
  }
  auto target = make_symbol_space(std::move(target_syms));
  const auto& unk = cand.unknowns();

  std::vector<SymPoly> at_one;
  for (const auto& r : cand.rows) at_one.push_back(eval_at_one(r, kBaseX).embed(target, unk));

  SymPoly total(target, unk);
  for (const auto& [key, coeff] : identity.terms()) {
    SymPoly prod = SymPoly::constant(target, unk, coeff);
    if (key.ones > 0) prod = prod * poly_pow(at_one[key.row], key.ones);
    for (const auto& arg : key.args) {
      std::vector<std::pair<int, unsigned>> mono{{kBaseX, arg[0]}, {kBaseY, arg[1]}, {kBaseZ, arg[2]}};
      prod = prod * substitute_monomial(cand.rows[key.row], kBaseX, mono, target);
    }
    total += prod;
  }
  return total;
}

std::string RowClassification::to_string() const {
  switch (shape) {
    case RowShape::HomCombination:
      return "HomCombination";
    case RowShape::PolynomialTimesHom:
      return "PolynomialTimesHom(deg " + std::to_string(logderiv_degree) + ")";
    case RowShape::Mixed:
      return "Mixed";
  }
  return "Mixed";
}

RowClassification classify_row(const SymPoly& row) {
  RowClassification out;
  out.logderiv_degree = row.logderiv_degree();
  const auto& space = *row.symbols();
  bool all_single_hom = true;
  std::set<std::size_t> homs_used;
  for (const auto& [m, c] : row.terms()) {
    std::size_t hom_count = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0 || space.at(i).kind != SymbolKind::Hom) continue;
      hom_count += m[i];
      homs_used.insert(i);
    }
    if (hom_count != 1) all_single_hom = false;
  }
  if (!all_single_hom) {
    out.shape = RowShape::Mixed;
  } else if (out.logderiv_degree == 0) {
    out.shape = RowShape::HomCombination;
  } else {
    out.shape = homs_used.size() == 1 ? RowShape::PolynomialTimesHom : RowShape::Mixed;
  }
  return out;
}

std::vector<RowClassification> classify_candidate(const Candidate& cand) {
  std::vector<RowClassification> out;
  for (const auto& r : cand.rows) out.push_back(classify_row(r));
  return out;
}

}  // namespace homchar
