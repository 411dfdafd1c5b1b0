#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "homchar/equation.hpp"
#include "homchar/sym_poly.hpp"
#include "homchar/symmetrize.hpp"

namespace homchar {

/// Concrete candidate solution: one SymPoly per equation row, all over one
/// shared universe of x-based symbols and named constants.
struct Candidate {
  std::vector<std::string> names;
  std::vector<SymPoly> rows;

  std::size_t size() const { return rows.size(); }
  const SymbolSpacePtr& symbols() const;
  const UnknownSpacePtr& unknowns() const;
  /// One "name = expression" line per row.
  std::string to_string() const;
};

/// Parses a candidate expression:
///   phi, phi<j>  homomorphism symbols (phi = phi1), optionally written phi1(x)
///   a, a<r>      logarithmic-derivative symbols, optionally written a1(x)
///   integers, + - * / ^, parentheses, juxtaposition as multiplication
///   any other identifier is a named constant.
/// Division is only by nonzero rational constants. The imaginary unit i and
/// the bare variables x, y, z are rejected.
SymPoly parse_candidate_expression(std::string_view text);

/// Builds a candidate from per-row expressions, merging their universes.
Candidate make_candidate(std::vector<std::string> names, const std::vector<std::string>& expressions);

/// "name = expression" per line, '#' starts a comment. Every row of `eq`
/// must be defined exactly once; rows come back in equation order.
Candidate parse_candidate_file(std::string_view text, const Equation& eq);

/// Per-row expansions s_i * cand_i(x^{p_i})^{q_i}.
std::vector<SymPoly> equation_terms(const Equation& eq, const Candidate& cand);

/// Sum of equation_terms; zero iff the candidate satisfies the equation
/// under the independence of the symbols.
SymPoly check_equation(const Equation& eq, const Candidate& cand);

/// Substitutes the candidate into evaluate_pattern(eq, pattern). The result
/// lives over x-, y- and z-copies of the candidate's symbols.
SymPoly check_pattern_identity(const Equation& eq, const Candidate& cand, const BlockPattern& pattern);

enum class RowShape {
  HomCombination,      // sum of const * phi_j
  PolynomialTimesHom,  // (polynomial in a_r) * phi_j
  Mixed,
};

struct RowClassification {
  RowShape shape = RowShape::Mixed;
  std::uint64_t logderiv_degree = 0;

  /// "HomCombination", "PolynomialTimesHom(deg 2)", "Mixed"
  std::string to_string() const;
};

RowClassification classify_row(const SymPoly& row);
std::vector<RowClassification> classify_candidate(const Candidate& cand);

}  // namespace homchar
