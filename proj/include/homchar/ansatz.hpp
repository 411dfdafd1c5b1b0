#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "homchar/equation.hpp"
#include "homchar/sym_poly.hpp"

namespace homchar {

/// Name of the ansatz coefficient c_{i,j} (1-based): "c2_1".
std::string ansatz_unknown(std::size_t row, std::size_t hom);

/// Sum_i s_i * (sum_j c_{i,j} phi_j(x)^{p_i})^{q_i} over k homomorphism
/// symbols. Rows are expanded in parallel and summed in row order.
SymPoly expand_ansatz(const Equation& eq, unsigned k);
/// Serial reference for expand_ansatz.
SymPoly expand_ansatz_serial(const Equation& eq, unsigned k);

struct Constraint {
  MultiIndex monomial;
  UnknownPoly poly;  // must vanish
};

struct ConstraintSystem {
  SymbolSpacePtr symbols;
  UnknownSpacePtr unknowns;
  std::vector<Constraint> constraints;

  /// One line per constraint: "phi1(x)^4: c3_1^4 + c2_1^2 + c1_1 = 0".
  std::string to_string() const;
};

/// One vanishing condition per monomial of expand_ansatz (coefficients of
/// distinct homomorphism monomials are independent).
ConstraintSystem extract_constraints(const Equation& eq, unsigned k);

/// A block decomposition of the term indices with one homomorphism per block.
struct PartitionFamily {
  /// 1-based row indices; when shared_first, row 1 is listed in every block.
  std::vector<std::vector<unsigned>> blocks;
  bool shared_first = false;
  UnknownSpacePtr unknowns;  // "c<i>" per row, "c1_<j>" for a shared first row
  std::vector<UnknownPoly> block_constraints;
  bool irreducible = false;  // single block

  /// "{1,2}|{3,4}"
  std::string label() const;
};

/// All families: set partitions of {1..n} into 1..max(1,n-1) blocks, with
/// row 1 shared across blocks when q_1 = 1. Ordered by block count, then
/// lexicographically on the sorted blocks.
std::vector<PartitionFamily> solution_families(const Equation& eq);

/// All roots c of  w_free * c^q = -sum_{i != free} w_i * fixed_i^{q_i},
/// sorted by principal argument. A zero right-hand side yields {0}.
/// `weights` defaults to all ones.
std::vector<std::complex<double>> solve_block_constraint(std::span<const unsigned> q_exponents,
                                                         std::span<const std::complex<double>> fixed,
                                                         std::size_t free_index,
                                                         std::span<const std::complex<double>> weights = {});

struct FamilyCheckOptions {
  unsigned samples = 16;
  std::uint64_t seed = 42;
  double constraint_tolerance = 1e-9;
  double sample_tolerance = 1e-8;
};

struct FamilyVerdict {
  bool holds = false;
  std::vector<double> block_residuals;
  double max_sample_residual = 0.0;
};

using FamilyAssignment = std::map<std::string, std::complex<double>>;

/// Checks every block constraint and the sampled substitution of
/// f_i = c_i * phi_{block(i)} into the expanded ansatz.
FamilyVerdict check_family(const Equation& eq, const PartitionFamily& family, const FamilyAssignment& values,
                           const FamilyCheckOptions& options = {});
/// Serial reference for the sampled part of check_family.
FamilyVerdict check_family_serial(const Equation& eq, const PartitionFamily& family,
                                  const FamilyAssignment& values, const FamilyCheckOptions& options = {});

/// Evaluates a polynomial whose symbols are phi_1(x)..phi_k(x) at complex
/// symbol values, with the coefficient unknowns bound to `unknown_values`.
std::complex<double> evaluate_numeric(const SymPoly& p, std::span<const std::complex<double>> symbol_values,
                                      std::span<const std::complex<double>> unknown_values);

}  // namespace homchar
