#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "homchar/ansatz.hpp"
#include "homchar/errors.hpp"

namespace homchar {
namespace {

using cd = std::complex<double>;

Equation parse(const char* text) { return make_equation(parse_equation(text)); }

Equation three_term() { return parse("f(x^4) + g^2(x^2) + h^4(x) = 0"); }
Equation four_term() { return parse("f1^2(x^6) + f2^3(x^4) + f3^4(x^3) + f4^6(x^2) = 0"); }

PartitionFamily find_family(const std::vector<PartitionFamily>& fams, const std::string& label) {
  for (const auto& f : fams) {
    if (f.label() == label) return f;
  }
  throw std::runtime_error("no family " + label);
}

// Direct evaluation of sum_i s_i (sum_j c_ij phi_j^{p_i})^{q_i}.
cd direct_ansatz(const Equation& eq, unsigned k, const std::vector<cd>& phi, const std::vector<cd>& c) {
  auto scalars = eq.real_scalars();
  cd total = 0.0;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    cd inner = 0.0;
    for (unsigned j = 0; j < k; ++j) inner += c[i * k + j] * std::pow(phi[j], static_cast<int>(eq.profile[i].p));
    total += scalars[i].to_double() * std::pow(inner, static_cast<int>(eq.profile[i].q));
  }
  return total;
}

TEST(Ansatz, UnknownNames) {
  EXPECT_EQ(ansatz_unknown(2, 1), "c2_1");
  EXPECT_EQ(ansatz_unknown(10, 3), "c10_3");
}

TEST(Ansatz, ZeroHomomorphismsRejected) {
  EXPECT_THROW(expand_ansatz(three_term(), 0), ValidationError);
  EXPECT_THROW(extract_constraints(three_term(), 0), ValidationError);
}

TEST(Ansatz, ExpansionMatchesDirectEvaluation) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& eq : {three_term(), four_term(), parse("f(x^2) - 3*g^2(x) = 0")}) {
    for (unsigned k = 1; k <= 3; ++k) {
      auto poly = expand_ansatz(eq, k);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<cd> phi(k), c(eq.size() * k);
        for (auto& v : phi) v = cd(u(rng), u(rng));
        for (auto& v : c) v = cd(u(rng), u(rng));
        cd expected = direct_ansatz(eq, k, phi, c);
        cd got = evaluate_numeric(poly, phi, c);
        EXPECT_LT(std::abs(got - expected), 1e-9 * (1.0 + std::abs(expected)));
      }
    }
  }
}

TEST(Ansatz, ParallelMatchesSerial) {
  for (unsigned k = 1; k <= 3; ++k) EXPECT_EQ(expand_ansatz(four_term(), k), expand_ansatz_serial(four_term(), k));
}

TEST(Constraints, SingleHomomorphismGivesOneConstraint) {
  auto sys = extract_constraints(four_term(), 1);
  ASSERT_EQ(sys.constraints.size(), 1u);
  EXPECT_EQ(sys.to_string(), "phi1(x)^12: c4_1^6 + c3_1^4 + c2_1^3 + c1_1^2 = 0\n");
}

TEST(Constraints, ThreeTermExampleWithTwoHomomorphisms) {
  auto sys = extract_constraints(three_term(), 2);
  EXPECT_EQ(sys.to_string(),
            "phi1(x)^4: c3_1^4 + c2_1^2 + c1_1 = 0\n"
            "phi1(x)^3*phi2(x): 4*c3_1^3*c3_2 = 0\n"
            "phi1(x)^2*phi2(x)^2: 6*c3_1^2*c3_2^2 + 2*c2_1*c2_2 = 0\n"
            "phi1(x)*phi2(x)^3: 4*c3_1*c3_2^3 = 0\n"
            "phi2(x)^4: c3_2^4 + c2_2^2 + c1_2 = 0\n");
}

TEST(Constraints, CountEqualsDistinctMonomials) {
  auto eq = four_term();
  auto sys = extract_constraints(eq, 2);
  EXPECT_EQ(sys.constraints.size(), expand_ansatz(eq, 2).terms().size());
  for (const auto& c : sys.constraints) EXPECT_FALSE(c.poly.is_zero());
}

TEST(Families, FourTermExampleHasFourteen) {
  auto fams = solution_families(four_term());
  ASSERT_EQ(fams.size(), 14u);
  EXPECT_EQ(fams.front().label(), "{1,2,3,4}");
  EXPECT_TRUE(fams.front().irreducible);
  for (const char* pair : {"{1,2}|{3,4}", "{1,3}|{2,4}", "{1,4}|{2,3}"}) {
    const auto& f = find_family(fams, pair);
    EXPECT_EQ(f.blocks.size(), 2u);
    EXPECT_FALSE(f.irreducible);
  }
  for (const auto& f : fams) EXPECT_LE(f.blocks.size(), 3u);
  EXPECT_EQ(fams.front().block_constraints.at(0).to_string(), "c4^6 + c3^4 + c2^3 + c1^2");
  EXPECT_EQ(find_family(fams, "{1,3}|{2,4}").block_constraints.at(1).to_string(), "c4^6 + c2^3");
}

TEST(Families, SharedFirstRowWhenLinear) {
  auto fams = solution_families(three_term());
  ASSERT_EQ(fams.size(), 2u);
  EXPECT_EQ(fams[0].label(), "{1,2,3}");
  EXPECT_EQ(fams[1].label(), "{1,2}|{1,3}");
  EXPECT_TRUE(fams[1].shared_first);
  EXPECT_EQ(fams[1].block_constraints[0].to_string(), "c2^2 + c1_1");
  EXPECT_EQ(fams[1].block_constraints[1].to_string(), "c3^4 + c1_2");
}

TEST(Families, SingleRow) {
  auto fams = solution_families(parse("f^2(x) = 0"));
  ASSERT_EQ(fams.size(), 1u);
  EXPECT_EQ(fams[0].label(), "{1}");
  EXPECT_EQ(fams[0].block_constraints[0].to_string(), "c1^2");
}

TEST(Solver, SquareRootsOfMinusOne) {
  std::vector<unsigned> q{2, 3};
  std::vector<cd> fixed{0.0, 1.0};
  auto roots = solve_block_constraint(q, fixed, 0);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_LT(std::abs(roots[0] - cd(0, -1)), 1e-14);
  EXPECT_LT(std::abs(roots[1] - cd(0, 1)), 1e-14);
}

TEST(Solver, EveryRootSatisfiesConstraint) {
  std::vector<unsigned> q{6, 4, 3, 2};
  std::vector<cd> fixed{0.0, cd(0.3, -1.2), cd(2.0, 0.5), cd(-0.7, 0.1)};
  std::vector<cd> w{1.0, 2.0, -1.0, 0.5};
  auto roots = solve_block_constraint(q, fixed, 0, w);
  ASSERT_EQ(roots.size(), 6u);
  for (auto r : roots) {
    cd s = w[0] * std::pow(r, 6);
    for (std::size_t i = 1; i < q.size(); ++i) s += w[i] * std::pow(fixed[i], static_cast<int>(q[i]));
    EXPECT_LT(std::abs(s), 1e-12);
  }
  for (std::size_t i = 1; i < roots.size(); ++i) EXPECT_LE(std::arg(roots[i - 1]), std::arg(roots[i]) + 1e-15);
}

TEST(Solver, ZeroTargetHasSingleRoot) {
  std::vector<unsigned> q{2, 3};
  std::vector<cd> fixed{5.0, 0.0};
  auto roots = solve_block_constraint(q, fixed, 0);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0], cd(0.0));
}

TEST(Solver, InvalidInputs) {
  std::vector<unsigned> q{2, 3};
  std::vector<cd> fixed{0.0, 1.0};
  std::vector<cd> short_fixed{0.0};
  std::vector<cd> zero_w{0.0, 1.0};
  EXPECT_THROW(solve_block_constraint(q, fixed, 2), ValidationError);
  EXPECT_THROW(solve_block_constraint(q, short_fixed, 0), ValidationError);
  EXPECT_THROW(solve_block_constraint(q, fixed, 0, zero_w), ValidationError);
}

TEST(CheckFamily, PairSplitWitnessHolds) {
  auto eq = four_term();
  auto fam = find_family(solution_families(eq), "{1,2}|{3,4}");
  FamilyAssignment v{{"c1", cd(0, 1)}, {"c2", 1.0}, {"c3", std::polar(1.0, std::numbers::pi / 4)}, {"c4", 1.0}};
  auto verdict = check_family(eq, fam, v);
  EXPECT_TRUE(verdict.holds);
  EXPECT_LT(verdict.max_sample_residual, 1e-12);
}

TEST(CheckFamily, ZeroAssignmentHolds) {
  auto eq = four_term();
  auto fam = find_family(solution_families(eq), "{1,2}|{3,4}");
  FamilyAssignment v{{"c1", 0.0}, {"c2", 0.0}, {"c3", 0.0}, {"c4", 0.0}};
  EXPECT_TRUE(check_family(eq, fam, v).holds);
}

TEST(CheckFamily, AllOnesFails) {
  auto eq = four_term();
  auto fam = find_family(solution_families(eq), "{1,2}|{3,4}");
  FamilyAssignment v{{"c1", 1.0}, {"c2", 1.0}, {"c3", 1.0}, {"c4", 1.0}};
  auto verdict = check_family(eq, fam, v);
  EXPECT_FALSE(verdict.holds);
  ASSERT_EQ(verdict.block_residuals.size(), 2u);
  EXPECT_NEAR(verdict.block_residuals[0], 2.0, 1e-12);
  EXPECT_NEAR(verdict.block_residuals[1], 2.0, 1e-12);
  EXPECT_GT(verdict.max_sample_residual, 1.0);
}

TEST(CheckFamily, IncompleteAssignment) {
  auto eq = four_term();
  auto fam = solution_families(eq).front();
  FamilyAssignment v{{"c1", 1.0}, {"c2", 1.0}, {"c3", 1.0}};
  EXPECT_THROW(check_family(eq, fam, v), ValidationError);
}

TEST(CheckFamily, ParallelMatchesSerial) {
  auto eq = three_term();
  auto fam = solution_families(eq).at(1);
  FamilyAssignment v{{"c1_1", -4.0}, {"c1_2", -1.0}, {"c2", 2.0}, {"c3", cd(0, 1)}};
  auto a = check_family(eq, fam, v);
  auto b = check_family_serial(eq, fam, v);
  EXPECT_TRUE(a.holds);
  EXPECT_EQ(a.holds, b.holds);
  EXPECT_EQ(a.block_residuals, b.block_residuals);
  EXPECT_DOUBLE_EQ(a.max_sample_residual, b.max_sample_residual);
}

TEST(EvaluateNumeric, SymbolCountMismatch) {
  auto poly = expand_ansatz(three_term(), 2);
  std::vector<cd> phi{1.0};
  std::vector<cd> c(6, 1.0);
  EXPECT_THROW(evaluate_numeric(poly, phi, c), UniverseMismatch);
}

}  // namespace
}  // namespace homchar
