#include <gtest/gtest.h>

#include <numeric>

#include "homchar/errors.hpp"
#include "homchar/symmetrize.hpp"

namespace homchar {
namespace {

Equation ex1() { return make_equation(parse_equation("f(x^4) + g^2(x^2) + h^4(x) = 0")); }

Equation profile_eq(std::vector<ExponentRow> rows) {
  return Equation::from_profile(ExponentProfile::from_rows(std::move(rows)));
}

// Fraction of ordered placements of the marked tokens into N slots (blocks
// of p consecutive slots) that put each group inside one block and distinct
// groups in distinct blocks. Counts placements directly.
Rational placement_oracle(unsigned p, unsigned N, const std::vector<unsigned>& groups) {
  std::vector<unsigned> owner;
  for (unsigned g = 0; g < groups.size(); ++g) {
    for (unsigned k = 0; k < groups[g]; ++k) owner.push_back(g);
  }
  const std::size_t m = owner.size();
  std::vector<unsigned> slot(m, 0);
  long good = 0, total = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      ++total;
      std::vector<int> block_of_group(groups.size(), -1);
      std::vector<int> group_of_block(N / p, -1);
      for (std::size_t t = 0; t < m; ++t) {
        int b = static_cast<int>(slot[t] / p);
        int g = static_cast<int>(owner[t]);
        if (block_of_group[g] == -1) block_of_group[g] = b;
        if (block_of_group[g] != b) return;
        if (group_of_block[b] == -1) group_of_block[b] = g;
        if (group_of_block[b] != g) return;
      }
      ++good;
      return;
    }
    for (unsigned s = 0; s < N; ++s) {
      bool used = false;
      for (std::size_t t = 0; t < i; ++t) used = used || slot[t] == s;
      if (used) continue;
      slot[i] = s;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return Rational(good, total);
}

// ---------------------------------------------------------------------------

TEST(PatternWeight, DocumentedValues) {
  std::vector<unsigned> pair{2};
  EXPECT_EQ(pattern_weight(2, 4, pair), Rational(1, 3));
  EXPECT_EQ(pattern_weight(1, 4, pair), Rational(0));
  EXPECT_EQ(pattern_weight(4, 4, pair), Rational(1));
  EXPECT_EQ(placement_oracle(2, 4, pair), Rational(1, 3));
}

TEST(PatternWeight, BlockSizeMustDivideN) {
  std::vector<unsigned> one{1};
  EXPECT_THROW(pattern_weight(3, 4, one), ValidationError);
}

TEST(PatternWeight, MatchesPlacementOracle) {
  const std::vector<std::vector<unsigned>> groupings{{1}, {2}, {1, 1}, {2, 1}, {1, 1, 1}, {3}, {2, 2}};
  for (unsigned N = 1; N <= 8; ++N) {
    for (unsigned p = 1; p <= N; ++p) {
      if (N % p) continue;
      for (const auto& g : groupings) {
        if (std::accumulate(g.begin(), g.end(), 0u) > N) continue;
        EXPECT_EQ(pattern_weight(p, N, g), placement_oracle(p, N, g)) << "p=" << p << " N=" << N;
      }
    }
  }
}

TEST(BlockPattern, ParseAndRender) {
  auto bp = BlockPattern::parse("{x:1, y:1, 1:2}");
  EXPECT_EQ(bp.total(), 4u);
  EXPECT_EQ(bp.to_string(), "{x:1,y:1,1:2}");
  EXPECT_EQ(BlockPattern::eq_dep(4).to_string(), "{x:1,1:3}");
  EXPECT_EQ(BlockPattern::eq_lc(6).to_string(), "{x:1,y:1,1:4}");
  EXPECT_EQ(BlockPattern::diagonal(3).to_string(), "{x:3}");
  EXPECT_THROW(BlockPattern::parse("{x:0,1:4}"), ParseError);
  EXPECT_THROW(BlockPattern::parse("{x:1,2:3}"), ParseError);
  EXPECT_THROW(BlockPattern::parse("x:1"), ParseError);
}

TEST(EvaluatePattern, DependenceIdentityOfThreeTermExample) {
  EXPECT_EQ(evaluate_pattern(ex1(), BlockPattern::parse("{x:1,1:3}")).to_string(),
            "f(x) + g(1)*g(x) + h(1)^3*h(x) = 0");
}

TEST(EvaluatePattern, TwoVariableIdentityOfThreeTermExample) {
  EXPECT_EQ(evaluate_pattern(ex1(), BlockPattern::parse("{x:1,y:1,1:2}")).to_string(),
            "f(xy) + 1/3*g(1)*g(xy) + 2/3*g(x)*g(y) + h(1)^2*h(x)*h(y) = 0");
}

TEST(EvaluatePattern, DiagonalReproducesEquation) {
  auto eq = make_equation(parse_equation("f(x^6) - 2*g^2(x^3) + h^3(x^2) = 0"));
  auto id = evaluate_pattern(eq, BlockPattern::diagonal(6));
  AbstractIdentity expected(identity_rows(eq));
  auto scalars = eq.real_scalars();
  for (std::size_t i = 0; i < eq.size(); ++i) {
    IdentityKey k{i, std::vector<ArgMonomial>(eq.profile[i].q, ArgMonomial{eq.profile[i].p, 0, 0}), 0};
    expected.add(k, scalars[i]);
  }
  EXPECT_EQ(id, expected);
  EXPECT_EQ(id.to_string(), "f(x^6) - 2*g(x^3)^2 + h(x^2)^3 = 0");
}

TEST(EvaluatePattern, RejectsUnsupportedPatterns) {
  auto eq = profile_eq({{8, 1}, {4, 2}, {2, 4}});
  EXPECT_THROW(evaluate_pattern(eq, BlockPattern::parse("{x:1,y:1,z:1,w:1,1:4}")), UnsupportedError);
  EXPECT_THROW(evaluate_pattern(eq, BlockPattern::parse("{u:1,1:7}")), UnsupportedError);
  EXPECT_THROW(evaluate_pattern(eq, BlockPattern::parse("{x:1,1:3}")), ValidationError);
}

TEST(EvaluatePattern, DependenceCoefficientIsOne) {
  for (const auto& rows : std::vector<std::vector<ExponentRow>>{{{6, 1}, {3, 2}, {2, 3}, {1, 6}}, {{8, 1}, {2, 4}}}) {
    auto eq = profile_eq(rows);
    const unsigned N = eq.profile.N();
    auto id = evaluate_pattern(eq, BlockPattern::eq_dep(N));
    for (std::size_t i = 0; i < eq.size(); ++i) {
      IdentityKey k{i, {ArgMonomial{1, 0, 0}}, eq.profile[i].q - 1};
      EXPECT_EQ(id.coefficient(k), Rational(1));
    }
    EXPECT_EQ(id.terms().size(), eq.size());
  }
}

TEST(EvaluatePattern, TwoVariableCoefficientsSumToOne) {
  auto eq = profile_eq({{6, 1}, {3, 2}, {2, 3}, {1, 6}});
  const unsigned N = 6;
  auto id = evaluate_pattern(eq, BlockPattern::eq_lc(N));
  for (std::size_t i = 0; i < eq.size(); ++i) {
    const unsigned p = eq.profile[i].p, q = eq.profile[i].q;
    IdentityKey joint{i, {ArgMonomial{1, 1, 0}}, q - 1};
    Rational c = id.coefficient(joint);
    EXPECT_EQ(c, Rational(static_cast<long>(p) - 1, N - 1));
    if (q >= 2) {
      IdentityKey split{i, {ArgMonomial{1, 0, 0}, ArgMonomial{0, 1, 0}}, q - 2};
      Rational d = id.coefficient(split);
      EXPECT_EQ(d, Rational(static_cast<long>(N - p), N - 1));
      EXPECT_EQ(c + d, Rational(1));
    }
  }
}

TEST(BruteForce, AgreesWithFastPathOnExamples) {
  auto eq = ex1();
  auto dep = BlockPattern::parse("{x:1,1:3}");
  EXPECT_EQ(brute_force_pattern(eq, dep), evaluate_pattern(eq, dep));
  auto eq2 = profile_eq({{2, 2}, {4, 1}});
  auto lc = BlockPattern::parse("{x:1,y:1,1:2}");
  EXPECT_EQ(brute_force_pattern(eq2, lc), evaluate_pattern(eq2, lc));
  auto xyz = BlockPattern::parse("{x:2,y:1,z:1,1:2}");
  auto eq3 = profile_eq({{6, 1}, {3, 2}, {2, 3}, {1, 6}});
  EXPECT_EQ(brute_force_pattern(eq3, xyz), evaluate_pattern(eq3, xyz));
}

TEST(BruteForce, CapAtEight) {
  auto eq = profile_eq({{6, 2}, {4, 3}, {3, 4}, {2, 6}});
  EXPECT_THROW(brute_force_pattern(eq, BlockPattern::eq_dep(12)), CapExceeded);
  EXPECT_THROW(brute_force_pattern_serial(eq, BlockPattern::eq_dep(12)), CapExceeded);
}

TEST(BruteForce, ParallelMatchesSerial) {
  auto eq = profile_eq({{8, 1}, {4, 2}, {2, 4}, {1, 8}});
  for (const char* pat : {"{x:1,1:7}", "{x:1,y:1,1:6}", "{x:2,y:2,1:4}"}) {
    auto bp = BlockPattern::parse(pat);
    EXPECT_EQ(brute_force_pattern(eq, bp), brute_force_pattern_serial(eq, bp)) << pat;
  }
}

TEST(Eliminate, ThreeTermExampleCancelsF) {
  auto eq = ex1();
  auto a = evaluate_pattern(eq, BlockPattern::eq_dep(4));
  auto b = evaluate_pattern(eq, BlockPattern::eq_lc(4));
  auto elim = eliminate_dependence(a, b, 0);

  // -3 h(1)^3 h(xy) - 2 g(1) g(xy) + 3 h(1)^2 h(x) h(y) + 2 g(x) g(y) = 0
  AbstractIdentity expected(identity_rows(eq));
  ArgMonomial X{1, 0, 0}, Y{0, 1, 0}, XY{1, 1, 0};
  expected.add({2, {XY}, 3}, Rational(-3));
  expected.add({1, {XY}, 1}, Rational(-2));
  expected.add({2, {X, Y}, 2}, Rational(3));
  expected.add({1, {X, Y}, 0}, Rational(2));
  EXPECT_EQ(elim, expected);
  EXPECT_EQ(elim.to_string(), "-2*g(1)*g(xy) + 2*g(x)*g(y) - 3*h(1)^3*h(xy) + 3*h(1)^2*h(x)*h(y) = 0");
}

TEST(Eliminate, TwoTermProfileGivesNormalizedPairs) {
  // f^2(x^3) - g^3(x^2) = 0
  auto eq = make_equation(parse_equation("f^2(x^3) - g^3(x^2) = 0"));
  auto a = evaluate_pattern(eq, BlockPattern::eq_dep(6));
  auto b = evaluate_pattern(eq, BlockPattern::eq_lc(6));
  auto elim = eliminate_dependence(a, b, 0);
  ArgMonomial X{1, 0, 0}, Y{0, 1, 0}, XY{1, 1, 0};
  AbstractIdentity expected(identity_rows(eq));
  expected.add({1, {XY}, 2}, Rational(1));
  expected.add({0, {X, Y}, 0}, Rational(3));
  expected.add({1, {X, Y}, 1}, Rational(-4));
  EXPECT_EQ(elim, expected);
}

TEST(Eliminate, IdenticalIdentitiesCancel) {
  auto eq = ex1();
  auto a = evaluate_pattern(eq, BlockPattern::eq_dep(4));
  EXPECT_TRUE(eliminate_dependence(a, a, 0).is_zero());
}

TEST(Eliminate, RequiresXOnlyFirstIdentity) {
  auto eq = ex1();
  auto b = evaluate_pattern(eq, BlockPattern::eq_lc(4));
  EXPECT_THROW(eliminate_dependence(b, b, 0), CannotEliminate);
  auto a = evaluate_pattern(eq, BlockPattern::eq_dep(4));
  EXPECT_THROW(eliminate_dependence(a, b, 7), CannotEliminate);
  AbstractIdentity empty(identity_rows(eq));
  EXPECT_THROW(eliminate_dependence(empty, b, 0), CannotEliminate);
}

TEST(AbstractIdentity, PrimitiveScaling) {
  auto eq = ex1();
  AbstractIdentity id(identity_rows(eq));
  id.add({0, {ArgMonomial{1, 0, 0}}, 0}, Rational(-2, 3));
  id.add({1, {ArgMonomial{1, 0, 0}}, 1}, Rational(4, 9));
  auto prim = id.primitive();
  EXPECT_EQ(prim.to_string(), "-3*f(x) + 2*g(1)*g(x) = 0");
  EXPECT_EQ(render_arg({2, 1, 0}), "x^2y");
  EXPECT_EQ(render_arg({0, 0, 0}), "1");
}

TEST(Polarization, OrdersOneToFourVerify) {
  for (unsigned n = 1; n <= 4; ++n) {
    auto proof = polarization_check(n);
    EXPECT_TRUE(proof.verified) << n;
    EXPECT_EQ(proof.iterated, proof.iterated_expected);
    EXPECT_EQ(proof.mixed, proof.mixed_expected);
    EXPECT_TRUE(proof.overflow.terms.empty());
    EXPECT_EQ(proof.trace.size(), n + 1);
  }
  EXPECT_EQ(polarization_check(1).iterated.to_string(), "A(y)");
  EXPECT_EQ(polarization_check(2).iterated.to_string(), "2*A(y,y)");
}

TEST(Polarization, Bounds) {
  EXPECT_THROW(polarization_check(0), ValidationError);
  EXPECT_THROW(polarization_check(5), CapExceeded);
}

}  // namespace
}  // namespace homchar
