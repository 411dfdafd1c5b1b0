// Acceptance gate: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are pinned below.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "property_suite.hpp"
#include "homchar/report.hpp"

namespace {

using namespace homchar;
using homchar::testing::Gen;
using cd = std::complex<double>;

constexpr double kFamilyTolerance = 1e-9;
constexpr double kRootTolerance = 1e-9;
constexpr int kMinPropertyCases = 1000;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (cond || !ok) {
      ok = ok && cond;
      return;
    }
    ok = false;
    detail = what;
  }
};

Equation parse(const char* text) { return make_equation(parse_equation(text)); }

Candidate differential_candidate() {
  return make_candidate({"f", "g", "h"}, {"-(20 + 4*a + a^2)*phi", "2*(1 + a)*phi", "2*phi"});
}

// 1. Worked differential example: exact cancellation and expansions.
Verdict differential_reproduction() {
  Verdict v;
  auto eq = parse("f(x^4) + g^2(x^2) + h^4(x) = 0");
  auto cand = differential_candidate();
  auto terms = equation_terms(eq, cand);
  v.require(check_equation(eq, cand).is_zero(), "residual is not zero");
  v.require(terms.size() == 3, "expected three expansions");
  if (!v.ok) return v;
  v.require(terms[0].to_string() == "-16*phi1(x)^4*a1(x)^2 - 16*phi1(x)^4*a1(x) - 20*phi1(x)^4",
            "f(x^4) expansion: " + terms[0].to_string());
  v.require(terms[1].to_string() == "16*phi1(x)^4*a1(x)^2 + 16*phi1(x)^4*a1(x) + 4*phi1(x)^4",
            "g^2(x^2) expansion: " + terms[1].to_string());
  v.require(terms[2].to_string() == "16*phi1(x)^4", "h^4(x) expansion: " + terms[2].to_string());
  return v;
}

// 2. Non-additivity of f on Q(t) and the dependence residual.
Verdict differential_non_additivity() {
  Verdict v;
  auto eq = parse("f(x^4) + g^2(x^2) + h^4(x) = 0");
  auto cand = differential_candidate();
  Bindings b;
  b.hom[1] = Bindings::HomKind::Identity;
  b.logderiv.insert(1);
  RatFunc t = RatFunc::t(), one(Rational(1));
  std::vector<std::pair<RatFunc, RatFunc>> witness{{t, one}};
  auto f = additivity_oracle(cand.rows[0], b, witness);
  v.require(!f.holds && f.defect && *f.defect == one / t - one / (t + one), "f defect at (t, 1) is not 1/t - 1/(t+1)");
  auto pairs = sample_pairs(sample_ratfuncs(32, 42));
  v.require(additivity_oracle(cand.rows[1], b, pairs).holds, "g flagged non-additive");
  v.require(additivity_oracle(cand.rows[2], b, pairs).holds, "h flagged non-additive");
  auto dep = check_pattern_identity(eq, cand, BlockPattern::eq_dep(4));
  v.require(dep.to_string() == "-phi1(x)*a1(x)^2", "dependence residual: " + dep.to_string());
  // Brute-force cross-check of the frozen residual: the abstract identity
  // from full S_4 enumeration gives the same substitution.
  auto brute = brute_force_pattern(eq, BlockPattern::eq_dep(4));
  v.require(brute == evaluate_pattern(eq, BlockPattern::eq_dep(4)), "brute force disagrees on dependence identity");
  return v;
}

// 3. Three-term pipeline: identities, elimination, constraint system.
Verdict three_term_pipeline() {
  Verdict v;
  auto eq = parse("f(x^4) + g^2(x^2) + h^4(x) = 0");
  auto dep = evaluate_pattern(eq, BlockPattern::eq_dep(4));
  v.require(dep.to_string() == "f(x) + g(1)*g(x) + h(1)^3*h(x) = 0", "dependence identity: " + dep.to_string());
  auto lc = evaluate_pattern(eq, BlockPattern::eq_lc(4));
  auto elim = eliminate_dependence(dep, lc, 0);
  AbstractIdentity expected(identity_rows(eq));
  ArgMonomial X{1, 0, 0}, Y{0, 1, 0}, XY{1, 1, 0};
  expected.add({2, {XY}, 3}, Rational(-3));
  expected.add({1, {XY}, 1}, Rational(-2));
  expected.add({2, {X, Y}, 2}, Rational(3));
  expected.add({1, {X, Y}, 0}, Rational(2));
  v.require(elim == expected, "elimination: " + elim.to_string());

  // Unknowns c1_j = gamma_j, c2_j = alpha_j, c3_j = beta_j.
  auto sys = extract_constraints(eq, 2);
  const auto& names = sys.unknowns->names();
  auto value_vector = [&](const std::map<std::string, Rational>& m) {
    std::vector<Rational> out;
    for (const auto& n : names) out.push_back(m.at(n));
    return out;
  };
  auto vanishes = [&](const std::vector<Rational>& vals) {
    for (const auto& c : sys.constraints) {
      if (!c.poly.evaluate(vals).is_zero()) return false;
    }
    return true;
  };
  Gen gen(42);
  for (int trial = 0; trial < 50 && v.ok; ++trial) {
    Rational G = gen.nonzero_rational(), H = gen.nonzero_rational();
    // Final solution family f = -g(1)^2 phi1 - h(1)^4 phi2, g = g(1) phi1, h = h(1) phi2.
    std::map<std::string, Rational> sol{{"c1_1", -(G * G)}, {"c1_2", -(H * H * H * H)}, {"c2_1", G},
                                        {"c2_2", Rational(0)}, {"c3_1", Rational(0)}, {"c3_2", H}};
    v.require(vanishes(value_vector(sol)), "final solution family violates the raw system");
    // Points of the displayed system {a1 a2 = 0, b1 b2 = 0, a_j^2 + b_j^4 = -g_j}.
    std::map<std::string, Rational> pt{{"c2_1", gen.rational()}, {"c2_2", gen.rational()},
                                       {"c3_1", gen.rational()}, {"c3_2", gen.rational()}};
    pt[gen.coin() ? "c2_1" : "c2_2"] = Rational(0);
    pt[gen.coin() ? "c3_1" : "c3_2"] = Rational(0);
    for (int j = 1; j <= 2; ++j) {
      Rational a = pt["c2_" + std::to_string(j)], b = pt["c3_" + std::to_string(j)];
      pt["c1_" + std::to_string(j)] = -(a * a + b * b * b * b);
    }
    v.require(vanishes(value_vector(pt)), "a point of the displayed system violates the raw system");
  }
  v.require(sys.constraints.size() == 5, "expected five raw constraints");
  return v;
}

// 4. Four-term families.
Verdict four_term_families() {
  Verdict v;
  auto eq = parse("f1^2(x^6) + f2^3(x^4) + f3^4(x^3) + f4^6(x^2) = 0");
  auto fams = solution_families(eq);
  auto find = [&](const std::string& label) -> const PartitionFamily* {
    for (const auto& f : fams) {
      if (f.label() == label) return &f;
    }
    return nullptr;
  };
  const auto* all = find("{1,2,3,4}");
  v.require(all && all->irreducible && all->block_constraints.size() == 1 &&
                all->block_constraints[0].to_string() == "c4^6 + c3^4 + c2^3 + c1^2",
            "single-block family missing or wrong");
  const std::vector<std::pair<std::string, std::vector<std::string>>> pairs{
      {"{1,2}|{3,4}", {"c2^3 + c1^2", "c4^6 + c3^4"}},
      {"{1,3}|{2,4}", {"c3^4 + c1^2", "c4^6 + c2^3"}},
      {"{1,4}|{2,3}", {"c4^6 + c1^2", "c3^4 + c2^3"}},
  };
  for (const auto& [label, cons] : pairs) {
    const auto* f = find(label);
    v.require(f && f->block_constraints.size() == 2 && f->block_constraints[0].to_string() == cons[0] &&
                  f->block_constraints[1].to_string() == cons[1],
              "pair split " + label + " missing or wrong");
  }
  if (!v.ok) return v;
  FamilyAssignment vals{{"c1", cd(0, 1)}, {"c2", 1.0}, {"c3", std::polar(1.0, std::numbers::pi / 4)}, {"c4", 1.0}};
  FamilyCheckOptions opts;
  opts.constraint_tolerance = kFamilyTolerance;
  opts.sample_tolerance = kFamilyTolerance;
  auto verdict = check_family(eq, *find("{1,2}|{3,4}"), vals, opts);
  v.require(verdict.holds, "12|34 instance fails, max residual " + std::to_string(verdict.max_sample_residual));
  Gen gen(42);
  for (const auto& [label, cons] : pairs) {
    const auto* f = find(label);
    auto solved = homchar::testing::solve_family_instance(eq, *f, gen);
    v.require(check_family(eq, *f, solved, opts).holds, "solved instance of " + label + " fails");
  }
  return v;
}

// 5. Two-term identities f^m(x^n) - g^p(x^q) = 0.
Verdict two_term_identities() {
  Verdict v;
  struct Inst {
    unsigned n, m, q, p;
  };
  for (const auto& in : std::vector<Inst>{{3, 2, 2, 3}, {4, 2, 2, 4}, {2, 1, 1, 2}, {4, 1, 1, 4}, {8, 1, 2, 4},
                                          {6, 1, 2, 3}, {3, 1, 1, 3}, {4, 2, 8, 1}}) {
    const unsigned N = in.n * in.m;
    std::string text = "f^" + std::to_string(in.m) + "(x^" + std::to_string(in.n) + ") - g^" + std::to_string(in.p) +
                       "(x^" + std::to_string(in.q) + ") = 0";
    auto eq = make_equation(parse_equation(text));
    const std::size_t fi = eq.names[0] == "f" ? 0 : 1, gi = 1 - fi;
    const Rational sf(1);
    ArgMonomial X{1, 0, 0}, Y{0, 1, 0}, XY{1, 1, 0};

    AbstractIdentity eqfg1(identity_rows(eq));
    eqfg1.add({fi, {}, in.m}, sf);
    eqfg1.add({gi, {}, in.p}, -sf);
    v.require(evaluate_pattern(eq, BlockPattern::parse("{1:" + std::to_string(N) + "}")) == eqfg1,
              text + ": constant identity");

    AbstractIdentity eqfg2(identity_rows(eq));
    eqfg2.add({fi, {X}, in.m - 1}, sf);
    eqfg2.add({gi, {X}, in.p - 1}, -sf);
    v.require(evaluate_pattern(eq, BlockPattern::eq_dep(N)) == eqfg2, text + ": dependence identity");

    auto lc = evaluate_pattern(eq, BlockPattern::eq_lc(N));
    auto coeffs = [&](std::size_t row, unsigned q) {
      Rational c1 = lc.coefficient({row, {XY}, q - 1});
      Rational c2 = q >= 2 ? lc.coefficient({row, {X, Y}, q - 2}) : Rational(0);
      return std::pair{c1, c2};
    };
    auto [c1, c2] = coeffs(fi, in.m);
    auto [d1, d2] = coeffs(gi, in.p);
    c1 = c1 / sf, c2 = c2 / sf, d1 = d1 / -sf, d2 = d2 / -sf;
    v.require(c1 + c2 == Rational(1) && d1 + d2 == Rational(1), text + ": coefficients do not sum to 1");
    v.require(!(c1 == d1), text + ": c1 == d1");
  }
  return v;
}

// 6. Exhaustive fast path vs brute force for N <= 8.
Verdict oracle_agreement() {
  Verdict v;
  int checked = 0;
  for (unsigned N = 2; N <= 8; ++N) {
    std::vector<unsigned> divs;
    for (unsigned d = 1; d <= N; ++d) {
      if (N % d == 0) divs.push_back(d);
    }
    for (unsigned mask = 1; mask < (1u << divs.size()); ++mask) {
      std::vector<ExponentRow> rows;
      for (std::size_t i = 0; i < divs.size(); ++i) {
        if (mask & (1u << i)) rows.push_back({divs[i], N / divs[i]});
      }
      auto eq = Equation::from_profile(ExponentProfile::from_rows(rows));
      for (const auto& bp : {BlockPattern::eq_dep(N), BlockPattern::eq_lc(N)}) {
        v.require(evaluate_pattern(eq, bp) == brute_force_pattern(eq, bp),
                  eq.profile.to_string() + " " + bp.to_string());
        ++checked;
      }
    }
  }
  v.require(checked > 0, "no profiles enumerated");
  if (v.ok) v.detail = std::to_string(checked) + " profile/pattern pairs";
  return v;
}

// 7. Polarization for n = 1..4.
Verdict polarization() {
  Verdict v;
  for (unsigned n = 1; n <= 4; ++n) {
    auto proof = polarization_check(n);
    v.require(proof.verified && proof.iterated == proof.iterated_expected && proof.mixed == proof.mixed_expected &&
                  proof.overflow.terms.empty(),
              "order " + std::to_string(n));
  }
  return v;
}

// 8. Degree splitting and diagonal reconstruction.
Verdict degree_splitting() {
  Verdict v;
  auto terms = parse_equation("f(x^4) + g^2(x^2) + h(x^3) = 0");
  auto groups = degree_split(terms);
  v.require(groups.size() == 2 && groups[0].N == 3 && groups[1].N == 4, "expected groups N=3 and N=4");
  if (!v.ok) return v;
  std::vector<EquationTerm> rebuilt;
  for (const auto& grp : groups) {
    auto eq = make_equation(grp.terms);
    auto diag = evaluate_pattern(eq, BlockPattern::diagonal(grp.N));
    AbstractIdentity expected(identity_rows(eq));
    for (std::size_t i = 0; i < eq.size(); ++i) {
      expected.add({i, std::vector<ArgMonomial>(eq.profile[i].q, ArgMonomial{eq.profile[i].p, 0, 0}), 0},
                   eq.real_scalars()[i]);
    }
    v.require(diag == expected, "diagonal of N=" + std::to_string(grp.N) + " group: " + diag.to_string());
    ReportOptions opts;
    auto report = cmd_analyze(print_equation(grp.terms), opts);
    v.require(report.exit_code == 0, "sub-equation N=" + std::to_string(grp.N) + " did not analyze");
    for (const auto& t : eq.terms()) rebuilt.push_back(t);
  }
  auto key = [](const EquationTerm& t) { return t.function_name; };
  std::sort(rebuilt.begin(), rebuilt.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  auto original = terms;
  std::sort(original.begin(), original.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  v.require(rebuilt == original, "split terms do not reassemble the input");
  return v;
}

// 9. Single homomorphism: power-sum constraint, roots, real note.
Verdict single_homomorphism() {
  Verdict v;
  Gen gen(42);
  for (int trial = 0; trial < 10; ++trial) {
    auto eq = Equation::from_profile(gen.profile(12, 4));
    auto sys = extract_constraints(eq, 1);
    UnknownPoly expected(sys.unknowns);
    for (std::size_t i = 0; i < eq.size(); ++i) {
      expected += UnknownPoly::variable(sys.unknowns, ansatz_unknown(i + 1, 1), eq.profile[i].q);
    }
    v.require(sys.constraints.size() == 1 && sys.constraints[0].poly == expected,
              "k=1 system for " + eq.profile.to_string());

    std::vector<unsigned> qs;
    std::vector<cd> fixed;
    for (std::size_t i = 0; i < eq.size(); ++i) {
      qs.push_back(eq.profile[i].q);
      fixed.emplace_back(gen.rational().to_double(), gen.rational().to_double());
    }
    std::size_t free = static_cast<std::size_t>(gen.integer(0, static_cast<long>(qs.size()) - 1));
    for (cd r : solve_block_constraint(qs, fixed, free)) {
      cd sum = 0.0;
      for (std::size_t i = 0; i < qs.size(); ++i) sum += std::pow(i == free ? r : fixed[i], static_cast<int>(qs[i]));
      v.require(std::abs(sum) <= kRootTolerance * (1.0 + std::abs(r)), "root residual too large");
    }
  }
  ReportOptions opts;
  opts.real = true;
  auto report = cmd_analyze("f1^2(x^6) + f2^3(x^4) + f3^4(x^3) + f4^6(x^2) = 0", opts);
  v.require(report.text.find("automatically continuous") != std::string::npos, "real note missing from report");
  return v;
}

// 10. Property suites.
Verdict property_suites() {
  Verdict v;
  int cases = 0;
  for (const auto& o : homchar::testing::run_all_properties()) {
    cases += o.cases;
    v.require(o.passed(), o.name + ": " + o.first_failure);
  }
  v.require(cases >= kMinPropertyCases, "only " + std::to_string(cases) + " cases");
  if (v.ok) v.detail = std::to_string(cases) + " cases";
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "differential example reproduces exactly", 1.0, differential_reproduction},
      {2, "differential example is not additive in f", 1.0, differential_non_additivity},
      {3, "three-term identity, elimination and constraint pipeline", 5.0, three_term_pipeline},
      {4, "four-term solution families", 5.0, four_term_families},
      {5, "two-term identities", 5.0, two_term_identities},
      {6, "fast path agrees with brute force for N <= 8", 60.0, oracle_agreement},
      {7, "polarization for orders 1..4", 10.0, polarization},
      {8, "degree splitting", 1.0, degree_splitting},
      {9, "single-homomorphism constraint, roots and real note", 5.0, single_homomorphism},
      {10, "property suites", 60.0, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.ok && secs > c.budget_seconds) {
      v.ok = false;
      v.detail = "over runtime budget of " + std::to_string(c.budget_seconds) + " s";
    }
    if (!v.ok) ++failed;
    std::printf("%s [%d] %s (%.3f s)%s%s\n", v.ok ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.empty() ? "" : ": ",
                v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
