#include "homchar/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "homchar/errors.hpp"
#include "homchar/parallel.hpp"

namespace homchar {

std::string ansatz_unknown(std::size_t row, std::size_t hom) {
  return "c" + std::to_string(row) + "_" + std::to_string(hom);
}

namespace {

struct AnsatzSpaces {
  SymbolSpacePtr symbols;
  UnknownSpacePtr unknowns;
};

AnsatzSpaces ansatz_spaces(const Equation& eq, unsigned k) {
  if (k == 0) throw ValidationError("number of homomorphisms k must be at least 1");
  std::vector<SymbolId> syms;
  for (unsigned j = 1; j <= k; ++j) syms.push_back(hom(static_cast<int>(j)));
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= eq.size(); ++i) {
    for (unsigned j = 1; j <= k; ++j) names.push_back(ansatz_unknown(i, j));
  }
  return {make_symbol_space(std::move(syms)), make_unknown_space(std::move(names))};
}

SymPoly expand_row(const Equation& eq, const AnsatzSpaces& sp, unsigned k, std::size_t i, const Rational& scalar) {
  const auto& row = eq.profile[i];
  SymPoly base(sp.symbols, sp.unknowns);
  for (unsigned j = 0; j < k; ++j) {
    MultiIndex m(k);
    m.set(j, row.p);
    base.add_term(m, UnknownPoly::variable(sp.unknowns, i * k + j));
  }
  return poly_pow(base, row.q).scaled(scalar);
}

}  // namespace

SymPoly expand_ansatz_serial(const Equation& eq, unsigned k) {
  auto sp = ansatz_spaces(eq, k);
  auto scalars = eq.real_scalars();
  SymPoly total(sp.symbols, sp.unknowns);
  for (std::size_t i = 0; i < eq.size(); ++i) total += expand_row(eq, sp, k, i, scalars[i]);
  return total;
}

SymPoly expand_ansatz(const Equation& eq, unsigned k) {
  auto sp = ansatz_spaces(eq, k);
  auto scalars = eq.real_scalars();
  const auto n = static_cast<std::int64_t>(eq.size());
  std::vector<SymPoly> rows(eq.size(), SymPoly(sp.symbols, sp.unknowns));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    auto idx = static_cast<std::size_t>(i);
    rows[idx] = expand_row(eq, sp, k, idx, scalars[idx]);
  }
  SymPoly total(sp.symbols, sp.unknowns);
  for (const auto& r : rows) total += r;
  return total;
}

std::string ConstraintSystem::to_string() const {
  std::string out;
  for (const auto& c : constraints) {
    std::string mono = render_symbol_monomial(c.monomial, *symbols);
    out += (mono.empty() ? "1" : mono) + ": " + c.poly.to_string() + " = 0\n";
  }
  return out;
}

ConstraintSystem extract_constraints(const Equation& eq, unsigned k) {
  auto poly = expand_ansatz(eq, k);
  ConstraintSystem sys{poly.symbols(), poly.unknowns(), {}};
  for (auto& [m, c] : collect_coefficients(poly)) sys.constraints.push_back({m, c});
  return sys;
}

// ---------------------------------------------------------------------------
// Partition families

std::string PartitionFamily::label() const {
  std::string out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out += "|";
    out += "{";
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      if (i) out += ",";
      out += std::to_string(blocks[b][i]);
    }
    out += "}";
  }
  return out;
}

namespace {

// All set partitions of `elems` via restricted growth strings.
std::vector<std::vector<std::vector<unsigned>>> set_partitions(const std::vector<unsigned>& elems) {
  std::vector<std::vector<std::vector<unsigned>>> out;
  const std::size_t n = elems.size();
  if (n == 0) return out;
  std::vector<unsigned> rgs(n, 0);
  auto rec = [&](auto&& self, std::size_t pos, unsigned max_block) -> void {
    if (pos == n) {
      std::vector<std::vector<unsigned>> blocks(max_block + 1);
      for (std::size_t i = 0; i < n; ++i) blocks[rgs[i]].push_back(elems[i]);
      out.push_back(std::move(blocks));
      return;
    }
    for (unsigned b = 0; b <= max_block + 1; ++b) {
      rgs[pos] = b;
      self(self, pos + 1, std::max(max_block, b));
    }
  };
  rgs[0] = 0;
  rec(rec, 1, 0);
  return out;
}

}  // namespace

std::vector<PartitionFamily> solution_families(const Equation& eq) {
  const std::size_t n = eq.size();
  auto scalars = eq.real_scalars();
  const bool shared = n >= 2 && eq.profile[0].q == 1;

  std::vector<unsigned> elems;
  for (unsigned i = shared ? 2 : 1; i <= n; ++i) elems.push_back(i);
  auto partitions = set_partitions(elems);

  const std::size_t max_blocks = std::max<std::size_t>(1, n - 1);
  std::vector<PartitionFamily> out;
  for (auto& blocks : partitions) {
    if (blocks.size() > max_blocks) continue;
    PartitionFamily fam;
    fam.shared_first = shared;
    fam.irreducible = blocks.size() == 1;
    std::vector<std::string> names;
    if (shared) {
      for (std::size_t j = 1; j <= blocks.size(); ++j) names.push_back("c1_" + std::to_string(j));
    }
    for (unsigned i = shared ? 2 : 1; i <= n; ++i) names.push_back("c" + std::to_string(i));
    fam.unknowns = make_unknown_space(names);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      UnknownPoly con(fam.unknowns);
      if (shared) {
        con += UnknownPoly::variable(fam.unknowns, "c1_" + std::to_string(j + 1)).scaled(scalars[0]);
      }
      for (unsigned i : blocks[j]) {
        con += UnknownPoly::variable(fam.unknowns, "c" + std::to_string(i), eq.profile[i - 1].q)
                   .scaled(scalars[i - 1]);
      }
      fam.block_constraints.push_back(std::move(con));
      if (shared) blocks[j].insert(blocks[j].begin(), 1u);
    }
    fam.blocks = std::move(blocks);
    out.push_back(std::move(fam));
  }
  std::stable_sort(out.begin(), out.end(), [](const PartitionFamily& a, const PartitionFamily& b) {
    if (a.blocks.size() != b.blocks.size()) return a.blocks.size() < b.blocks.size();
    return a.blocks < b.blocks;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Numeric layer

std::vector<std::complex<double>> solve_block_constraint(std::span<const unsigned> q_exponents,
                                                         std::span<const std::complex<double>> fixed,
                                                         std::size_t free_index,
                                                         std::span<const std::complex<double>> weights) {
  using cd = std::complex<double>;
  if (free_index >= q_exponents.size()) throw ValidationError("free index out of range");
  if (fixed.size() != q_exponents.size()) throw ValidationError("fixed values must align with exponents");
  if (!weights.empty() && weights.size() != q_exponents.size()) {
    throw ValidationError("weights must align with exponents");
  }
  auto weight = [&](std::size_t i) { return weights.empty() ? cd(1.0) : weights[i]; };
  const unsigned q = q_exponents[free_index];
  if (q == 0) throw ValidationError("exponents must be positive");
  if (weight(free_index) == cd(0.0)) throw ValidationError("free term has zero weight");

  cd sum = 0.0;
  for (std::size_t i = 0; i < q_exponents.size(); ++i) {
    if (i == free_index) continue;
    sum += weight(i) * std::pow(fixed[i], static_cast<int>(q_exponents[i]));
  }
  const cd target = -sum / weight(free_index);
  if (target == cd(0.0)) return {cd(0.0)};

  const double radius = std::pow(std::abs(target), 1.0 / q);
  const double phase = std::arg(target);
  std::vector<cd> roots;
  for (unsigned r = 0; r < q; ++r) {
    cd z = std::polar(radius, (phase + 2.0 * std::numbers::pi * r) / q);
    // Newton polish on z^q = target.
    for (int it = 0; it < 2; ++it) {
      cd zq1 = std::pow(z, static_cast<int>(q - 1));
      z -= (zq1 * z - target) / (static_cast<double>(q) * zq1);
    }
    const double scale = std::abs(z);
    if (std::abs(z.imag()) < 1e-15 * scale) z.imag(0.0);
    if (std::abs(z.real()) < 1e-15 * scale) z.real(0.0);
    roots.push_back(z);
  }
  auto principal = [](cd z) {
    double a = std::arg(z);
    return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
  };
  std::sort(roots.begin(), roots.end(), [&](cd a, cd b) { return principal(a) < principal(b); });
  return roots;
}

std::complex<double> evaluate_numeric(const SymPoly& p, std::span<const std::complex<double>> symbol_values,
                                      std::span<const std::complex<double>> unknown_values) {
  if (symbol_values.size() != p.symbols()->size()) throw UniverseMismatch("symbol value count mismatch");
  std::complex<double> sum = 0.0;
  for (const auto& [m, c] : p.terms()) {
    std::complex<double> t = c.evaluate(unknown_values);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) t *= std::pow(symbol_values[i], static_cast<int>(m[i]));
    }
    sum += t;
  }
  return sum;
}

namespace {

struct NumericTerm {
  std::vector<std::uint32_t> exps;
  std::complex<double> coeff;
};

struct PreparedFamily {
  FamilyVerdict verdict;
  std::vector<NumericTerm> terms;
  std::vector<std::vector<std::complex<double>>> points;
};

PreparedFamily prepare_family(const Equation& eq, const PartitionFamily& family, const FamilyAssignment& values,
                              const FamilyCheckOptions& options) {
  std::vector<std::complex<double>> fam_values;
  for (const auto& name : family.unknowns->names()) {
    auto it = values.find(name);
    if (it == values.end()) throw ValidationError("incomplete assignment: missing value for " + name);
    fam_values.push_back(it->second);
  }
  PreparedFamily prep;
  for (const auto& con : family.block_constraints) {
    prep.verdict.block_residuals.push_back(std::abs(con.evaluate(fam_values)));
  }

  const auto k = static_cast<unsigned>(family.blocks.size());
  const std::size_t n = eq.size();
  std::vector<std::complex<double>> coeffs(n * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (unsigned i : family.blocks[j]) {
      std::string name = (family.shared_first && i == 1) ? "c1_" + std::to_string(j + 1) : "c" + std::to_string(i);
      coeffs[(i - 1) * k + j] = values.at(name);
    }
  }
  auto poly = expand_ansatz(eq, k);
  for (const auto& [m, c] : poly.terms()) {
    prep.terms.push_back({std::vector<std::uint32_t>(m.exponents().begin(), m.exponents().end()),
                          c.evaluate(coeffs)});
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (unsigned s = 0; s < options.samples; ++s) {
    std::vector<std::complex<double>> pt;
    for (unsigned j = 0; j < k; ++j) pt.push_back(std::polar(1.0, angle(rng)));
    prep.points.push_back(std::move(pt));
  }
  return prep;
}

double sample_residual(const std::vector<NumericTerm>& terms, const std::vector<std::complex<double>>& pt) {
  std::complex<double> sum = 0.0;
  for (const auto& t : terms) {
    std::complex<double> v = t.coeff;
    for (std::size_t j = 0; j < t.exps.size(); ++j) {
      if (t.exps[j] != 0) v *= std::pow(pt[j], static_cast<int>(t.exps[j]));
    }
    sum += v;
  }
  return std::abs(sum);
}

FamilyVerdict finish(PreparedFamily& prep, const std::vector<double>& residuals, const FamilyCheckOptions& options) {
  auto& v = prep.verdict;
  v.max_sample_residual = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  bool blocks_ok = std::all_of(v.block_residuals.begin(), v.block_residuals.end(),
                               [&](double r) { return r <= options.constraint_tolerance; });
  v.holds = blocks_ok && v.max_sample_residual <= options.sample_tolerance;
  return v;
}

}  // namespace

FamilyVerdict check_family_serial(const Equation& eq, const PartitionFamily& family, const FamilyAssignment& values,
                                  const FamilyCheckOptions& options) {
  auto prep = prepare_family(eq, family, values, options);
  std::vector<double> residuals;
  for (const auto& pt : prep.points) residuals.push_back(sample_residual(prep.terms, pt));
  return finish(prep, residuals, options);
}

FamilyVerdict check_family(const Equation& eq, const PartitionFamily& family, const FamilyAssignment& values,
                           const FamilyCheckOptions& options) {
  auto prep = prepare_family(eq, family, values, options);
  const auto count = static_cast<std::int64_t>(prep.points.size());
  std::vector<double> residuals(prep.points.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < count; ++s) {
    auto idx = static_cast<std::size_t>(s);
    residuals[idx] = sample_residual(prep.terms, prep.points[idx]);
  }
  return finish(prep, residuals, options);
}

}  // namespace homchar
