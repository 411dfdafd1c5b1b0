#include "homchar/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "homchar/ansatz.hpp"
#include "homchar/equation.hpp"
#include "homchar/errors.hpp"
#include "homchar/field_lab.hpp"
#include "homchar/symmetrize.hpp"
#include "homchar/verify.hpp"

namespace homchar {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_complex(std::complex<double> z) {
  double re = std::abs(z.real()) < 1e-15 ? 0.0 : z.real();
  double im = std::abs(z.imag()) < 1e-15 ? 0.0 : z.imag();
  if (im == 0.0) return fmt_double(re);
  std::string s = re == 0.0 ? "" : fmt_double(re);
  if (!s.empty() && im > 0) s += "+";
  return s + fmt_double(im) + "i";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

json provenance_block() {
  return {
      {"condition", "admissibility of the exponent profile: pairwise distinct p, pairwise distinct q, common product N > 1"},
      {"degree_split", "terms of different total degree p*q are independent equations (diagonal of homogeneous forms)"},
      {"identities",
       "symmetrized N-additive form evaluated on substitution patterns, weighted by multiset block occupancy"},
      {"elimination", "substituting the x-linear identity into the two-variable identity to cancel one function"},
      {"constraints",
       "coefficient comparison for linear combinations of homomorphisms; distinct homomorphism monomials are "
       "linearly independent"},
      {"families", "block decompositions of the terms, one homomorphism per block, per-block power-sum constraint"},
      {"notes", "real-valued specializations: even exponents force zero, the reals carry only the identity"},
  };
}

// Witness for one family: in each block every unknown but the first is 1 and
// the first is the principal root of the block constraint.
json family_witness(const Equation& eq, const PartitionFamily& fam, const ReportOptions& opts) {
  auto scalars = eq.real_scalars();
  FamilyAssignment values;
  for (std::size_t j = 0; j < fam.blocks.size(); ++j) {
    std::vector<std::string> names;
    std::vector<unsigned> qs;
    std::vector<std::complex<double>> weights;
    for (unsigned i : fam.blocks[j]) {
      if (fam.shared_first && i == 1) {
        names.push_back("c1_" + std::to_string(j + 1));
        qs.push_back(1);
      } else {
        names.push_back("c" + std::to_string(i));
        qs.push_back(eq.profile[i - 1].q);
      }
      weights.emplace_back(scalars[i - 1].to_double(), 0.0);
    }
    std::vector<std::complex<double>> fixed(names.size(), 1.0);
    auto roots = solve_block_constraint(qs, fixed, 0, weights);
    fixed[0] = roots.front();
    for (std::size_t u = 0; u < names.size(); ++u) values[names[u]] = fixed[u];
  }
  FamilyCheckOptions fo;
  fo.seed = opts.seed;
  fo.constraint_tolerance = opts.tolerance;
  auto verdict = check_family(eq, fam, values, fo);
  json vals = json::object();
  for (const auto& [k, v] : values) vals[k] = fmt_complex(v);
  double max_block = 0.0;
  for (double r : verdict.block_residuals) max_block = std::max(max_block, r);
  return {{"values", vals},
          {"holds", verdict.holds},
          {"max_block_residual", fmt_double(max_block)},
          {"max_sample_residual", fmt_double(verdict.max_sample_residual)}};
}

json condition_json(const ValidationReport& r) {
  return {{"distinct_p", r.distinct_p}, {"distinct_q", r.distinct_q}, {"common_product", r.common_product},
          {"products", r.products},     {"valid", r.valid},           {"messages", r.messages}};
}

std::string real_note() {
  return "real specialization: the only nonzero homomorphism R -> R is the identity, so every additive solution "
         "on R has f_i(x) = c_i*x with sum s_i*c_i^q_i = 0; such solutions are automatically continuous";
}

}  // namespace

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const CapExceeded*>(&e)) return kExitCapExceeded;
  if (dynamic_cast<const Error*>(&e)) return kExitInvalid;
  return kExitInvalid;
}

CommandResult run_guarded(const std::string& command, const std::function<CommandResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    std::string kind = "internal";
    if (dynamic_cast<const ParseError*>(&e)) kind = "parse";
    else if (dynamic_cast<const CapExceeded*>(&e)) kind = "cap";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "domain";
    else if (dynamic_cast<const UnsupportedError*>(&e)) kind = "unsupported";
    else if (dynamic_cast<const Error*>(&e)) kind = "validation";
    CommandResult r;
    r.json = {{"schema", kReportSchema}, {"command", command}, {"error", {{"kind", kind}, {"message", e.what()}}}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      r.json["error"]["message"] = pe->message();
      r.json["error"]["line"] = pe->line();
      r.json["error"]["column"] = pe->column();
    }
    r.text = "error (" + kind + "): " + e.what() + "\n";
    r.exit_code = exit_code_for(e);
    return r;
  }
}

// ---------------------------------------------------------------------------
// analyze

CommandResult cmd_analyze(std::string_view equation, const ReportOptions& opts) {
  auto terms = parse_equation(equation);
  CommandResult res;
  std::ostringstream txt;
  json groups = json::array();
  bool all_valid = true;

  const std::string echo = print_equation(terms);
  txt << "equation: " << echo << "\n";

  for (const auto& group : degree_split(terms)) {
    json g;
    g["N"] = group.N;
    g["equation"] = print_equation(group.terms);
    g["degenerate"] = group.degenerate;
    txt << "\ndegree N = " << group.N << ": " << print_equation(group.terms) << "\n";
    if (group.degenerate) {
      g["notes"] = json::array({"N = 1: a lone linear term, excluded from analysis"});
      txt << "  excluded: N = 1 is a lone linear term\n";
      groups.push_back(g);
      continue;
    }

    std::vector<ExponentRow> rows;
    for (const auto& t : group.terms) rows.push_back({t.p, t.q});
    auto cond = check_condition_C(rows);
    g["condition"] = condition_json(cond);
    txt << "  condition: distinct p " << yes_no(cond.distinct_p) << ", distinct q " << yes_no(cond.distinct_q)
        << ", common product " << yes_no(cond.common_product) << " -> " << (cond.valid ? "admissible" : "violated")
        << "\n";
    for (const auto& m : cond.messages) txt << "    " << m << "\n";
    if (!cond.valid) {
      all_valid = false;
      groups.push_back(g);
      continue;
    }

    Equation eq = make_equation(group.terms);
    g["profile"] = eq.profile.to_string();
    txt << "  profile: " << eq.profile.to_string() << "\n";

    json notes = json::array();
    try {
      const unsigned N = eq.profile.N();
      auto dep = evaluate_pattern(eq, BlockPattern::eq_dep(N));
      auto lc = evaluate_pattern(eq, BlockPattern::eq_lc(N));
      g["identities"] = json::array({
          {{"pattern", BlockPattern::eq_dep(N).to_string()}, {"identity", dep.to_string()}},
          {{"pattern", BlockPattern::eq_lc(N).to_string()}, {"identity", lc.to_string()}},
      });
      txt << "  identity " << BlockPattern::eq_dep(N).to_string() << ": " << dep.to_string() << "\n";
      txt << "  identity " << BlockPattern::eq_lc(N).to_string() << ": " << lc.to_string() << "\n";
      try {
        auto elim = eliminate_dependence(dep, lc, 0);
        g["elimination"] = {{"target", eq.names[0]}, {"identity", elim.to_string()}};
        txt << "  eliminating " << eq.names[0] << ": " << elim.to_string() << "\n";
      } catch (const CannotEliminate& e) {
        g["elimination"] = {{"target", eq.names[0]}, {"skipped", e.what()}};
        txt << "  eliminating " << eq.names[0] << ": skipped (" << e.what() << ")\n";
      }
    } catch (const UnsupportedError& e) {
      g["identities"] = {{"skipped", e.what()}};
      txt << "  identities skipped: " << e.what() << "\n";
    }

    const unsigned k = opts.k.value_or(static_cast<unsigned>(std::max<std::size_t>(1, eq.size() - 1)));
    try {
      auto sys = extract_constraints(eq, k);
      json lines = json::array();
      txt << "  constraints (k = " << k << "):\n";
      std::istringstream in(sys.to_string());
      for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
        txt << "    " << line << "\n";
      }
      g["constraints"] = {{"k", k}, {"system", lines}};

      json fams = json::array();
      txt << "  solution families:\n";
      for (const auto& fam : solution_families(eq)) {
        json cons = json::array();
        for (const auto& c : fam.block_constraints) cons.push_back(c.to_string() + " = 0");
        json f = {{"label", fam.label()},
                  {"irreducible", fam.irreducible},
                  {"shared_first", fam.shared_first},
                  {"constraints", cons},
                  {"witness", family_witness(eq, fam, opts)}};
        txt << "    " << fam.label() << (fam.irreducible ? " (irreducible)" : "") << ":";
        for (std::size_t b = 0; b < cons.size(); ++b) txt << (b ? "; " : " ") << cons[b].get<std::string>();
        txt << "  [witness " << (f["witness"]["holds"].get<bool>() ? "holds" : "FAILS") << "]\n";
        fams.push_back(std::move(f));
      }
      g["families"] = fams;
    } catch (const UnsupportedError& e) {
      g["constraints"] = {{"k", k}, {"skipped", e.what()}};
      txt << "  constraints skipped: " << e.what() << "\n";
    }

    if (real_even_note(eq.profile)) {
      notes.push_back("all q_i are even: every real-valued additive solution vanishes identically");
    }
    if (opts.real) notes.push_back(real_note());
    for (const auto& n : notes) txt << "  note: " << n.get<std::string>() << "\n";
    g["notes"] = notes;
    groups.push_back(g);
  }

  res.json = {{"schema", kReportSchema}, {"command", "analyze"}, {"equation", echo},
              {"groups", groups},        {"valid", all_valid},  {"provenance", provenance_block()}};
  if (opts.k) res.json["k"] = *opts.k;
  res.json["seed"] = opts.seed;
  res.json["tolerance"] = opts.tolerance;
  if (!all_valid) txt << "\nresult: condition violated\n";
  res.text = txt.str();
  res.exit_code = all_valid ? kExitOk : kExitInvalid;
  return res;
}

// ---------------------------------------------------------------------------
// verify

namespace {

template <class F>
json oracle_section(const Equation& eq, const Candidate& cand, const Bindings& b, const std::vector<F>& points,
                    std::ostringstream& txt, bool& failed) {
  json out;
  auto er = equation_oracle(eq, cand, b, points);
  out["equation"] = {{"holds", er.holds}, {"checked", er.checked}};
  txt << "  equation: " << (er.holds ? "holds" : "FAILS") << " on " << er.checked << " sample(s)";
  if (!er.holds) {
    failed = true;
    out["equation"]["witness"] = er.witness->to_string();
    out["equation"]["residual"] = er.residual->to_string();
    txt << ", witness x = " << er.witness->to_string() << ", residual " << er.residual->to_string();
  }
  txt << "\n";
  json add = json::array();
  auto pairs = sample_pairs(points);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    auto ar = additivity_oracle(cand.rows[i], b, pairs);
    json a = {{"name", cand.names[i]}, {"additive", ar.holds}, {"checked", ar.checked}};
    txt << "  " << cand.names[i] << ": " << (ar.holds ? "additive on all samples" : "NOT additive");
    if (!ar.holds) {
      a["witness"] = json::array({ar.witness->first.to_string(), ar.witness->second.to_string()});
      a["defect"] = ar.defect->to_string();
      txt << ", witness (" << ar.witness->first.to_string() << ", " << ar.witness->second.to_string()
          << "), defect " << ar.defect->to_string();
    }
    txt << "\n";
    add.push_back(a);
  }
  out["additivity"] = add;
  return out;
}

}  // namespace

CommandResult cmd_verify(std::string_view equation, std::string_view candidates, VerifyMode mode,
                         std::optional<std::string> bindings_json, const ReportOptions& opts) {
  auto terms = parse_equation(equation);
  Equation eq = make_equation(terms);
  Candidate cand = parse_candidate_file(candidates, eq);

  CommandResult res;
  std::ostringstream txt;
  bool failed = false;
  const char* mode_name = mode == VerifyMode::Symbolic ? "symbolic" : mode == VerifyMode::Oracle ? "oracle" : "both";
  res.json = {{"schema", kReportSchema}, {"command", "verify"}, {"equation", print_equation(terms)},
              {"mode", mode_name},       {"provenance", provenance_block()}};
  txt << "equation: " << print_equation(terms) << "\n";

  json cj = json::array();
  auto classes = classify_candidate(cand);
  txt << "candidate:\n";
  for (std::size_t i = 0; i < cand.size(); ++i) {
    cj.push_back({{"name", cand.names[i]}, {"expression", cand.rows[i].to_string()}, {"shape", classes[i].to_string()}});
    txt << "  " << cand.names[i] << " = " << cand.rows[i].to_string() << "  [" << classes[i].to_string() << "]\n";
  }
  res.json["candidate"] = cj;

  if (mode != VerifyMode::Oracle) {
    json sym;
    json expansions = json::array();
    auto parts = equation_terms(eq, cand);
    txt << "symbolic:\n";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& row = eq.profile[i];
      std::string label = eq.names[i] + (row.q == 1 ? "" : "^" + std::to_string(row.q)) + "(x" +
                          (row.p == 1 ? "" : "^" + std::to_string(row.p)) + ")";
      expansions.push_back({{"term", label}, {"expansion", parts[i].to_string()}});
      txt << "  " << label << " = " << parts[i].to_string() << "\n";
    }
    auto residual = check_equation(eq, cand);
    sym["terms"] = expansions;
    sym["residual"] = residual.to_string();
    sym["zero"] = residual.is_zero();
    txt << "  residual: " << residual.to_string() << "\n";
    if (!residual.is_zero()) failed = true;

    json ids = json::array();
    const unsigned N = eq.profile.N();
    for (const auto& pat : {BlockPattern::eq_dep(N), BlockPattern::eq_lc(N)}) {
      auto r = check_pattern_identity(eq, cand, pat);
      ids.push_back({{"pattern", pat.to_string()}, {"residual", r.to_string()}});
      txt << "  identity " << pat.to_string() << " residual: " << r.to_string() << "\n";
    }
    sym["identities"] = ids;
    res.json["symbolic"] = sym;
  }

  if (mode != VerifyMode::Symbolic) {
    Bindings b = bindings_json ? Bindings::parse_json(*bindings_json) : Bindings{};
    b.complete_for(cand, opts.seed);
    json orc;
    orc["bindings"] = json::parse(b.to_json());
    orc["seed"] = opts.seed;
    orc["samples"] = opts.samples;
    if (b.field == Bindings::FieldKind::RationalFunctions) {
      orc["field"] = "Q(t)";
      txt << "oracle on Q(t), " << opts.samples << " samples, seed " << opts.seed << ":\n";
      orc.update(oracle_section(eq, cand, b, sample_ratfuncs(opts.samples, opts.seed), txt, failed));
    } else {
      orc["field"] = "Q(sqrt(" + std::to_string(b.d) + "))";
      txt << "oracle on Q(sqrt(" << b.d << ")), " << opts.samples << " samples, seed " << opts.seed << ":\n";
      orc.update(oracle_section(eq, cand, b, sample_quads(b.d, opts.samples, opts.seed), txt, failed));
    }
    res.json["oracle"] = orc;
  }

  res.json["verdict"] = failed ? "fail" : "pass";
  txt << "verdict: " << (failed ? "fail" : "pass") << "\n";
  res.text = txt.str();
  res.exit_code = failed ? kExitVerifyFailed : kExitOk;
  return res;
}

// ---------------------------------------------------------------------------
// oracle

CommandResult cmd_oracle_polarization(unsigned n) {
  auto proof = polarization_check(n);
  CommandResult res;
  res.json = {{"schema", kReportSchema},
              {"command", "oracle polarization"},
              {"n", n},
              {"trace", proof.trace},
              {"iterated", proof.iterated.to_string()},
              {"iterated_expected", proof.iterated_expected.to_string()},
              {"mixed", proof.mixed.to_string()},
              {"mixed_expected", proof.mixed_expected.to_string()},
              {"overflow", proof.overflow.to_string()},
              {"verified", proof.verified}};
  std::ostringstream txt;
  txt << "polarization of order " << n << "\n";
  for (const auto& line : proof.trace) txt << "  " << line << "\n";
  txt << "  iterated difference: " << proof.iterated.to_string() << " (expected "
      << proof.iterated_expected.to_string() << ")\n";
  txt << "  mixed difference: " << proof.mixed.to_string() << " (expected " << proof.mixed_expected.to_string()
      << ")\n";
  txt << "  order " << n + 1 << " difference: " << proof.overflow.to_string() << "\n";
  txt << "verified: " << yes_no(proof.verified) << "\n";
  res.text = txt.str();
  res.exit_code = proof.verified ? kExitOk : kExitVerifyFailed;
  return res;
}

CommandResult cmd_oracle_bruteforce(std::string_view profile, std::string_view pattern) {
  auto prof = ExponentProfile::from_rows(parse_profile_rows(profile));
  auto pat = BlockPattern::parse(pattern);
  Equation eq = Equation::from_profile(prof);
  if (prof.N() > kBruteForceMaxN) {
    throw CapExceeded("brute-force enumeration capped at N <= " + std::to_string(kBruteForceMaxN) + ", got N = " +
                      std::to_string(prof.N()));
  }
  auto fast = evaluate_pattern(eq, pat);
  auto slow = brute_force_pattern(eq, pat);
  const bool agree = fast == slow;
  CommandResult res;
  res.json = {{"schema", kReportSchema},
              {"command", "oracle bruteforce"},
              {"profile", prof.to_string()},
              {"pattern", pat.to_string()},
              {"N", prof.N()},
              {"permutations", factorial(prof.N()).get_str()},
              {"fast_path", fast.to_string()},
              {"enumeration", slow.to_string()},
              {"agree", agree}};
  std::ostringstream txt;
  txt << "profile " << prof.to_string() << ", pattern " << pat.to_string() << " (" << factorial(prof.N()).get_str()
      << " permutations)\n";
  txt << "  block occupancy: " << fast.to_string() << "\n";
  txt << "  enumeration:     " << slow.to_string() << "\n";
  txt << "agree: " << yes_no(agree) << "\n";
  res.text = txt.str();
  res.exit_code = agree ? kExitOk : kExitVerifyFailed;
  return res;
}

}  // namespace homchar
