#include "homchar/symmetrize.hpp"

#include <algorithm>
#include <numeric>

#include "homchar/errors.hpp"
#include "homchar/parallel.hpp"
#include "lexer.hpp"

namespace homchar {

using detail::Tok;
using detail::TokenCursor;

// ---------------------------------------------------------------------------
// BlockPattern

unsigned BlockPattern::total() const {
  unsigned t = ones;
  for (const auto& [name, c] : marked) t += c;
  return t;
}

std::string BlockPattern::to_string() const {
  static const std::array<std::string, 3> order = {"x", "y", "z"};
  std::string out = "{";
  bool first = true;
  auto emit = [&](const std::string& k, unsigned v) {
    if (!first) out += ",";
    out += k + ":" + std::to_string(v);
    first = false;
  };
  for (const auto& k : order) {
    auto it = marked.find(k);
    if (it != marked.end()) emit(k, it->second);
  }
  for (const auto& [k, v] : marked) {
    if (std::find(order.begin(), order.end(), k) == order.end()) emit(k, v);
  }
  if (ones > 0) emit("1", ones);
  return out + "}";
}

BlockPattern BlockPattern::parse(std::string_view text) {
  TokenCursor cur(detail::tokenize(text));
  BlockPattern pat;
  cur.expect(Tok::LBrace, "'{'");
  if (!cur.at(Tok::RBrace)) {
    do {
      const auto& tok = cur.next();
      cur.expect(Tok::Colon, "':'");
      unsigned count = detail::parse_nat(cur.expect(Tok::Number, "multiplicity"));
      if (tok.kind == Tok::Number && tok.text == "1") {
        pat.ones += count;
      } else if (tok.kind == Tok::Ident) {
        if (count == 0) throw ParseError("token multiplicity must be positive", tok.line, tok.column);
        pat.marked[tok.text] += count;
      } else {
        throw ParseError("pattern token must be a variable name or 1", tok.line, tok.column);
      }
    } while (cur.accept(Tok::Comma));
  }
  cur.expect(Tok::RBrace, "'}'");
  cur.expect(Tok::End, "end of input");
  return pat;
}

BlockPattern BlockPattern::eq_dep(unsigned N) { return BlockPattern{{{"x", 1}}, N - 1}; }
BlockPattern BlockPattern::eq_lc(unsigned N) { return BlockPattern{{{"x", 1}, {"y", 1}}, N - 2}; }
BlockPattern BlockPattern::diagonal(unsigned N) { return BlockPattern{{{"x", N}}, 0}; }

// ---------------------------------------------------------------------------
// AbstractIdentity

bool IdentityKeyLess::operator()(const IdentityKey& a, const IdentityKey& b) const {
  if (a.row != b.row) return a.row < b.row;
  if (a.ones != b.ones) return a.ones > b.ones;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end(),
                                      [](const ArgMonomial& u, const ArgMonomial& v) { return u > v; });
}

Rational AbstractIdentity::coefficient(const IdentityKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

void AbstractIdentity::add(const IdentityKey& key, const Rational& coeff) {
  if (coeff.is_zero()) return;
  if (key.row >= rows_.size()) throw UniverseMismatch("identity term row out of range");
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AbstractIdentity AbstractIdentity::scaled(const Rational& r) const {
  AbstractIdentity out(rows_);
  for (const auto& [k, c] : terms_) out.add(k, c * r);
  return out;
}

AbstractIdentity AbstractIdentity::primitive() const {
  if (terms_.empty()) return *this;
  mpz_class den_lcm = 1, num_gcd = 0;
  for (const auto& [k, c] : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
    mpz_class n = c.num();
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
  }
  return scaled(Rational(den_lcm, num_gcd));
}

std::string render_arg(const ArgMonomial& m) {
  static const char* names[] = {"x", "y", "z"};
  std::string out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (m[i] == 0) continue;
    out += names[i];
    if (m[i] != 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string AbstractIdentity::to_string() const {
  std::string out;
  for (const auto& [k, c] : terms_) {
    const auto& name = rows_[k.row].name;
    std::string body;
    auto factor = [&](const std::string& arg, unsigned power) {
      if (!body.empty()) body += "*";
      body += name + "(" + arg + ")";
      if (power != 1) body += "^" + std::to_string(power);
    };
    if (k.ones > 0) factor("1", k.ones);
    for (std::size_t i = 0; i < k.args.size();) {
      std::size_t j = i;
      while (j < k.args.size() && k.args[j] == k.args[i]) ++j;
      factor(render_arg(k.args[i]), static_cast<unsigned>(j - i));
      i = j;
    }
    bool negative = c.sign() < 0;
    Rational mag = c.abs();
    std::string term = mag.is_one() ? body : mag.to_string() + "*" + body;
    if (out.empty()) {
      out = negative ? "-" + term : term;
    } else {
      out += (negative ? " - " : " + ") + term;
    }
  }
  return (out.empty() ? "0" : out) + " = 0";
}

std::vector<IdentityRow> identity_rows(const Equation& eq) {
  std::vector<IdentityRow> rows;
  for (std::size_t i = 0; i < eq.size(); ++i) rows.push_back({eq.names[i], eq.profile[i].p, eq.profile[i].q});
  return rows;
}

// ---------------------------------------------------------------------------
// Combinatorial weights

Rational pattern_weight(unsigned p, unsigned N, std::span<const unsigned> group_sizes) {
  if (p == 0 || N % p != 0) throw ValidationError("block size p must divide N");
  unsigned q = N / p;
  unsigned marked = std::accumulate(group_sizes.begin(), group_sizes.end(), 0u);
  if (marked > N) throw ValidationError("more marked tokens than slots");
  if (group_sizes.size() > q) return Rational(0);
  // Ordered choice of distinct blocks, ordered slots inside each block, free
  // arrangement of the unmarked remainder.
  mpz_class count = factorial(q) / factorial(q - static_cast<unsigned>(group_sizes.size()));
  for (unsigned s : group_sizes) {
    if (s > p) return Rational(0);
    count *= factorial(p) / factorial(p - s);
  }
  count *= factorial(N - marked);
  return Rational(count, factorial(N));
}

namespace {

struct PatternTypes {
  std::array<unsigned, 3> counts{};  // x, y, z
  unsigned ones = 0;
  unsigned N = 0;
};

PatternTypes resolve_pattern(const BlockPattern& pattern) {
  if (pattern.marked.size() > 3) {
    throw UnsupportedError("unsupported pattern: more than 3 distinct non-unit tokens");
  }
  PatternTypes t;
  for (const auto& [name, c] : pattern.marked) {
    if (name == "x") {
      t.counts[0] = c;
    } else if (name == "y") {
      t.counts[1] = c;
    } else if (name == "z") {
      t.counts[2] = c;
    } else {
      throw UnsupportedError("unsupported pattern token '" + name + "' (use x, y, z)");
    }
  }
  t.ones = pattern.ones;
  t.N = pattern.total();
  return t;
}

void check_pattern_total(const Equation& eq, const PatternTypes& t) {
  if (t.N != eq.profile.N()) {
    throw ValidationError("pattern has " + std::to_string(t.N) + " arguments, expected N = " +
                          std::to_string(eq.profile.N()));
  }
}

IdentityKey key_from_blocks(std::size_t row, std::span<const ArgMonomial> blocks) {
  IdentityKey key{row, {}, 0};
  for (const auto& b : blocks) {
    if (b[0] == 0 && b[1] == 0 && b[2] == 0) {
      ++key.ones;
    } else {
      key.args.push_back(b);
    }
  }
  std::sort(key.args.begin(), key.args.end(), std::greater<>());
  return key;
}

// Enumerates multisets of q block-occupancy vectors (non-increasing in
// lexicographic order) that exhaust the pattern counts, and accumulates
// (#labelled arrangements) * prod_t n_t! * (p!)^q / (N! * prod_{b,t} v_{b,t}!).
class BlockEnumerator {
 public:
  BlockEnumerator(std::size_t row, unsigned p, unsigned q, const PatternTypes& types, const Rational& scalar,
                  AbstractIdentity& out)
      : row_(row), p_(p), q_(q), types_(types), scalar_(scalar), out_(out) {
    fact_.reserve(types.N + 1);
    for (unsigned k = 0; k <= std::max(types.N, q); ++k) fact_.push_back(factorial(k));
    base_ = fact_[types.counts[0]] * fact_[types.counts[1]] * fact_[types.counts[2]] * fact_[types.ones];
    mpz_class pf = fact_[p];
    for (unsigned b = 0; b < q; ++b) base_ *= pf;
  }

  void run() {
    std::vector<ArgMonomial> blocks;
    recurse(blocks, types_.counts, types_.ones, ArgMonomial{p_, p_, p_});
  }

 private:
  void recurse(std::vector<ArgMonomial>& blocks, std::array<unsigned, 3> rem, unsigned rem_ones,
               const ArgMonomial& bound) {
    if (blocks.size() == q_) {
      if (rem[0] == 0 && rem[1] == 0 && rem[2] == 0 && rem_ones == 0) emit(blocks);
      return;
    }
    // Every remaining block holds exactly p tokens.
    unsigned left = rem[0] + rem[1] + rem[2] + rem_ones;
    if (left != p_ * (q_ - blocks.size())) return;
    for (unsigned a = std::min(rem[0], p_) + 1; a-- > 0;) {
      for (unsigned b = std::min(rem[1], p_ - a) + 1; b-- > 0;) {
        for (unsigned c = std::min(rem[2], p_ - a - b) + 1; c-- > 0;) {
          ArgMonomial v{a, b, c};
          if (v > bound) continue;
          unsigned o = p_ - a - b - c;
          if (o > rem_ones) continue;
          blocks.push_back(v);
          recurse(blocks, {rem[0] - a, rem[1] - b, rem[2] - c}, rem_ones - o, v);
          blocks.pop_back();
        }
      }
    }
  }

  void emit(const std::vector<ArgMonomial>& blocks) {
    mpz_class denom = fact_[types_.N];
    for (const auto& v : blocks) {
      denom *= fact_[v[0]] * fact_[v[1]] * fact_[v[2]] * fact_[p_ - v[0] - v[1] - v[2]];
    }
    // Multiplicities of equal vectors; blocks are sorted so equal ones are adjacent.
    mpz_class arrangements = fact_[q_];
    for (std::size_t i = 0; i < blocks.size();) {
      std::size_t j = i;
      while (j < blocks.size() && blocks[j] == blocks[i]) ++j;
      arrangements /= fact_[static_cast<unsigned>(j - i)];
      i = j;
    }
    out_.add(key_from_blocks(row_, blocks), Rational(arrangements * base_, denom) * scalar_);
  }

  std::size_t row_;
  unsigned p_, q_;
  PatternTypes types_;
  Rational scalar_;
  AbstractIdentity& out_;
  std::vector<mpz_class> fact_;
  mpz_class base_;
};

std::vector<ArgMonomial> position_tokens(const PatternTypes& t) {
  std::vector<ArgMonomial> tokens;
  for (unsigned k = 0; k < 3; ++k) {
    ArgMonomial unit{0, 0, 0};
    unit[k] = 1;
    for (unsigned c = 0; c < t.counts[k]; ++c) tokens.push_back(unit);
  }
  for (unsigned c = 0; c < t.ones; ++c) tokens.push_back({0, 0, 0});
  return tokens;
}

using CountMap = std::map<IdentityKey, std::uint64_t, IdentityKeyLess>;

void tally(const std::vector<unsigned>& perm, const std::vector<ArgMonomial>& tokens, std::size_t row,
           unsigned p, unsigned q, std::vector<ArgMonomial>& scratch, CountMap& counts) {
  for (unsigned b = 0; b < q; ++b) {
    ArgMonomial m{0, 0, 0};
    for (unsigned s = b * p; s < (b + 1) * p; ++s) {
      const auto& t = tokens[perm[s]];
      m[0] += t[0];
      m[1] += t[1];
      m[2] += t[2];
    }
    scratch[b] = m;
  }
  ++counts[key_from_blocks(row, std::span<const ArgMonomial>(scratch.data(), q))];
}

// Permutation of {0..n-1} with the given lexicographic rank.
std::vector<unsigned> unrank(std::uint64_t rank, unsigned n) {
  std::vector<unsigned> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  std::vector<std::uint64_t> fact(n + 1, 1);
  for (unsigned k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
  std::vector<unsigned> perm;
  for (unsigned i = n; i > 0; --i) {
    std::uint64_t idx = rank / fact[i - 1];
    rank %= fact[i - 1];
    perm.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return perm;
}

void check_cap(const PatternTypes& t) {
  if (t.N > kBruteForceMaxN) {
    throw CapExceeded("brute-force enumeration capped at N <= " + std::to_string(kBruteForceMaxN) +
                      " (got N = " + std::to_string(t.N) + ")");
  }
}

template <class CountRow>
AbstractIdentity brute_force_impl(const Equation& eq, const BlockPattern& pattern, CountRow count_row) {
  auto types = resolve_pattern(pattern);
  check_pattern_total(eq, types);
  check_cap(types);
  auto scalars = eq.real_scalars();
  auto tokens = position_tokens(types);
  Rational total_perms(factorial(types.N));
  AbstractIdentity out(identity_rows(eq));
  for (std::size_t i = 0; i < eq.size(); ++i) {
    CountMap counts = count_row(tokens, i, eq.profile[i].p, eq.profile[i].q);
    for (const auto& [key, c] : counts) {
      out.add(key, Rational(static_cast<long>(c)) / total_perms * scalars[i]);
    }
  }
  return out;
}

}  // namespace

AbstractIdentity evaluate_pattern(const Equation& eq, const BlockPattern& pattern) {
  auto types = resolve_pattern(pattern);
  check_pattern_total(eq, types);
  auto scalars = eq.real_scalars();
  AbstractIdentity out(identity_rows(eq));
  for (std::size_t i = 0; i < eq.size(); ++i) {
    BlockEnumerator(i, eq.profile[i].p, eq.profile[i].q, types, scalars[i], out).run();
  }
  return out;
}

AbstractIdentity brute_force_pattern_serial(const Equation& eq, const BlockPattern& pattern) {
  return brute_force_impl(eq, pattern, [](const std::vector<ArgMonomial>& tokens, std::size_t row, unsigned p,
                                          unsigned q) {
    CountMap counts;
    std::vector<unsigned> perm(tokens.size());
    std::iota(perm.begin(), perm.end(), 0u);
    std::vector<ArgMonomial> scratch(q);
    do {
      tally(perm, tokens, row, p, q, scratch, counts);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return counts;
  });
}

AbstractIdentity brute_force_pattern(const Equation& eq, const BlockPattern& pattern) {
  return brute_force_impl(eq, pattern, [](const std::vector<ArgMonomial>& tokens, std::size_t row, unsigned p,
                                          unsigned q) {
    const auto n = static_cast<unsigned>(tokens.size());
    std::uint64_t total = 1;
    for (unsigned k = 2; k <= n; ++k) total *= k;
    const std::int64_t chunks = std::min<std::int64_t>(static_cast<std::int64_t>(total), 64);
    std::vector<CountMap> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      std::uint64_t begin = total * static_cast<std::uint64_t>(c) / static_cast<std::uint64_t>(chunks);
      std::uint64_t end = total * static_cast<std::uint64_t>(c + 1) / static_cast<std::uint64_t>(chunks);
      auto perm = unrank(begin, n);
      std::vector<ArgMonomial> scratch(q);
      auto& local = partial[static_cast<std::size_t>(c)];
      for (std::uint64_t r = begin; r < end; ++r) {
        tally(perm, tokens, row, p, q, scratch, local);
        std::next_permutation(perm.begin(), perm.end());
      }
    }
    CountMap counts;
    for (const auto& part : partial) {
      for (const auto& [k, v] : part) counts[k] += v;
    }
    return counts;
  });
}

// ---------------------------------------------------------------------------
// Elimination

AbstractIdentity eliminate_dependence(const AbstractIdentity& a, const AbstractIdentity& b,
                                      std::size_t target_row) {
  if (!(a.rows() == b.rows())) throw UniverseMismatch("identities belong to different equations");
  if (target_row >= a.rows().size()) throw CannotEliminate("target row out of range");
  for (const auto& [k, c] : a.terms()) {
    for (const auto& arg : k.args) {
      if (arg[1] != 0 || arg[2] != 0) throw CannotEliminate("first identity must involve x alone");
    }
  }
  const unsigned qt = a.rows()[target_row].q;
  IdentityKey designated{target_row, {ArgMonomial{1, 0, 0}}, qt - 1};
  Rational lead = a.coefficient(designated);
  if (lead.is_zero()) {
    throw CannotEliminate("term " + a.rows()[target_row].name + "(x) is absent from the first identity");
  }

  AbstractIdentity out(b.rows());
  for (const auto& [k, c] : b.terms()) {
    if (k.row != target_row || k.args.size() != 1) {
      out.add(k, c);
      continue;
    }
    // c * f_t(1)^{q-1} f_t(m)  is replaced using  a(x -> m) = 0.
    const ArgMonomial& m = k.args[0];
    Rational factor = -c / lead;
    out.add(k, c);
    for (const auto& [ka, ca] : a.terms()) {
      IdentityKey moved{ka.row, {}, ka.ones};
      for (const auto& arg : ka.args) moved.args.push_back({arg[0] * m[0], arg[0] * m[1], arg[0] * m[2]});
      std::sort(moved.args.begin(), moved.args.end(), std::greater<>());
      out.add(moved, ca * factor);
    }
  }
  return out.primitive();
}

// ---------------------------------------------------------------------------
// Polarization

namespace {

std::string render_multiset(const std::vector<unsigned>& mult, const std::vector<std::string>& vectors) {
  std::string out;
  for (std::size_t i = 0; i < mult.size(); ++i) {
    for (unsigned k = 0; k < mult[i]; ++k) {
      if (!out.empty()) out += ",";
      out += vectors[i];
    }
  }
  return "A(" + out + ")";
}

void add_term(MultilinearExpr& e, const std::vector<unsigned>& mult, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = e.terms.try_emplace(mult, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) e.terms.erase(it);
  }
}

// A*(sum_t c_t v_t) expanded by multilinearity and symmetry.
MultilinearExpr trace_of(const std::vector<Rational>& combo, const std::vector<std::string>& vectors, unsigned n) {
  MultilinearExpr e{vectors, {}};
  std::vector<unsigned> mult(vectors.size(), 0);
  auto rec = [&](auto&& self, std::size_t idx, unsigned left, Rational coeff, mpz_class denom) -> void {
    if (idx + 1 == vectors.size()) {
      mult[idx] = left;
      add_term(e, mult, coeff * combo[idx].pow(left) * Rational(factorial(n), denom * factorial(left)));
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      mult[idx] = k;
      self(self, idx + 1, left - k, coeff * combo[idx].pow(k), denom * factorial(k));
    }
  };
  rec(rec, 0, n, Rational(1), mpz_class(1));
  return e;
}

void accumulate(MultilinearExpr& into, const MultilinearExpr& e, const Rational& c) {
  for (const auto& [m, v] : e.terms) add_term(into, m, v * c);
}

// Delta_{y_1..y_m} A*(x) = sum over subsets S of (-1)^{m-|S|} A*(x + sum_S y).
MultilinearExpr mixed_difference(unsigned n, unsigned m) {
  std::vector<std::string> vectors{"x"};
  for (unsigned i = 1; i <= m; ++i) vectors.push_back("y" + std::to_string(i));
  MultilinearExpr out{vectors, {}};
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    std::vector<Rational> combo(m + 1, Rational(0));
    combo[0] = Rational(1);
    unsigned size = 0;
    for (unsigned i = 0; i < m; ++i) {
      if (s & (1u << i)) {
        combo[i + 1] = Rational(1);
        ++size;
      }
    }
    accumulate(out, trace_of(combo, vectors, n), Rational((m - size) % 2 ? -1 : 1));
  }
  return out;
}

}  // namespace

std::string MultilinearExpr::to_string() const {
  std::string out;
  for (const auto& [m, c] : terms) {
    std::string body = render_multiset(m, vectors);
    bool negative = c.sign() < 0;
    Rational mag = c.abs();
    std::string term = mag.is_one() ? body : mag.to_string() + "*" + body;
    if (out.empty()) {
      out = negative ? "-" + term : term;
    } else {
      out += (negative ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

PolarizationProof polarization_check(unsigned n) {
  if (n == 0) throw ValidationError("polarization order must be at least 1");
  if (n > kPolarizationMaxN) {
    throw CapExceeded("polarization check capped at n <= " + std::to_string(kPolarizationMaxN));
  }
  PolarizationProof proof;
  proof.n = n;
  const std::vector<std::string> xy{"x", "y"};

  // Delta_y^n A*(x) = sum_j (-1)^{n-j} C(n,j) A*(x + j y)
  proof.iterated = MultilinearExpr{xy, {}};
  for (unsigned j = 0; j <= n; ++j) {
    auto t = trace_of({Rational(1), Rational(static_cast<long>(j))}, xy, n);
    proof.trace.push_back("A*(x+" + std::to_string(j) + "y) = " + t.to_string());
    Rational sign((n - j) % 2 ? -1 : 1);
    accumulate(proof.iterated, t, sign * Rational(binomial(n, j)));
  }
  proof.iterated_expected = MultilinearExpr{xy, {}};
  add_term(proof.iterated_expected, {0, n}, Rational(factorial(n)));

  proof.mixed = mixed_difference(n, n);
  proof.mixed_expected = MultilinearExpr{proof.mixed.vectors, {}};
  std::vector<unsigned> all_y(n + 1, 1);
  all_y[0] = 0;
  add_term(proof.mixed_expected, all_y, Rational(factorial(n)));

  proof.overflow = mixed_difference(n, n + 1);
  proof.verified = proof.iterated == proof.iterated_expected && proof.mixed == proof.mixed_expected &&
                   proof.overflow.terms.empty();
  return proof;
}

}  // namespace homchar
