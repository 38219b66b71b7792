// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ofplus/ofplus.hpp"

using namespace ofplus;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<Outcome()> body;
};

Exact q(long p, long d = 1) { return Exact(Rational(p, d)); }

FMatrix<Exact> identity_f(int n) { return FMatrix<Exact>::validate(Matrix<Exact>::identity(n)); }

// Collects failures while letting every check run.
struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) {
      if (failures == 0) first = what;
      ++failures;
    }
  }
  Outcome outcome(const std::string& extra = "") const {
    std::string d = std::to_string(checks) + " checks";
    if (!extra.empty()) d += "; " + extra;
    if (failures) d += "; " + std::to_string(failures) + " failed, first: " + first;
    return {failures == 0, d};
  }
};

// ---------------------------------------------------------------------------
// 1. Combinatorics.

using PairList = std::vector<std::pair<int, int>>;

void matchings(std::vector<int> pts, PairList& acc, std::set<PairList>& out) {
  if (pts.empty()) {
    auto s = acc;
    std::sort(s.begin(), s.end());
    bool crossing = false;
    for (auto [a, b] : s)
      for (auto [c, d] : s) crossing = crossing || (a < c && c < b && b < d);
    if (!crossing) out.insert(s);
    return;
  }
  for (std::size_t n = 1; n < pts.size(); ++n) {
    std::vector<int> rest;
    for (std::size_t m = 1; m < pts.size(); ++m)
      if (m != n) rest.push_back(pts[m]);
    acc.emplace_back(pts[0], pts[n]);
    matchings(rest, acc, out);
    acc.pop_back();
  }
}

Outcome combinatorics() {
  Tally t;
  const std::size_t catalans[] = {1, 2, 5, 14, 42, 132, 429, 1430};
  for (int l = 1; l <= 8; ++l)
    t.expect(enumerate_nc2(2 * l).size() == catalans[l - 1], "|NC2(" + std::to_string(2 * l) + ")|");
  for (int l = 1; l <= 5; ++l) {
    std::vector<int> pts;
    for (int x = 1; x <= 2 * l; ++x) pts.push_back(x);
    PairList acc;
    std::set<PairList> oracle;
    matchings(pts, acc, oracle);
    std::set<PairList> got;
    for (const auto& p : enumerate_nc2(2 * l)) got.insert(p.pairs);
    t.expect(got == oracle, "crossing-filter oracle at l=" + std::to_string(l));
  }
  return t.outcome();
}

// ---------------------------------------------------------------------------
// 2-3. Gram oracle and inversion.

FMatrix<Exact> half_f() { return build_canonical<Exact>({1, 1, {Rational(1, 2)}, 2}); }
FMatrix<Exact> symplectic_f() { return FMatrix<Exact>::validate(from_rows<Exact>({{q(0), q(1)}, {q(-1), q(0)}})); }

Outcome gram_oracle() {
  Tally t;
  auto cmp = [&](const FMatrix<Exact>& f, std::vector<int> ls, const std::string& name) {
    for (int l : ls) t.expect(gram_closed(l, f) == gram_bruteforce(l, f), name + " L=" + std::to_string(l));
  };
  cmp(identity_f(2), {2, 4, 6}, "F=1_2");
  cmp(identity_f(3), {2, 4, 6}, "F=1_3");
  cmp(half_f(), {2, 4, 6, 8}, "canonical rho=1/2");
  cmp(symplectic_f(), {2, 4, 6}, "F=[[0,1],[-1,0]]");
  t.expect(gram_closed(4, symplectic_f())(0, 1) == q(-2), "negative entries for c=-1");
  return t.outcome();
}

Outcome inversion() {
  Tally t;
  const std::vector<std::pair<std::string, FMatrix<Exact>>> fs{
      {"F=1_2", identity_f(2)}, {"F=1_3", identity_f(3)}, {"canonical rho=1/2", half_f()}, {"F=[[0,1],[-1,0]]", symplectic_f()}};
  for (const auto& [name, f] : fs)
    for (int l = 2; l <= 10; l += 2) {
      auto tab = weingarten(l, f);
      t.expect(tab.gram * tab.wg == Matrix<Exact>::identity(tab.order.size()), name + " L=" + std::to_string(l));
    }
  return t.outcome("largest block 42x42");
}

// ---------------------------------------------------------------------------
// 4-5. Haar state.

StarWord two(int i, int j, Sign a, int k, int l, Sign b) { return StarWord{{{i, j, a}, {k, l, b}}}; }

Outcome schur() {
  Tally t;
  const std::vector<CanonicalSpec> specs{{1, 0, {}, 2}, {1, 1, {Rational(1, 2)}, 2}, {1, 1, {Rational(1, 3)}, 4},
                                         {1, 2, {Rational(1, 3), Rational(1, 2)}, 4}};
  for (const auto& spec : specs) {
    auto f = build_canonical<Exact>(spec);
    HaarState<Exact> h(f);
    const int n = f.n();
    const Exact nf(f.quantum_dimension());
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          for (int l = 1; l <= n; ++l) {
            // From the entries of F: Q^-1 = F F*, Q = F^t conj(F).
            Exact left(0), right(0);
            for (int a = 1; a <= n; ++a) {
              if (j == l) left += f.at(k, a) * conj(f.at(i, a));
              if (i == k) right += f.at(a, l) * conj(f.at(a, j));
            }
            const std::string at = "k=" + std::to_string(spec.k) + " N=" + std::to_string(n);
            t.expect(h.star_moment(two(i, j, Sign::star, k, l, Sign::plain)) == left / nf, at + " (star,plain)");
            t.expect(h.star_moment(two(i, j, Sign::plain, k, l, Sign::star)) == right / nf, at + " (plain,star)");
          }
  }
  HaarState<Exact> h(half_f());
  t.expect(h.star_moment(two(1, 1, Sign::star, 1, 1, Sign::plain)) == q(1, 17), "h(u11* u11) = 1/17");
  t.expect(h.star_moment(two(1, 1, Sign::plain, 1, 1, Sign::star)) == q(16, 17), "h(u11 u11*) = 16/17");
  return t.outcome();
}

Outcome o2_values() {
  Tally t;
  HaarState<Exact> h(identity_f(2));
  t.expect(h.moment({1, 1}, {1, 1}) == q(1, 2), "h(u11^2) = 1/2");
  t.expect(h.moment({1, 1, 1, 1}, {1, 1, 1, 1}) == q(1, 3), "h(u11^4) = 1/3");
  t.expect(h.moment({1, 1, 1, 1}, {1, 2, 1, 2}) == q(0), "h(u11 u12 u11 u12) = 0");
  return t.outcome();
}

// ---------------------------------------------------------------------------
// 6. Fock oracle.

struct Kind {
  bool semicircular;
  Rational left, right;
};

Outcome fock_oracle() {
  Tally t;
  const std::vector<Rational> vs{Rational(1, 4), Rational(1), Rational(4)};
  std::vector<Kind> kinds;
  for (const auto& a : vs)
    for (const auto& b : vs) kinds.push_back({false, a, b});
  for (const auto& v : vs) kinds.push_back({true, v, v});

  // Every multiset of one to three kinds.
  std::vector<std::vector<int>> families;
  for (std::size_t a = 0; a < kinds.size(); ++a) {
    families.push_back({int(a)});
    for (std::size_t b = a; b < kinds.size(); ++b) {
      families.push_back({int(a), int(b)});
      for (std::size_t c = b; c < kinds.size(); ++c) families.push_back({int(a), int(b), int(c)});
    }
  }
  long words = 0;
  for (const auto& fam : families) {
    const int d = static_cast<int>(fam.size());
    std::vector<GCSpec<Exact>> specs;
    auto sp = std::make_shared<const TruncatedFock>(2 * d, 3);
    std::vector<FockOperator<Exact>> plain, star;
    for (int n = 0; n < d; ++n) {
      const auto& k = kinds[fam[n]];
      specs.push_back({"x" + std::to_string(n + 1), k.semicircular ? VariableKind::semicircular : VariableKind::generalized_circular,
                       Exact(k.left), Exact(k.right)});
      const Exact alpha(*exact_sqrt(k.left)), beta(*exact_sqrt(k.right));
      const int letter = 2 * n + 1;
      auto op = k.semicircular ? gc_operator(sp, alpha, alpha, letter, letter) : gc_operator(sp, alpha, beta, letter, letter + 1);
      star.push_back(op.adjoint());
      plain.push_back(std::move(op));
    }
    for (int len = 0; len <= 6; ++len) {
      long total = 1;
      for (int s = 0; s < len; ++s) total *= 2 * d;
      std::vector<int> r(len);
      SignPattern eps(len);
      std::vector<const FockOperator<Exact>*> ops(len);
      for (long code = 0; code < total; ++code) {
        long c = code;
        for (int s = 0; s < len; ++s, c /= 2 * d) {
          r[s] = static_cast<int>(c % d) + 1;
          eps[s] = (c / d) % 2 ? Sign::star : Sign::plain;
          ops[s] = eps[s] == Sign::star ? &star[r[s] - 1] : &plain[r[s] - 1];
        }
        ++words;
        t.expect(vacuum_expectation(ops) == free_moment(specs, r, eps), "family of " + std::to_string(d) + ", word code " + std::to_string(code));
      }
    }
  }
  return t.outcome(std::to_string(families.size()) + " families, " + std::to_string(words) + " words, cutoff m=3");
}

// ---------------------------------------------------------------------------
// 7. Gamma family.

std::vector<StarWord> words_of_lengths(const std::vector<std::pair<int, int>>& pos, std::initializer_list<int> lens) {
  std::vector<StarWord> out;
  for (int l : lens) {
    auto w = all_star_words(pos, l);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

Outcome gamma_family() {
  Tally t;
  const GammaSweep sweep{1, {Rational(1, 2)}, {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)}};
  const auto grid = gamma_grid(1);

  auto zero_rows = convergence_table<Exact>(sweep, words_of_lengths(grid, {2}));
  for (const auto& r : zero_rows) t.expect(r.error == 0, "length-2 error at gamma=" + r.param + " word " + r.word);

  const auto suite = words_of_lengths(grid, {4, 6});
  const auto rows = convergence_table<Exact>(sweep, suite);

  // Suite-level scaled column: max over the word suite at each gamma,
  // bounded by 4x its value at gamma = 1/2.
  std::map<std::string, Rational> col;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    auto [it, fresh] = col.emplace(r.param, r.scaled);
    if (fresh) order.push_back(r.param);
    else if (r.scaled > it->second) it->second = r.scaled;
  }
  const Rational first = col[order.front()];
  std::ostringstream maxes;
  for (const auto& p : order) {
    t.expect(col[p] <= 4 * first, "suite max at gamma=" + p);
    maxes << (p == order.front() ? "" : ", ") << p << ":" << std::setprecision(4) << col[p].get_d();
  }

  // The per-word rule is reported; it holds on every length-4 word.
  std::size_t per_word_4 = 0, per_word_6 = 0;
  for (const auto& r : unbounded_rows(rows)) (std::count(r.word.begin(), r.word.end(), ':') == 4 ? per_word_4 : per_word_6)++;
  t.expect(per_word_4 == 0, "per-word bound on length-4 words");

  for (int l : {4, 6}) {
    Rational dev0 = -1;
    for (const auto& g : sweep.gammas) {
      auto f = build_gamma<Exact>(1, sweep.rho, g);
      auto dev = weingarten_deviation(weingarten(l, f), f);
      if (dev0 < 0) dev0 = dev;
      t.expect(dev <= 4 * dev0, "Weingarten deviation L=" + std::to_string(l) + " gamma=" + g.get_str());
    }
  }
  return t.outcome(std::to_string(suite.size()) + " words x 4 gammas; suite max scaled {" + maxes.str() +
                   "}; per-word 4x violations: " + std::to_string(per_word_4) + " of length 4, " +
                   std::to_string(per_word_6) + " of length 6 (reported only)");
}

// ---------------------------------------------------------------------------
// 8. Large-rank family.

Outcome large_rank() {
  Tally t;
  for (int k = 1; k <= 3; ++k) {
    auto f = build_large_rank<Exact>(k, std::vector<Rational>(k, Rational(4)));
    t.expect(f.c() == -1, "c = -1 at k=" + std::to_string(k));
    HaarState<Exact> h(f);
    const Exact nf(f.quantum_dimension());
    auto fam = limit_family(f);
    for (auto [i, j] : large_rank_designated(k)) {
      t.expect(nf * h.star_moment(two(i, j, Sign::star, i, j, Sign::plain)) == q(1), "phi(z*z) = 1");
      t.expect(nf * h.star_moment(two(i, j, Sign::plain, i, j, Sign::star)) == q(4), "phi(zz*) = lambda");
      t.expect(fam.at(i, j).left_var == q(1) && fam.at(i, j).right_var == q(4), "limit variances (1, lambda)");
    }
  }
  const auto suite = words_of_lengths({{1, 1}, {1, 2}}, {2, 4, 6});
  auto rows = convergence_table<Exact>(LargeRankSweep{{1, 2, 3}, Rational(4)}, suite);
  const auto bad = unbounded_rows(rows);
  t.expect(bad.empty(), "per-word bound across k" + (bad.empty() ? std::string() : " (" + bad.front().word + ")"));
  for (const auto& r : rows)
    if (std::count(r.word.begin(), r.word.end(), ':') == 2) t.expect(r.error == 0, "length-2 error");
  return t.outcome(std::to_string(suite.size()) + " words x k in {1,2,3}");
}

// ---------------------------------------------------------------------------
// 9. U+ model.

Outcome unitary_model() {
  Tally t;
  for (const CanonicalSpec& spec : {CanonicalSpec{1, 0, {}, 2}, CanonicalSpec{1, 1, {Rational(1, 2)}, 2}, CanonicalSpec{1, 1, {Rational(1, 3)}, 3}}) {
    auto f = build_canonical<Exact>(spec);
    HaarState<Exact> h(f);
    const int n = f.n();
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          for (int l = 1; l <= n; ++l) {
            t.expect(unitary_star_moment(h, two(i, j, Sign::star, k, l, Sign::plain)) == schur_covariance(f, i, j, k, l, Side::left), "left Schur");
            t.expect(unitary_star_moment(h, two(i, j, Sign::plain, k, l, Sign::star)) == schur_covariance(f, i, j, k, l, Side::right), "right Schur");
          }
    std::vector<std::pair<int, int>> all;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) all.emplace_back(i, j);
    for (int len : {1, 3})
      for (const auto& w : all_star_words(all, len)) t.expect(unitary_star_moment(h, w) == q(0), "odd word " + to_string(w));
  }
  HaarState<Exact> h(identity_f(2));
  t.expect(unitary_star_moment(h, two(1, 1, Sign::plain, 1, 1, Sign::plain)) == q(0), "h(v11 v11) = 0");
  return t.outcome();
}

// ---------------------------------------------------------------------------
// 10. Symmetry.

Outcome symmetry() {
  Tally t;
  std::vector<CanonicalSpec> specs;
  for (int n = 2; n <= 4; ++n) specs.push_back({1, 0, {}, n});
  specs.push_back({1, 1, {Rational(1, 2)}, 2});
  specs.push_back({1, 1, {Rational(1, 2)}, 3});
  specs.push_back({1, 1, {Rational(1, 3)}, 4});
  specs.push_back({1, 2, {Rational(1, 3), Rational(1, 2)}, 4});
  specs.push_back({-1, 1, {Rational(1, 2)}, 2});
  specs.push_back({-1, 2, {Rational(1, 2), Rational(1)}, 4});
  long evaluations = 0;
  for (const auto& spec : specs) {
    auto f = build_canonical<Exact>(spec);
    HaarState<Exact> h(f);
    InvarianceChecker<Exact> checker(h);
    const int n = f.n();
    const auto words = test_words(f, 2);
    const std::string at = "c=" + std::to_string(spec.c) + " k=" + std::to_string(spec.k) + " N=" + std::to_string(n);
    for (const auto& w : words) {
      for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
          t.expect(is_zero(weak_unitarity_check(h, a, b, w)), at + " unitarity");
          t.expect(is_zero(weak_q_relation_check(h, a, b, w)), at + " q-relation");
        }
      for (int len : {2, 4})
        for (int mask = 0; mask < (1 << len); ++mask) {
          SignPattern eps;
          for (int s = 0; s < len; ++s) eps.push_back((mask >> s) & 1 ? Sign::star : Sign::plain);
          std::vector<int> i(len, 1);
          for (;;) {
            ++evaluations;
            t.expect(is_zero(checker.check(eps, i, w).difference), at + " invariance w=" + to_string(w));
            int pos = len - 1;
            while (pos >= 0 && ++i[pos] > n) i[pos--] = 1;
            if (pos < 0) break;
          }
        }
    }
  }
  return t.outcome(std::to_string(specs.size()) + " canonical F, " + std::to_string(evaluations) + " invariance evaluations");
}

// ---------------------------------------------------------------------------
// 11. Factor types.

Matrix<Exact> diag(std::initializer_list<Rational> xs) {
  Matrix<Exact> m(xs.size(), xs.size());
  std::size_t n = 0;
  for (const auto& x : xs) m(n, n) = Exact(x), ++n;
  return m;
}

Outcome factor_types() {
  Tally t;
  t.expect(classify_factor_type(Matrix<Exact>::identity(3)).to_string() == "II_1", "Q = 1");
  t.expect(classify_factor_type(diag({4, Rational(1, 4)})).to_string() == "III_1/16", "Q = diag(4,1/4)");
  t.expect(classify_factor_type(diag({4, Rational(1, 4), 9, Rational(1, 9)})).to_string() == "III_1", "Q = diag(4,1/4,9,1/9)");
  return t.outcome();
}

// ---------------------------------------------------------------------------
// 12. CLI determinism.

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Tally t;
  const fs::path dir = fs::temp_directory_path() / ("ofplus-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = std::string("'") + OFPLUS_CLI_PATH + "'";
  const std::string spec = R"('{"type":"canonical","c":1,"k":1,"rho":["1/2"],"n":3}')";
  const std::vector<std::string> commands{
      "converge --family gamma --k 1 --rho 1/2 --gammas 1/2,1/4,1/8 --l 4",
      "converge --family large-rank --ks 1,2 --lambda 4 --l 4 --format json",
      "weingarten --f " + spec + " --l 8 --format json",
      "star-moment --f " + spec + " --word \"1:1 1:2* 1:3 1:1* 3:3 3:3\"",
      "invariance --f " + spec + " --sweep --l 2 --max-word 1",
  };
  for (std::size_t c = 0; c < commands.size(); ++c) {
    const auto base = dir / ("run" + std::to_string(c));
    auto a = base;
    a += "-a.out";
    auto b = base;
    b += "-b.out";
    auto cold = base;
    cold += "-cold.out";
    auto warm = base;
    warm += "-warm.out";
    const auto cache = dir / ("cache" + std::to_string(c));
    t.expect(shell(cli + " " + commands[c] + " --out '" + a.string() + "' 2>/dev/null") == 0, "exit 0: " + commands[c]);
    shell(cli + " " + commands[c] + " --out '" + b.string() + "' 2>/dev/null");
    shell(cli + " " + commands[c] + " --cache-dir '" + cache.string() + "' --out '" + cold.string() + "' 2>/dev/null");
    shell(cli + " " + commands[c] + " --cache-dir '" + cache.string() + "' --out '" + warm.string() + "' 2>/dev/null");
    const auto ref = slurp(a);
    t.expect(!ref.empty(), "non-empty output: " + commands[c]);
    t.expect(slurp(b) == ref, "repeat identical: " + commands[c]);
    t.expect(slurp(cold) == ref, "cold cache identical: " + commands[c]);
    t.expect(slurp(warm) == ref, "warm cache identical: " + commands[c]);
    t.expect(fs::exists(cache) && !fs::is_empty(cache), "cache populated: " + commands[c]);
  }
  fs::remove_all(dir);
  return t.outcome(std::to_string(commands.size()) + " commands x (repeat, cold, warm)");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "non-crossing pairings", 5, combinatorics},
      {2, "Gram closed form vs brute force", 60, gram_oracle},
      {3, "Gram inversion up to L=10", 60, inversion},
      {4, "second moments vs Schur orthogonality", 60, schur},
      {5, "O2+ moment values", 60, o2_values},
      {6, "Fock model vs free moments", 120, fock_oracle},
      {7, "gamma family freeness rate", 300, gamma_family},
      {8, "large-rank family", 300, large_rank},
      {9, "U+ free-product model", 60, unitary_model},
      {10, "weak unitarity, Q-relation and invariance", 300, symmetry},
      {11, "factor type classification", 5, factor_types},
      {12, "CLI determinism and cache transparency", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = out.ok && in_time;
    failed += !pass;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " [" << out.detail << "] ("
         << std::fixed << std::setprecision(2) << secs << " s, limit " << c.limit_s << " s"
         << (in_time ? "" : ", OVER TIME LIMIT") << ")";
    std::cout << line.str() << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (criteria.size() - failed) << "/" << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
