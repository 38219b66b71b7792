// Command-line front end for the ofplus library.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ofplus/ofplus.hpp"

namespace {

using namespace ofplus;
using Json = nlohmann::ordered_json;

constexpr const char* kCacheEnv = "OFPLUS_CACHE_DIR";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string f_source;
  std::string mode = "exact";
  unsigned precision = 256;
  std::string format = "text";
  std::string out;
  std::string cache_dir;

  // Query arguments shared across subcommands.
  std::string i, j, eps, word, words, vars, r;
  int length = 4;
  bool compare_bruteforce = false;
  int depth = 3;
  int max_length = 6;

  std::string family = "gamma";
  int k = 1;
  std::string rho = "1/2";
  std::string gammas = "1/2,1/4,1/8";
  std::string ks = "1,2,3";
  std::string lambda = "4";
  std::string positions;

  bool sweep = false;
  int max_word = 2;
  std::string q;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  if (text.empty()) return out;
  for (const auto& tok : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw UsageError(std::string(what) + ": expected comma-separated integers, got '" + text + "'");
    }
  }
  return out;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  if (text.empty()) return out;
  for (const auto& tok : split(text, ',')) out.push_back(parse_rational(tok));
  return out;
}

std::vector<StarWord> parse_words(const std::string& text) {
  std::vector<StarWord> out;
  for (const auto& w : split(text, ';')) out.push_back(parse_word(w));
  return out;
}

std::vector<std::pair<int, int>> parse_positions(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  for (const auto& l : parse_word(text).letters) out.emplace_back(l.i, l.j);
  return out;
}

std::string read_source(const std::string& src) {
  if (!src.empty() && src.front() == '{') return src;
  std::ifstream in(src);
  if (!in) throw UsageError("cannot read F spec file '" + src + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes to --out atomically (temp file + rename), or to stdout.
void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  const std::filesystem::path target(cfg.out);
  auto tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary);
    os << text;
    if (!os) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string render_grid(const auto& m) {
  std::string s;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) s += (c ? " " : "") + to_string(m(r, c));
    s += "\n";
  }
  return s;
}

Json grid_json(const auto& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SignPattern eps_or_plain(const std::string& eps, std::size_t length) {
  if (eps.empty()) return SignPattern(length, Sign::plain);
  return parse_sign_pattern(eps);
}

/// "a:b" is a generalized circular with variances (a, b); "s:v" a semicircular
/// of variance v; entries separated by commas.
template <class T>
std::vector<GCSpec<T>> parse_vars(const std::string& text) {
  using R = typename T::real_type;
  std::vector<GCSpec<T>> out;
  for (const auto& tok : split(text, ',')) {
    auto parts = split(tok, ':');
    if (parts.size() != 2) throw UsageError("variable must look like left:right or s:variance, got '" + tok + "'");
    GCSpec<T> s;
    s.label = "x" + std::to_string(out.size() + 1);
    if (parts[0] == "s") {
      s.kind = VariableKind::semicircular;
      s.left_var = s.right_var = T(parse_real<R>(parts[1]));
    } else {
      s.left_var = T(parse_real<R>(parts[0]));
      s.right_var = T(parse_real<R>(parts[1]));
    }
    s.check();
    out.push_back(std::move(s));
  }
  if (out.empty()) throw UsageError("--vars is required");
  return out;
}

template <class T>
class Runner {
 public:
  explicit Runner(const Config& cfg) : cfg_(cfg) {
    if constexpr (std::is_same_v<T, Exact>) {
      std::string dir = cfg.cache_dir;
      if (dir.empty())
        if (const char* env = std::getenv(kCacheEnv)) dir = env;
      if (!dir.empty()) {
        auto store = std::make_shared<const DiskTableStore>(dir);
        cache_ = std::make_shared<WeingartenCache<T>>(store);
      }
    }
    if (!cache_) cache_ = std::make_shared<WeingartenCache<T>>();
  }

  FMatrix<T> f() const {
    if (cfg_.f_source.empty()) throw UsageError("--f is required");
    return build_f<T>(parse_f_spec(read_source(cfg_.f_source)));
  }

  HaarState<T> haar() const { return HaarState<T>(f(), cache_); }

  std::string scalar_out(const std::string& key, const T& v) const {
    if (cfg_.format == "json") return dump(Json{{key, to_string(v)}});
    if (cfg_.format == "csv") return key + "\n" + to_string(v) + "\n";
    return to_string(v) + "\n";
  }

  std::string moment() const {
    auto i = parse_ints(cfg_.i, "--i");
    auto j = parse_ints(cfg_.j, "--j");
    auto eps = eps_or_plain(cfg_.eps, i.size());
    auto h = haar();
    const bool plain = std::all_of(eps.begin(), eps.end(), [](Sign s) { return s == Sign::plain; });
    return scalar_out("moment", plain ? h.moment(i, j) : h.star_moment(StarWord::from(i, j, eps)));
  }

  std::string star_moment() const {
    auto h = haar();
    StarWord w;
    if (!cfg_.word.empty()) {
      w = parse_word(cfg_.word);
    } else {
      auto i = parse_ints(cfg_.i, "--i");
      w = StarWord::from(i, parse_ints(cfg_.j, "--j"), eps_or_plain(cfg_.eps, i.size()));
    }
    return scalar_out("star_moment", h.star_moment(w));
  }

  std::string gram() const {
    auto fm = f();
    const auto g = gram_closed(cfg_.length, fm);
    std::optional<Matrix<T>> brute;
    if (cfg_.compare_bruteforce) brute = gram_bruteforce(cfg_.length, fm);
    const bool match = brute && near(*brute, g);
    std::string s;
    if (cfg_.format == "json") {
      Json j;
      j["L"] = cfg_.length;
      Json order = Json::array();
      for (const auto& p : nc2(cfg_.length)) order.push_back(to_string(p));
      j["order"] = order;
      j["gram"] = grid_json(g);
      if (brute) {
        j["bruteforce"] = grid_json(*brute);
        j["result"] = match ? "MATCH" : "MISMATCH";
      }
      s = dump(j);
    } else {
      s += "order";
      for (const auto& p : nc2(cfg_.length)) s += " " + to_string(p);
      s += "\nclosed form\n" + render_grid(g);
      if (brute) s += "brute force\n" + render_grid(*brute) + (match ? "MATCH\n" : "MISMATCH\n");
    }
    mismatch_ = brute && !match;
    return s;
  }

  std::string weingarten() const {
    auto h = haar();
    const auto& t = h.table(cfg_.length);
    if (cfg_.format == "json") {
      Json j;
      j["L"] = cfg_.length;
      Json order = Json::array();
      for (const auto& p : t.order) order.push_back(to_string(p));
      j["order"] = order;
      j["wg"] = grid_json(t.wg);
      return dump(j);
    }
    std::string s = "order";
    for (const auto& p : t.order) s += " " + to_string(p);
    return s + "\n" + render_grid(t.wg);
  }

  std::string variances() const {
    auto fm = f();
    auto phi = variance_matrix(fm);
    std::optional<LimitFamily<T>> fam;
    if (fm.monomial()) fam = limit_family(fm);
    if (cfg_.format == "json") {
      Json j;
      j["N_F"] = to_string(fm.quantum_dimension());
      j["c"] = fm.c();
      Json cells = Json::array();
      for (int a = 1; a <= fm.n(); ++a)
        for (int b = 1; b <= fm.n(); ++b) {
          const auto& v = phi[a - 1][b - 1];
          cells.push_back({{"i", a}, {"j", b}, {"left", to_string(v.left)}, {"right", to_string(v.right)}});
        }
      j["phi"] = cells;
      if (fam) {
        Json lim = Json::array();
        for (std::size_t n = 0; n < fam->specs.size(); ++n) {
          const auto& sp = fam->specs[n];
          lim.push_back({{"i", fam->positions[n].first},
                         {"j", fam->positions[n].second},
                         {"kind", to_string(sp.kind)},
                         {"left", to_string(sp.left_var)},
                         {"right", to_string(sp.right_var)}});
        }
        j["limit_family"] = lim;
      }
      return dump(j);
    }
    std::string s = "N_F " + to_string(fm.quantum_dimension()) + "\nc " + std::to_string(fm.c()) + "\n";
    s += "i,j,left,right\n";
    for (int a = 1; a <= fm.n(); ++a)
      for (int b = 1; b <= fm.n(); ++b)
        s += std::to_string(a) + "," + std::to_string(b) + "," + to_string(phi[a - 1][b - 1].left) + "," +
             to_string(phi[a - 1][b - 1].right) + "\n";
    if (fam) {
      s += "limit family\n";
      for (std::size_t n = 0; n < fam->specs.size(); ++n) {
        const auto& sp = fam->specs[n];
        s += "y" + std::to_string(fam->positions[n].first) + "," + std::to_string(fam->positions[n].second) + " " +
             to_string(sp.kind) + " " + to_string(sp.left_var) + " " + to_string(sp.right_var) + "\n";
      }
    }
    return s;
  }

  std::string free_moment_cmd() const {
    if (!cfg_.vars.empty()) {
      auto vars = parse_vars<T>(cfg_.vars);
      auto r = parse_ints(cfg_.r, "--r");
      return scalar_out("free_moment", free_moment(vars, r, eps_or_plain(cfg_.eps, r.size())));
    }
    auto fm = f();
    return scalar_out("free_moment", free_moment(limit_family(fm), parse_word(cfg_.word)));
  }

  std::string fock_check() const {
    auto vars = parse_vars<T>(cfg_.vars);
    const int d = 2 * static_cast<int>(vars.size());
    auto space = std::make_shared<const TruncatedFock>(d, cfg_.depth);
    std::vector<FockOperator<T>> ops;
    for (std::size_t n = 0; n < vars.size(); ++n) {
      const auto& v = vars[n];
      const int a = 2 * static_cast<int>(n) + 1;
      if (v.kind == VariableKind::semicircular) {
        ops.push_back(gc_operator(space, T(sqrt_of(v.left_var)), T(sqrt_of(v.left_var)), a, a));
      } else {
        ops.push_back(gc_operator(space, T(sqrt_of(v.left_var)), T(sqrt_of(v.right_var)), a, a + 1));
      }
    }
    std::vector<FockOperator<T>> adj;
    for (const auto& op : ops) adj.push_back(op.adjoint());

    std::size_t checked = 0;
    std::size_t mismatched = 0;
    std::vector<std::string> warnings;
    std::string first_bad;
    for (int len = 0; len <= cfg_.max_length; ++len) {
      std::vector<int> r(static_cast<std::size_t>(len), 1);
      const std::size_t labels = vars.size();
      std::size_t total = 1;
      for (int s = 0; s < len; ++s) total *= labels * 2;
      for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        SignPattern eps(static_cast<std::size_t>(len));
        std::vector<const FockOperator<T>*> chain;
        for (int s = len - 1; s >= 0; --s) {
          eps[static_cast<std::size_t>(s)] = (c % 2) ? Sign::star : Sign::plain;
          c /= 2;
          r[static_cast<std::size_t>(s)] = static_cast<int>(c % labels) + 1;
          c /= labels;
        }
        for (int s = 0; s < len; ++s) {
          const auto idx = static_cast<std::size_t>(r[static_cast<std::size_t>(s)] - 1);
          chain.push_back(eps[static_cast<std::size_t>(s)] == Sign::star ? &adj[idx] : &ops[idx]);
        }
        T lhs = vacuum_expectation(chain, warnings.empty() ? &warnings : nullptr);
        T rhs = free_moment(vars, r, eps);
        ++checked;
        if (!near(lhs, rhs)) {
          ++mismatched;
          if (first_bad.empty()) first_bad = "word length " + std::to_string(len) + ": " + to_string(lhs) + " vs " + to_string(rhs);
        }
      }
    }
    mismatch_ = mismatched != 0;
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    if (cfg_.format == "json") {
      Json j{{"dimension", space->dim()},
             {"words", checked},
             {"mismatches", mismatched},
             {"result", mismatched ? "MISMATCH" : "MATCH"}};
      if (!first_bad.empty()) j["first_mismatch"] = first_bad;
      return dump(j);
    }
    std::string s = "dimension " + std::to_string(space->dim()) + "\nwords " + std::to_string(checked) + "\n";
    if (!first_bad.empty()) s += "first mismatch " + first_bad + "\n";
    return s + (mismatched ? "MISMATCH\n" : "MATCH\n");
  }

  std::string converge() const {
    std::vector<StarWord> suite;
    std::vector<ConvergenceRow<T>> rows;
    if (cfg_.family == "gamma") {
      GammaSweep sweep{cfg_.k, parse_rationals(cfg_.rho), parse_rationals(cfg_.gammas)};
      auto pos = cfg_.positions.empty() ? gamma_grid(cfg_.k) : parse_positions(cfg_.positions);
      suite = cfg_.words.empty() ? all_star_words(pos, cfg_.length) : parse_words(cfg_.words);
      rows = convergence_table<T>(sweep, suite, cache_);
    } else if (cfg_.family == "large-rank") {
      LargeRankSweep sweep{parse_ints(cfg_.ks, "--ks"), parse_rational(cfg_.lambda)};
      auto pos = cfg_.positions.empty() ? std::vector<std::pair<int, int>>{{1, 1}, {1, 2}} : parse_positions(cfg_.positions);
      suite = cfg_.words.empty() ? all_star_words(pos, cfg_.length) : parse_words(cfg_.words);
      rows = convergence_table<T>(sweep, suite, cache_);
    } else {
      throw UsageError("--family must be gamma or large-rank");
    }
    const auto bad = unbounded_rows(rows);
    std::cerr << rows.size() << " rows; " << bad.size() << " above 4x their first-parameter value\n";
    if (cfg_.format == "json") {
      Json out = Json::array();
      for (const auto& r : rows)
        out.push_back({{"family", r.family},
                       {"param", r.param},
                       {"N_F", to_string(r.n_f)},
                       {"word", r.word},
                       {"error", to_string(r.error)},
                       {"scaled", to_string(r.scaled)}});
      return dump(out);
    }
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
  }

  std::string invariance() const {
    auto h = haar();
    const int n = h.f().n();
    if (cfg_.sweep) {
      // Weak checks over all indices and test words, then the invariance
      // identity for every i and eps of length <= L.
      const auto words = test_words(h.f(), cfg_.max_word);
      std::size_t checks = 0;
      std::size_t nonzero = 0;
      for (const auto& w : words)
        for (int a = 1; a <= n; ++a)
          for (int b = 1; b <= n; ++b) {
            nonzero += !is_zero(weak_unitarity_check(h, a, b, w));
            nonzero += !is_zero(weak_q_relation_check(h, a, b, w));
            checks += 2;
          }
      InvarianceChecker<T> checker(h);
      for (int len = 1; len <= cfg_.length; ++len)
        for (int mask = 0; mask < (1 << len); ++mask) {
          SignPattern eps;
          for (int b = len - 1; b >= 0; --b) eps.push_back(((mask >> b) & 1) ? Sign::star : Sign::plain);
          for (const auto& w : words) {
            std::vector<int> i(static_cast<std::size_t>(len), 1);
            for (;;) {
              nonzero += !is_zero(checker.check(eps, i, w).difference);
              ++checks;
              int pos = len - 1;
              while (pos >= 0 && ++i[static_cast<std::size_t>(pos)] > n) i[static_cast<std::size_t>(pos--)] = 1;
              if (pos < 0) break;
            }
          }
        }
      mismatch_ = nonzero != 0;
      Json j{{"test_words", words.size()}, {"checks", checks}, {"nonzero", nonzero}};
      if (cfg_.format == "json") return dump(j);
      return "test words " + std::to_string(words.size()) + "\nchecks " + std::to_string(checks) + "\nnonzero " +
             std::to_string(nonzero) + "\n";
    }
    auto i = parse_ints(cfg_.i, "--i");
    auto eps = eps_or_plain(cfg_.eps, i.size());
    const StarWord w = parse_word(cfg_.word);
    Json reports = Json::array();
    auto scalar_report = [&](const std::string& id, int a, int b, const T& value) {
      reports.push_back({{"id", id},
                         {"i", a},
                         {"j", b},
                         {"word", to_string(w)},
                         {"lhs", to_string(value)},
                         {"rhs", "0"},
                         {"difference", to_string(value)}});
    };
    if (i.size() == 2) {
      scalar_report("weak-unitarity", i[0], i[1], weak_unitarity_check(h, i[0], i[1], w));
      scalar_report("weak-q-relation", i[0], i[1], weak_q_relation_check(h, i[0], i[1], w));
    }
    auto rep = invariance_check(h, eps, i, w);
    std::string eps_text;
    for (Sign e : rep.eps) eps_text += (eps_text.empty() ? "" : ",") + std::string(1, sign_char(e));
    reports.push_back({{"id", rep.id},
                       {"L", rep.length},
                       {"eps", eps_text},
                       {"i", rep.i},
                       {"word", to_string(rep.word)},
                       {"lhs", to_string(rep.lhs)},
                       {"rhs", to_string(rep.rhs)},
                       {"difference", to_string(rep.difference)}});
    for (const auto& r : reports) mismatch_ = mismatch_ || r["difference"] != "0";
    return dump(reports);
  }

  std::string classify() const {
    Matrix<Exact> q;
    if (!cfg_.q.empty()) {
      auto diag = parse_rationals(cfg_.q);
      q = Matrix<Exact>(diag.size(), diag.size());
      for (std::size_t a = 0; a < diag.size(); ++a) q(a, a) = Exact(diag[a]);
    } else {
      q = build_f<Exact>(parse_f_spec(read_source(cfg_.f_source))).q();
    }
    const auto type = classify_factor_type(q).to_string();
    if (cfg_.format == "json") return dump(Json{{"type", type}});
    return type + "\n";
  }

  bool mismatch() const { return mismatch_; }

 private:
  static typename T::real_type sqrt_of(const T& v) {
    using R = typename T::real_type;
    if constexpr (field_traits<R>::exact) {
      auto r = exact_sqrt(v.re);
      if (!r) throw DomainError("variance " + to_string(v) + " is not a rational square; use --mode float");
      return *r;
    } else {
      return boost::multiprecision::sqrt(v.re);
    }
  }

  const Config& cfg_;
  std::shared_ptr<WeingartenCache<T>> cache_;
  mutable bool mismatch_ = false;
};

template <class T>
int dispatch(const std::string& cmd, const Config& cfg) {
  Runner<T> run(cfg);
  std::string text;
  if (cmd == "moment") text = run.moment();
  else if (cmd == "star-moment") text = run.star_moment();
  else if (cmd == "gram") text = run.gram();
  else if (cmd == "weingarten") text = run.weingarten();
  else if (cmd == "variances") text = run.variances();
  else if (cmd == "free-moment") text = run.free_moment_cmd();
  else if (cmd == "fock-check") text = run.fock_check();
  else if (cmd == "converge") text = run.converge();
  else if (cmd == "invariance") text = run.invariance();
  else if (cmd == "classify") text = run.classify();
  emit(cfg, text);
  return run.mismatch() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Haar *-moments and free limits for free orthogonal quantum groups O+_F"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub, bool needs_f) {
    auto* opt = sub->add_option("--f", cfg.f_source, "F spec: JSON file or inline JSON object");
    if (needs_f) opt->required();
    sub->add_option("--mode", cfg.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--precision", cfg.precision, "float precision in bits")->check(CLI::Range(64u, 100000u));
    sub->add_option("--format", cfg.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--out", cfg.out, "write output to this file (atomically)");
    sub->add_option("--cache-dir", cfg.cache_dir, std::string("Weingarten table cache (default: $") + kCacheEnv + ")");
  };

  auto* moment = app.add_subcommand("moment", "Haar moment h(u_i1j1 ... u_iLjL), optionally with --eps");
  common(moment, true);
  moment->add_option("--i", cfg.i, "row indices, e.g. 1,1,1,1")->required();
  moment->add_option("--j", cfg.j, "column indices")->required();
  moment->add_option("--eps", cfg.eps, "sign pattern of 1 and *, e.g. \"1,*\"");

  auto* star = app.add_subcommand("star-moment", "Haar *-moment of a word such as \"1:1* 1:2\"");
  common(star, true);
  star->add_option("--word", cfg.word, "letters i:j or i:j*, space separated");
  star->add_option("--i", cfg.i, "row indices");
  star->add_option("--j", cfg.j, "column indices");
  star->add_option("--eps", cfg.eps, "sign pattern");

  auto* gram = app.add_subcommand("gram", "Gram matrix of NC2(L) fixed-point vectors");
  common(gram, true);
  gram->add_option("--l", cfg.length, "word length L (even)")->required();
  gram->add_flag("--compare-bruteforce", cfg.compare_bruteforce, "also sum inner products over all multi-indices");

  auto* wg = app.add_subcommand("weingarten", "Weingarten matrix W = G^-1");
  common(wg, true);
  wg->add_option("--l", cfg.length, "word length L (even)")->required();

  auto* var = app.add_subcommand("variances", "Schur variances and the limiting free family of F");
  common(var, true);

  auto* fm = app.add_subcommand("free-moment", "moment of a free semicircular / generalized circular family");
  common(fm, false);
  fm->add_option("--vars", cfg.vars, "variables, e.g. \"1/4:1,s:1\" (left:right, or s:variance)");
  fm->add_option("--r", cfg.r, "1-based variable labels, e.g. 1,1,2,2");
  fm->add_option("--eps", cfg.eps, "sign pattern");
  fm->add_option("--word", cfg.word, "with --f: a word over the limit family of F");

  auto* fock = app.add_subcommand("fock-check", "compare the truncated Fock model with free moments");
  common(fock, false);
  fock->add_option("--vars", cfg.vars, "variables, e.g. \"1/4:1,1:4\"")->required();
  fock->add_option("--depth", cfg.depth, "Fock depth cutoff m");
  fock->add_option("--max-length", cfg.max_length, "longest word checked");

  auto* conv = app.add_subcommand("converge", "freeness-error sweep over the gamma or large-rank family");
  common(conv, false);
  conv->add_option("--family", cfg.family, "gamma or large-rank")->check(CLI::IsMember({"gamma", "large-rank"}));
  conv->add_option("--k", cfg.k, "gamma family: number of rho blocks");
  conv->add_option("--rho", cfg.rho, "gamma family: comma-separated rho values");
  conv->add_option("--gammas", cfg.gammas, "gamma family: comma-separated gamma values");
  conv->add_option("--ks", cfg.ks, "large-rank family: comma-separated k values");
  conv->add_option("--lambda", cfg.lambda, "large-rank family: common lambda value");
  conv->add_option("--l", cfg.length, "length of the generated word suite");
  conv->add_option("--positions", cfg.positions, "generator positions for the suite, e.g. \"1:1 1:2\"");
  conv->add_option("--words", cfg.words, "explicit words separated by ';' (overrides --l)");

  auto* inv = app.add_subcommand("invariance", "state-level O+_F invariance checks");
  common(inv, true);
  inv->add_option("--i", cfg.i, "multi-index i");
  inv->add_option("--eps", cfg.eps, "sign pattern");
  inv->add_option("--word", cfg.word, "test word w");
  inv->add_flag("--sweep", cfg.sweep, "run every check up to --l and --max-word");
  inv->add_option("--l", cfg.length, "longest rotated block in a sweep");
  inv->add_option("--max-word", cfg.max_word, "longest test word in a sweep");

  auto* cls = app.add_subcommand("classify", "factor type from the diagonal of Q");
  common(cls, false);
  cls->add_option("--q", cfg.q, "diagonal of Q, e.g. 4,1/4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cfg.mode == "float") {
      set_float_precision(cfg.precision);
      return dispatch<Approx>(cmd, cfg);
    }
    return dispatch<Exact>(cmd, cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
