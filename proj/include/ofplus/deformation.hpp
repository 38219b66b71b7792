#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/errors.hpp"
#include "ofplus/matrix.hpp"
#include "ofplus/partitions.hpp"
#include "ofplus/scalar.hpp"

namespace ofplus {

/// Lifts a rational into the scalar type T (exact or float complex).
template <class T>
T lift(const Rational& q) {
  using R = typename T::real_type;
  if constexpr (field_traits<R>::exact)
    return T(q);
  else
    return T(to_real(q));
}

/// Parameters of a canonical deformation matrix F_rho^(c).
struct CanonicalSpec {
  int c = 1;
  int k = 0;
  std::vector<Rational> rho;
  int n = 2;

  /// Throws DomainError naming the violated clause.
  void check() const {
    if (c != 1 && c != -1) throw DomainError("c must be +1 or -1");
    if (k < 0) throw DomainError("k must be non-negative");
    if (static_cast<int>(rho.size()) != k) throw DomainError("rho must have exactly k entries");
    if (n < 2) throw DomainError("n must be at least 2");
    for (std::size_t a = 1; a < rho.size(); ++a)
      if (rho[a] < rho[a - 1]) throw DomainError("rho must be non-decreasing");
    for (const auto& r : rho) {
      if (r <= 0) throw DomainError("rho entries must be positive");
      if (c == 1 && r >= 1) throw DomainError("c=+1 requires every rho in (0,1)");
      if (c == -1 && r > 1) throw DomainError("c=-1 requires every rho in (0,1]");
    }
    if (c == 1 && n < 2 * k) throw DomainError("c=+1 requires n >= 2k");
    if (c == -1 && n != 2 * k) throw DomainError("c=-1 requires n = 2k");
  }
};

/// An admissible deformation matrix: F * conj(F) = c 1 with c = +-1, plus the
/// derived data every later stage reads (N_F, Q, Q^-1, the monomial pattern).
template <class T>
class FMatrix {
 public:
  using scalar_type = T;
  using real_type = typename T::real_type;

  /// Checks F * conj(F) = +-1 and caches the derived quantities.
  static FMatrix validate(Matrix<T> entries) {
    if (!entries.square() || entries.rows() == 0) throw NotAdmissible("F must be a non-empty square matrix");
    const std::size_t n = entries.rows();
    const Matrix<T> prod = entries * entries.conjugate();
    int c = 0;
    for (int cand : {1, -1}) {
      if (near(prod, T(cand) * Matrix<T>::identity(n))) {
        c = cand;
        break;
      }
    }
    if (c == 0) throw NotAdmissible("F * conj(F) is not +1 or -1");

    FMatrix f;
    f.f_ = std::move(entries);
    f.c_ = c;
    f.q_ = f.f_.transpose() * f.f_.conjugate();
    f.q_inv_ = f.f_ * f.f_.adjoint();
    real_type nf(0);
    for (const auto& x : f.f_.data()) nf += norm2(x);
    f.nf_ = nf;

    f.monomial_ = true;
    f.col_of_row_.assign(n + 1, 0);
    f.row_of_col_.assign(n + 1, 0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < n; ++col) {
        if (is_zero(f.f_(r, col))) continue;
        if (f.col_of_row_[r + 1] != 0 || f.row_of_col_[col + 1] != 0) f.monomial_ = false;
        f.col_of_row_[r + 1] = static_cast<int>(col) + 1;
        f.row_of_col_[col + 1] = static_cast<int>(r) + 1;
      }
    if (!f.monomial_) {
      f.col_of_row_.clear();
      f.row_of_col_.clear();
    }
    return f;
  }

  int n() const { return static_cast<int>(f_.rows()); }
  int c() const { return c_; }
  const Matrix<T>& entries() const { return f_; }

  /// 1-based entry access.
  const T& at(int i, int j) const { return f_(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)); }

  /// Quantum dimension N_F = Tr(F* F).
  const real_type& quantum_dimension() const { return nf_; }
  const Matrix<T>& q() const { return q_; }
  const Matrix<T>& q_inv() const { return q_inv_; }
  bool monomial() const { return monomial_; }

  /// Column holding the non-zero entry of row i (monomial F only, 1-based).
  int col_of_row(int i) const {
    require_monomial();
    return col_of_row_[i];
  }
  /// Row holding the non-zero entry of column j (monomial F only, 1-based).
  int row_of_col(int j) const {
    require_monomial();
    return row_of_col_[j];
  }

  void require_monomial() const {
    if (!monomial_) throw NonMonomialF("star translation requires a monomial (canonical-type) F");
  }

  /// Exact text of every entry; two FMatrix values share a key iff equal.
  std::string fingerprint() const {
    std::string key = std::to_string(n());
    for (const auto& x : f_.data()) key += ";" + to_string(x);
    return key;
  }

 private:
  FMatrix() = default;

  Matrix<T> f_;
  int c_ = 1;
  real_type nf_{0};
  Matrix<T> q_;
  Matrix<T> q_inv_;
  bool monomial_ = false;
  std::vector<int> col_of_row_;
  std::vector<int> row_of_col_;
};

/// Block matrix F_rho^(c): D_k(rho) upper-middle, c D_k(rho)^-1 below it, and
/// the identity on the last n - 2k coordinates.
template <class T>
FMatrix<T> build_canonical(const CanonicalSpec& spec) {
  spec.check();
  const auto n = static_cast<std::size_t>(spec.n);
  const auto k = static_cast<std::size_t>(spec.k);
  Matrix<T> m(n, n);
  for (std::size_t a = 0; a < k; ++a) {
    m(a, a + k) = lift<T>(spec.rho[a]);
    m(a + k, a) = lift<T>(Rational(spec.c / spec.rho[a]));
  }
  for (std::size_t t = 2 * k; t < n; ++t) m(t, t) = T(1);
  return FMatrix<T>::validate(std::move(m));
}

template <class T>
struct StarTranslation {
  T scale;
  int i;
  int j;
};

/// u^eps_ij = scale * u_(i',j'). For eps = star this reads off
/// u*_ij = c * sum_rs conj(F_ir) F_sj u_rs, which has a single term for monomial F.
template <class T>
StarTranslation<T> translate_star(const FMatrix<T>& f, int i, int j, Sign eps) {
  if (i < 1 || j < 1 || i > f.n() || j > f.n()) throw DomainError("generator index out of range");
  if (eps == Sign::plain) return {T(1), i, j};
  const int r = f.col_of_row(i);
  const int s = f.row_of_col(j);
  return {T(f.c()) * conj(f.at(i, r)) * f.at(s, j), r, s};
}

/// The involution p with F_(i, p(i)) != 0 (monomial F only).
template <class T>
std::vector<int> monomial_permutation(const FMatrix<T>& f) {
  std::vector<int> p(static_cast<std::size_t>(f.n()) + 1, 0);
  for (int i = 1; i <= f.n(); ++i) p[i] = f.col_of_row(i);
  return p;
}

/// One representative (i,j) per pair {u_ij, u_ij*} up to scalars: the
/// generating subset of the fundamental representation. For canonical F this
/// is {i <= k} u {j <= k, i > 2k} u {i, j > 2k}.
template <class T>
std::vector<std::pair<int, int>> generating_grid(const FMatrix<T>& f) {
  const auto p = monomial_permutation(f);
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= f.n(); ++i)
    for (int j = 1; j <= f.n(); ++j)
      if (p[i] > i || (p[i] == i && p[j] >= j)) out.emplace_back(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Factor type of the associated free Araki-Woods factor / L^inf(O+_F).

struct FactorType {
  enum class Kind { II1, IIIlambda, III1 };
  Kind kind = Kind::II1;
  std::optional<Rational> lambda;  // set for III_lambda

  std::string to_string() const {
    switch (kind) {
      case Kind::II1:
        return "II_1";
      case Kind::III1:
        return "III_1";
      case Kind::IIIlambda:
        return "III_" + lambda->get_str();
    }
    return {};
  }
};

namespace detail {

// Refines a list of integers > 1 into a pairwise coprime base generating the
// same multiplicative monoid. No primality testing needed.
inline std::vector<mpz_class> coprime_base(std::vector<mpz_class> xs) {
  std::vector<mpz_class> base;
  for (auto& x : xs)
    if (x > 1) base.push_back(x);
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    for (std::size_t a = 0; a < base.size() && !changed; ++a)
      for (std::size_t b = a + 1; b < base.size() && !changed; ++b) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), base[a].get_mpz_t(), base[b].get_mpz_t());
        if (g == 1) continue;
        mpz_class x = base[a] / g;
        mpz_class y = base[b] / g;
        base.erase(base.begin() + static_cast<long>(b));
        base.erase(base.begin() + static_cast<long>(a));
        for (auto& v : {g, x, y})
          if (v > 1) base.push_back(v);
        changed = true;
      }
  }
  return base;
}

inline std::vector<long> exponents(mpz_class x, const std::vector<mpz_class>& base) {
  std::vector<long> e(base.size(), 0);
  for (std::size_t b = 0; b < base.size(); ++b)
    while (x % base[b] == 0) {
      x /= base[b];
      ++e[b];
    }
  if (x != 1) throw DomainError("internal: value does not factor over its coprime base");
  return e;
}

}  // namespace detail

/// Classifies via the group generated by the ratios Q_ii / Q_jj: trivial gives
/// II_1, cyclic lambda^Z gives III_lambda, anything denser gives III_1.
template <class T>
  requires ExactField<T>
FactorType classify_factor_type(const Matrix<T>& q) {
  if (!q.square() || q.rows() == 0) throw DomainError("Q must be a non-empty square matrix");
  const std::size_t n = q.rows();
  std::vector<Rational> diag;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r != c && !is_zero(q(r, c))) throw DomainError("Q must be diagonal");
      if (r == c) {
        if (!q(r, r).is_real() || q(r, r).re <= 0) throw DomainError("Q must have positive real diagonal");
        diag.push_back(q(r, r).re);
      }
    }
  std::vector<Rational> ratios;
  for (std::size_t a = 1; a < n; ++a) ratios.push_back(diag[a] / diag[0]);

  std::vector<mpz_class> atoms;
  for (const auto& r : ratios) {
    atoms.push_back(r.get_num());
    atoms.push_back(r.get_den());
  }
  const auto base = detail::coprime_base(atoms);
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : ratios) {
    auto num = detail::exponents(r.get_num(), base);
    auto den = detail::exponents(r.get_den(), base);
    std::vector<Rational> v(base.size());
    for (std::size_t b = 0; b < base.size(); ++b) v[b] = num[b] - den[b];
    rows.push_back(std::move(v));
  }

  // Rank over Q of the exponent lattice.
  auto work = rows;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < base.size() && rank < work.size(); ++col) {
    std::size_t piv = rank;
    while (piv < work.size() && sgn(work[piv][col]) == 0) ++piv;
    if (piv == work.size()) continue;
    std::swap(work[piv], work[rank]);
    for (std::size_t r = 0; r < work.size(); ++r) {
      if (r == rank || sgn(work[r][col]) == 0) continue;
      Rational f = work[r][col] / work[rank][col];
      for (std::size_t c = 0; c < base.size(); ++c) work[r][c] -= f * work[rank][c];
    }
    ++rank;
  }

  if (rank == 0) return {FactorType::Kind::II1, std::nullopt};
  if (rank > 1) return {FactorType::Kind::III1, std::nullopt};

  // Rank one: every exponent vector is an integer multiple of one primitive
  // vector; the group is generated by its gcd multiple.
  const std::vector<Rational>* first = nullptr;
  for (const auto& v : rows)
    if (std::any_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; })) {
      first = &v;
      break;
    }
  mpz_class g = 0;
  for (const auto& x : *first) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  std::vector<mpz_class> prim;
  for (const auto& x : *first) prim.push_back(x.get_num() / g);
  std::size_t lead = 0;
  while (prim[lead] == 0) ++lead;
  mpz_class mult = 0;
  for (const auto& v : rows) {
    mpz_class coeff = v[lead].get_num() / prim[lead];
    mpz_gcd(mult.get_mpz_t(), mult.get_mpz_t(), coeff.get_mpz_t());
  }
  Rational gen = 1;
  for (std::size_t b = 0; b < base.size(); ++b) {
    mpz_class e = prim[b] * mult;
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), base[b].get_mpz_t(), mpz_class(abs(e)).get_ui());
    if (e > 0)
      gen *= Rational(pw);
    else if (e < 0)
      gen /= Rational(pw);
  }
  gen.canonicalize();
  if (gen > 1) gen = 1 / gen;
  return {FactorType::Kind::IIIlambda, gen};
}

}  // namespace ofplus
