#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/deformation.hpp"
#include "ofplus/freedist.hpp"
#include "ofplus/haar.hpp"
#include "ofplus/weingarten.hpp"

namespace ofplus {

namespace detail {

template <class T>
T lift_sqrt(const Rational& x) {
  using R = typename T::real_type;
  if constexpr (field_traits<R>::exact) {
    auto r = exact_sqrt(x);
    if (!r) throw DomainError("sqrt(" + x.get_str() + ") is irrational; exact mode needs perfect squares");
    return T(*r);
  } else {
    return T(R(boost::multiprecision::sqrt(to_real(x))));
  }
}

template <class R>
R real_power(const R& base, int e) {
  R out(1);
  for (int s = 0; s < e; ++s) out *= base;
  return out;
}

}  // namespace detail

/// F(k) = [[0, D^-1], [-D, 0]] with D = diag(1, sqrt(lambda_1), ..., sqrt(lambda_k)),
/// of size 2k + 2 and c = -1.
template <class T>
FMatrix<T> build_large_rank(int k, const std::vector<Rational>& lambda) {
  if (k < 1) throw DomainError("k must be positive");
  if (static_cast<int>(lambda.size()) != k) throw DomainError("lambda must have exactly k entries");
  for (const auto& l : lambda)
    if (l <= 1) throw DomainError("every lambda must exceed 1");
  const auto half = static_cast<std::size_t>(k) + 1;
  std::vector<T> d{T(1)};
  for (const auto& l : lambda) d.push_back(detail::lift_sqrt<T>(l));
  Matrix<T> m(2 * half, 2 * half);
  for (std::size_t a = 0; a < half; ++a) {
    m(a, half + a) = T(1) / d[a];
    m(half + a, a) = -d[a];
  }
  return FMatrix<T>::validate(std::move(m));
}

/// The designated generators u_(1, i+1), i = 1..k, of the large-rank family.
inline std::vector<std::pair<int, int>> large_rank_designated(int k) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= k; ++i) out.emplace_back(1, i + 1);
  return out;
}

/// F(gamma): D_k(rho) and D_k(rho)^-1 in the off-diagonal blocks of the first
/// 2k coordinates, then the tail [[0, gamma], [1/gamma, 0]]. N = 2k + 2.
template <class T>
FMatrix<T> build_gamma(int k, const std::vector<Rational>& rho, const Rational& gamma) {
  if (k < 1) throw DomainError("k must be positive");
  if (static_cast<int>(rho.size()) != k) throw DomainError("rho must have exactly k entries");
  for (const auto& r : rho)
    if (r <= 0 || r >= 1) throw DomainError("every rho must lie in (0,1)");
  if (gamma <= 0 || gamma >= 1) throw DomainError("gamma must lie in (0,1)");
  const auto kk = static_cast<std::size_t>(k);
  Matrix<T> m(2 * kk + 2, 2 * kk + 2);
  for (std::size_t a = 0; a < kk; ++a) {
    m(a, kk + a) = lift<T>(rho[a]);
    m(kk + a, a) = lift<T>(Rational(1 / rho[a]));
  }
  m(2 * kk, 2 * kk + 1) = lift<T>(gamma);
  m(2 * kk + 1, 2 * kk) = lift<T>(Rational(1 / gamma));
  return FMatrix<T>::validate(std::move(m));
}

/// Positions {1 <= i <= k, 1 <= j <= 2k}: the part of the gamma family that
/// has a limit. Rows touching the gamma block do not.
inline std::vector<std::pair<int, int>> gamma_grid(int k) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= 2 * k; ++j) out.emplace_back(i, j);
  return out;
}

/// |N_F^(L/2) h(w) - phi(y_w)|, the letters of w scaled by sqrt(N_F) and
/// compared with the free family fam. Letters outside fam are rejected.
template <class T>
typename T::real_type freeness_error(const HaarState<T>& haar, const LimitFamily<T>& fam, const StarWord& w) {
  using R = typename T::real_type;
  const T target = free_moment(fam, w);
  const auto& grid = generating_grid(haar.f());
  for (const auto& l : w.letters)
    if (std::find(grid.begin(), grid.end(), std::make_pair(l.i, l.j)) == grid.end())
      throw DomainError("letter " + std::to_string(l.i) + ":" + std::to_string(l.j) +
                        " is outside the generating grid");
  if (w.length() % 2 != 0) return R(0);
  const R scale = detail::real_power(haar.f().quantum_dimension(), w.length() / 2);
  return magnitude(T(scale) * haar.star_moment(w) - target);
}

/// Convenience form over the full generating grid of F.
template <class T>
typename T::real_type freeness_error(const FMatrix<T>& f, const StarWord& w) {
  HaarState<T> haar(f);
  return freeness_error(haar, limit_family(f), w);
}

/// max |N_F^(L/2) W(pi,sigma) - delta(pi,sigma)| * N_F: the scaled distance of
/// the Weingarten matrix from its leading order.
template <class T>
typename T::real_type weingarten_deviation(const WeingartenTable<T>& t, const FMatrix<T>& f) {
  using R = typename T::real_type;
  const R nf = f.quantum_dimension();
  const T lead(detail::real_power(nf, t.length / 2));
  R worst(0);
  for (std::size_t a = 0; a < t.wg.rows(); ++a)
    for (std::size_t b = 0; b < t.wg.cols(); ++b) {
      R dev = magnitude(lead * t.wg(a, b) - (a == b ? T(1) : T(0)));
      if (dev > worst) worst = dev;
    }
  return R(worst * nf);
}

template <class T>
struct ConvergenceRow {
  using real_type = typename T::real_type;
  std::string family;
  std::string param;
  real_type n_f;
  std::string word;
  real_type error;
  real_type scaled;
};

struct GammaSweep {
  int k = 1;
  std::vector<Rational> rho;
  std::vector<Rational> gammas;
};

struct LargeRankSweep {
  std::vector<int> ks;
  Rational lambda = 4;
};

/// One row per (gamma, word), gammas outermost, words in the given order.
/// Tables come from cache when given (e.g. one backed by a disk store).
template <class T>
std::vector<ConvergenceRow<T>> convergence_table(const GammaSweep& sweep, const std::vector<StarWord>& words,
                                              std::shared_ptr<WeingartenCache<T>> cache = nullptr) {
  std::vector<ConvergenceRow<T>> rows;
  if (!cache) cache = std::make_shared<WeingartenCache<T>>();
  for (const auto& g : sweep.gammas) {
    HaarState<T> haar(build_gamma<T>(sweep.k, sweep.rho, g), cache);
    const auto fam = limit_family(haar.f(), gamma_grid(sweep.k));
    const auto& nf = haar.f().quantum_dimension();
    for (const auto& w : words) {
      auto err = freeness_error(haar, fam, w);
      rows.push_back({"gamma", g.get_str(), nf, to_string(w), err, err * nf});
    }
  }
  return rows;
}

/// One row per (k, word) with lambda_i = sweep.lambda throughout.
template <class T>
std::vector<ConvergenceRow<T>> convergence_table(const LargeRankSweep& sweep, const std::vector<StarWord>& words,
                                              std::shared_ptr<WeingartenCache<T>> cache = nullptr) {
  std::vector<ConvergenceRow<T>> rows;
  if (!cache) cache = std::make_shared<WeingartenCache<T>>();
  for (int k : sweep.ks) {
    HaarState<T> haar(build_large_rank<T>(k, std::vector<Rational>(static_cast<std::size_t>(k), sweep.lambda)), cache);
    const auto fam = limit_family(haar.f());
    const auto& nf = haar.f().quantum_dimension();
    for (const auto& w : words) {
      auto err = freeness_error(haar, fam, w);
      rows.push_back({"large-rank", std::to_string(k), nf, to_string(w), err, err * nf});
    }
  }
  return rows;
}

/// For each word, scaled error at every parameter stays below 4x its value at
/// the first parameter (or below 4 when that value is 0). Returns the
/// offending rows.
template <class T>
std::vector<ConvergenceRow<T>> unbounded_rows(const std::vector<ConvergenceRow<T>>& rows) {
  using R = typename T::real_type;
  std::vector<ConvergenceRow<T>> bad;
  std::map<std::string, R> first;
  for (const auto& r : rows) {
    auto [it, fresh] = first.emplace(r.word, r.scaled);
    const R bound = is_zero(T(it->second)) ? R(4) : R(4 * it->second);
    if (r.scaled > bound) bad.push_back(r);
  }
  return bad;
}

template <class T>
void write_csv(std::ostream& os, const std::vector<ConvergenceRow<T>>& rows) {
  os << "family,param,N_F,word,error,scaled\n";
  for (const auto& r : rows)
    os << r.family << "," << r.param << "," << to_string(r.n_f) << "," << r.word << "," << to_string(r.error) << ","
       << to_string(r.scaled) << "\n";
}

}  // namespace ofplus
