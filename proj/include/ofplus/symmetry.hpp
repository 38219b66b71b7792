#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/freedist.hpp"
#include "ofplus/haar.hpp"

namespace ofplus {

inline constexpr std::uint64_t kMaxInvarianceTuples = 1'000'000;

namespace detail {

template <class T>
void require_diagonal_q(const FMatrix<T>& f) {
  for (int r = 0; r < f.n(); ++r)
    for (int c = 0; c < f.n(); ++c)
      if (r != c && !is_zero(f.q()(static_cast<std::size_t>(r), static_cast<std::size_t>(c))))
        throw DomainError("Q = F^t conj(F) must be diagonal (canonical F)");
}

inline StarWord prepend(std::vector<Letter> head, const StarWord& tail) {
  head.insert(head.end(), tail.letters.begin(), tail.letters.end());
  return StarWord{std::move(head)};
}

}  // namespace detail

/// h((sum_r u_ir u*_jr - delta_ij 1) w). Zero whenever U is unitary.
template <class T>
T weak_unitarity_check(const HaarState<T>& haar, int i, int j, const StarWord& w = {}) {
  const auto& f = haar.f();
  if (i < 1 || j < 1 || i > f.n() || j > f.n()) throw DomainError("index out of range");
  T sum(0);
  for (int r = 1; r <= f.n(); ++r)
    sum += haar.star_moment(detail::prepend({{i, r, Sign::plain}, {j, r, Sign::star}}, w));
  if (i == j) sum -= haar.star_moment(w);
  return sum;
}

/// h((sum_r u*_ir u_jr (Q^-1)_rr - delta_ij (Q^-1)_ii 1) w), for diagonal Q.
template <class T>
T weak_q_relation_check(const HaarState<T>& haar, int i, int j, const StarWord& w = {}) {
  const auto& f = haar.f();
  if (i < 1 || j < 1 || i > f.n() || j > f.n()) throw DomainError("index out of range");
  detail::require_diagonal_q(f);
  T sum(0);
  for (int r = 1; r <= f.n(); ++r) {
    const T& weight = f.q_inv()(static_cast<std::size_t>(r - 1), static_cast<std::size_t>(r - 1));
    sum += weight * haar.star_moment(detail::prepend({{i, r, Sign::star}, {j, r, Sign::plain}}, w));
  }
  if (i == j) sum -= f.q_inv()(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i - 1)) * haar.star_moment(w);
  return sum;
}

/// The free generalized circular family x_1..x_N with phi(x_j* x_j) = (Q^-1)_jj
/// and phi(x_j x_j*) = 1.
template <class T>
std::vector<GCSpec<T>> invariant_family(const FMatrix<T>& f) {
  detail::require_diagonal_q(f);
  std::vector<GCSpec<T>> xs;
  for (int j = 1; j <= f.n(); ++j) {
    GCSpec<T> s;
    s.label = "x" + std::to_string(j);
    s.left_var = f.q_inv()(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(j - 1));
    s.right_var = T(1);
    xs.push_back(std::move(s));
  }
  return xs;
}

template <class T>
struct InvarianceReport {
  std::string id;
  int length = 0;
  SignPattern eps;
  std::vector<int> i;
  StarWord word;
  T lhs;
  T rhs;
  T difference;
};

/// Evaluates both sides of
///   sum_j h(u^eps_(i(1)j(1)) ... u^eps_(i(L)j(L)) w) phi(x^eps_j(1) ... x^eps_j(L))
///     = phi(x^eps_i(1) ... x^eps_i(L)) h(w).
///
/// Every letter of the rotated block translates as row(i) x col(j) with a
/// scale that splits the same way, so the Weingarten sum factors:
///   lhs = sum_(pi,sigma) W(pi,sigma) A_pi B_sigma,
/// A_pi summing the column side over j once per (eps, w), B_sigma depending on
/// i only. Column sums are cached, which makes sweeps over i cheap.
template <class T>
class InvarianceChecker {
 public:
  explicit InvarianceChecker(const HaarState<T>& haar) : haar_(haar), xs_(invariant_family(haar.f())) {
    haar.f().require_monomial();
  }

  InvarianceReport<T> check(const SignPattern& eps, const std::vector<int>& i, const StarWord& w = {}) {
    const auto& f = haar_.f();
    const int length = static_cast<int>(eps.size());
    if (static_cast<int>(i.size()) != length) throw DomainError("i and eps differ in length");
    for (int x : i)
      if (x < 1 || x > f.n()) throw DomainError("index out of range");
    check_word_length(length + w.length());

    InvarianceReport<T> rep;
    rep.id = "invariance";
    rep.length = length;
    rep.eps = eps;
    rep.i = i;
    rep.word = w;
    rep.rhs = free_moment(xs_, i, eps) * haar_.star_moment(w);

    const int total = length + w.length();
    if (total == 0) {
      rep.lhs = T(1);
    } else if (total % 2 != 0) {
      rep.lhs = T(0);
    } else {
      const auto& t = haar_.table(total);
      const auto& a = column_side(eps, w, t);
      // Row side: translated rows of the rotated block followed by those of w.
      T scale(1);
      std::vector<int> rows;
      for (int r = 0; r < length; ++r) {
        auto [s, row] = row_part(i[static_cast<std::size_t>(r)], eps[static_cast<std::size_t>(r)]);
        scale = scale * s;
        rows.push_back(row);
      }
      T wscale(1);
      for (const auto& l : w.letters) {
        auto tr = translate_star(f, l.i, l.j, l.sign);
        wscale = wscale * tr.scale;
        rows.push_back(tr.i);
      }
      T sum(0);
      for (std::size_t sg = 0; sg < t.order.size(); ++sg) {
        T b = delta(f, t.order[sg], rows);
        if (is_zero(b)) continue;
        T inner(0);
        for (std::size_t pi = 0; pi < t.order.size(); ++pi)
          if (!is_zero(a[pi])) inner += t.wg(pi, sg) * a[pi];
        sum += inner * b;
      }
      rep.lhs = scale * wscale * sum;
    }
    rep.difference = rep.lhs - rep.rhs;
    return rep;
  }

 private:
  // Row half of u^eps_ij: (c conj(F_(i,p(i))), p(i)) for a star, (1, i) otherwise.
  std::pair<T, int> row_part(int i, Sign e) const {
    if (e == Sign::plain) return {T(1), i};
    const int r = haar_.f().col_of_row(i);
    return {T(haar_.f().c()) * conj(haar_.f().at(i, r)), r};
  }
  std::pair<T, int> col_part(int j, Sign e) const {
    if (e == Sign::plain) return {T(1), j};
    const int s = haar_.f().row_of_col(j);
    return {haar_.f().at(s, j), s};
  }

  // All j with phi(x^eps_j) != 0, with that weight times the column scale.
  const std::vector<std::pair<std::vector<int>, T>>& live_columns(const SignPattern& eps) {
    auto key = sign_key(eps);
    if (auto it = columns_.find(key); it != columns_.end()) return it->second;
    const int n = haar_.f().n();
    const int length = static_cast<int>(eps.size());
    std::uint64_t tuples = 1;
    for (int s = 0; s < length; ++s) {
      tuples *= static_cast<std::uint64_t>(n);
      if (tuples > kMaxInvarianceTuples) throw BudgetExceeded("N^L exceeds the invariance budget");
    }
    std::vector<std::pair<std::vector<int>, T>> live;
    std::vector<int> j(static_cast<std::size_t>(length), 1);
    for (std::uint64_t step = 0; step < tuples; ++step) {
      T phi = free_moment(xs_, j, eps);
      if (!is_zero(phi)) {
        std::vector<int> cols;
        for (int r = 0; r < length; ++r) {
          auto [s, col] = col_part(j[static_cast<std::size_t>(r)], eps[static_cast<std::size_t>(r)]);
          phi = phi * s;
          cols.push_back(col);
        }
        live.emplace_back(std::move(cols), std::move(phi));
      }
      for (int pos = length - 1; pos >= 0; --pos) {
        if (++j[static_cast<std::size_t>(pos)] <= n) break;
        j[static_cast<std::size_t>(pos)] = 1;
      }
    }
    return columns_.emplace(key, std::move(live)).first->second;
  }

  // A_pi = sum over live j of weight(j) conj(delta_pi(cols(j) ++ cols(w))).
  const std::vector<T>& column_side(const SignPattern& eps, const StarWord& w, const WeingartenTable<T>& t) {
    auto key = sign_key(eps) + "|" + to_string(w);
    if (auto it = sides_.find(key); it != sides_.end()) return it->second;
    std::vector<int> wcols;
    for (const auto& l : w.letters) wcols.push_back(translate_star(haar_.f(), l.i, l.j, l.sign).j);
    std::vector<T> a(t.order.size(), T(0));
    for (const auto& [cols, weight] : live_columns(eps)) {
      auto full = cols;
      full.insert(full.end(), wcols.begin(), wcols.end());
      for (std::size_t pi = 0; pi < t.order.size(); ++pi) {
        T d = delta(haar_.f(), t.order[pi], full);
        if (!is_zero(d)) a[pi] += weight * conj(d);
      }
    }
    return sides_.emplace(key, std::move(a)).first->second;
  }

  static std::string sign_key(const SignPattern& eps) {
    std::string s;
    for (Sign e : eps) s += sign_char(e);
    return s;
  }

  const HaarState<T>& haar_;
  std::vector<GCSpec<T>> xs_;
  std::map<std::string, std::vector<std::pair<std::vector<int>, T>>> columns_;
  std::map<std::string, std::vector<T>> sides_;
};

/// Single-shot form of InvarianceChecker::check.
template <class T>
InvarianceReport<T> invariance_check(const HaarState<T>& haar, const SignPattern& eps, const std::vector<int>& i,
                                     const StarWord& w = {}) {
  InvarianceChecker<T> checker(haar);
  return checker.check(eps, i, w);
}

/// Every *-word of length <= max_length over the generating grid of F,
/// shortest first; the test-word suite for the weak checks.
template <class T>
std::vector<StarWord> test_words(const FMatrix<T>& f, int max_length) {
  const auto grid = generating_grid(f);
  std::vector<StarWord> out;
  for (int len = 0; len <= max_length; ++len) {
    auto level = all_star_words(grid, len);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace ofplus
