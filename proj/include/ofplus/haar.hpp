#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/deformation.hpp"
#include "ofplus/weingarten.hpp"

namespace ofplus {

/// One letter u^eps_ij of a *-monomial; indices are 1-based.
struct Letter {
  int i = 1;
  int j = 1;
  Sign sign = Sign::plain;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// A *-monomial u^eps(1)_i(1)j(1) ... u^eps(L)_i(L)j(L).
struct StarWord {
  std::vector<Letter> letters;

  static StarWord from(const std::vector<int>& i, const std::vector<int>& j, const SignPattern& eps) {
    if (i.size() != j.size() || i.size() != eps.size())
      throw DomainError("i, j and eps must have the same length");
    StarWord w;
    for (std::size_t r = 0; r < i.size(); ++r) w.letters.push_back({i[r], j[r], eps[r]});
    return w;
  }

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }

  std::vector<int> rows() const {
    std::vector<int> out;
    for (const auto& l : letters) out.push_back(l.i);
    return out;
  }
  std::vector<int> cols() const {
    std::vector<int> out;
    for (const auto& l : letters) out.push_back(l.j);
    return out;
  }
  SignPattern signs() const {
    SignPattern out;
    for (const auto& l : letters) out.push_back(l.sign);
    return out;
  }

  friend StarWord operator+(StarWord a, const StarWord& b) {
    a.letters.insert(a.letters.end(), b.letters.begin(), b.letters.end());
    return a;
  }
  friend bool operator==(const StarWord&, const StarWord&) = default;
};

/// Letters as "i:j" or "i:j*", space separated; the empty word is "".
inline std::string to_string(const StarWord& w) {
  std::string s;
  for (const auto& l : w.letters) {
    if (!s.empty()) s += ' ';
    s += std::to_string(l.i) + ":" + std::to_string(l.j);
    if (l.sign == Sign::star) s += '*';
  }
  return s;
}

inline StarWord parse_word(const std::string& text) {
  StarWord w;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    Letter l;
    if (tok.back() == '*') {
      l.sign = Sign::star;
      tok.pop_back();
    }
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw ParseError("letter must look like i:j or i:j*, got '" + tok + "'");
    try {
      std::size_t used = 0;
      l.i = std::stoi(tok.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("trailing");
      const auto rest = tok.substr(colon + 1);
      l.j = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError("letter must look like i:j or i:j*, got '" + tok + "'");
    }
    w.letters.push_back(l);
  }
  return w;
}

/// Every *-word of the given length over the positions, each letter plain or
/// starred, in lexicographic order of (position index, sign).
inline std::vector<StarWord> all_star_words(const std::vector<std::pair<int, int>>& positions, int length) {
  std::vector<StarWord> out{StarWord{}};
  for (int s = 0; s < length; ++s) {
    std::vector<StarWord> next;
    for (const auto& w : out)
      for (auto [i, j] : positions)
        for (Sign e : {Sign::plain, Sign::star}) {
          StarWord v = w;
          v.letters.push_back({i, j, e});
          next.push_back(std::move(v));
        }
    out = std::move(next);
  }
  return out;
}

/// The Haar state of O+_F, evaluated through the Weingarten formula.
/// Immutable apart from its table cache; safe to share across threads.
template <class T>
class HaarState {
 public:
  explicit HaarState(FMatrix<T> f, std::shared_ptr<WeingartenCache<T>> cache = nullptr)
      : f_(std::move(f)), cache_(cache ? std::move(cache) : std::make_shared<WeingartenCache<T>>()) {}

  const FMatrix<T>& f() const { return f_; }
  const std::shared_ptr<WeingartenCache<T>>& cache() const { return cache_; }

  const WeingartenTable<T>& table(int length) const {
    check_word_length(length);
    std::lock_guard lock(mu_);
    auto& slot = tables_[static_cast<std::size_t>(length)];
    if (!slot) slot = cache_->get(length, f_);
    return *slot;
  }

  /// h(u_i(1)j(1) ... u_i(L)j(L)) = sum W(pi,sigma) conj(delta_pi(j)) delta_sigma(i); 0 for odd L.
  T moment(const std::vector<int>& i, const std::vector<int>& j) const {
    if (i.size() != j.size()) throw DomainError("i and j must have the same length");
    const int length = static_cast<int>(i.size());
    check_word_length(length);
    for (std::size_t r = 0; r < i.size(); ++r)
      if (i[r] < 1 || j[r] < 1 || i[r] > f_.n() || j[r] > f_.n()) throw DomainError("generator index out of range");
    if (length == 0) return T(1);
    if (length % 2 != 0) return T(0);
    const auto& t = table(length);
    std::vector<std::pair<std::size_t, T>> left;
    std::vector<std::pair<std::size_t, T>> right;
    for (std::size_t a = 0; a < t.order.size(); ++a) {
      T dj = raw_delta(t.order[a], j);
      if (!is_zero(dj)) left.emplace_back(a, conj(dj));
      T di = raw_delta(t.order[a], i);
      if (!is_zero(di)) right.emplace_back(a, std::move(di));
    }
    T sum(0);
    for (const auto& [a, x] : left)
      for (const auto& [b, y] : right) {
        const T& w = t.wg(a, b);
        if (!is_zero(w)) sum += w * x * y;
      }
    return sum;
  }

  /// Haar *-moment: each letter is rewritten as t_F * u_(i_eps, j_eps).
  T star_moment(const StarWord& w) const {
    check_word_length(w.length());
    if (w.length() % 2 != 0) return T(0);
    T scale(1);
    std::vector<int> i;
    std::vector<int> j;
    i.reserve(w.letters.size());
    j.reserve(w.letters.size());
    for (const auto& l : w.letters) {
      auto tr = translate_star(f_, l.i, l.j, l.sign);
      if (l.sign == Sign::star) scale = scale * tr.scale;
      i.push_back(tr.i);
      j.push_back(tr.j);
    }
    return scale * moment(i, j);
  }

 private:
  T raw_delta(const Pairing& p, const std::vector<int>& idx) const {
    T out(1);
    for (auto [s, t] : p.pairs) {
      const T& e = f_.at(idx[t - 1], idx[s - 1]);
      if (is_zero(e)) return T(0);
      out = out * e;
    }
    return out;
  }

  FMatrix<T> f_;
  std::shared_ptr<WeingartenCache<T>> cache_;
  mutable std::mutex mu_;
  mutable std::array<std::shared_ptr<const WeingartenTable<T>>, kMaxWordLength + 1> tables_{};
};

enum class Side { left, right };

/// Schur orthogonality: left h(u*_ij u_kl) = delta_jl (Q^-1)_ki / N_F,
/// right h(u_ij u*_kl) = delta_ik Q_lj / N_F.
template <class T>
T schur_covariance(const FMatrix<T>& f, int i, int j, int k, int l, Side side) {
  for (int x : {i, j, k, l})
    if (x < 1 || x > f.n()) throw DomainError("generator index out of range");
  const T nf(f.quantum_dimension());
  if (side == Side::left) return j == l ? f.q_inv()(k - 1, i - 1) / nf : T(0);
  return i == k ? f.q()(l - 1, j - 1) / nf : T(0);
}

template <class T>
struct VariancePair {
  T left;
  T right;
};

/// Phi_ij = ((Q^-1)_ii / N_F, Q_jj / N_F), 1-based rows/cols stored 0-based.
template <class T>
std::vector<std::vector<VariancePair<T>>> variance_matrix(const FMatrix<T>& f) {
  const T nf(f.quantum_dimension());
  std::vector<std::vector<VariancePair<T>>> out(static_cast<std::size_t>(f.n()));
  for (int i = 1; i <= f.n(); ++i)
    for (int j = 1; j <= f.n(); ++j)
      out[i - 1].push_back({f.q_inv()(i - 1, i - 1) / nf, f.q()(j - 1, j - 1) / nf});
  return out;
}

}  // namespace ofplus
