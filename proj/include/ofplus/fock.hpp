#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/errors.hpp"
#include "ofplus/matrix.hpp"
#include "ofplus/scalar.hpp"

namespace ofplus {

inline constexpr std::size_t kMaxFockDimension = 5000;

/// Full Fock space over C^d cut off at tensor depth m. Basis: all words of
/// length <= m over letters 1..d, by length then lexicographically; the
/// vacuum is index 0.
class TruncatedFock {
 public:
  TruncatedFock(int letters, int depth) : d_(letters), m_(depth) {
    if (letters < 1 || depth < 0) throw DomainError("Fock space needs d >= 1 and m >= 0");
    std::size_t dim = 0;
    std::size_t level = 1;
    for (int n = 0; n <= depth; ++n) {
      dim += level;
      if (dim > kMaxFockDimension) throw BudgetExceeded("Fock space dimension exceeds " + std::to_string(kMaxFockDimension));
      level *= static_cast<std::size_t>(letters);
    }
    // Extending each lex-ordered word of length n - 1 by every letter yields
    // the words of length n in lex order.
    std::vector<std::vector<int>> level_words{{}};
    for (int n = 0; n <= depth; ++n) {
      for (auto& w : level_words) words_.push_back(w);
      if (n == depth) break;
      std::vector<std::vector<int>> next;
      for (const auto& w : level_words)
        for (int a = 1; a <= letters; ++a) {
          auto v = w;
          v.push_back(a);
          next.push_back(std::move(v));
        }
      level_words = std::move(next);
    }
    for (std::size_t idx = 0; idx < words_.size(); ++idx) index_.emplace(words_[idx], idx);
  }

  int letters() const { return d_; }
  int depth() const { return m_; }
  std::size_t dim() const { return words_.size(); }
  const std::vector<int>& word(std::size_t idx) const { return words_[idx]; }

  std::size_t index_of(const std::vector<int>& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw DomainError("word not in the truncated Fock basis");
    return it->second;
  }

  /// Exact for words of length L when m >= ceil(L/2): a vacuum-to-vacuum path
  /// of L unit steps never climbs above L/2.
  bool exact_for(int length) const { return 2 * m_ >= length; }

 private:
  int d_;
  int m_;
  std::vector<std::vector<int>> words_;
  std::map<std::vector<int>, std::size_t> index_;
};

/// An operator on a truncated Fock space. Entries are exact; storage is by
/// column, holding only the non-zero entries.
template <class T>
class FockOperator {
 public:
  using Column = std::vector<std::pair<std::size_t, T>>;

  explicit FockOperator(std::shared_ptr<const TruncatedFock> space)
      : space_(std::move(space)), cols_(space_->dim()) {}

  const std::shared_ptr<const TruncatedFock>& space() const { return space_; }

  void add(std::size_t row, std::size_t col, const T& v) {
    if (is_zero(v)) return;
    for (auto& [r, x] : cols_[col])
      if (r == row) {
        x += v;
        return;
      }
    cols_[col].emplace_back(row, v);
  }

  /// Entry (row, col); zero when absent.
  T entry(std::size_t row, std::size_t col) const {
    for (const auto& [r, x] : cols_[col])
      if (r == row) return x;
    return T(0);
  }

  Matrix<T> dense() const {
    Matrix<T> m(space_->dim(), space_->dim());
    for (std::size_t c = 0; c < cols_.size(); ++c)
      for (const auto& [r, x] : cols_[c]) m(r, c) = x;
    return m;
  }

  /// Conjugate transpose.
  FockOperator adjoint() const {
    FockOperator out(space_);
    for (std::size_t c = 0; c < cols_.size(); ++c)
      for (const auto& [r, x] : cols_[c]) out.add(c, r, conj(x));
    return out;
  }

  friend FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    if (a.space_ != b.space_) throw DomainError("operators live on different Fock spaces");
    FockOperator out = a;
    for (std::size_t c = 0; c < b.cols_.size(); ++c)
      for (const auto& [r, x] : b.cols_[c]) out.add(r, c, x);
    return out;
  }

  friend FockOperator operator*(const T& s, const FockOperator& a) {
    FockOperator out(a.space_);
    for (std::size_t c = 0; c < a.cols_.size(); ++c)
      for (const auto& [r, x] : a.cols_[c]) out.add(r, c, s * x);
    return out;
  }

  /// y = A x for a dense coefficient vector x.
  std::vector<T> apply(const std::vector<T>& x) const {
    std::vector<T> y(x.size(), T(0));
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      if (is_zero(x[c])) continue;
      for (const auto& [r, v] : cols_[c]) y[r] += v * x[c];
    }
    return y;
  }

  /// y = A x for x given by its non-zero entries.
  std::map<std::size_t, T> apply(const std::map<std::size_t, T>& x) const {
    std::map<std::size_t, T> y;
    for (const auto& [c, xc] : x)
      for (const auto& [r, v] : cols_[c]) {
        auto [it, fresh] = y.try_emplace(r, v * xc);
        if (!fresh) it->second += v * xc;
      }
    std::erase_if(y, [](const auto& kv) { return is_zero(kv.second); });
    return y;
  }

 private:
  std::shared_ptr<const TruncatedFock> space_;
  std::vector<Column> cols_;
};

/// Left creation l(xi): eta -> xi (x) eta, and words at the cutoff go to 0.
template <class T>
FockOperator<T> creation(const std::shared_ptr<const TruncatedFock>& space, const std::vector<T>& xi) {
  if (static_cast<int>(xi.size()) != space->letters()) throw DomainError("xi needs one coefficient per letter");
  FockOperator<T> op(space);
  for (std::size_t col = 0; col < space->dim(); ++col) {
    const auto& w = space->word(col);
    if (static_cast<int>(w.size()) >= space->depth()) continue;
    for (int a = 1; a <= space->letters(); ++a) {
      const T& coeff = xi[static_cast<std::size_t>(a - 1)];
      if (is_zero(coeff)) continue;
      std::vector<int> v{a};
      v.insert(v.end(), w.begin(), w.end());
      op.add(space->index_of(v), col, coeff);
    }
  }
  return op;
}

template <class T>
std::vector<T> basis_vector(int letters, int letter) {
  std::vector<T> v(static_cast<std::size_t>(letters), T(0));
  v[static_cast<std::size_t>(letter - 1)] = T(1);
  return v;
}

/// alpha l(e_xi) + beta l(e_eta)*. With xi == eta and alpha == beta == 1 this
/// is the standard semicircular l + l*.
template <class T>
FockOperator<T> gc_operator(const std::shared_ptr<const TruncatedFock>& space, const T& alpha, const T& beta,
                            int xi_letter, int eta_letter) {
  for (int x : {xi_letter, eta_letter})
    if (x < 1 || x > space->letters()) throw DomainError("letter out of range");
  auto l_xi = creation(space, basis_vector<T>(space->letters(), xi_letter));
  auto l_eta = creation(space, basis_vector<T>(space->letters(), eta_letter));
  return alpha * l_xi + beta * l_eta.adjoint();
}

/// <Omega, x_1 ... x_n Omega>, applying the factors right to left. When the
/// cutoff is too shallow for exactness a "CutoffTooSmall" note goes to warnings.
template <class T>
T vacuum_expectation(const std::vector<const FockOperator<T>*>& ops, std::vector<std::string>* warnings = nullptr) {
  if (ops.empty()) return T(1);
  const auto& space = ops.front()->space();
  for (const auto* op : ops)
    if (op->space() != space) throw DomainError("operators live on different Fock spaces");
  if (!space->exact_for(static_cast<int>(ops.size())) && warnings)
    warnings->push_back("CutoffTooSmall: depth " + std::to_string(space->depth()) + " < ceil(" +
                        std::to_string(ops.size()) + "/2); the result may be truncated");
  std::map<std::size_t, T> v{{0, T(1)}};
  for (auto it = ops.rbegin(); it != ops.rend() && !v.empty(); ++it) v = (*it)->apply(v);
  auto vac = v.find(0);
  return vac == v.end() ? T(0) : vac->second;
}

template <class T>
T vacuum_expectation(const std::vector<FockOperator<T>>& ops, std::vector<std::string>* warnings = nullptr) {
  std::vector<const FockOperator<T>*> ptrs;
  for (const auto& op : ops) ptrs.push_back(&op);
  return vacuum_expectation(ptrs, warnings);
}

}  // namespace ofplus
