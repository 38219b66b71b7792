#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/deformation.hpp"
#include "ofplus/haar.hpp"
#include "ofplus/partitions.hpp"
#include "ofplus/weingarten.hpp"

namespace ofplus {

enum class VariableKind { semicircular, generalized_circular };

inline const char* to_string(VariableKind k) {
  return k == VariableKind::semicircular ? "semicircular" : "generalized-circular";
}

/// A generalized circular element with phi(x*x) = left_var and
/// phi(xx*) = right_var, or a (scaled) semicircular one when kind says so.
template <class T>
struct GCSpec {
  std::string label;
  VariableKind kind = VariableKind::generalized_circular;
  T left_var{1};
  T right_var{1};

  void check() const {
    for (const T* v : {&left_var, &right_var})
      if (!v->is_real() || v->re <= 0) throw DomainError("variances must be positive reals (" + label + ")");
    if (kind == VariableKind::semicircular && !near(left_var, right_var))
      throw DomainError("a semicircular element has equal left and right variances (" + label + ")");
  }
};

/// phi(x_r(1)^eps(1) ... x_r(L)^eps(L)) for a free family; r holds 1-based
/// positions into the family. Sums over non-crossing pairings below ker r whose
/// pairs carry non-zero covariances.
template <class T>
T free_moment(const std::vector<GCSpec<T>>& family, const std::vector<int>& r, const SignPattern& eps) {
  if (r.size() != eps.size()) throw DomainError("labels and sign pattern differ in length");
  for (int x : r)
    if (x < 1 || x > static_cast<int>(family.size())) throw DomainError("label out of range");
  const int length = static_cast<int>(r.size());
  if (length == 0) return T(1);
  if (length % 2 != 0) return T(0);
  T sum(0);
  for (const auto& p : nc2(length)) {
    T term(1);
    for (auto [s, t] : p.pairs) {
      if (r[s - 1] != r[t - 1]) {
        term = T(0);
        break;
      }
      const auto& x = family[static_cast<std::size_t>(r[s - 1] - 1)];
      const Sign a = eps[s - 1];
      const Sign b = eps[t - 1];
      if (x.kind == VariableKind::semicircular) {
        term = term * x.left_var;
      } else if (a == Sign::star && b == Sign::plain) {
        term = term * x.left_var;
      } else if (a == Sign::plain && b == Sign::star) {
        term = term * x.right_var;
      } else {
        term = T(0);
        break;
      }
    }
    sum += term;
  }
  return sum;
}

/// The free family attached to F: one variable per generating position (i,j),
/// with variances ((Q^-1)_ii, Q_jj) = N_F * Phi_ij.
template <class T>
struct LimitFamily {
  std::vector<GCSpec<T>> specs;
  std::vector<std::pair<int, int>> positions;

  /// 1-based label of position (i,j), or 0 when (i,j) is outside the family.
  int label_of(int i, int j) const {
    auto it = std::find(positions.begin(), positions.end(), std::make_pair(i, j));
    return it == positions.end() ? 0 : static_cast<int>(it - positions.begin()) + 1;
  }

  const GCSpec<T>& at(int i, int j) const {
    int lab = label_of(i, j);
    if (lab == 0) throw DomainError("(" + std::to_string(i) + "," + std::to_string(j) + ") is not in the family");
    return specs[static_cast<std::size_t>(lab - 1)];
  }
};

/// Limit family over the given positions (default: the generating grid of F).
/// Positions fixed by the monomial involution on both sides, where u_ij is
/// self-adjoint, carry standard semicircular elements.
template <class T>
LimitFamily<T> limit_family(const FMatrix<T>& f, std::optional<std::vector<std::pair<int, int>>> grid = std::nullopt) {
  f.require_monomial();
  const auto p = monomial_permutation(f);
  LimitFamily<T> fam;
  fam.positions = grid ? *grid : generating_grid(f);
  for (auto [i, j] : fam.positions) {
    if (i < 1 || j < 1 || i > f.n() || j > f.n()) throw DomainError("family position out of range");
    GCSpec<T> s;
    s.label = "y" + std::to_string(i) + "," + std::to_string(j);
    s.left_var = f.q_inv()(i - 1, i - 1);
    s.right_var = f.q()(j - 1, j - 1);
    if (p[i] == i && p[j] == j) {
      auto tr = translate_star(f, i, j, Sign::star);
      if (!near(tr.scale, T(1)))
        throw DomainError("u_" + std::to_string(i) + std::to_string(j) + " is fixed but not self-adjoint; F is not canonical");
      s.kind = VariableKind::semicircular;
    }
    fam.specs.push_back(std::move(s));
  }
  return fam;
}

/// Free moment of a *-word whose letters are positions of the family.
template <class T>
T free_moment(const LimitFamily<T>& fam, const StarWord& w) {
  std::vector<int> r;
  for (const auto& l : w.letters) {
    int lab = fam.label_of(l.i, l.j);
    if (lab == 0)
      throw DomainError("letter " + std::to_string(l.i) + ":" + std::to_string(l.j) + " is outside the limit family");
    r.push_back(lab);
  }
  return free_moment(fam.specs, r, w.signs());
}

/// lambda = min(alpha/beta, beta/alpha); exact when left/right is a rational square.
struct ArakiWoodsLambda {
  std::optional<Rational> exact;
  Real approx;
};

inline ArakiWoodsLambda araki_woods_lambda(const Rational& left_var, const Rational& right_var) {
  if (left_var <= 0 || right_var <= 0) throw DomainError("variances must be positive");
  Rational ratio = left_var / right_var;
  if (ratio > 1) ratio = 1 / ratio;
  ArakiWoodsLambda out;
  if (auto r = exact_sqrt(ratio)) {
    out.exact = *r;
    out.approx = to_real(*r);
  } else {
    out.approx = boost::multiprecision::sqrt(to_real(ratio));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Free products.

enum class Algebra { A, B };

struct TaggedLetter {
  Algebra algebra = Algebra::A;
  int letter = 0;

  friend bool operator==(const TaggedLetter&, const TaggedLetter&) = default;
  friend auto operator<=>(const TaggedLetter&, const TaggedLetter&) = default;
};

/// A state on one algebra, given by its values on words in that algebra's letters.
template <class T>
using MomentFunctional = std::function<T(const std::vector<int>&)>;

inline constexpr int kMaxFreeProductWord = 12;

/// Mixed moment under the free product state phi_A * phi_B.
///
/// The word is grouped into maximal same-algebra runs x_1 ... x_n. Freeness
/// gives phi(prod (x_m - phi(x_m))) = 0 for n >= 2; expanding the product
/// expresses phi(x_1 ... x_n) through strictly shorter words, evaluated
/// recursively with memoisation.
template <class T>
T free_product_moment(const MomentFunctional<T>& a, const MomentFunctional<T>& b,
                      const std::vector<TaggedLetter>& word) {
  if (static_cast<int>(word.size()) > kMaxFreeProductWord)
    throw BudgetExceeded("free-product word longer than " + std::to_string(kMaxFreeProductWord));
  std::map<std::vector<TaggedLetter>, T> memo;

  std::function<T(const std::vector<TaggedLetter>&)> eval = [&](const std::vector<TaggedLetter>& w) -> T {
    if (w.empty()) return T(1);
    if (auto it = memo.find(w); it != memo.end()) return it->second;

    std::vector<std::vector<TaggedLetter>> runs;
    for (const auto& l : w) {
      if (runs.empty() || runs.back().front().algebra != l.algebra) runs.emplace_back();
      runs.back().push_back(l);
    }
    auto state = [&](const std::vector<TaggedLetter>& run) {
      std::vector<int> letters;
      for (const auto& l : run) letters.push_back(l.letter);
      return run.front().algebra == Algebra::A ? a(letters) : b(letters);
    };

    T result(0);
    if (runs.size() == 1) {
      result = state(runs.front());
    } else {
      std::vector<T> mean;
      std::vector<std::size_t> nonzero;
      for (std::size_t m = 0; m < runs.size(); ++m) {
        mean.push_back(state(runs[m]));
        if (!is_zero(mean.back())) nonzero.push_back(m);
      }
      // phi(x_1..x_n) = - sum over non-empty S of prod_{m in S}(-phi(x_m)) * phi(prod_{m not in S} x_m)
      const std::size_t subsets = std::size_t{1} << nonzero.size();
      for (std::size_t mask = 1; mask < subsets; ++mask) {
        T coeff(1);
        std::vector<bool> drop(runs.size(), false);
        for (std::size_t bit = 0; bit < nonzero.size(); ++bit)
          if (mask & (std::size_t{1} << bit)) {
            coeff = coeff * (-mean[nonzero[bit]]);
            drop[nonzero[bit]] = true;
          }
        std::vector<TaggedLetter> rest;
        for (std::size_t m = 0; m < runs.size(); ++m)
          if (!drop[m]) rest.insert(rest.end(), runs[m].begin(), runs[m].end());
        result -= coeff * eval(rest);
      }
    }
    memo.emplace(w, result);
    return result;
  };
  return eval(word);
}

/// tau on C(T): a word in w (+1) and w* (-1) has mean 1 iff its powers cancel.
template <class T>
T haar_unitary_moment(const std::vector<int>& letters) {
  int power = 0;
  for (int x : letters) power += x;
  return power == 0 ? T(1) : T(0);
}

/// *-moments of the generators v_ij of U+_F through the model v_ij -> w u_ij in
/// C(T) * C(O+_F), with w a Haar unitary free from O+_F.
template <class T>
T unitary_star_moment(const HaarState<T>& haar, const StarWord& w) {
  haar.f().require_monomial();
  if (w.length() > kMaxFreeProductWord / 2) throw BudgetExceeded("U+_F word too long for the free-product model");
  std::vector<Letter> alphabet;
  std::vector<TaggedLetter> word;
  for (const auto& l : w.letters) {
    const int id = static_cast<int>(alphabet.size());
    alphabet.push_back(l);
    if (l.sign == Sign::plain) {
      word.push_back({Algebra::A, +1});
      word.push_back({Algebra::B, id});
    } else {
      word.push_back({Algebra::B, id});
      word.push_back({Algebra::A, -1});
    }
  }
  MomentFunctional<T> tau = [](const std::vector<int>& letters) { return haar_unitary_moment<T>(letters); };
  MomentFunctional<T> h = [&](const std::vector<int>& ids) {
    StarWord sub;
    for (int id : ids) sub.letters.push_back(alphabet[static_cast<std::size_t>(id)]);
    return haar.star_moment(sub);
  };
  return free_product_moment(tau, h, word);
}

}  // namespace ofplus
