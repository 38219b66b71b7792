#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/errors.hpp"

namespace ofplus {

/// A pairing of {1..k}: pairs (s,t) with s < t, sorted by left endpoint.
struct Pairing {
  int k = 0;
  std::vector<std::pair<int, int>> pairs;
  bool noncrossing = true;

  friend bool operator==(const Pairing&, const Pairing&) = default;
  friend auto operator<=>(const Pairing& a, const Pairing& b) { return a.pairs <=> b.pairs; }
};

/// A set partition of {1..k}; blocks sorted internally and ordered by minimum.
struct Partition {
  int k = 0;
  std::vector<std::vector<int>> blocks;

  friend bool operator==(const Partition&, const Partition&) = default;
};

enum class Sign { plain, star };

using SignPattern = std::vector<Sign>;

inline bool crosses(std::pair<int, int> a, std::pair<int, int> b) {
  if (a.first > b.first) std::swap(a, b);
  return a.first < b.first && b.first < a.second && a.second < b.second;
}

inline bool is_noncrossing(const std::vector<std::pair<int, int>>& pairs) {
  for (std::size_t x = 0; x < pairs.size(); ++x)
    for (std::size_t y = x + 1; y < pairs.size(); ++y)
      if (crosses(pairs[x], pairs[y])) return false;
  return true;
}

/// Builds a validated Pairing from an arbitrary list of 2-element blocks.
inline Pairing make_pairing(int k, std::vector<std::pair<int, int>> pairs) {
  std::vector<int> seen(static_cast<std::size_t>(k) + 1, 0);
  for (auto& p : pairs) {
    if (p.first > p.second) std::swap(p.first, p.second);
    if (p.first < 1 || p.second > k || p.first == p.second) throw DomainError("pair out of range");
    if (seen[p.first]++ || seen[p.second]++) throw DomainError("pairs overlap");
  }
  if (static_cast<int>(pairs.size()) * 2 != k) throw DomainError("pairs do not cover the ground set");
  std::sort(pairs.begin(), pairs.end());
  Pairing out{k, std::move(pairs), true};
  out.noncrossing = is_noncrossing(out.pairs);
  return out;
}

namespace detail {

// Non-crossing pairings of the interval [lo, hi] (1-based, inclusive).
inline void nc2_interval(int lo, int hi, std::vector<std::pair<int, int>>& acc,
                         std::vector<std::vector<std::pair<int, int>>>& out) {
  if (lo > hi) {
    out.push_back(acc);
    return;
  }
  // lo pairs with t; the inside (lo, t) and the outside (t, hi] are independent.
  for (int t = lo + 1; t <= hi; t += 2) {
    std::vector<std::vector<std::pair<int, int>>> inner;
    std::vector<std::pair<int, int>> scratch;
    nc2_interval(lo + 1, t - 1, scratch, inner);
    for (const auto& in : inner) {
      auto base = acc;
      base.emplace_back(lo, t);
      base.insert(base.end(), in.begin(), in.end());
      nc2_interval(t + 1, hi, base, out);
    }
  }
}

}  // namespace detail

/// All non-crossing pairings of {1..k}, lexicographic on the sorted pair list.
/// Odd k gives the empty list.
inline std::vector<Pairing> enumerate_nc2(int k) {
  if (k < 0) throw DomainError("negative ground set size");
  std::vector<Pairing> out;
  if (k % 2 != 0) return out;
  std::vector<std::vector<std::pair<int, int>>> raw;
  std::vector<std::pair<int, int>> acc;
  detail::nc2_interval(1, k, acc, raw);
  out.reserve(raw.size());
  for (auto& pairs : raw) {
    std::sort(pairs.begin(), pairs.end());
    out.push_back(Pairing{k, std::move(pairs), true});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// The members of NC2(k) whose every pair joins a plain and a starred position.
inline std::vector<Pairing> enumerate_nc2_eps(int k, const SignPattern& eps) {
  if (static_cast<int>(eps.size()) != k) throw DomainError("sign pattern length differs from k");
  std::vector<Pairing> out;
  for (auto& p : enumerate_nc2(k)) {
    bool mixed = std::all_of(p.pairs.begin(), p.pairs.end(),
                             [&](auto st) { return eps[st.first - 1] != eps[st.second - 1]; });
    if (mixed) out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace detail

/// The join of two pairings in the full partition lattice P(k).
inline Partition join(const Pairing& a, const Pairing& b) {
  if (a.k != b.k) throw DomainError("join of pairings on different ground sets");
  detail::UnionFind uf(a.k);
  for (const auto* p : {&a, &b})
    for (auto [s, t] : p->pairs) uf.unite(s - 1, t - 1);
  Partition out{a.k, {}};
  std::vector<int> block_of(static_cast<std::size_t>(a.k), -1);
  for (int x = 0; x < a.k; ++x) {
    int root = uf.find(x);
    if (block_of[root] < 0) {
      block_of[root] = static_cast<int>(out.blocks.size());
      out.blocks.emplace_back();
    }
    out.blocks[block_of[root]].push_back(x + 1);
  }
  return out;
}

/// |a v b| without materialising the blocks.
inline int join_block_count(const Pairing& a, const Pairing& b) {
  if (a.k != b.k) throw DomainError("join of pairings on different ground sets");
  detail::UnionFind uf(a.k);
  int blocks = a.k;
  for (const auto* p : {&a, &b})
    for (auto [s, t] : p->pairs)
      if (uf.unite(s - 1, t - 1)) --blocks;
  return blocks;
}

inline Partition to_partition(const Pairing& p) {
  Partition out{p.k, {}};
  for (auto [s, t] : p.pairs) out.blocks.push_back({s, t});
  return out;
}

/// ker r: positions grouped by equal label.
template <class Label>
Partition kernel(const std::vector<Label>& r) {
  Partition out{static_cast<int>(r.size()), {}};
  std::vector<Label> seen;
  for (std::size_t n = 0; n < r.size(); ++n) {
    auto it = std::find(seen.begin(), seen.end(), r[n]);
    if (it == seen.end()) {
      seen.push_back(r[n]);
      out.blocks.push_back({static_cast<int>(n) + 1});
    } else {
      out.blocks[it - seen.begin()].push_back(static_cast<int>(n) + 1);
    }
  }
  return out;
}

/// True iff r is constant on every block of p (p <= ker r).
template <class Label>
bool kernel_refines(const Pairing& p, const std::vector<Label>& r) {
  if (static_cast<int>(r.size()) != p.k) throw DomainError("multi-index length differs from k");
  return std::all_of(p.pairs.begin(), p.pairs.end(),
                     [&](auto st) { return r[st.first - 1] == r[st.second - 1]; });
}

template <class Label>
bool kernel_refines(const Partition& p, const std::vector<Label>& r) {
  if (static_cast<int>(r.size()) != p.k) throw DomainError("multi-index length differs from k");
  for (const auto& block : p.blocks)
    for (int x : block)
      if (r[x - 1] != r[block.front() - 1]) return false;
  return true;
}

/// Catalan number C_n (fits in 64 bits for n <= 33).
inline unsigned long long catalan(int n) {
  unsigned long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

inline std::string to_string(const Pairing& p) {
  std::string s;
  for (auto [a, b] : p.pairs) {
    if (!s.empty()) s += ',';
    s += std::to_string(a) + "-" + std::to_string(b);
  }
  return s;
}

inline char sign_char(Sign s) { return s == Sign::star ? '*' : '1'; }

/// Parses a comma-separated list of "1" / "*" tokens.
inline SignPattern parse_sign_pattern(const std::string& text) {
  SignPattern out;
  std::size_t pos = 0;
  if (text.empty()) return out;
  while (pos <= text.size()) {
    auto next = text.find(',', pos);
    std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    tok.erase(std::remove(tok.begin(), tok.end(), ' '), tok.end());
    if (tok == "1")
      out.push_back(Sign::plain);
    else if (tok == "*")
      out.push_back(Sign::star);
    else
      throw ParseError("sign token must be '1' or '*', got '" + tok + "'");
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace ofplus
