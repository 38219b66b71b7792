#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ofplus/partitions.hpp"

using namespace ofplus;

namespace {

using PairList = std::vector<std::pair<int, int>>;

// Every perfect matching of {1..k}: pair the smallest free point with each
// other free point in turn.
void all_matchings(std::vector<int> free_points, PairList& acc, std::vector<PairList>& out) {
  if (free_points.empty()) {
    auto sorted = acc;
    std::sort(sorted.begin(), sorted.end());
    out.push_back(sorted);
    return;
  }
  const int a = free_points.front();
  for (std::size_t n = 1; n < free_points.size(); ++n) {
    const int b = free_points[n];
    std::vector<int> rest;
    for (std::size_t m = 1; m < free_points.size(); ++m)
      if (m != n) rest.push_back(free_points[m]);
    acc.emplace_back(a, b);
    all_matchings(rest, acc, out);
    acc.pop_back();
  }
}

// Crossing test written from the definition: a < c < b < d for pairs (a,b), (c,d).
bool has_crossing(const PairList& ps) {
  for (auto [a, b] : ps)
    for (auto [c, d] : ps)
      if (a < c && c < b && b < d) return true;
  return false;
}

std::set<PairList> noncrossing_by_filter(int k) {
  std::vector<int> pts;
  for (int x = 1; x <= k; ++x) pts.push_back(x);
  PairList acc;
  std::vector<PairList> all;
  all_matchings(pts, acc, all);
  std::set<PairList> out;
  for (auto& m : all)
    if (!has_crossing(m)) out.insert(m);
  return out;
}

}  // namespace

TEST(NC2, CountsAreCatalan) {
  const unsigned long long expected[] = {1, 2, 5, 14, 42, 132, 429, 1430};
  for (int l = 1; l <= 8; ++l) {
    EXPECT_EQ(enumerate_nc2(2 * l).size(), expected[l - 1]) << "l=" << l;
    EXPECT_EQ(catalan(l), expected[l - 1]);
  }
}

TEST(NC2, MatchesCrossingFilterOfAllMatchings) {
  for (int l = 1; l <= 5; ++l) {
    std::set<PairList> got;
    for (const auto& p : enumerate_nc2(2 * l)) {
      EXPECT_TRUE(p.noncrossing);
      EXPECT_EQ(p.k, 2 * l);
      got.insert(p.pairs);
    }
    EXPECT_EQ(got, noncrossing_by_filter(2 * l)) << "l=" << l;
  }
}

TEST(NC2, OrderIsCanonicalAndStable) {
  auto a = enumerate_nc2(6);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(to_string(a.front()), "1-2,3-4,5-6");
  EXPECT_EQ(a, enumerate_nc2(6));
}

TEST(NC2, EdgeCases) {
  EXPECT_TRUE(enumerate_nc2(3).empty());
  ASSERT_EQ(enumerate_nc2(0).size(), 1u);
  EXPECT_TRUE(enumerate_nc2(0).front().pairs.empty());
  EXPECT_THROW(enumerate_nc2(-2), DomainError);
}

TEST(NC2, SignRestriction) {
  SignPattern eps{Sign::star, Sign::plain, Sign::star, Sign::plain};
  auto ps = enumerate_nc2_eps(4, eps);
  EXPECT_EQ(ps.size(), 2u);
  SignPattern same{Sign::plain, Sign::plain, Sign::star, Sign::star};
  auto qs = enumerate_nc2_eps(4, same);
  ASSERT_EQ(qs.size(), 1u);
  EXPECT_EQ(to_string(qs.front()), "1-4,2-3");
}

TEST(Pairing, MakePairingValidates) {
  auto p = make_pairing(4, {{3, 1}, {2, 4}});
  EXPECT_FALSE(p.noncrossing);
  EXPECT_EQ(to_string(p), "1-3,2-4");
  EXPECT_THROW(make_pairing(4, {{1, 2}, {2, 3}}), DomainError);
  EXPECT_THROW(make_pairing(4, {{1, 2}}), DomainError);
  EXPECT_THROW(make_pairing(2, {{1, 3}}), DomainError);
}

TEST(Join, SymmetricAndIdempotent) {
  for (int k : {2, 4, 6, 8}) {
    const auto ps = enumerate_nc2(k);
    for (const auto& a : ps) {
      EXPECT_EQ(join(a, a), to_partition(a));
      EXPECT_EQ(join_block_count(a, a), k / 2);
      for (const auto& b : ps) {
        EXPECT_EQ(join(a, b), join(b, a));
        const int blocks = join_block_count(a, b);
        EXPECT_EQ(blocks, static_cast<int>(join(a, b).blocks.size()));
        // The diagonal is the unique maximum of the block count.
        if (!(a == b)) {
          EXPECT_LT(blocks, k / 2);
        }
      }
    }
  }
}

TEST(Join, KnownValue) {
  auto a = make_pairing(4, {{1, 2}, {3, 4}});
  auto b = make_pairing(4, {{1, 4}, {2, 3}});
  auto j = join(a, b);
  ASSERT_EQ(j.blocks.size(), 1u);
  EXPECT_EQ(j.blocks.front(), (std::vector<int>{1, 2, 3, 4}));
}

TEST(Kernel, GroupsEqualLabels) {
  auto k = kernel(std::vector<int>{2, 1, 2, 3, 1});
  ASSERT_EQ(k.blocks.size(), 3u);
  EXPECT_EQ(k.blocks[0], (std::vector<int>{1, 3}));
  EXPECT_EQ(k.blocks[1], (std::vector<int>{2, 5}));
  EXPECT_EQ(k.blocks[2], (std::vector<int>{4}));
}

TEST(Kernel, Refinement) {
  auto p = make_pairing(4, {{1, 4}, {2, 3}});
  EXPECT_TRUE(kernel_refines(p, std::vector<int>{1, 2, 2, 1}));
  EXPECT_FALSE(kernel_refines(p, std::vector<int>{1, 2, 1, 2}));
  EXPECT_TRUE(kernel_refines(to_partition(p), std::vector<int>{5, 5, 5, 5}));
  EXPECT_THROW(kernel_refines(p, std::vector<int>{1, 2}), DomainError);
}

TEST(SignPattern, Parses) {
  auto e = parse_sign_pattern("1, *,1");
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[1], Sign::star);
  EXPECT_THROW(parse_sign_pattern("1,x"), ParseError);
  EXPECT_TRUE(parse_sign_pattern("").empty());
}
