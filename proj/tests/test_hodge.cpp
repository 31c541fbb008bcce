#include "hyperstab/hodge.hpp"
#include "hyperstab/linalg.hpp"
#include "hyperstab/minexp.hpp"
#include "hyperstab/parser.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace hyperstab;
using namespace hyperstab::hodge;
using hyperstab::testing::uniform_int;

namespace {

std::vector<Integer> Z(std::initializer_list<long> v) {
  std::vector<Integer> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

Integer binom(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Middle Betti number of a smooth degree d hypersurface in P^n from its
// Euler characteristic: chi = d * [h^{n-1}] (1+h)^{n+1} / (1+dh).
Integer middle_betti(int n, int d) {
  std::vector<Integer> c(n);
  for (int k = 0; k < n; ++k) c[k] = binom(n + 1, k) - (k ? Integer(d) * c[k - 1] : Integer(0));
  Integer chi = Integer(d) * c[n - 1];
  // every even degree other than the middle contributes 1
  return (n - 1) % 2 == 0 ? Integer(chi - (n - 1)) : Integer(Integer(n) - chi);
}

// Cohomology of the simplicial complex generated by the nonvanishing sets
// of the cells, straight from its face lists.
std::vector<Integer> delta_cohomology(const Arrangement& S) {
  std::vector<std::set<std::uint64_t>> faces(S.num_coords + 1);
  for (auto cell : S.cells) {
    std::uint64_t F = S.full_mask() & ~cell;
    for (std::uint64_t sub = F; sub; sub = (sub - 1) & F) faces[std::popcount(sub) - 1].insert(sub);
  }
  const int top = S.dim();
  std::vector<std::size_t> rank(top + 2, 0);
  for (int j = 0; j <= top; ++j) {
    std::vector<std::uint64_t> lo(faces[j].begin(), faces[j].end());
    std::vector<std::uint64_t> hi(faces[j + 1].begin(), faces[j + 1].end());
    if (lo.empty() || hi.empty()) continue;
    Matrix m(hi.size(), std::vector<Rational>(lo.size(), Rational(0)));
    for (std::size_t r = 0; r < hi.size(); ++r) {
      int sign = 1;
      for (std::size_t b = 0; b < S.num_coords; ++b) {
        if (!(hi[r] >> b & 1)) continue;
        auto face = hi[r] & ~(std::uint64_t{1} << b);
        auto at = std::lower_bound(lo.begin(), lo.end(), face) - lo.begin();
        m[r][at] = sign;
        sign = -sign;
      }
    }
    rank[j] = rank_fraction_free(m);
  }
  std::vector<Integer> out;
  for (int j = 0; j <= top; ++j)
    out.emplace_back(static_cast<long>(faces[j].size()) - static_cast<long>(rank[j]) - (j ? static_cast<long>(rank[j - 1]) : 0));
  return out;
}

Arrangement arr(std::size_t coords, std::vector<std::vector<std::size_t>> vanishing) {
  Arrangement S{coords, {}};
  for (const auto& v : vanishing) {
    std::uint64_t mask = 0;
    for (auto i : v) mask |= std::uint64_t{1} << i;
    S.cells.push_back(mask);
  }
  return S;
}

Polynomial P(const std::string& s, std::size_t n) { return parse_polynomial(s, n); }

}  // namespace

TEST(SmoothMiddleHodge, Examples) {
  EXPECT_EQ(smooth_middle_hodge(8, 3).entries, Z({0, 0, 1, 84, 84, 1, 0, 0}));
  auto h = smooth_middle_hodge(5, 3).entries;
  EXPECT_EQ(h[1], 1);
  EXPECT_EQ(h[2], 21);
  EXPECT_EQ(smooth_middle_hodge(3, 4).entries, Z({1, 20, 1}));
  EXPECT_EQ(smooth_middle_hodge(2, 3).entries, Z({1, 1}));
  EXPECT_THROW(smooth_middle_hodge(1, 3), std::invalid_argument);
  EXPECT_THROW(smooth_middle_hodge(4, 1), std::invalid_argument);
}

TEST(SmoothMiddleHodge, SymmetryAndShape) {
  for (int d = 2; d <= 6; ++d)
    for (int n = 3; n <= 12; ++n) {
      auto m = cy_level(n, d);
      if (!m) continue;
      auto h = smooth_middle_hodge(n, d).entries;
      for (int q = 0; q < n; ++q) EXPECT_EQ(h[q], h[n - 1 - q]) << n << " " << d;
      if (d == 2) continue;  // quadrics: the only class sits in the middle
      for (int q = 0; q < *m; ++q) EXPECT_EQ(h[q], 0) << n << " " << d;
      EXPECT_EQ(h[*m], 1) << n << " " << d;
    }
}

TEST(SmoothMiddleHodge, SumIsMiddleBetti) {
  for (int d = 2; d <= 6; ++d)
    for (int n = 2; n <= 12; ++n) {
      Integer sum = 0;
      for (const auto& x : smooth_middle_hodge(n, d).entries) sum += x;
      EXPECT_EQ(sum, middle_betti(n, d)) << n << " " << d;
    }
}

TEST(CyLevel, Examples) {
  EXPECT_EQ(cy_level(8, 3), 2);
  EXPECT_EQ(cy_level(3, 4), 0);
  EXPECT_EQ(cy_level(5, 4), std::nullopt);
}

TEST(CoreOfBlocks, Examples) {
  auto c2 = core_of_blocks({SmoothCone{5, 3}, NC{3}});
  EXPECT_EQ(c2.weight, 6);
  EXPECT_EQ(c2.twist, 2);
  EXPECT_EQ(c2.label, "Core(H^4(cubic fourfold))(-1)");
  ASSERT_EQ(c2.smooth_blocks.size(), 1u);
  EXPECT_EQ(c2.smooth_blocks[0].entries[1], 1);

  auto c3 = core_of_blocks({SmoothCone{2, 3}, NC{3}, NC{3}});
  EXPECT_EQ(c3.weight, 5);
  EXPECT_EQ(c3.label, "Core(H^1(elliptic curve))(-2)");

  auto c4 = core_of_blocks({NC{3}, NC{3}, NC{3}});
  EXPECT_EQ(c4.weight, 4);
  EXPECT_EQ(c4.twist, 2);
  EXPECT_EQ(c4.label, "Q(-2)");

  auto c1 = core_of_blocks({SmoothCone{8, 3}});
  EXPECT_EQ(c1.weight, 7);
  EXPECT_EQ(c1.twist, 2);
  EXPECT_EQ(c1.label, "Core(H^7(cubic sevenfold))");

  EXPECT_THROW(core_of_blocks({SmoothCone{4, 3}}), std::invalid_argument);
  EXPECT_THROW(core_of_blocks({}), std::invalid_argument);
}

TEST(CoreOfBlocks, OrderAndGrouping) {
  std::vector<BlockDescriptor> pool = {NC{3}, NC{4}, SmoothCone{2, 3}, SmoothCone{3, 4}, SmoothCone{5, 3}, SmoothCone{3, 2}};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BlockDescriptor> blocks;
    const int k = static_cast<int>(uniform_int(1, 5));
    for (int i = 0; i < k; ++i) blocks.push_back(pool[uniform_int(0, static_cast<long>(pool.size()) - 1)]);
    auto c = core_of_blocks(blocks);
    auto shuffled = blocks;
    std::shuffle(shuffled.begin(), shuffled.end(), hyperstab::testing::rng());
    auto cs = core_of_blocks(shuffled);
    EXPECT_EQ(c.weight, cs.weight);
    EXPECT_EQ(c.twist, cs.twist);
    // (first j blocks) then the rest: a join of two composite blocks adds one more twist
    if (k >= 2) {
      const int j = static_cast<int>(uniform_int(1, k - 1));
      auto a = core_of_blocks({blocks.begin(), blocks.begin() + j});
      auto b = core_of_blocks({blocks.begin() + j, blocks.end()});
      EXPECT_EQ(c.weight, a.weight + b.weight + 2);
      EXPECT_EQ(c.twist, a.twist + b.twist + 1);
    }
  }
}

TEST(Nilpotency, Examples) {
  EXPECT_EQ(nilpotency_index(8, 6, 2), 2);
  EXPECT_EQ(nilpotency_index(8, 5, 2), 3);
  EXPECT_EQ(nilpotency_index(8, 7, 2), 1);
  EXPECT_EQ(nilpotency_index(8, 4, 2), 4);
  EXPECT_THROW(nilpotency_index(8, 3, 2), std::invalid_argument);
  EXPECT_THROW(nilpotency_index(8, 8, 2), std::invalid_argument);
}

TEST(Nilpotency, GlobalBound) {
  for (int n = 2; n <= 16; ++n)
    for (int m = 0; 2 * m <= n - 1; ++m)
      for (int w = 2 * m; w <= n - 1; ++w) EXPECT_LE(nilpotency_index(n, w, m), n - 2 * m);
}

TEST(MaximalDegeneration, Examples) {
  EXPECT_TRUE(maximal_degeneration_test(core_of_blocks({NC{3}, NC{3}, NC{3}}), 2));
  EXPECT_FALSE(maximal_degeneration_test(core_of_blocks({SmoothCone{5, 3}, NC{3}}), 2));
  for (int d = 2; d <= 5; ++d)
    for (int m = 0; m <= 3; ++m) {
      std::vector<BlockDescriptor> blocks(m + 1, NC{d});
      auto c = core_of_blocks(blocks);
      EXPECT_EQ(c.twist, m);
      EXPECT_TRUE(maximal_degeneration_test(c, m));
      const int n = (m + 1) * d - 1;
      EXPECT_EQ(nilpotency_index(n, c.weight, m), n - 2 * m);
    }
}

TEST(BlockDescriptors, FermatGrouping) {
  auto b = block_descriptors(P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6*x7*x8", 9));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(block_name(b[0]), "SmoothCone(5,3)");
  EXPECT_EQ(block_name(b[1]), "NC(3)");
  auto c = block_descriptors(P("x0*x1*x2*x3 + x4*x5*x6*x7", 8));
  EXPECT_EQ(c.size(), 2u);
  EXPECT_THROW(block_descriptors(P("x0^3 + x1*x2*x3", 4)), std::invalid_argument);
  EXPECT_THROW(block_descriptors(P("x0^2*x1 + x2^3", 3)), std::invalid_argument);
}

TEST(ArrangementCohomology, Examples) {
  EXPECT_EQ(arrangement_cohomology(arr(3, {{0, 1}, {1, 2}})).values, Z({2}));
  EXPECT_EQ(arrangement_cohomology(arr(3, {{0}, {1}, {2}})).values, Z({1, 1}));
  EXPECT_EQ(arrangement_cohomology(arr(4, {{0, 1}})).values, Z({1, 0}));
  EXPECT_TRUE(arrangement_cohomology(Arrangement{3, {}}).values.empty());
  EXPECT_THROW(arrangement_cohomology(arr(3, {{0, 1, 2}})), std::invalid_argument);
}

TEST(ArrangementCohomology, Case4IsConnected) {
  auto f = P("x0*x1*x2 + x3*x4*x5 + x6*x7*x8", 9);
  auto S = minexp::liminal_locus_structured(f);
  EXPECT_EQ(S.cells.size(), 27u);
  auto row = arrangement_cohomology(S);
  ASSERT_FALSE(row.values.empty());
  EXPECT_EQ(row.values[0], 1);
  EXPECT_EQ(row.values, delta_cohomology(S));
}

TEST(ArrangementCohomology, ConnectedWhenCoreWeightSmall) {
  for (const char* text : {"x0*x1*x2 + x3*x4*x5 + x6*x7*x8", "x0^3 + x1^3 + x2^3 + x3*x4*x5 + x6*x7*x8",
                           "x0*x1*x2*x3 + x4*x5*x6*x7", "x0*x1*x2*x3 + x4*x5*x6*x7 + x8*x9*x10*x11"}) {
    std::size_t vars = 0;
    for (const char* p = text; *p; ++p)
      if (*p == 'x') vars = std::max<std::size_t>(vars, std::strtoul(p + 1, nullptr, 10) + 1);
    auto f = P(text, vars);
    const int n = static_cast<int>(vars) - 1;
    auto core = core_of_blocks(block_descriptors(f));
    if (core.weight > n - 3) continue;
    auto S = minexp::liminal_locus_structured(f);
    auto row = arrangement_cohomology(S);
    ASSERT_FALSE(row.values.empty()) << text;
    EXPECT_EQ(row.values[0], 1) << text;
    EXPECT_EQ(row, arrangement_cohomology(S, CohomologyMethod::SupportComplex)) << text;
  }
}

TEST(ArrangementCohomology, MatchesFaceComplex) {
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t N = static_cast<std::size_t>(uniform_int(3, 7));
    std::set<std::uint64_t> cells;
    const int k = static_cast<int>(uniform_int(1, 7));
    while (static_cast<int>(cells.size()) < k) {
      std::uint64_t mask = static_cast<std::uint64_t>(uniform_int(0, (1L << N) - 2));
      cells.insert(mask);
    }
    Arrangement S{N, {cells.begin(), cells.end()}};
    auto expect = delta_cohomology(S);
    EXPECT_EQ(arrangement_cohomology(S, CohomologyMethod::Nerve).values, expect) << trial;
    EXPECT_EQ(arrangement_cohomology(S, CohomologyMethod::SupportComplex).values, expect) << trial;
  }
}

TEST(ArrangementCohomology, DisjointUnionAdds) {
  // lines in P^5 supported on {0,1,2} and {3,4,5}
  auto a = arr(6, {{0, 3, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5}});
  auto b = arr(6, {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}});
  auto u = a;
  u.cells.insert(u.cells.end(), b.cells.begin(), b.cells.end());
  auto ha = arrangement_cohomology(a).values, hb = arrangement_cohomology(b).values, hu = arrangement_cohomology(u).values;
  ASSERT_EQ(hu.size(), ha.size());
  for (std::size_t i = 0; i < hu.size(); ++i) EXPECT_EQ(hu[i], ha[i] + hb[i]);
  EXPECT_EQ(arrangement_cohomology(arr(6, {{0, 1}})).values, Z({1, 0, 0, 0}));
}

TEST(HodgeDuBoisRow, K3) {
  for (auto [s0, s1] : std::vector<std::pair<long, long>>{{1, 0}, {1, 1}, {2, 0}}) {
    auto row = hodge_du_bois_row(3, 4, 0, CohomologyRow{Z({s0, s1})});
    EXPECT_EQ(row, Z({0, s0 - 1, s1 + 1, 0}));
  }
}

TEST(HodgeDuBoisRow, Case4) {
  auto f = P("x0*x1*x2 + x3*x4*x5 + x6*x7*x8", 9);
  auto h0S = arrangement_cohomology(minexp::liminal_locus_structured(f));
  auto row = hodge_du_bois_row(8, 3, 2, h0S);
  ASSERT_EQ(row.size(), 9u);
  for (int i = 0; i <= 8; ++i) {
    Integer expect = i >= 3 && i - 3 < static_cast<int>(h0S.values.size()) ? h0S.values[i - 3] : Integer(0);
    if (i == 3) expect -= 1;
    if (i == 5) expect += 1;
    EXPECT_EQ(row[i], expect) << i;
    EXPECT_GE(row[i], 0);
  }
  EXPECT_EQ(row[2], 0);
}

TEST(HodgeDuBoisRow, Errors) {
  EXPECT_THROW(hodge_du_bois_row(3, 4, 1, CohomologyRow{Z({1})}), std::invalid_argument);
  EXPECT_THROW(hodge_du_bois_row(3, 4, 0, CohomologyRow{Z({0})}), std::invalid_argument);
  EXPECT_EQ(m_rational_entry(8, 3, 2), 1);
}
