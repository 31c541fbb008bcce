#include "hyperstab/minexp.hpp"
#include "hyperstab/parser.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hyperstab;
using namespace hyperstab::minexp;
using hyperstab::testing::uniform_int;

namespace {

Polynomial P(const std::string& s, std::size_t n) { return parse_polynomial(s, n); }
ExtRational Q(long p, long q = 1) { return ExtRational(make_rational(p, q)); }
const ExtRational kInf = ExtRational::infinity();

void expect_exact(const MinExpBound& b, const ExtRational& v) {
  EXPECT_TRUE(b.exact()) << to_string(b.lo) << " " << to_string(b.hi);
  EXPECT_EQ(b.lo, v) << to_string(b.lo);
  EXPECT_NO_THROW(replay(b.trace));
}

// Test-side generators with independently known local values at 0.
struct Piece {
  std::string text;  // in variables x0..x{vars-1}
  std::size_t vars;
  Rational value;
};

std::string shifted(const std::string& text, std::size_t by) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    out += text[i];
    if (text[i] == 'x') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out += std::to_string(std::stoul(text.substr(i + 1, j - i - 1)) + by);
      i = j - 1;
    }
  }
  return out;
}

Piece random_piece() {
  switch (uniform_int(0, 3)) {
    case 0: {  // x^k
      long k = uniform_int(2, 7);
      return {"x0^" + std::to_string(k), 1, make_rational(1, k)};
    }
    case 1: {  // reduced normal crossing
      long k = uniform_int(2, 4);
      std::string t = "x0";
      for (long i = 1; i < k; ++i) t += "*x" + std::to_string(i);
      return {t, static_cast<std::size_t>(k), Rational(1)};
    }
    case 2: {  // nondegenerate quadric, written non-diagonally
      long k = uniform_int(2, 4);
      std::string t = "x0^2";
      for (long i = 1; i < k; ++i) t += " + x" + std::to_string(i - 1) + "*x" + std::to_string(i) + " + 2*x" + std::to_string(i) + "^2";
      return {t, static_cast<std::size_t>(k), make_rational(k, 2)};
    }
    default: {  // Fermat form: cone over a smooth hypersurface
      long k = uniform_int(2, 4), d = uniform_int(2, 4);
      std::string t;
      for (long i = 0; i < k; ++i) t += (i ? " + x" : "x") + std::to_string(i) + "^" + std::to_string(d);
      return {t, static_cast<std::size_t>(k), make_rational(k, d)};
    }
  }
}

}  // namespace

TEST(MinExpLocal, SpecExamples) {
  expect_exact(minexp_local(P("x0^2 + x1^2 + x2^2 + x3^2", 4), Point::origin(4)), Q(2));
  expect_exact(minexp_local(P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6*x7", 8), Point::origin(8)), Q(3));
  expect_exact(minexp_local(P("x0^6 + x1^2 + x2^2 + x3^2", 4), Point::origin(4)), Q(5, 3));
}

TEST(MinExpLocal, SmoothAndErrors) {
  expect_exact(minexp_local(P("x0 + x1^2", 2), Point::origin(2)), kInf);
  EXPECT_THROW(minexp_local(P("x0^2 + 1", 1), Point::origin(1)), std::invalid_argument);
  expect_exact(minexp_local(P("x0^2*x1", 2), Point::origin(2)), Q(1, 2));
  expect_exact(minexp_local(P("x0^2*x1", 2), Point::affine({Rational(0), Rational(1)})), Q(1, 2));
}

TEST(MinExpLocal, ProjectivePointUsesChart) {
  // node of the nodal cubic x0*x1*x2 + x1^3 + x2^3 at [1:0:0]: local x1*x2 + ...
  auto f = P("x0*x1*x2 + x1^3 + x2^3", 3);
  expect_exact(minexp_local(f, Point::proj({Rational(2), Rational(0), Rational(0)})), Q(1));
}

TEST(MinExpLocal, DegenerateQuadraticPartGivesInterval) {
  auto b = minexp_local(P("x0^2 + x1^2 + x2^3 + x0*x2^2", 3), Point::origin(3));
  EXPECT_FALSE(b.exact());
  EXPECT_EQ(b.lo, Q(1));
  EXPECT_TRUE(b.contains(Q(1) + Q(1, 3)));  // A2 surface point: 1 + 1/3
  EXPECT_NO_THROW(replay(b.trace));
}

TEST(MinExpCone, SpecExamples) {
  expect_exact(minexp_cone(P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6^3 + x7^3 + x8^3", 9)), Q(3));
  expect_exact(minexp_cone(P("x0*x1*x2", 3)), Q(1));
  expect_exact(minexp_cone(P("x0^2*x1", 2)), Q(1, 2));
  EXPECT_THROW(minexp_cone(P("x0 + x1", 2)), std::invalid_argument);
  EXPECT_THROW(minexp_cone(P("x0^2 + x1", 2)), std::invalid_argument);
}

TEST(MinExpGlobal, SpecExamples) {
  expect_exact(minexp_global_projective(P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6*x7*x8", 9)), Q(3));
  expect_exact(minexp_global_projective(P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6^3 + x7^3 + x8^3", 9)), kInf);
  expect_exact(minexp_global_projective(P("x0*x1*x2", 3)), Q(1));
  expect_exact(minexp_global_projective(P("x0*x1", 2)), kInf);
  expect_exact(minexp_global_projective(P("x0*x1*x2*x3", 4)), Q(1));
  expect_exact(minexp_global_projective(P("x0^2*x1*x2", 3)), Q(1, 2));
}

TEST(MinExpGlobal, ChordalCubicIntervalContainsThreeHalves) {
  auto f = P("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3", 5);
  GlobalOptions o;
  o.sing_dim = 1;
  o.sing_points.push_back(Point::proj({Rational(1), Rational(0), Rational(0), Rational(0), Rational(0)}));
  auto b = minexp_global_projective(f, o);
  EXPECT_FALSE(b.exact());
  EXPECT_GE(b.lo, Q(1));
  EXPECT_TRUE(b.contains(Q(3, 2)));
  EXPECT_NO_THROW(replay(b.trace));
  // without hints the interval is wider but still valid
  auto bare = minexp_global_projective(f);
  EXPECT_TRUE(bare.contains(Q(3, 2)));
}

TEST(MinExpGlobal, FreeVariablesMakeAConeOverTheRest) {
  // x0^3 + x1^3 in P^2 is three concurrent lines: value at [0:0:1] is 2/3
  expect_exact(minexp_global_projective(P("x0^3 + x1^3", 3)), Q(2, 3));
}

TEST(MinExpGlobal, HintMustLieOnX) {
  GlobalOptions o;
  o.sing_points.push_back(Point::proj({Rational(1), Rational(1), Rational(0)}));
  EXPECT_THROW(minexp_global_projective(P("x0^3 + x1^3 + x2^3", 3), o), std::invalid_argument);
}

TEST(WeightUpperBound, SpecExamples) {
  Point o2 = Point::origin(2), o3 = Point::origin(3);
  std::vector<Rational> w11{Rational(1), Rational(1)}, w111{Rational(1), Rational(1), Rational(1)};
  auto b = weight_upper_bound(P("x0^2*x1", 2), w11, o2);
  EXPECT_EQ(b, Q(2, 3));
  EXPECT_GE(b, minexp_local(P("x0^2*x1", 2), o2).lo);
  EXPECT_EQ(weight_upper_bound(P("x0^2 + x1^2", 2), w11, o2), Q(1));
  EXPECT_EQ(weight_upper_bound(P("x0^3 + x1^3 + x2^3", 3), w111, o3), Q(1));
  EXPECT_THROW(weight_upper_bound(P("x0 + x1^2", 2), w11, o2), std::invalid_argument);
  std::vector<Rational> neg{Rational(-1), Rational(1)};
  EXPECT_THROW(weight_upper_bound(P("x0^2*x1", 2), neg, o2), std::invalid_argument);
}

TEST(StructuralBounds, SpecExamples) {
  auto cubic = P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6^3 + x7^3 + x8^2*x0", 9);
  auto a = structural_bounds(cubic, 0);
  EXPECT_EQ(a.lo, Q(8, 3));
  // vertex bound (n+1)/d at the cone vertex
  auto c = structural_bounds(P("x0*x1*x2", 3), std::nullopt, {}, Target::ConeVertex);
  EXPECT_EQ(c.hi, Q(1));
  // a singular point of multiplicity 2 in the chart: n/2
  auto nodal = P("x0*x1*x2 + x1^3 + x2^3", 3);
  auto d = structural_bounds(nodal, 0, {Point::proj({Rational(1), Rational(0), Rational(0)})});
  EXPECT_EQ(d.hi, Q(1));
  EXPECT_EQ(d.lo, Q(2, 3));
  EXPECT_TRUE(d.contains(Q(1)));
  auto smooth = structural_bounds(P("x0^3 + x1^3 + x2^3", 3), -1);
  EXPECT_EQ(smooth.lo, kInf);
}

TEST(HyperplaneProbe, SpecExamples) {
  auto fermat = P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6^3 + x7^3 + x8^3", 9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto r = hyperplane_restriction_probe(fermat, seed);
    EXPECT_FALSE(r.violated());
    EXPECT_EQ(r.probes[0].expected.lo, Q(8, 3));
  }
  auto r = hyperplane_restriction_probe(P("x0^2", 2), 3);
  for (const auto& p : r.probes) {
    EXPECT_EQ(p.status, ProbeStatus::Agree) << p.hyperplane;
    EXPECT_EQ(p.expected.lo, Q(1, 2));
  }
  auto q = hyperplane_restriction_probe(P("x0^2 + x1^2 + x2^2 + x3^2", 4), 1);
  EXPECT_FALSE(q.violated());
  EXPECT_EQ(q.probes[0].expected.lo, Q(3, 2));
}

TEST(HyperplaneProbe, NeverViolatedOnStructuredInputs) {
  const std::vector<std::pair<std::string, std::size_t>> inputs = {
      {"x0*x1*x2 + x3*x4*x5 + x6*x7*x8", 9}, {"x0^3 + x1^3 + x2^3 + x3*x4*x5", 6}, {"x0^2*x1 + x2^3", 3},
      {"x0^4 + x1^4 + x2^4 + x3^4", 4}};
  for (const auto& [text, n] : inputs) {
    auto f = P(text, n);
    for (std::uint64_t seed = 0; seed < 4; ++seed) EXPECT_FALSE(hyperplane_restriction_probe(f, seed).violated()) << text;
  }
}

TEST(Classify, SpecExamples) {
  auto b = minexp_global_projective(P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6*x7*x8", 9));
  auto c = classify(b, 7);
  EXPECT_EQ(c.m_du_bois, 2);
  EXPECT_EQ(c.m_rational, 1);
  EXPECT_EQ(c.liminal_level, 2);
  auto a5 = classify(minexp_local(P("x0^6 + x1^2 + x2^2 + x3^2", 4), Point::origin(4)), 3);
  EXPECT_EQ(a5.ade, true);
  EXPECT_EQ(a5.terminal, true);
  EXPECT_EQ(a5.mld_lower, 2);
  EXPECT_EQ(a5.m_du_bois, 0);
  EXPECT_EQ(a5.m_rational, 0);
  EXPECT_FALSE(a5.liminal_level.has_value());
  // [4/3, 3/2] in dimension 3: the whole interval sits at or below e/2
  MinExpBound iv{Q(4, 3), Q(3, 2), make_node(Rule::Smooth, "", {})};
  auto ci = classify(iv, 3);
  EXPECT_EQ(ci.ade, false);
  EXPECT_FALSE(ci.terminal.has_value());
  MinExpBound wide{Q(4, 3), Q(2), make_node(Rule::Smooth, "", {})};
  EXPECT_FALSE(classify(wide, 3).ade.has_value());
  MinExpBound smooth{kInf, kInf, make_node(Rule::Smooth, "", {})};
  EXPECT_TRUE(classify(smooth, 3).unbounded);
}

TEST(Classify, RationalNeverExceedsDuBois) {
  for (long p = 1; p <= 40; ++p) {
    MinExpBound b{Q(p, 6), Q(p, 6), make_node(Rule::Smooth, "", {})};
    auto c = classify(b, 5);
    if (c.m_rational) {
      ASSERT_TRUE(c.m_du_bois.has_value());
      EXPECT_LE(*c.m_rational, *c.m_du_bois);
    }
    EXPECT_EQ(c.liminal_level.has_value(), p % 6 == 0);
  }
}

TEST(LiminalLocus, SpecExamples) {
  auto case4 = liminal_locus_structured(P("x0*x1*x2 + x3*x4*x5 + x6*x7*x8", 9));
  EXPECT_EQ(case4.cells.size(), 27u);
  for (auto c : case4.cells) EXPECT_EQ(case4.cell_dim(c), 2);
  auto case2 = liminal_locus_structured(P("x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6*x7*x8", 9));
  ASSERT_EQ(case2.cells.size(), 3u);
  std::vector<std::uint64_t> want;
  for (int keep : {6, 7, 8}) want.push_back(0x1FFu & ~(1u << keep));
  std::sort(want.begin(), want.end());
  EXPECT_EQ(case2.cells, want);
  EXPECT_TRUE(liminal_locus_structured(P("x0^3 + x1^3 + x2^3", 3)).empty());
  auto lines = liminal_locus_structured(P("x0*x1*x2", 3));
  EXPECT_EQ(lines.cells.size(), 3u);
  EXPECT_THROW(liminal_locus_structured(P("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3", 5)),
               std::invalid_argument);
}

TEST(Properties, ThomSebastianiAdditivity) {
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_piece(), b = random_piece();
    std::size_t n = a.vars + b.vars;
    auto fa = P(a.text, a.vars), fb = P(b.text, b.vars);
    auto sum = P(a.text + " + " + shifted(b.text, a.vars), n);
    auto ba = minexp_local(fa, Point::origin(a.vars));
    auto bb = minexp_local(fb, Point::origin(b.vars));
    auto bs = minexp_local(sum, Point::origin(n));
    expect_exact(ba, a.value);
    expect_exact(bb, b.value);
    expect_exact(bs, Rational(a.value + b.value));
    EXPECT_EQ(bs.lo, ba.lo + bb.lo) << a.text << " (+) " << b.text;
  }
}

TEST(Properties, TwoPathFermat) {
  int agreements = 0;
  for (long d = 2; d <= 6; ++d)
    for (long k = 2; k <= 10; ++k) {
      std::string t;
      for (long i = 0; i < k; ++i) t += (i ? " + x" : "x") + std::to_string(i) + "^" + std::to_string(d);
      auto F = P(t, static_cast<std::size_t>(k));
      auto cone = minexp_cone(F);
      auto ts = minexp_local(F, Point::origin(static_cast<std::size_t>(k)));
      EXPECT_EQ(cone.trace.rule, Rule::ConeFormula);
      EXPECT_EQ(ts.trace.rule, Rule::ThomSebastiani);
      if (cone.exact() && ts.exact() && cone.lo == Q(k, d) && ts.lo == Q(k, d)) ++agreements;
    }
  EXPECT_EQ(agreements, 45);
}

TEST(Properties, BoundSoundness) {
  const std::vector<std::pair<std::string, std::size_t>> corpus = {
      {"x0^2 + x1^2 + x2^2 + x3^2", 4}, {"x0^6 + x1^2 + x2^2 + x3^2", 4}, {"x0*x1*x2", 3},
      {"x0^2*x1", 2}, {"x0^3 + x1^3 + x2^3", 3}, {"x0*x1*x2 + x3*x4*x5 + x6*x7*x8", 9},
      {"x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6*x7*x8", 9}, {"x0^4 + x1^2 + x2^2", 3},
      {"x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6*x7", 8}, {"x0^5 + x1*x2", 3}};
  for (const auto& [text, n] : corpus) {
    auto f = P(text, n);
    auto o = Point::origin(n);
    auto exact = minexp_local(f, o);
    ASSERT_TRUE(exact.exact()) << text;
    int mult = multiplicity_at(f, o);
    EXPECT_LE(exact.lo, Q(static_cast<long>(n), mult)) << text;
    for (int k = 0; k < 20; ++k) {
      std::vector<Rational> w(n);
      bool nz = false;
      for (auto& x : w) {
        x = make_rational(uniform_int(0, 6), uniform_int(1, 4));
        nz = nz || x != 0;
      }
      if (!nz) w[0] = 1;
      EXPECT_LE(exact.lo, weight_upper_bound(f, w, o)) << text;
    }
  }
}

TEST(Properties, LinearInvariance) {
  const std::vector<std::pair<std::string, std::size_t>> corpus = {
      {"x0^6 + x1^2 + x2^2 + x3^2", 4}, {"x0^3 + x1^3 + x2*x3*x4", 5}, {"x0^2*x1 + x2^4", 3},
      {"x0^2 + x1^2 + x2^2", 3}, {"x0*x1 + x2^3", 3}};
  for (const auto& [text, n] : corpus) {
    auto f = P(text, n);
    auto base = minexp_local(f, Point::origin(n));
    for (int k = 0; k < 10; ++k) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), hyperstab::testing::rng());
      auto g = substitute_linear(f, LinearChange::permutation(perm));
      auto b = minexp_local(g, Point::origin(n));
      EXPECT_EQ(b.lo, base.lo) << text;
      EXPECT_EQ(b.hi, base.hi) << text;
    }
  }
  // an invertible change inside a nondegenerate quadratic block stays exact
  for (int k = 0; k < 10; ++k) {
    auto q = substitute_linear(P("x0^2 + x1^2 + x2^2", 3), hyperstab::testing::random_invertible(3));
    auto f = P(q.to_string() + " + x3^5", 4);
    expect_exact(minexp_local(f, Point::origin(4)), Q(3, 2) + Q(1, 5));
  }
}

TEST(Properties, LctConsistencyOnAdeCorpus) {
  for (long k = 1; k <= 6; ++k)
    for (long e = 2; e <= 5; ++e) {
      std::string t = "x0^" + std::to_string(k + 1);
      for (long i = 1; i <= e; ++i) t += " + x" + std::to_string(i) + "^2";
      auto b = minexp_local(P(t, static_cast<std::size_t>(e + 1)), Point::origin(static_cast<std::size_t>(e + 1)));
      EXPECT_EQ(min(b.lo, Q(1)), Q(1));
    }
}

TEST(Trace, ReplayDetectsTampering) {
  auto b = minexp_global_projective(P("x0^3 + x1^3 + x2^3 + x3*x4*x5 + x6*x7*x8", 9));
  EXPECT_NO_THROW(replay(b.trace));
  auto t = b.trace;
  t.children[0].children[1].params[0] = 2;
  EXPECT_THROW(replay(t), std::logic_error);
  EXPECT_EQ(rule_from_name("ConeFormula"), Rule::ConeFormula);
  EXPECT_FALSE(rule_from_name("Bogus").has_value());
}
