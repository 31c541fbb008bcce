#include "hyperstab/newton.hpp"
#include "hyperstab/parser.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hyperstab;
using namespace hyperstab::newton;
using hyperstab::testing::uniform_int;

namespace {

std::vector<Rational> uniform_target(std::size_t n, long d) {
  return std::vector<Rational>(n, make_rational(d, static_cast<long>(n)));
}

std::vector<Rational> R(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(NewtonPoints, Support) {
  auto a = newton_points(parse_polynomial("x0^3 + x1^3", 2));
  EXPECT_EQ(a.points, (std::vector<std::vector<int>>{{3, 0}, {0, 3}}));
  auto b = newton_points(parse_polynomial("x0*x1*x2", 3));
  EXPECT_EQ(b.points, (std::vector<std::vector<int>>{{1, 1, 1}}));
  auto c = newton_points(parse_polynomial("2*x0^2*x1 - x0^2*x1", 2));
  EXPECT_EQ(c.points, (std::vector<std::vector<int>>{{2, 1}}));
  EXPECT_THROW(newton_points(Polynomial(2)), std::invalid_argument);
}

TEST(Barycenter, Midpoint) {
  ExponentCloud cloud{{{3, 0}, {0, 3}}, 2};
  auto cert = barycenter_membership(cloud, uniform_target(2, 3));
  ASSERT_TRUE(std::holds_alternative<Inside>(cert));
  const auto& l = std::get<Inside>(cert).lambdas;
  EXPECT_EQ(l.at({3, 0}), make_rational(1, 2));
  EXPECT_EQ(l.at({0, 3}), make_rational(1, 2));
}

TEST(Barycenter, OnePointFarkas) {
  ExponentCloud cloud{{{2, 1}}, 2};
  auto target = uniform_target(2, 3);
  auto cert = barycenter_membership(cloud, target);
  ASSERT_TRUE(std::holds_alternative<Separated>(cert));
  EXPECT_EQ(std::get<Separated>(cert).w, R({1, -1}));
  EXPECT_EQ(separation_margin(cloud, target, std::get<Separated>(cert).w), 1);
}

TEST(Barycenter, SumOfNormalCrossings) {
  auto f = parse_polynomial("x0*x1*x2 + x3*x4*x5 + x6*x7*x8", 9);
  auto cloud = newton_points(f);
  auto target = uniform_target(9, 3);
  auto cert = barycenter_membership(cloud, target);
  ASSERT_TRUE(std::holds_alternative<Inside>(cert));
  for (const auto& [v, l] : std::get<Inside>(cert).lambdas) EXPECT_EQ(l, make_rational(1, 3));
  EXPECT_TRUE(verify_membership(cloud, target, cert));
}

TEST(Barycenter, Errors) {
  EXPECT_THROW(barycenter_membership(ExponentCloud{{}, 2}, uniform_target(2, 3)), std::invalid_argument);
  EXPECT_THROW(barycenter_membership(ExponentCloud{{{1, 2}}, 2}, uniform_target(3, 3)),
               std::invalid_argument);
}

TEST(SeparatingMaximal, OneDimensional) {
  ExponentCloud cloud{{{2, 1}}, 2};
  auto s = separating_weight_maximal(cloud, uniform_target(2, 3));
  EXPECT_EQ(s.w, R({1, -1}));
  EXPECT_EQ(s.margin, 1);
  EXPECT_EQ(s.normalized_margin, 1);
}

TEST(SeparatingMaximal, DoubledPlaneTimesPlanes) {
  auto cloud = newton_points(parse_polynomial("x0^2*x1 + x0^2*x2", 3));
  auto target = uniform_target(3, 3);
  auto s = separating_weight_maximal(cloud, target);
  EXPECT_GT(s.margin, 0);
  EXPECT_EQ(separation_margin(cloud, target, s.w), s.margin);
}

TEST(SeparatingMaximal, InsideIsAnError) {
  ExponentCloud cloud{{{3, 0}, {0, 3}}, 2};
  EXPECT_THROW(separating_weight_maximal(cloud, uniform_target(2, 3)), std::invalid_argument);
}

// Random clouds: dim <= 6, <= 25 points, entries <= 8; targets are either
// random convex combinations or random rational points.
TEST(CertificateSoundness, RandomClouds) {
  int inside = 0, separated = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t dim = static_cast<std::size_t>(uniform_int(1, 6));
    std::size_t count = static_cast<std::size_t>(uniform_int(1, 25));
    ExponentCloud cloud{{}, dim};
    for (std::size_t j = 0; j < count; ++j) {
      std::vector<int> v(dim);
      for (auto& x : v) x = static_cast<int>(uniform_int(0, 8));
      cloud.points.push_back(v);
    }
    std::vector<Rational> target(dim, Rational(0));
    if (trial % 2 == 0) {
      std::vector<long> wts(count);
      long total = 0;
      for (auto& w : wts) total += (w = uniform_int(0, 3));
      if (total == 0) wts[0] = total = 1;
      for (std::size_t j = 0; j < count; ++j)
        for (std::size_t i = 0; i < dim; ++i) target[i] += make_rational(wts[j] * cloud.points[j][i], total);
    } else {
      for (auto& t : target) t = make_rational(uniform_int(0, 16), uniform_int(1, 3));
    }
    auto cert = barycenter_membership(cloud, target);
    ASSERT_TRUE(verify_membership(cloud, target, cert)) << "trial " << trial;
    EXPECT_EQ(barycenter_membership(cloud, target).index(), cert.index());
    if (std::holds_alternative<Inside>(cert)) {
      ++inside;
      for (int probe = 0; probe < 100; ++probe) {
        std::vector<Rational> w(dim);
        for (auto& x : w) x = hyperstab::testing::random_rational(6, 5);
        EXPECT_LE(separation_margin(cloud, target, w), 0);
      }
    } else {
      ++separated;
      auto s = separating_weight_maximal(cloud, target);
      EXPECT_GT(s.margin, 0);
    }
  }
  EXPECT_GT(inside, 50);
  EXPECT_GT(separated, 20);
}

TEST(CertificateSoundness, Deterministic) {
  auto cloud = newton_points(parse_polynomial("x0^2*x1 + x0*x1*x2 + x2^3 + x1^2*x3", 4));
  auto target = uniform_target(4, 3);
  auto a = barycenter_membership(cloud, target);
  auto b = barycenter_membership(cloud, target);
  ASSERT_EQ(a.index(), b.index());
  if (auto* s = std::get_if<Separated>(&a)) {
    EXPECT_EQ(s->w, std::get<Separated>(b).w);
  }
  if (auto* s = std::get_if<Inside>(&a)) {
    EXPECT_EQ(s->lambdas, std::get<Inside>(b).lambdas);
  }
}
