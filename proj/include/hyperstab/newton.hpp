#ifndef HYPERSTAB_NEWTON_HPP
#define HYPERSTAB_NEWTON_HPP

#include "hyperstab/polynomial.hpp"
#include "hyperstab/simplex.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace hyperstab::newton {

/// Exponent vectors of the monomials of f, in a fixed order.
struct ExponentCloud {
  std::vector<std::vector<int>> points;
  std::size_t ambient_dim = 0;
};

struct Inside {
  std::map<std::vector<int>, Rational> lambdas;  // positive weights only
};
struct Separated {
  std::vector<Rational> w;  // integer entries, gcd 1
};
using MembershipCertificate = std::variant<Inside, Separated>;

inline ExponentCloud newton_points(const Polynomial& f) {
  if (f.is_zero()) throw std::invalid_argument("newton_points: zero polynomial");
  ExponentCloud cloud{{}, f.num_vars()};
  for (const auto& [m, c] : f.terms()) cloud.points.push_back(m.exponents());
  return cloud;
}

inline Rational dot(std::span<const Rational> w, std::span<const int> v) {
  Rational s = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (v[i] != 0) s += w[i] * v[i];
  return s;
}

inline Rational dot(std::span<const Rational> w, std::span<const Rational> v) {
  Rational s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
  return s;
}

/// min over the cloud of w·v minus w·target.
inline Rational separation_margin(const ExponentCloud& cloud, std::span<const Rational> target,
                                  std::span<const Rational> w) {
  Rational best = dot(w, cloud.points.at(0));
  for (const auto& v : cloud.points) {
    Rational d = dot(w, v);
    if (d < best) best = d;
  }
  return best - dot(w, target);
}

namespace detail {

inline void check(const ExponentCloud& cloud, std::span<const Rational> target) {
  if (cloud.points.empty()) throw std::invalid_argument("empty exponent cloud");
  if (target.size() != cloud.ambient_dim) throw std::invalid_argument("target dimension mismatch");
  for (const auto& v : cloud.points)
    if (v.size() != cloud.ambient_dim) throw std::invalid_argument("cloud point dimension mismatch");
}

// True when every point and the target share one coordinate sum; then w and
// w + a·(1,...,1) separate equally well and w is reported with sum zero.
inline bool common_coordinate_sum(const ExponentCloud& cloud, std::span<const Rational> target) {
  Rational t = 0;
  for (const auto& x : target) t += x;
  for (const auto& v : cloud.points) {
    long s = 0;
    for (int e : v) s += e;
    if (Rational(s) != t) return false;
  }
  return true;
}

inline std::vector<Rational> normalize_weight(const ExponentCloud& cloud, std::span<const Rational> target,
                                              std::vector<Rational> w) {
  if (common_coordinate_sum(cloud, target)) {
    Rational mean = 0;
    for (const auto& x : w) mean += x;
    mean /= static_cast<long>(w.size());
    for (auto& x : w) x -= mean;
  }
  return primitive_integer_vector(w);
}

}  // namespace detail

/// Decides whether target lies in the convex hull of the cloud by an exact
/// phase-1 simplex; returns convex weights or a separating weight read off
/// the Farkas certificate of the infeasible system.
inline MembershipCertificate barycenter_membership(const ExponentCloud& cloud,
                                                   std::span<const Rational> target) {
  detail::check(cloud, target);
  const std::size_t k = cloud.points.size(), dim = cloud.ambient_dim;
  lp::Problem p;
  p.objective.assign(k, Rational(0));
  p.add_row(std::vector<Rational>(k, Rational(1)), lp::Sense::Equal, Rational(1));
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Rational> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = cloud.points[j][i];
    p.add_row(std::move(row), lp::Sense::Equal, target[i]);
  }
  auto res = lp::solve(p);
  if (res.status == lp::Status::Optimal) {
    Inside in;
    for (std::size_t j = 0; j < k; ++j)
      if (res.x[j] != 0) in.lambdas[cloud.points[j]] += res.x[j];
    return in;
  }
  // z0 + z·v <= 0 for all v and z0 + z·target > 0, so w = -z separates.
  std::vector<Rational> w(dim);
  for (std::size_t i = 0; i < dim; ++i) w[i] = -res.farkas[i + 1];
  return Separated{detail::normalize_weight(cloud, target, std::move(w))};
}

inline bool verify_membership(const ExponentCloud& cloud, std::span<const Rational> target,
                              const MembershipCertificate& cert) {
  if (const auto* in = std::get_if<Inside>(&cert)) {
    Rational total = 0;
    std::vector<Rational> combo(cloud.ambient_dim, Rational(0));
    for (const auto& [v, l] : in->lambdas) {
      if (l < 0) return false;
      bool present = false;
      for (const auto& q : cloud.points) present = present || (q == v);
      if (!present) return false;
      total += l;
      for (std::size_t i = 0; i < combo.size(); ++i) combo[i] += l * v[i];
    }
    if (total != 1) return false;
    for (std::size_t i = 0; i < combo.size(); ++i)
      if (combo[i] != target[i]) return false;
    return true;
  }
  const auto& sep = std::get<Separated>(cert);
  if (sep.w.size() != cloud.ambient_dim) return false;
  return separation_margin(cloud, target, sep.w) > 0;
}

struct MaximalSeparation {
  std::vector<Rational> w;       // optimal vertex cleared to coprime integers
  Rational margin;               // margin of the returned integer w
  Rational normalized_margin;    // LP optimum under sum |w_i| <= dim
};

/// Maximizes min_v w·v - w·target over sum |w_i| <= ambient_dim (epigraph LP,
/// w split as p - q). Precondition: the target is separated from the cloud.
inline MaximalSeparation separating_weight_maximal(const ExponentCloud& cloud,
                                                   std::span<const Rational> target) {
  detail::check(cloud, target);
  const std::size_t dim = cloud.ambient_dim;
  // variables: p_0..p_{dim-1}, q_0..q_{dim-1}, t
  const std::size_t nv = 2 * dim + 1;
  lp::Problem pr;
  pr.objective.assign(nv, Rational(0));
  pr.objective[2 * dim] = 1;
  for (const auto& v : cloud.points) {
    std::vector<Rational> row(nv, Rational(0));
    for (std::size_t i = 0; i < dim; ++i) {
      Rational c = Rational(v[i]) - target[i];
      row[i] = -c;
      row[dim + i] = c;
    }
    row[2 * dim] = 1;
    pr.add_row(std::move(row), lp::Sense::LessEq, Rational(0));
  }
  std::vector<Rational> norm(nv, Rational(1));
  norm[2 * dim] = 0;
  pr.add_row(std::move(norm), lp::Sense::LessEq, Rational(static_cast<long>(dim)));
  auto res = lp::solve(pr);
  if (res.status != lp::Status::Optimal) throw std::logic_error("separation LP failed");
  if (res.value <= 0)
    throw std::invalid_argument("separating_weight_maximal: target lies in the convex hull");
  std::vector<Rational> w(dim);
  for (std::size_t i = 0; i < dim; ++i) w[i] = res.x[i] - res.x[dim + i];
  MaximalSeparation out;
  out.w = detail::normalize_weight(cloud, target, std::move(w));
  out.margin = separation_margin(cloud, target, out.w);
  out.normalized_margin = res.value;
  return out;
}

}  // namespace hyperstab::newton

#endif  // HYPERSTAB_NEWTON_HPP
