#ifndef HYPERSTAB_MINEXP_HPP
#define HYPERSTAB_MINEXP_HPP

#include "hyperstab/arrangement.hpp"
#include "hyperstab/polynomial.hpp"
#include "hyperstab/simplex.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperstab::minexp {

enum class Rule {
  Smooth,
  MonomialPower,
  NormalCrossing,
  MorseLemma,
  ThomSebastiani,
  ConeFormula,
  GlobalMin,
  WeightUpper,
  MultiplicityUpper,
  LctLower,
  SingDimLower,
  HyperplaneProbe,
  Intersect,
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Smooth: return "Smooth";
    case Rule::MonomialPower: return "MonomialPower";
    case Rule::NormalCrossing: return "NormalCrossing";
    case Rule::MorseLemma: return "MorseLemma";
    case Rule::ThomSebastiani: return "ThomSebastiani";
    case Rule::ConeFormula: return "ConeFormula";
    case Rule::GlobalMin: return "GlobalMin";
    case Rule::WeightUpper: return "WeightUpper";
    case Rule::MultiplicityUpper: return "MultiplicityUpper";
    case Rule::LctLower: return "LctLower";
    case Rule::SingDimLower: return "SingDimLower";
    case Rule::HyperplaneProbe: return "HyperplaneProbe";
    case Rule::Intersect: return "Intersect";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Rule::Intersect); ++i)
    if (s == rule_name(static_cast<Rule>(i))) return static_cast<Rule>(i);
  return std::nullopt;
}

/// One step of a derivation. Leaves recompute their interval from params;
/// inner nodes combine their children.
///   MonomialPower [k] -> 1/k          MorseLemma [r, k] -> r/2 (+ (k-r)/3 above)
///   LctLower [mult] -> >= 1/mult      MultiplicityUpper [k, mult] -> <= k/mult
///   WeightUpper [sum w, wt_w] -> <= sum/wt    SingDimLower [n, s, d] -> >= (n-s)/d
///   ConeFormula [k, d] -> min(child, k/d)
struct DerivationTrace {
  Rule rule = Rule::Smooth;
  std::string note;
  std::vector<Rational> params;
  ExtRational lo, hi;
  std::vector<DerivationTrace> children;
};

struct Interval {
  ExtRational lo, hi;
};

/// Evaluates a single node from its params and the children's intervals.
inline Interval evaluate_rule(Rule rule, const std::vector<Rational>& p, const std::vector<Interval>& ch) {
  auto need = [&](std::size_t np, std::size_t nc) {
    if (p.size() != np || (nc != SIZE_MAX && ch.size() != nc))
      throw std::invalid_argument(std::string("malformed trace node ") + rule_name(rule));
  };
  const ExtRational inf = ExtRational::infinity();
  switch (rule) {
    case Rule::Smooth:
      need(0, 0);
      return {inf, inf};
    case Rule::MonomialPower: {
      need(1, 0);
      if (p[0] <= 0) throw std::invalid_argument("MonomialPower: non-positive exponent");
      Rational v = 1 / p[0];
      return {v, v};
    }
    case Rule::NormalCrossing:
      need(0, 0);
      return {Rational(1), Rational(1)};
    case Rule::MorseLemma: {
      need(2, 0);
      Rational lo = p[0] / 2;
      if (p[0] == p[1]) return {lo, lo};
      return {lo, Rational(lo + (p[1] - p[0]) / 3)};
    }
    case Rule::LctLower:
      need(1, 0);
      return {Rational(1 / p[0]), inf};
    case Rule::MultiplicityUpper:
      need(2, 0);
      return {Rational(0), Rational(p[0] / p[1])};
    case Rule::WeightUpper:
      need(2, 0);
      if (p[1] == 0) return {Rational(0), inf};
      return {Rational(0), Rational(p[0] / p[1])};
    case Rule::SingDimLower:
      need(3, 0);
      if (p[1] < 0) return {inf, inf};
      return {Rational((p[0] - p[1]) / p[2]), inf};
    case Rule::ConeFormula: {
      need(2, 1);
      ExtRational cap = Rational(p[0] / p[1]);
      return {min(ch[0].lo, cap), min(ch[0].hi, cap)};
    }
    case Rule::ThomSebastiani: {
      need(0, SIZE_MAX);
      Interval s{Rational(0), Rational(0)};
      for (const auto& c : ch) {
        s.lo += c.lo;
        s.hi += c.hi;
      }
      return s;
    }
    case Rule::GlobalMin: {
      need(0, SIZE_MAX);
      if (ch.empty()) return {inf, inf};
      Interval s = ch[0];
      for (const auto& c : ch) {
        s.lo = min(s.lo, c.lo);
        s.hi = min(s.hi, c.hi);
      }
      return s;
    }
    case Rule::Intersect:
    case Rule::HyperplaneProbe: {
      need(0, SIZE_MAX);
      Interval s{Rational(0), inf};
      for (const auto& c : ch) {
        s.lo = max(s.lo, c.lo);
        s.hi = min(s.hi, c.hi);
      }
      if (s.hi < s.lo) throw std::logic_error("minexp: contradictory bounds");
      return s;
    }
  }
  throw std::invalid_argument("unknown rule");
}

inline DerivationTrace make_node(Rule rule, std::string note, std::vector<Rational> params,
                                 std::vector<DerivationTrace> children = {}) {
  std::vector<Interval> ch;
  for (const auto& c : children) ch.push_back({c.lo, c.hi});
  auto v = evaluate_rule(rule, params, ch);
  return DerivationTrace{rule, std::move(note), std::move(params), v.lo, v.hi, std::move(children)};
}

/// Re-executes a trace bottom-up; returns the recomputed interval and
/// throws std::logic_error if any stored node disagrees.
inline Interval replay(const DerivationTrace& t) {
  std::vector<Interval> ch;
  for (const auto& c : t.children) ch.push_back(replay(c));
  auto v = evaluate_rule(t.rule, t.params, ch);
  if (v.lo != t.lo || v.hi != t.hi)
    throw std::logic_error(std::string("trace replay mismatch at ") + rule_name(t.rule) + " " + t.note);
  return v;
}

struct MinExpBound {
  ExtRational lo, hi;
  DerivationTrace trace;
  bool exact() const { return lo == hi; }
  bool contains(const ExtRational& x) const { return lo <= x && x <= hi; }
};

inline MinExpBound to_bound(DerivationTrace t) {
  MinExpBound b{t.lo, t.hi, std::move(t)};
  return b;
}

namespace detail {

inline std::string var_list(std::span<const std::size_t> vars) {
  std::string s = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? ",x" : "x") + std::to_string(vars[i]);
  return s + "}";
}

inline Rational weight(std::span<const Rational> w, const Monomial& m) {
  Rational s = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (m[i] != 0) s += w[i] * m[i];
  return s;
}

inline Rational weight_of(const Polynomial& f, std::span<const Rational> w) {
  bool first = true;
  Rational best = 0;
  for (const auto& [m, c] : f.terms()) {
    Rational v = weight(w, m);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

// Smallest sum(w) over w >= 0 with w·e >= 1 on the support of f (f(0) = 0).
inline DerivationTrace newton_weight_node(const Polynomial& f, const std::string& note) {
  const std::size_t k = f.num_vars();
  lp::Problem p;
  p.objective.assign(k, Rational(-1));
  for (const auto& [m, c] : f.terms()) {
    std::vector<Rational> row(k);
    for (std::size_t i = 0; i < k; ++i) row[i] = m[i];
    p.add_row(std::move(row), lp::Sense::GreaterEq, Rational(1));
  }
  auto r = lp::solve(p);
  if (r.status != lp::Status::Optimal) throw std::logic_error("weight LP failed");
  Rational sum = 0;
  for (const auto& x : r.x) sum += x;
  return make_node(Rule::WeightUpper, note, {sum, weight_of(f, r.x)});
}

// Single monomial, in its own k variables, all exponents positive.
inline DerivationTrace monomial_node(const std::vector<int>& e, const std::string& note) {
  int top = *std::max_element(e.begin(), e.end());
  if (e.size() >= 2 && top == 1) return make_node(Rule::NormalCrossing, note, {});
  return make_node(Rule::MonomialPower, note, {Rational(top)});
}

// Connected block (k own variables) at the origin, not homogeneous.
inline DerivationTrace local_bound_rules(const Polynomial& h, const std::string& note) {
  const std::size_t k = h.num_vars();
  int ord = h.min_degree();
  if (ord == 2) {
    auto r = hessian_rank_at(h, Point::origin(k));
    auto morse = make_node(Rule::MorseLemma, note, {Rational(static_cast<long>(r)), Rational(static_cast<long>(k))});
    if (r == k) return morse;
    return make_node(Rule::Intersect, note,
                     {}, {std::move(morse), make_node(Rule::MultiplicityUpper, note, {Rational(static_cast<long>(k)), Rational(ord)}),
                          newton_weight_node(h, note)});
  }
  return make_node(Rule::Intersect, note, {},
                   {make_node(Rule::LctLower, note, {Rational(ord)}),
                    make_node(Rule::MultiplicityUpper, note, {Rational(static_cast<long>(k)), Rational(ord)}),
                    newton_weight_node(h, note)});
}

}  // namespace detail

/// Per-block data for a homogeneous polynomial split into disjoint-variable
/// blocks: the block's value at its cone vertex, the minimum over its other
/// singular points, and (when known) the vanishing sets attaining it.
struct BlockStrata {
  std::vector<std::size_t> vars;
  DerivationTrace origin;
  DerivationTrace nonorigin;
  std::optional<std::vector<std::uint64_t>> minimizing;  // ambient bitmasks
};

struct Strata {
  std::size_t num_vars = 0;
  int degree = 0;
  std::vector<BlockStrata> blocks;
  std::vector<std::size_t> free;
};

inline Strata homogeneous_strata(const Polynomial& F) {
  auto deg = F.homogeneous_degree();
  if (!deg || F.is_zero()) throw std::invalid_argument("expected a nonzero homogeneous polynomial");
  const std::size_t N = F.num_vars();
  Strata s{N, *deg, {}, {}};
  auto ts = ts_components(F);
  s.free = ts.unused;
  for (const auto& b : ts.blocks) {
    auto h = compress(b.poly, b.vars);
    const std::size_t k = b.vars.size();
    const std::string note = detail::var_list(b.vars);
    BlockStrata bs{b.vars, {}, {}, std::nullopt};
    auto bit = [&](std::size_t local) { return std::uint64_t{1} << b.vars[local]; };
    if (*deg == 1) {
      bs.origin = make_node(Rule::Smooth, note, {});
      bs.nonorigin = make_node(Rule::Smooth, note, {});
      bs.minimizing.emplace();
    } else if (h.size() == 1) {
      const auto& e = h.terms().begin()->first.exponents();
      bs.origin = detail::monomial_node(e, note);
      // proper nonempty subsets S of the variables: the local equation at a
      // point vanishing exactly on S is the sub-monomial over S
      if (k > 20) throw std::invalid_argument("monomial block too large");
      ExtRational best = ExtRational::infinity();
      std::vector<std::uint64_t> arg;
      std::vector<int> best_e;
      for (std::uint64_t S = 1; S + 1 < (std::uint64_t{1} << k); ++S) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < k; ++i)
          if (S >> i & 1) sub.push_back(e[i]);
        int top = *std::max_element(sub.begin(), sub.end());
        ExtRational v = (sub.size() == 1 && top == 1) ? ExtRational::infinity()
                        : top == 1                    ? ExtRational(Rational(1))
                                                      : ExtRational(Rational(1, top));
        std::uint64_t amb = 0;
        for (std::size_t i = 0; i < k; ++i)
          if (S >> i & 1) amb |= bit(i);
        if (v < best) {
          best = v;
          arg.clear();
          best_e = sub;
        }
        if (v == best && v.is_finite()) arg.push_back(amb);
      }
      bs.nonorigin = best.is_infinite() ? make_node(Rule::Smooth, note, {}) : detail::monomial_node(best_e, note);
      bs.minimizing = std::move(arg);
    } else if (k == 1) {
      throw std::logic_error("single-variable homogeneous block with several terms");
    } else if (*deg == 2) {
      auto r = hessian_rank_at(h, Point::origin(k));
      Rational rr(static_cast<long>(r));
      bs.origin = make_node(Rule::MorseLemma, note + " quadratic form", {rr, rr});
      if (r == k) {
        bs.nonorigin = make_node(Rule::Smooth, note, {});
        bs.minimizing.emplace();
      } else {
        // singular along the projectivized kernel, which need not be a coordinate subspace
        bs.nonorigin = make_node(Rule::MorseLemma, note + " quadratic form", {rr, rr});
      }
    } else {
      const Rational kk(static_cast<long>(k)), dd(*deg);
      bs.origin = make_node(Rule::Intersect, note, {},
                            {make_node(Rule::LctLower, note, {dd}), make_node(Rule::MultiplicityUpper, note, {kk, dd}),
                             detail::newton_weight_node(h, note)});
      bs.nonorigin = make_node(Rule::LctLower, note, {dd});
    }
    s.blocks.push_back(std::move(bs));
  }
  return s;
}

struct GlobalOptions {
  std::vector<Point> sing_points;  // projective points on X, used for upper bounds
  std::optional<int> sing_dim;     // dimension of Sing(X); -1 for smooth
};

MinExpBound minexp_local(const Polynomial& f, const Point& p);

namespace detail {

inline DerivationTrace global_node(const Polynomial& F, const GlobalOptions& opt) {
  auto s = homogeneous_strata(F);
  const std::string all = "X";
  std::vector<DerivationTrace> configs;
  auto origin_sum = [&](std::size_t skip) {
    std::vector<DerivationTrace> parts;
    for (std::size_t j = 0; j < s.blocks.size(); ++j) parts.push_back(j == skip ? s.blocks[j].nonorigin : s.blocks[j].origin);
    std::string note = skip == SIZE_MAX ? "free coordinates" : "points off the vertex of " + var_list(s.blocks[skip].vars);
    if (parts.size() == 1) return parts[0];
    return make_node(Rule::ThomSebastiani, note, {}, std::move(parts));
  };
  for (std::size_t b = 0; b < s.blocks.size(); ++b) configs.push_back(origin_sum(b));
  if (!s.free.empty()) configs.push_back(origin_sum(SIZE_MAX));
  for (const auto& p : opt.sing_points) {
    if (!p.projective || p.size() != F.num_vars()) throw std::invalid_argument("hint point must be projective in the ambient space");
    if (F.evaluate(p.coords) != 0) throw std::invalid_argument("hint point does not lie on X");
    configs.push_back(minexp_local(F, p).trace);
  }
  auto node = make_node(Rule::GlobalMin, all, {}, std::move(configs));
  if (opt.sing_dim) {
    const int n = static_cast<int>(F.num_vars()) - 1;
    auto sd = make_node(Rule::SingDimLower, all, {Rational(n), Rational(*opt.sing_dim), Rational(s.degree)});
    node = make_node(Rule::Intersect, all, {}, {std::move(node), std::move(sd)});
  }
  return node;
}

inline DerivationTrace cone_node(const Polynomial& F, const GlobalOptions& opt) {
  auto d = F.homogeneous_degree();
  if (!d) throw std::invalid_argument("minexp_cone: non-homogeneous input");
  if (*d < 2) throw std::invalid_argument("minexp_cone: degree below 2");
  return make_node(Rule::ConeFormula, "cone vertex",
                   {Rational(static_cast<long>(F.num_vars())), Rational(*d)}, {global_node(F, opt)});
}

inline DerivationTrace local_at_origin(const Polynomial& g) {
  if (g.min_degree() <= 1) return make_node(Rule::Smooth, "origin", {});
  auto ts = ts_components(g);
  std::vector<DerivationTrace> parts;
  for (const auto& b : ts.blocks) {
    auto h = compress(b.poly, b.vars);
    const std::string note = var_list(b.vars);
    if (h.size() == 1) {
      parts.push_back(monomial_node(h.terms().begin()->first.exponents(), note));
    } else if (b.vars.size() == 1) {
      parts.push_back(make_node(Rule::MonomialPower, note, {Rational(h.min_degree())}));
    } else if (h.is_homogeneous()) {
      parts.push_back(cone_node(h, {}));
    } else {
      parts.push_back(local_bound_rules(h, note));
    }
  }
  if (parts.size() == 1) return parts[0];
  return make_node(Rule::ThomSebastiani, "origin", {}, std::move(parts));
}

}  // namespace detail

/// Minimal exponent of f at p. Projective points of homogeneous f are
/// evaluated in the chart of their first nonzero coordinate.
inline MinExpBound minexp_local(const Polynomial& f, const Point& p) {
  if (p.size() != f.num_vars()) throw std::invalid_argument("point dimension mismatch");
  Polynomial g = f;
  std::vector<Rational> at = p.coords;
  if (p.projective) {
    std::size_t i = 0;
    while (p.coords[i] == 0) ++i;
    auto ch = dehomogenize(f, i);
    g = ch.poly;
    at.clear();
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) at.push_back(p.coords[j] / p.coords[i]);
  }
  if (g.evaluate(at) != 0) throw std::invalid_argument("minexp_local: f does not vanish at the point");
  return to_bound(detail::local_at_origin(translate(g, at)));
}

inline MinExpBound minexp_global_projective(const Polynomial& F, const GlobalOptions& opt = {}) {
  return to_bound(detail::global_node(F, opt));
}

/// Value at the vertex of the affine cone over X.
inline MinExpBound minexp_cone(const Polynomial& F, const GlobalOptions& opt = {}) {
  return to_bound(detail::cone_node(F, opt));
}

/// Upper bound sum(w)/wt_w(f) at a singular point p, w >= 0 nonzero.
inline ExtRational weight_upper_bound(const Polynomial& f, std::span<const Rational> w, const Point& p) {
  if (w.size() != f.num_vars()) throw std::invalid_argument("weight dimension mismatch");
  bool nonzero = false;
  for (const auto& x : w) {
    if (x < 0) throw std::invalid_argument("weight_upper_bound: negative weight");
    nonzero = nonzero || x != 0;
  }
  if (!nonzero) throw std::invalid_argument("weight_upper_bound: zero weight");
  if (!jacobian_at(f, p).singular()) throw std::invalid_argument("weight_upper_bound: f is not singular at the point");
  auto g = translate(f, p.coords);
  Rational wt = detail::weight_of(g, w), sum = 0;
  for (const auto& x : w) sum += x;
  if (wt == 0) return ExtRational::infinity();
  return Rational(sum / wt);
}

enum class Target { Global, ConeVertex };

/// Bounds that need no stratification. The multiplicity bound (n+1)/d
/// belongs to the cone vertex; for X itself a singular point p of
/// multiplicity r in the n-dimensional chart gives n/r.
inline MinExpBound structural_bounds(const Polynomial& F, std::optional<int> sing_dim,
                                     const std::vector<Point>& sing_points = {}, Target target = Target::Global) {
  auto d = F.homogeneous_degree();
  if (!d || *d < 2) throw std::invalid_argument("structural_bounds: homogeneous input of degree >= 2 expected");
  const long N = static_cast<long>(F.num_vars());
  std::vector<DerivationTrace> parts;
  parts.push_back(make_node(Rule::LctLower, "X", {Rational(*d)}));
  if (sing_dim) parts.push_back(make_node(Rule::SingDimLower, "X", {Rational(N - 1), Rational(*sing_dim), Rational(*d)}));
  for (const auto& p : sing_points) {
    if (!p.projective || p.size() != F.num_vars()) throw std::invalid_argument("expected a projective point");
    std::size_t i = 0;
    while (p.coords[i] == 0) ++i;
    auto ch = dehomogenize(F, i);
    std::vector<Rational> at;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) at.push_back(p.coords[j] / p.coords[i]);
    int mult = multiplicity_at(ch.poly, Point::affine(at));
    if (mult >= 2) parts.push_back(make_node(Rule::MultiplicityUpper, "hinted point", {Rational(N - 1), Rational(mult)}));
  }
  auto node = make_node(Rule::Intersect, "X", {}, std::move(parts));
  if (target == Target::ConeVertex) node = make_node(Rule::ConeFormula, "cone vertex", {Rational(N), Rational(*d)}, {std::move(node)});
  return to_bound(std::move(node));
}

enum class ProbeStatus { Agree, Consistent, NonGeneric, Violation };

inline const char* probe_status_name(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::Agree: return "agree";
    case ProbeStatus::Consistent: return "consistent";
    case ProbeStatus::NonGeneric: return "nongeneric";
    case ProbeStatus::Violation: return "violation";
  }
  return "?";
}

struct ProbeResult {
  std::string hyperplane;
  std::optional<MinExpBound> restricted;  // empty when F vanishes on H
  MinExpBound expected;                   // min{cone value of F, n/d}
  ProbeStatus status = ProbeStatus::Consistent;
};

struct ProbeReport {
  std::vector<ProbeResult> probes;
  bool violated() const {
    return std::any_of(probes.begin(), probes.end(), [](const auto& p) { return p.status == ProbeStatus::Violation; });
  }
};

/// F restricted to {x_j = sum_i a_i x_i}, as a polynomial in the other variables.
inline Polynomial restrict_to_hyperplane(const Polynomial& F, std::size_t j, std::span<const Rational> a) {
  const std::size_t N = F.num_vars();
  std::vector<Polynomial> forms;
  for (std::size_t i = 0; i < N; ++i) {
    if (i != j) {
      forms.push_back(Polynomial::variable(N, i));
      continue;
    }
    Polynomial form(N);
    for (std::size_t k = 0; k < N; ++k)
      if (k != j) form.add_term(Monomial::variable(N, k), a[k]);
    forms.push_back(std::move(form));
  }
  auto g = hyperstab::detail::substitute_forms(F, forms, N);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < N; ++i)
    if (i != j) keep.push_back(i);
  return compress(g, keep);
}

/// Compares the cone value of F|_H with min{cone value of F, n/d} on one
/// structured hyperplane x_j = c·x_k and one dense random hyperplane. The
/// restriction can never exceed the right side, so lo > hi is a bug.
inline ProbeReport hyperplane_restriction_probe(const Polynomial& F, std::uint64_t seed) {
  auto d = F.homogeneous_degree();
  if (!d || *d < 2) throw std::invalid_argument("probe: homogeneous input of degree >= 2 expected");
  const std::size_t N = F.num_vars();
  if (N < 2) throw std::invalid_argument("probe: needs at least two variables");
  std::mt19937_64 gen(seed);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); };
  auto base = detail::cone_node(F, {});
  ProbeReport report;
  for (int kind = 0; kind < 2; ++kind) {
    std::size_t j = static_cast<std::size_t>(pick(0, static_cast<long>(N) - 1));
    std::vector<Rational> a(N, Rational(0));
    std::string desc = "x" + std::to_string(j) + " = ";
    if (kind == 0) {
      std::size_t k = static_cast<std::size_t>(pick(0, static_cast<long>(N) - 2));
      if (k >= j) ++k;
      long num = pick(1, 5) * (pick(0, 1) ? 1 : -1);
      a[k] = make_rational(num, pick(1, 3));
      desc += to_string(a[k]) + "*x" + std::to_string(k);
    } else {
      bool first = true;
      for (std::size_t i = 0; i < N; ++i) {
        if (i == j) continue;
        a[i] = make_rational(pick(-4, 4), pick(1, 3));
        desc += (first ? "" : " + ") + std::string("(") + to_string(a[i]) + ")*x" + std::to_string(i);
        first = false;
      }
    }
    ProbeResult r{desc, std::nullopt,
                  to_bound(make_node(Rule::ConeFormula, "hyperplane cap",
                                     {Rational(static_cast<long>(N - 1)), Rational(*d)}, {base})),
                  ProbeStatus::NonGeneric};
    auto g = restrict_to_hyperplane(F, j, a);
    if (!g.is_zero()) {
      auto lhs = to_bound(make_node(Rule::HyperplaneProbe, desc, {}, {detail::cone_node(g, {})}));
      if (lhs.lo > r.expected.hi)
        r.status = ProbeStatus::Violation;
      else if (lhs.exact() && r.expected.exact() && lhs.lo == r.expected.lo)
        r.status = ProbeStatus::Agree;
      else if (lhs.hi < r.expected.lo)
        r.status = ProbeStatus::NonGeneric;
      else
        r.status = ProbeStatus::Consistent;
      r.restricted = std::move(lhs);
    }
    report.probes.push_back(std::move(r));
  }
  return report;
}

/// Levels read off a bound. nullopt in a level means "no such m"; the
/// `unbounded` flag marks a smooth input where every level holds.
struct SingularityClass {
  bool unbounded = false;
  std::optional<long> m_du_bois;
  std::optional<long> m_rational;
  std::optional<long> liminal_level;
  std::optional<bool> ade;
  std::optional<bool> terminal;
  std::optional<long> mld_lower;
};

/// e is the dimension of the hypersurface germ.
inline SingularityClass classify(const MinExpBound& b, int e) {
  SingularityClass c;
  if (b.lo.is_infinite()) {
    c.unbounded = true;
    c.ade = true;
    c.terminal = true;
    return c;
  }
  const Rational& lo = b.lo.value();
  auto floor_l = [](const Rational& r) { return floor_of(r).get_si(); };
  auto ceil_l = [](const Rational& r) { return -floor_of(-r).get_si(); };
  if (lo >= 1) c.m_du_bois = floor_l(lo) - 1;
  if (lo > 1) c.m_rational = ceil_l(lo) - 2;
  if (b.exact() && is_integral(lo) && lo >= 1) c.liminal_level = lo.get_num().get_si() - 1;
  Rational half_e(e, 2);
  if (lo > half_e)
    c.ade = true;
  else if (b.hi.is_finite() && b.hi.value() <= half_e)
    c.ade = false;
  if (lo > Rational(3, 2)) c.terminal = true;
  if (lo > 1) c.mld_lower = ceil_l(2 * (lo - 1));  // k + 1 for the largest k with lo > 1 + k/2
  return c;
}

/// {x : local value = global minimum} as a union of coordinate subspaces.
/// Requires an exact finite global value and coordinate strata in every
/// block that can attain it.
inline Arrangement liminal_locus_structured(const Polynomial& F) {
  auto s = homogeneous_strata(F);
  if (s.num_vars > 64) throw std::invalid_argument("liminal locus: too many variables");
  auto g = minexp_global_projective(F);
  Arrangement out{s.num_vars, {}};
  if (g.lo.is_infinite()) return out;
  if (!g.exact()) throw std::invalid_argument("liminal locus: global value is not exact");
  const ExtRational target = g.lo;
  // each block sits either at its vertex or on one of its minimizing strata
  std::vector<std::uint64_t> found;
  const std::size_t nb = s.blocks.size();
  std::function<void(std::size_t, ExtRational, std::uint64_t, bool)> walk =
      [&](std::size_t i, ExtRational lo, std::uint64_t vanish, bool moved) {
        if (target < lo) return;
        if (i == nb) {
          if (!moved && s.free.empty()) return;
          if (lo != target) return;
          found.push_back(vanish);
          return;
        }
        const auto& b = s.blocks[i];
        std::uint64_t bits = 0;
        for (auto v : b.vars) bits |= std::uint64_t{1} << v;
        if (b.origin.lo <= target && b.origin.lo != b.origin.hi)
          throw std::invalid_argument("liminal locus: block " + b.origin.note + " is not resolved");
        walk(i + 1, lo + b.origin.lo, vanish | bits, moved);
        if (b.nonorigin.lo.is_infinite() || target < lo + b.nonorigin.lo) return;
        if (b.nonorigin.lo != b.nonorigin.hi || !b.minimizing)
          throw std::invalid_argument("liminal locus: strata of " + b.origin.note + " are not coordinate subspaces");
        for (auto S : *b.minimizing) walk(i + 1, lo + b.nonorigin.lo, vanish | S, true);
      };
  walk(0, ExtRational(Rational(0)), 0, false);
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  for (auto v : found) {
    bool minimal = true;
    for (auto u : found)
      if (u != v && (u & v) == u) minimal = false;
    if (minimal && out.cell_dim(v) >= 0) out.cells.push_back(v);
  }
  out.normalize();
  return out;
}

}  // namespace hyperstab::minexp

#endif  // HYPERSTAB_MINEXP_HPP
