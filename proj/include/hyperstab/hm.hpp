#ifndef HYPERSTAB_HM_HPP
#define HYPERSTAB_HM_HPP

#include "hyperstab/minexp.hpp"
#include "hyperstab/newton.hpp"
#include "hyperstab/polynomial.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hyperstab::hm {

struct WeightSystem {
  std::vector<Rational> w;
  bool nontrivial() const {
    for (const auto& x : w)
      if (x != w.front()) return true;
    return false;
  }
  friend bool operator==(const WeightSystem&, const WeightSystem&) = default;
};

/// min over the support of f of w·e.
inline Rational weight_of(const Polynomial& f, const WeightSystem& w) {
  if (f.is_zero()) throw std::invalid_argument("weight_of: zero polynomial");
  if (w.w.size() != f.num_vars()) throw std::invalid_argument("weight_of: dimension mismatch");
  return minexp::detail::weight_of(f, w.w);
}

/// wt_w(f) - d/(n+1) * sum(w).
inline Rational hm_margin(const Polynomial& f, const WeightSystem& w) {
  auto d = f.homogeneous_degree();
  if (!d) throw std::invalid_argument("hm_margin: non-homogeneous input");
  Rational sum = 0;
  for (const auto& x : w.w) sum += x;
  return weight_of(f, w) - Rational(*d) * sum / static_cast<long>(f.num_vars());
}

enum class Strictness { SemistabilityViolating, StabilityViolating };

inline const char* strictness_name(Strictness s) {
  return s == Strictness::SemistabilityViolating ? "semistability-violating" : "stability-violating";
}

struct DestabilizerCertificate {
  LinearChange g;
  WeightSystem w;
  Rational margin;
  Strictness strictness;
  std::string source;  // which search step produced it
};

inline std::optional<Strictness> strictness_of(const Rational& margin) {
  if (margin > 0) return Strictness::SemistabilityViolating;
  if (margin == 0) return Strictness::StabilityViolating;
  return std::nullopt;
}

/// Recomputes f∘g and the margin from scratch.
inline bool verify_destabilizer(const Polynomial& f, const DestabilizerCertificate& c) {
  if (c.g.dim() != f.num_vars() || c.w.w.size() != f.num_vars()) throw std::invalid_argument("certificate dimension mismatch");
  if (c.g.determinant() == 0) throw std::invalid_argument("singular linear change");
  if (!c.w.nontrivial()) return false;
  auto fg = substitute_linear(f, c.g);
  Rational m = hm_margin(fg, c.w);
  auto s = strictness_of(m);
  return m == c.margin && s && *s == c.strictness;
}

/// Certificate for (g, w) if its margin is non-negative and w nontrivial.
inline std::optional<DestabilizerCertificate> make_certificate(const Polynomial& f, const LinearChange& g, WeightSystem w,
                                                               std::string source) {
  if (!w.nontrivial()) return std::nullopt;
  auto fg = substitute_linear(f, g);
  Rational m = hm_margin(fg, w);
  auto s = strictness_of(m);
  if (!s) return std::nullopt;
  return DestabilizerCertificate{g, std::move(w), m, *s, std::move(source)};
}

struct TorusSemistable {
  newton::Inside lambdas;
};
struct TorusUnstable {
  WeightSystem w;
  Rational margin;
};
using TorusVerdict = std::variant<TorusSemistable, TorusUnstable>;

inline std::vector<Rational> barycenter(const Polynomial& f) {
  auto d = f.homogeneous_degree();
  if (!d) throw std::invalid_argument("torus_verdict: non-homogeneous input");
  return std::vector<Rational>(f.num_vars(), make_rational(*d, static_cast<long>(f.num_vars())));
}

/// Hilbert–Mumford test restricted to the diagonal torus in the given coordinates.
inline TorusVerdict torus_verdict(const Polynomial& f) {
  auto target = barycenter(f);
  auto cloud = newton::newton_points(f);
  auto cert = newton::barycenter_membership(cloud, target);
  if (auto* in = std::get_if<newton::Inside>(&cert)) return TorusSemistable{*in};
  WeightSystem w{std::get<newton::Separated>(cert).w};
  Rational m = hm_margin(f, w);
  return TorusUnstable{std::move(w), m};
}

namespace detail {

// Best sum-zero weight with w_i = 1 (nontrivial by construction); the
// optimal value is the largest margin such weights reach.
inline std::optional<WeightSystem> zero_margin_weight(const Polynomial& f, std::size_t i) {
  const std::size_t N = f.num_vars();
  // variables p (N), q (N), t+, t-
  const std::size_t nv = 2 * N + 2;
  lp::Problem pr;
  pr.objective.assign(nv, Rational(0));
  pr.objective[2 * N] = 1;
  pr.objective[2 * N + 1] = -1;
  for (const auto& [m, c] : f.terms()) {
    std::vector<Rational> row(nv, Rational(0));
    for (std::size_t j = 0; j < N; ++j) {
      row[j] = -m[j];
      row[N + j] = m[j];
    }
    row[2 * N] = 1;
    row[2 * N + 1] = -1;
    pr.add_row(std::move(row), lp::Sense::LessEq, Rational(0));
  }
  std::vector<Rational> sum(nv, Rational(0)), unit(nv, Rational(0)), cap(nv, Rational(0));
  for (std::size_t j = 0; j < N; ++j) {
    sum[j] = 1;
    sum[N + j] = -1;
    cap[j] = cap[N + j] = 1;
  }
  unit[i] = 1;
  unit[N + i] = -1;
  pr.add_row(std::move(sum), lp::Sense::Equal, Rational(0));
  pr.add_row(std::move(unit), lp::Sense::Equal, Rational(1));
  pr.add_row(std::move(cap), lp::Sense::LessEq, Rational(static_cast<long>(4 * N)));
  auto r = lp::solve(pr);
  if (r.status != lp::Status::Optimal || r.value < 0) return std::nullopt;
  std::vector<Rational> w(N);
  for (std::size_t j = 0; j < N; ++j) w[j] = r.x[j] - r.x[N + j];
  return WeightSystem{primitive_integer_vector(w)};
}

// LinearChange whose last column is p, so f∘g has the point [0:...:0:1]
// where f has p.
inline LinearChange move_point_to_last(const Point& p) {
  const std::size_t N = p.size();
  std::size_t pivot = 0;
  while (p.coords[pivot] == 0) ++pivot;
  Matrix m(N, std::vector<Rational>(N, Rational(0)));
  std::size_t col = 0;
  for (std::size_t j = 0; j < N; ++j) {
    if (j == pivot) continue;
    m[j][col++] = 1;
  }
  for (std::size_t i = 0; i < N; ++i) m[i][N - 1] = p.coords[i];
  return LinearChange(m);
}

// Permutation sending the listed coordinates to the last positions:
// (f∘g) uses x_{N-|last|..N-1} where f used `last`.
inline LinearChange move_coords_to_end(std::size_t N, const std::vector<std::size_t>& last) {
  std::vector<bool> is_last(N, false);
  for (auto v : last) {
    if (v >= N) throw std::invalid_argument("subspace coordinate out of range");
    is_last[v] = true;
  }
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < N; ++j)
    if (!is_last[j]) order.push_back(j);
  for (auto v : last) order.push_back(v);
  // x_{order[k]} := x_k, i.e. g has a 1 at (order[k], k)
  Matrix m(N, std::vector<Rational>(N, Rational(0)));
  for (std::size_t k = 0; k < N; ++k) m[order[k]][k] = 1;
  return LinearChange(m);
}

}  // namespace detail

struct SearchHints {
  std::vector<Point> points;                       // projective singular points
  std::vector<std::vector<std::size_t>> subspaces;  // vanishing coordinates of linear subspaces
};

struct SearchResult {
  std::optional<DestabilizerCertificate> certificate;
  std::vector<std::string> log;
  int steps = 0;
};

struct CubicDiagnostic {
  std::string kind;
  std::string detail;
  std::optional<DestabilizerCertificate> certificate;
  std::optional<std::size_t> hessian_rank;
  bool flagged = false;
};

namespace detail {

// Template weight with sum zero. Leading block weight a, trailing groups
// weight b_j + eps, eps fixed by sum(w) = 0.
inline WeightSystem template_weight(std::size_t N, const Rational& a, const std::vector<std::pair<std::size_t, Rational>>& tail) {
  std::size_t tail_size = 0;
  Rational base = 0;
  for (const auto& [k, b] : tail) {
    tail_size += k;
    base += b * static_cast<long>(k);
  }
  const std::size_t lead = N - tail_size;
  // lead*a + base + tail_size*eps = 0
  Rational eps = (-(a * static_cast<long>(lead)) - base) / static_cast<long>(tail_size);
  std::vector<Rational> w;
  for (std::size_t i = 0; i < lead; ++i) w.push_back(a);
  for (const auto& [k, b] : tail)
    for (std::size_t i = 0; i < k; ++i) w.push_back(b + eps);
  return WeightSystem{primitive_integer_vector(w)};
}

template <class F>
inline void for_each_subset(std::size_t N, std::size_t k, F&& fn) {
  std::vector<std::size_t> idx(k);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) -> bool {
    if (pos == k) return fn(idx);
    for (std::size_t v = start; v < N; ++v) {
      idx[pos] = v;
      if (rec(pos + 1, v + 1)) return true;
    }
    return false;
  };
  rec(0, 0);
}

// Scans f (in the coordinates of g0) for the cubic patterns. Each
// hit is aligned by a permutation and tested with the matching template.
inline void scan_cubic_patterns(const Polynomial& f, const LinearChange& g0, const std::string& where,
                                std::vector<CubicDiagnostic>& out) {
  const std::size_t N = f.num_vars();
  auto fg0 = substitute_linear(f, g0);
  auto emit = [&](const std::string& kind, const std::vector<std::size_t>& tail, const WeightSystem& w) {
    auto perm = move_coords_to_end(N, tail);
    auto g = g0.then(perm);
    std::string coords;
    for (auto v : tail) coords += (coords.empty() ? "x" : ",x") + std::to_string(v);
    auto cert = make_certificate(f, g, w, kind + where);
    if (!cert) return false;
    out.push_back(CubicDiagnostic{kind, "pattern in (" + coords + ")" + where, std::move(cert), std::nullopt, false});
    return true;
  };
  // Smallest k first: the template margin only shrinks as k grows. Large
  // ambient spaces are scanned up to k = 4.
  const std::size_t kmax = N <= 12 ? N - 1 : 4;
  auto scan = [&](const std::string& kind, int power, const Rational& lead) {
    for (std::size_t k = 1; k <= kmax; ++k) {
      bool hit = false;
      for_each_subset(N, k, [&](const std::vector<std::size_t>& t) {
        for (const auto& [m, c] : fg0.terms()) {
          int deg = 0;
          for (auto v : t) deg += m[v];
          if (deg < power) return false;
        }
        hit = true;
        emit(kind, t, template_weight(N, lead, {{k, Rational(0)}}));
        return true;
      });
      if (hit) return;
    }
  };
  // f in (x_t : t in T): contains the plane {x_T = 0}
  scan("contains-plane", 1, Rational(-1));
  // f in (x_t : t in T)^2: singular along {x_T = 0}
  scan("singular-along-plane", 2, Rational(-1));
  // f = c*x_k*g + h with h in (three coordinates)^2, x_k one of them
  if (N >= 4)
    for_each_subset(N, 3, [&](const std::vector<std::size_t>& t) {
      for (std::size_t special = 0; special < 3; ++special) {
        bool ok = true;
        for (const auto& [m, c] : fg0.terms()) {
          int deg = m[t[0]] + m[t[1]] + m[t[2]];
          if (deg >= 2) continue;
          if (deg == 1 && m[t[special]] == 1) continue;
          ok = false;
          break;
        }
        if (!ok) continue;
        std::vector<std::size_t> tail;
        for (std::size_t j = 0; j < 3; ++j)
          if (j != special) tail.push_back(t[j]);
        tail.push_back(t[special]);
        if (emit("secant-plane", tail, template_weight(N, Rational(-1), {{2, Rational(1, 2)}, {1, Rational(2)}})))
          return true;
      }
      return false;
    });
}

}  // namespace detail

/// Syntactic obstruction patterns for cubics, in the given coordinates and
/// after aligning each hint. Only patterns whose template weight has
/// non-negative margin are reported, together with Hessian ranks at hinted
/// points (flagged when the rank is 3, n >= 6 and the local value is < 7/4).
inline std::vector<CubicDiagnostic> cubic_obstructions(const Polynomial& f, const SearchHints& hints = {}) {
  if (f.homogeneous_degree() != 3) throw std::invalid_argument("cubic_obstructions: cubic input expected");
  const std::size_t N = f.num_vars();
  std::vector<CubicDiagnostic> out;
  detail::scan_cubic_patterns(f, LinearChange::identity(N), "", out);
  for (std::size_t h = 0; h < hints.subspaces.size(); ++h) {
    auto g = detail::move_coords_to_end(N, hints.subspaces[h]);
    detail::scan_cubic_patterns(f, g, " after subspace hint " + std::to_string(h), out);
  }
  for (std::size_t h = 0; h < hints.points.size(); ++h) {
    const auto& p = hints.points[h];
    if (!p.projective || p.size() != N) throw std::invalid_argument("hint point must be projective");
    auto g = detail::move_point_to_last(p);
    detail::scan_cubic_patterns(f, g, " after point hint " + std::to_string(h), out);
    auto chart = dehomogenize(substitute_linear(f, g), N - 1).poly;
    auto o = Point::origin(N - 1);
    if (!jacobian_at(chart, o).singular()) continue;
    auto rank = hessian_rank_at(chart, o);
    auto local = minexp::minexp_local(chart, o);
    bool flag = rank == 3 && N - 1 >= 6 && local.hi < ExtRational(Rational(7, 4));
    out.push_back(CubicDiagnostic{"hessian-rank", "point hint " + std::to_string(h) + ": rank " + std::to_string(rank),
                                  std::nullopt, rank, flag});
  }
  // keep the first certificate per pattern kind
  std::vector<CubicDiagnostic> kept;
  for (auto& d : out) {
    bool seen = false;
    if (d.certificate)
      for (const auto& k : kept) seen = seen || (k.certificate && k.kind == d.kind);
    if (!seen) kept.push_back(std::move(d));
  }
  return kept;
}

/// Heuristic search for a (g, w) with non-negative margin. Order: torus LP
/// in the given coordinates, torus LP after moving each hint point to
/// [0:...:0:1], after moving each hint subspace to the last coordinates,
/// then (cubics) the obstruction templates. A semistability-violating
/// certificate ends the search; the first stability-violating one is kept
/// as a fallback. One LP-backed attempt costs one unit of budget.
inline SearchResult destabilizer_search(const Polynomial& f, const SearchHints& hints = {}, int budget = 64) {
  if (!f.is_homogeneous()) throw std::invalid_argument("destabilizer_search: non-homogeneous input");
  const std::size_t N = f.num_vars();
  SearchResult res;
  std::optional<DestabilizerCertificate> fallback;
  auto spend = [&]() { return res.steps < budget ? (++res.steps, true) : false; };
  auto accept = [&](DestabilizerCertificate c) {
    if (!verify_destabilizer(f, c)) throw std::logic_error("destabilizer certificate failed verification");
    res.log.push_back(c.source + ": margin " + to_string(c.margin) + " (" + strictness_name(c.strictness) + ")");
    if (c.strictness == Strictness::SemistabilityViolating) {
      res.certificate = std::move(c);
      return true;
    }
    if (!fallback) fallback = std::move(c);
    return false;
  };
  auto torus_in = [&](const LinearChange& g, const std::string& label) {
    if (!spend()) return false;
    auto fg = substitute_linear(f, g);
    auto target = barycenter(fg);
    auto cloud = newton::newton_points(fg);
    auto cert = newton::barycenter_membership(cloud, target);
    if (std::holds_alternative<newton::Separated>(cert)) {
      auto best = newton::separating_weight_maximal(cloud, target);
      auto c = make_certificate(f, g, WeightSystem{best.w}, "torus LP" + label);
      return c && accept(std::move(*c));
    }
    res.log.push_back("torus LP" + label + ": barycenter inside the Newton polytope");
    if (fallback) return false;
    for (std::size_t i = 0; i < N; ++i) {
      auto w = detail::zero_margin_weight(fg, i);
      if (!w) continue;
      auto c = make_certificate(f, g, *w, "boundary weight" + label);
      if (c) return accept(std::move(*c));
    }
    return false;
  };
  if (torus_in(LinearChange::identity(N), "")) return res;
  for (std::size_t h = 0; h < hints.points.size(); ++h) {
    const auto& p = hints.points[h];
    if (!p.projective || p.size() != N) throw std::invalid_argument("hint point must be projective");
    if (torus_in(detail::move_point_to_last(p), " after point hint " + std::to_string(h))) return res;
  }
  for (std::size_t h = 0; h < hints.subspaces.size(); ++h)
    if (torus_in(detail::move_coords_to_end(N, hints.subspaces[h]), " after subspace hint " + std::to_string(h))) return res;
  if (f.homogeneous_degree() == 3 && N >= 3 && spend()) {
    for (auto& d : cubic_obstructions(f, hints)) {
      if (!d.certificate) {
        res.log.push_back("diagnostic " + d.kind + ": " + d.detail + (d.flagged ? " (flagged)" : ""));
        continue;
      }
      if (accept(std::move(*d.certificate))) return res;
    }
  }
  if (res.steps >= budget) res.log.push_back("budget exhausted");
  res.certificate = std::move(fallback);
  return res;
}

struct Stable {
  ExtRational alpha_lower;
};
struct Semistable {
  Rational alpha_exact;
};
struct NotStable {
  DestabilizerCertificate certificate;
};
struct Unstable {
  DestabilizerCertificate certificate;
};
struct Unknown {
  minexp::MinExpBound alpha_bound;
  std::vector<std::string> search_log;
};

struct StabilityVerdict {
  std::variant<Stable, Semistable, NotStable, Unstable, Unknown> value;
  // cubics judged (semi)stable: the lower bound max{4/3, (n+1)/9}, and
  // for n >= 6 the bound 5/3 with terminal singularities
  std::optional<Rational> cubic_alpha_lower;
  bool cubic_terminal = false;

  const char* name() const {
    static constexpr const char* names[] = {"Stable", "Semistable", "NotStable", "Unstable", "Unknown"};
    return names[value.index()];
  }
};

/// Stable/Semistable come only from the minimal exponent bound against
/// (n+1)/d; Unstable/NotStable only from a verified certificate.
inline StabilityVerdict stability_verdict(const Polynomial& f, const minexp::MinExpBound& bound, int budget = 64,
                                          const SearchHints& hints = {}) {
  auto d = f.homogeneous_degree();
  if (!d) throw std::invalid_argument("stability_verdict: non-homogeneous input");
  if (*d < 3) throw std::invalid_argument("stability_verdict: degree below 3");
  const long N = static_cast<long>(f.num_vars());
  const ExtRational threshold = make_rational(N, *d);
  StabilityVerdict v;
  if (threshold < bound.lo) {
    v.value = Stable{bound.lo};
  } else if (bound.exact() && bound.lo == threshold) {
    v.value = Semistable{bound.lo.value()};
  } else {
    auto s = destabilizer_search(f, hints, budget);
    if (s.certificate && s.certificate->strictness == Strictness::SemistabilityViolating)
      v.value = Unstable{std::move(*s.certificate)};
    else if (s.certificate)
      v.value = NotStable{std::move(*s.certificate)};
    else
      v.value = Unknown{bound, std::move(s.log)};
  }
  if (*d == 3 && v.value.index() <= 1) {
    const long n = N - 1;
    Rational b = make_rational(n + 1, 9);
    v.cubic_alpha_lower = b > Rational(4, 3) ? b : Rational(4, 3);
    if (n >= 6) {
      v.cubic_alpha_lower = max(ExtRational(*v.cubic_alpha_lower), ExtRational(Rational(5, 3))).value();
      v.cubic_terminal = true;
    }
  }
  return v;
}

}  // namespace hyperstab::hm

#endif  // HYPERSTAB_HM_HPP
