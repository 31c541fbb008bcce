#ifndef HYPERSTAB_ANALYSIS_HPP
#define HYPERSTAB_ANALYSIS_HPP

#include "hyperstab/hm.hpp"
#include "hyperstab/hodge.hpp"
#include "hyperstab/minexp.hpp"
#include "hyperstab/parser.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperstab::analysis {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// A certificate or trace failed its own verifier.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Hints {
  std::vector<Point> points;
  std::vector<std::vector<std::size_t>> subspaces;
  std::optional<int> sing_dim;
};

struct Request {
  std::string text;
  std::size_t num_vars = 0;
  bool minexp = true;
  bool git = true;
  bool hodge = true;
  bool degeneration = true;
  Hints hints;
  std::uint64_t seed = 0;
  int budget = 64;
  bool trace = false;
};

/// "0,0,1" -> projective point.
inline Point parse_point(const std::string& text, std::size_t num_vars) {
  std::vector<Rational> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) c.push_back(parse_rational(item));
  if (c.size() != num_vars) throw std::invalid_argument("point '" + text + "' needs " + std::to_string(num_vars) + " coordinates");
  return Point::proj(std::move(c));
}

/// "x5,x6" -> {5, 6}.
inline std::vector<std::size_t> parse_subspace(const std::string& text, std::size_t num_vars) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() < 2 || item[0] != 'x' || item.find_first_not_of("0123456789", 1) != std::string::npos)
      throw std::invalid_argument("bad coordinate '" + item + "' in subspace hint");
    auto i = std::stoul(item.substr(1));
    if (i >= num_vars) throw std::invalid_argument("coordinate " + item + " out of range");
    out.push_back(i);
  }
  if (out.empty()) throw std::invalid_argument("empty subspace hint");
  return out;
}

/// {"points": [["0","0","1"], ...], "subspaces": [["x5","x6"], ...], "sing_dim": 1}
inline Hints parse_hints_json(const json& j, std::size_t num_vars) {
  Hints h;
  for (const auto& p : j.value("points", json::array())) {
    std::string joined;
    for (const auto& c : p) joined += (joined.empty() ? "" : ",") + (c.is_string() ? c.get<std::string>() : c.dump());
    h.points.push_back(parse_point(joined, num_vars));
  }
  for (const auto& s : j.value("subspaces", json::array())) {
    std::string joined;
    for (const auto& c : s) joined += (joined.empty() ? "" : ",") + c.get<std::string>();
    h.subspaces.push_back(parse_subspace(joined, num_vars));
  }
  if (j.contains("sing_dim")) h.sing_dim = j.at("sing_dim").get<int>();
  return h;
}

inline json to_json(const ExtRational& e) { return to_string(e); }

inline json to_json(const minexp::DerivationTrace& t) {
  json params = json::array();
  for (const auto& p : t.params) params.push_back(to_string(p));
  json children = json::array();
  for (const auto& c : t.children) children.push_back(to_json(c));
  return {{"rule", minexp::rule_name(t.rule)}, {"note", t.note}, {"params", params},
          {"lo", to_json(t.lo)}, {"hi", to_json(t.hi)}, {"children", children}};
}

inline json to_json(const minexp::MinExpBound& b, bool trace) {
  json j = {{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}, {"exact", b.exact()}};
  if (trace) j["trace"] = to_json(b.trace);
  return j;
}

inline json to_json(const minexp::SingularityClass& c) {
  auto opt = [](const auto& o) -> json { return o ? json(*o) : json(nullptr); };
  return {{"unbounded", c.unbounded},       {"m_du_bois", opt(c.m_du_bois)}, {"m_rational", opt(c.m_rational)},
          {"liminal_level", opt(c.liminal_level)}, {"ade", opt(c.ade)},          {"terminal", opt(c.terminal)},
          {"mld_lower", opt(c.mld_lower)}};
}

inline json to_json(const hm::DestabilizerCertificate& c) {
  json g = json::array();
  for (const auto& row : c.g.matrix()) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    g.push_back(r);
  }
  json w = json::array();
  for (const auto& x : c.w.w) w.push_back(x.get_num().get_si());
  return {{"g", g}, {"w", w}, {"margin", to_string(c.margin)}, {"strictness", hm::strictness_name(c.strictness)}, {"source", c.source}};
}

/// Inverse of to_json for certificates; used to re-check reports.
inline hm::DestabilizerCertificate certificate_from_json(const json& j) {
  Matrix g;
  for (const auto& row : j.at("g")) {
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(parse_rational(x.get<std::string>()));
    g.push_back(std::move(r));
  }
  hm::WeightSystem w;
  for (const auto& x : j.at("w")) w.w.emplace_back(x.get<long>());
  auto s = j.at("strictness").get<std::string>() == "semistability-violating" ? hm::Strictness::SemistabilityViolating
                                                                              : hm::Strictness::StabilityViolating;
  return {LinearChange(g), std::move(w), parse_rational(j.at("margin").get<std::string>()), s, j.value("source", "")};
}

inline json to_json(const std::vector<Integer>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_si());
  return a;
}

namespace detail {

inline void check_certificate(const Polynomial& f, const hm::DestabilizerCertificate& c) {
  if (!hm::verify_destabilizer(f, c)) throw InternalError("certificate failed self-verification");
  if (!hm::verify_destabilizer(f, certificate_from_json(to_json(c))))
    throw InternalError("certificate does not survive serialization");
}

inline void check_trace(const minexp::MinExpBound& b) {
  try {
    auto iv = minexp::replay(b.trace);
    if (!(iv.lo == b.lo) || !(iv.hi == b.hi)) throw InternalError("derivation trace does not reproduce its bound");
  } catch (const std::logic_error& e) {
    throw InternalError(std::string("derivation trace replay failed: ") + e.what());
  }
}

inline json verdict_json(const hm::StabilityVerdict& v, const Polynomial& f) {
  json j = {{"verdict", v.name()}};
  if (auto* s = std::get_if<hm::Stable>(&v.value)) j["alpha_lower"] = to_json(s->alpha_lower);
  if (auto* s = std::get_if<hm::Semistable>(&v.value)) j["alpha_exact"] = to_string(s->alpha_exact);
  if (auto* s = std::get_if<hm::NotStable>(&v.value)) {
    check_certificate(f, s->certificate);
    j["certificate"] = to_json(s->certificate);
  }
  if (auto* s = std::get_if<hm::Unstable>(&v.value)) {
    check_certificate(f, s->certificate);
    j["certificate"] = to_json(s->certificate);
  }
  if (auto* s = std::get_if<hm::Unknown>(&v.value)) j["search_log"] = s->search_log;
  if (v.cubic_alpha_lower) {
    j["cubic_inference"] = {{"alpha_lower", to_string(*v.cubic_alpha_lower)}, {"terminal", v.cubic_terminal}};
  }
  return j;
}

}  // namespace detail

/// Runs the requested analyses. minexp feeds the stability verdict; the
/// liminal locus feeds the Hodge data. Throws ParseError / invalid_argument
/// on bad input and InternalError when a self-check fails.
inline json run(const Request& req) {
  if (req.num_vars == 0) throw std::invalid_argument("--vars must be positive");
  auto f = parse_polynomial(req.text, req.num_vars);
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  const auto d = f.homogeneous_degree();
  const int N = static_cast<int>(req.num_vars);
  const int n = N - 1;

  json report;
  report["schema_version"] = kSchemaVersion;
  report["tool"] = {{"name", "hyperstab"}, {"version", kToolVersion}};
  json hints = {{"points", json::array()}, {"subspaces", json::array()}};
  for (const auto& p : req.hints.points) {
    json c = json::array();
    for (const auto& x : p.coords) c.push_back(to_string(x));
    hints["points"].push_back(c);
  }
  for (const auto& s : req.hints.subspaces) {
    json c = json::array();
    for (auto i : s) c.push_back("x" + std::to_string(i));
    hints["subspaces"].push_back(c);
  }
  hints["sing_dim"] = req.hints.sing_dim ? json(*req.hints.sing_dim) : json(nullptr);
  report["input"] = {{"polynomial", req.text}, {"normalized", f.to_string()}, {"num_vars", N},
                     {"degree", d ? json(*d) : json(nullptr)}, {"homogeneous", d.has_value()},
                     {"hints", hints}, {"seed", req.seed}, {"budget", req.budget}};

  if (!d) {
    // a germ at the origin: only the local minimal exponent makes sense
    auto local = minexp::minexp_local(f, Point::origin(req.num_vars));
    detail::check_trace(local);
    if (req.minexp) {
      report["minexp"] = {{"local_origin", to_json(local, req.trace)},
                          {"classification", to_json(minexp::classify(local, N - 1))}};
    }
    for (const char* k : {"git", "hodge", "degeneration"}) report["skipped"][k] = "input is not homogeneous";
    return report;
  }

  minexp::GlobalOptions opt;
  for (const auto& p : req.hints.points) {
    if (p.size() != req.num_vars) throw std::invalid_argument("hint point has the wrong number of coordinates");
    if (f.evaluate(p.coords) != 0) throw std::invalid_argument("hint point does not lie on the hypersurface");
    opt.sing_points.push_back(p);
  }
  opt.sing_dim = req.hints.sing_dim;
  const auto global = minexp::minexp_global_projective(f, opt);
  detail::check_trace(global);
  const auto cls = minexp::classify(global, n - 1 >= 0 ? n - 1 : 0);

  if (req.minexp) {
    json m = {{"global", to_json(global, req.trace)}, {"classification", to_json(cls)}};
    if (*d >= 2) {
      auto cone = minexp::minexp_cone(f, opt);
      detail::check_trace(cone);
      m["cone_vertex"] = to_json(cone, req.trace);
      auto probe = minexp::hyperplane_restriction_probe(f, req.seed);
      if (probe.violated()) throw InternalError("hyperplane restriction probe reports a violation");
      json pj = json::array();
      for (const auto& p : probe.probes)
        pj.push_back({{"hyperplane", p.hyperplane}, {"status", minexp::probe_status_name(p.status)},
                      {"expected", to_json(p.expected, false)},
                      {"restricted", p.restricted ? to_json(*p.restricted, false) : json(nullptr)}});
      m["hyperplane_probe"] = pj;
    }
    report["minexp"] = m;
  }

  if (req.git) {
    if (*d < 3) {
      report["skipped"]["git"] = "degree below 3";
    } else {
      hm::SearchHints sh{req.hints.points, req.hints.subspaces};
      auto v = hm::stability_verdict(f, global, req.budget, sh);
      json g = detail::verdict_json(v, f);
      g["threshold"] = to_string(make_rational(N, *d));
      if (*d == 3 && N >= 3) {
        json diags = json::array();
        for (const auto& dg : hm::cubic_obstructions(f, sh)) {
          json dj = {{"kind", dg.kind}, {"detail", dg.detail}, {"flagged", dg.flagged}};
          if (dg.hessian_rank) dj["hessian_rank"] = *dg.hessian_rank;
          if (dg.certificate) {
            detail::check_certificate(f, *dg.certificate);
            dj["certificate"] = to_json(*dg.certificate);
          }
          diags.push_back(dj);
        }
        g["cubic_diagnostics"] = diags;
      }
      report["git"] = g;
    }
  }

  const std::optional<int> level_opt = n >= 2 && *d >= 2 ? hodge::cy_level(n, *d) : std::nullopt;
  const bool cy = level_opt.has_value();
  const int m = level_opt.value_or(-1);
  if (req.hodge) {
    if (n < 2 || *d < 2) {
      report["skipped"]["hodge"] = "needs n >= 2 and d >= 2";
    } else {
      json h = {{"smooth_middle_hodge", to_json(hodge::smooth_middle_hodge(n, *d).entries)},
                {"cy_level", cy ? json(m) : json(nullptr)}};
      if (cy && global.exact()) {
        const ExtRational level(Rational(m + 1));
        if (level < global.lo) {
          h["m_rational"] = true;
          h["du_bois_entry"] = {{"p", n - 1 - m}, {"q", m}, {"value", hodge::m_rational_entry(n, *d, m).get_si()}};
        } else if (global.lo == level) {
          h["m_rational"] = false;
          try {
            auto S = minexp::liminal_locus_structured(f);
            json cells = json::array();
            for (auto c : S.cells) cells.push_back(S.describe(c));
            auto row = hodge::arrangement_cohomology(S);
            h["liminal_locus"] = {{"cells", cells}, {"count", S.cells.size()}, {"dim", S.dim()}};
            h["locus_cohomology"] = to_json(row.values);
            auto dbr = hodge::hodge_du_bois_row(n, *d, m, row);
            json labeled = json::object();
            for (std::size_t i = 0; i < dbr.size(); ++i)
              labeled["h^{" + std::to_string(n - 1 - m) + "," + std::to_string(i) + "}"] = dbr[i].get_si();
            h["du_bois_row"] = {{"p", n - 1 - m}, {"entries", to_json(dbr)}, {"labeled", labeled}};
          } catch (const std::invalid_argument& e) {
            h["liminal_locus"] = {{"unavailable", e.what()}};
          }
        }
      }
      report["hodge"] = h;
    }
  }

  if (req.degeneration) {
    if (!cy) {
      report["skipped"]["degeneration"] = "not of Calabi-Yau type";
    } else {
      try {
        auto blocks = hodge::block_descriptors(f);
        auto core = hodge::core_of_blocks(blocks);
        if (core.twist != m) throw InternalError("core twist differs from the Calabi-Yau level");
        json names = json::array();
        for (const auto& b : blocks) names.push_back(hodge::block_name(b));
        const bool smooth = global.lo.is_infinite();
        report["degeneration"] = {
            {"blocks", names},
            {"core", {{"weight", core.weight}, {"twist", core.twist}, {"label", core.label}}},
            {"nilpotency_index", hodge::nilpotency_index(n, core.weight, m)},
            {"maximal_degeneration", smooth ? json(nullptr) : json(hodge::maximal_degeneration_test(core, m))}};
      } catch (const std::invalid_argument& e) {
        report["skipped"]["degeneration"] = e.what();
      }
    }
  }
  return report;
}

/// Re-checks every certificate embedded in a report against its input.
inline bool verify_report(const json& report) {
  const auto& in = report.at("input");
  auto f = parse_polynomial(in.at("polynomial").get<std::string>(), in.at("num_vars").get<std::size_t>());
  std::vector<json> certs;
  if (report.contains("git")) {
    const auto& g = report.at("git");
    if (g.contains("certificate")) certs.push_back(g.at("certificate"));
    for (const auto& dg : g.value("cubic_diagnostics", json::array()))
      if (dg.contains("certificate")) certs.push_back(dg.at("certificate"));
  }
  for (const auto& c : certs)
    if (!hm::verify_destabilizer(f, certificate_from_json(c))) return false;
  return true;
}

}  // namespace hyperstab::analysis

#endif  // HYPERSTAB_ANALYSIS_HPP
