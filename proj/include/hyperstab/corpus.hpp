#ifndef HYPERSTAB_CORPUS_HPP
#define HYPERSTAB_CORPUS_HPP

#include "hyperstab/analysis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hyperstab::corpus {

using analysis::json;

struct Expect {
  std::optional<std::string> global;    // exact global value ("inf" for smooth)
  std::optional<std::string> local;     // exact value at the origin of a germ
  std::optional<std::string> contains;  // must lie in the global interval
  std::optional<std::string> verdict;
  std::vector<std::string> forbidden_verdicts;
  std::optional<int> liminal_level;
  std::optional<bool> smooth;
  std::optional<bool> ade;
  std::optional<bool> terminal;
  std::optional<int> core_weight;
  std::optional<std::string> core_label;
  std::optional<int> nilpotency;
  std::optional<json> maximal;  // true, false or null
  std::optional<std::size_t> liminal_cells;
  std::optional<std::vector<long>> locus_cohomology;
  std::optional<std::vector<long>> du_bois_row;
};

struct Fixture {
  std::string name;
  std::string description;
  std::string text;
  std::size_t vars = 0;
  analysis::Hints hints;
  Expect expect;
};

namespace detail {

inline std::string var(std::size_t i) { return "x" + std::to_string(i); }

inline std::string cubes(std::size_t from, std::size_t to) {
  std::string s;
  for (std::size_t i = from; i < to; ++i) s += (s.empty() ? "" : " + ") + var(i) + "^3";
  return s;
}

// f in (x_{n-1}, x_n)
inline std::string contains_plane_cubic(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i + 1 < n; ++i) s += var(n - 1) + "*" + var(i) + "^2 + " + var(n) + "*" + var(i) + "*" + var(i + 1) + " + ";
  return s + var(n) + "^3";
}

// f in (x_{n-3}, ..., x_n)^2
inline std::string singular_plane_cubic(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i + 3 < n; ++i) s += var(i) + "*" + var(n - 3 + i % 4) + "*" + var(n - 3 + (i + 1) % 4) + " + ";
  return s + cubes(n - 3, n + 1);
}

}  // namespace detail

inline std::vector<Fixture> fixtures() {
  using detail::cubes;
  std::vector<Fixture> out;
  {
    Fixture f{"fermat-cubic-7fold", "smooth Fermat cubic in P^8", cubes(0, 9), 9, {}, {}};
    f.expect.global = "inf";
    f.expect.verdict = "Stable";
    f.expect.smooth = true;
    f.expect.core_weight = 7;
    f.expect.nilpotency = 1;
    f.expect.maximal = json(nullptr);
    out.push_back(f);
  }
  {
    Fixture f{"cubic-7fold-fourfold-cone", "cone over a cubic fourfold joined with three lines", cubes(0, 6) + " + x6*x7*x8", 9, {}, {}};
    f.expect.global = "3";
    f.expect.verdict = "Semistable";
    f.expect.liminal_level = 2;
    f.expect.core_weight = 6;
    f.expect.core_label = "Core(H^4(cubic fourfold))(-1)";
    f.expect.nilpotency = 2;
    f.expect.maximal = false;
    f.expect.liminal_cells = 3;
    out.push_back(f);
  }
  {
    Fixture f{"cubic-7fold-elliptic-cone", "cone over a plane cubic joined with two triangles",
              cubes(0, 3) + " + x3*x4*x5 + x6*x7*x8", 9, {}, {}};
    f.expect.global = "3";
    f.expect.verdict = "Semistable";
    f.expect.liminal_level = 2;
    f.expect.core_weight = 5;
    f.expect.core_label = "Core(H^1(elliptic curve))(-2)";
    f.expect.nilpotency = 3;
    f.expect.maximal = false;
    out.push_back(f);
  }
  {
    Fixture f{"triple-nc-cubic-7fold", "sum of three normal-crossing cubic monomials", "x0*x1*x2 + x3*x4*x5 + x6*x7*x8", 9, {}, {}};
    f.expect.global = "3";
    f.expect.verdict = "Semistable";
    f.expect.liminal_level = 2;
    f.expect.core_weight = 4;
    f.expect.core_label = "Q(-2)";
    f.expect.nilpotency = 4;
    f.expect.maximal = true;
    f.expect.liminal_cells = 27;
    out.push_back(f);
  }
  {
    Fixture f{"sum-nc-quartic-7fold", "two normal-crossing quartic monomials in P^7", "x0*x1*x2*x3 + x4*x5*x6*x7", 8, {}, {}};
    f.expect.global = "2";
    f.expect.verdict = "Semistable";
    f.expect.liminal_level = 1;
    f.expect.core_weight = 2;
    f.expect.nilpotency = 5;
    f.expect.maximal = true;
    out.push_back(f);
  }
  {
    Fixture f{"three-lines", "triangle of lines in P^2", "x0*x1*x2", 3, {}, {}};
    f.expect.global = "1";
    f.expect.verdict = "Semistable";
    f.expect.core_weight = 0;
    f.expect.nilpotency = 2;
    f.expect.maximal = true;
    f.expect.liminal_cells = 3;
    f.expect.locus_cohomology = std::vector<long>{3};
    out.push_back(f);
  }
  {
    Fixture f{"k3-tetrahedron", "union of the four coordinate planes in P^3", "x0*x1*x2*x3", 4, {}, {}};
    f.expect.global = "1";
    f.expect.verdict = "Semistable";
    f.expect.liminal_level = 0;
    f.expect.core_weight = 0;
    f.expect.nilpotency = 3;
    f.expect.maximal = true;
    f.expect.liminal_cells = 6;
    f.expect.locus_cohomology = std::vector<long>{1, 3};
    f.expect.du_bois_row = std::vector<long>{0, 0, 4, 0};
    out.push_back(f);
  }
  {
    Fixture f{"A5-suspension", "A5 threefold germ x^6 + three squares", "x0^6 + x1^2 + x2^2 + x3^2", 4, {}, {}};
    f.expect.local = "5/3";
    f.expect.ade = true;
    f.expect.terminal = true;
    out.push_back(f);
  }
  {
    Fixture f{"chordal-cubic", "secant variety of the rational normal quartic curve (3x3 Hankel determinant)",
              "x0*x2*x4 + 2*x1*x2*x3 - x2^3 - x0*x3^2 - x1^2*x4", 5, {}, {}};
    f.hints.sing_dim = 1;
    f.hints.points.push_back(Point::proj({Rational(1), Rational(0), Rational(0), Rational(0), Rational(0)}));
    f.expect.contains = "3/2";
    f.expect.forbidden_verdicts = {"Stable", "Unstable"};
    out.push_back(f);
  }
  {
    Fixture f{"binary-cubic-double-root", "x0^2*x1 on P^1", "x0^2*x1", 2, {}, {}};
    f.expect.verdict = "Unstable";
    out.push_back(f);
  }
  for (std::size_t n = 6; n <= 8; ++n) {
    Fixture a{"unstable-cubic-contains-plane-n" + std::to_string(n), "cubic containing a codimension two plane",
              detail::contains_plane_cubic(n), n + 1, {}, {}};
    a.expect.verdict = "Unstable";
    out.push_back(a);
    Fixture b{"unstable-cubic-singular-plane-n" + std::to_string(n), "cubic singular along a P^{n-4}",
              detail::singular_plane_cubic(n), n + 1, {}, {}};
    b.expect.verdict = "Unstable";
    out.push_back(b);
  }
  return out;
}

inline analysis::Request request_for(const Fixture& f, std::uint64_t seed = 0, int budget = 64) {
  analysis::Request r;
  r.text = f.text;
  r.num_vars = f.vars;
  r.hints = f.hints;
  r.seed = seed;
  r.budget = budget;
  return r;
}

/// Mismatches between a report and the fixture's expectations.
inline std::vector<std::string> check(const Fixture& f, const json& report) {
  std::vector<std::string> bad;
  auto expect_eq = [&](const std::string& what, const json& got, const json& want) {
    if (got != want) bad.push_back(what + ": expected " + want.dump() + ", got " + got.dump());
  };
  auto at = [&](std::initializer_list<const char*> path) -> json {
    const json* j = &report;
    for (const char* k : path) {
      if (!j->is_object() || !j->contains(k)) return json("<missing>");
      j = &j->at(k);
    }
    return *j;
  };
  const auto& e = f.expect;
  if (e.global) {
    expect_eq("global lo", at({"minexp", "global", "lo"}), *e.global);
    expect_eq("global exact", at({"minexp", "global", "exact"}), true);
  }
  if (e.local) {
    expect_eq("local lo", at({"minexp", "local_origin", "lo"}), *e.local);
    expect_eq("local exact", at({"minexp", "local_origin", "exact"}), true);
  }
  if (e.contains) {
    auto lo = at({"minexp", "global", "lo"}), hi = at({"minexp", "global", "hi"});
    if (!lo.is_string() || !hi.is_string()) {
      bad.push_back("global interval missing");
    } else {
      ExtRational v(parse_rational(*e.contains));
      if (v < parse_ext_rational(lo.get<std::string>()) || parse_ext_rational(hi.get<std::string>()) < v)
        bad.push_back("global interval [" + lo.get<std::string>() + ", " + hi.get<std::string>() + "] misses " + *e.contains);
    }
  }
  if (e.verdict) expect_eq("verdict", at({"git", "verdict"}), *e.verdict);
  for (const auto& v : e.forbidden_verdicts)
    if (at({"git", "verdict"}) == json(v)) bad.push_back("verdict must not be " + v);
  if (e.liminal_level) expect_eq("liminal level", at({"minexp", "classification", "liminal_level"}), *e.liminal_level);
  if (e.smooth) expect_eq("smooth", at({"minexp", "classification", "unbounded"}), *e.smooth);
  if (e.ade) expect_eq("ade", at({"minexp", "classification", "ade"}), *e.ade);
  if (e.terminal) expect_eq("terminal", at({"minexp", "classification", "terminal"}), *e.terminal);
  if (e.core_weight) expect_eq("core weight", at({"degeneration", "core", "weight"}), *e.core_weight);
  if (e.core_label) expect_eq("core label", at({"degeneration", "core", "label"}), *e.core_label);
  if (e.nilpotency) expect_eq("nilpotency index", at({"degeneration", "nilpotency_index"}), *e.nilpotency);
  if (e.maximal) expect_eq("maximal degeneration", at({"degeneration", "maximal_degeneration"}), *e.maximal);
  if (e.liminal_cells) expect_eq("liminal cells", at({"hodge", "liminal_locus", "count"}), *e.liminal_cells);
  if (e.locus_cohomology) expect_eq("locus cohomology", at({"hodge", "locus_cohomology"}), *e.locus_cohomology);
  if (e.du_bois_row) expect_eq("du Bois row", at({"hodge", "du_bois_row", "entries"}), *e.du_bois_row);
  if (!analysis::verify_report(report)) bad.push_back("embedded certificate failed re-verification");
  return bad;
}

}  // namespace hyperstab::corpus

#endif  // HYPERSTAB_CORPUS_HPP
