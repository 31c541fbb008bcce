#include "hyperstab/analysis.hpp"
#include "hyperstab/corpus.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

namespace {

using hyperstab::analysis::json;

struct Style {
  bool on = false;
  std::string bold(const std::string& s) const { return on ? "\033[1m" + s + "\033[0m" : s; }
  std::string good(const std::string& s) const { return on ? "\033[32m" + s + "\033[0m" : s; }
  std::string bad(const std::string& s) const { return on ? "\033[31m" + s + "\033[0m" : s; }
};

Style style_from_env() {
  const char* v = std::getenv("HYPERSTAB_COLOR");
  return Style{v != nullptr && std::string(v) == "1"};
}

// largest x<i> index + 1
std::size_t infer_vars(const std::string& text) {
  static const std::regex var(R"(x(\d+))");
  std::size_t n = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), var); it != std::sregex_iterator(); ++it)
    n = std::max<std::size_t>(n, std::stoul((*it)[1].str()) + 1);
  return n;
}

std::string str(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string interval(const json& b) {
  if (b.value("exact", false)) return str(b["lo"]) + " (exact)";
  return "[" + str(b["lo"]) + ", " + str(b["hi"]) + "]";
}

void print_trace(std::ostream& os, const json& t, int depth) {
  os << std::string(2 * depth + 4, ' ') << str(t["rule"]);
  if (!t["params"].empty()) os << " " << t["params"].dump();
  os << " -> " << (t["lo"] == t["hi"] ? str(t["lo"]) : "[" + str(t["lo"]) + ", " + str(t["hi"]) + "]") << "\n";
  for (const auto& c : t["children"]) print_trace(os, c, depth + 1);
}

void print_bound(std::ostream& os, const std::string& label, const json& b) {
  os << "  " << label << ": " << interval(b) << "\n";
  if (b.contains("trace")) print_trace(os, b["trace"], 0);
}

void print_classification(std::ostream& os, const json& c) {
  std::vector<std::string> tags;
  if (c.value("unbounded", false)) tags.push_back("smooth");
  if (!c["m_du_bois"].is_null()) tags.push_back(std::to_string(c["m_du_bois"].get<int>()) + "-Du Bois");
  if (!c["m_rational"].is_null()) tags.push_back(std::to_string(c["m_rational"].get<int>()) + "-rational");
  if (!c["liminal_level"].is_null()) tags.push_back(std::to_string(c["liminal_level"].get<int>()) + "-liminal");
  if (c.value("ade", false)) tags.push_back("ADE");
  if (c.value("terminal", false)) tags.push_back("terminal");
  os << "  classification:";
  for (const auto& t : tags) os << " " << t;
  if (tags.empty()) os << " -";
  os << "\n";
}

void print_certificate(std::ostream& os, const json& c, const std::string& indent) {
  os << indent << "weights " << c["w"].dump() << ", margin " << str(c["margin"]) << " (" << str(c["strictness"]) << ", "
     << str(c["source"]) << ")\n";
  os << indent << "coordinate change " << c["g"].dump() << "\n";
}

void print_report(std::ostream& os, const json& r, const Style& st) {
  const auto& in = r["input"];
  os << st.bold("input") << ": " << str(in["normalized"]) << "  (" << in["num_vars"] << " variables";
  if (!in["degree"].is_null()) os << ", degree " << in["degree"];
  os << ")\n";
  if (r.contains("minexp")) {
    const auto& m = r["minexp"];
    os << st.bold("minimal exponent") << "\n";
    if (m.contains("local_origin")) print_bound(os, "at the origin", m["local_origin"]);
    if (m.contains("global")) print_bound(os, "global", m["global"]);
    if (m.contains("cone_vertex")) print_bound(os, "cone vertex", m["cone_vertex"]);
    print_classification(os, m["classification"]);
    if (m.contains("hyperplane_probe")) {
      std::size_t consistent = 0;
      for (const auto& p : m["hyperplane_probe"]) consistent += p["status"] != "violation";
      os << "  hyperplane probe: " << consistent << "/" << m["hyperplane_probe"].size() << " consistent\n";
    }
  }
  if (r.contains("git")) {
    const auto& g = r["git"];
    const std::string v = str(g["verdict"]);
    const bool ok = v == "Stable" || v == "Semistable";
    os << st.bold("stability") << ": " << (ok ? st.good(v) : st.bad(v)) << "  (threshold " << str(g["threshold"]) << ")\n";
    if (g.contains("alpha_lower")) os << "  minimal exponent >= " << str(g["alpha_lower"]) << "\n";
    if (g.contains("certificate")) print_certificate(os, g["certificate"], "  ");
    if (g.contains("cubic_alpha_lower")) os << "  cubic inference: minimal exponent >= " << str(g["cubic_alpha_lower"]) << "\n";
    if (g.contains("search_log"))
      for (const auto& l : g["search_log"]) os << "  search: " << str(l) << "\n";
    if (g.contains("cubic_diagnostics"))
      for (const auto& d : g["cubic_diagnostics"]) {
        os << "  cubic: " << str(d["kind"]) << " " << str(d["detail"]) << (d.value("flagged", false) ? " [flagged]" : "") << "\n";
        if (d.contains("certificate")) print_certificate(os, d["certificate"], "    ");
      }
  }
  if (r.contains("hodge")) {
    const auto& h = r["hodge"];
    os << st.bold("hodge") << "\n  smooth middle row: " << h["smooth_middle_hodge"].dump() << "\n";
    os << "  CY level: " << (h["cy_level"].is_null() ? std::string("-") : h["cy_level"].dump()) << "\n";
    if (h.contains("du_bois_entry")) {
      const auto& e = h["du_bois_entry"];
      os << "  m-rational, h^{" << e["p"] << "," << e["q"] << "} = " << e["value"] << "\n";
    }
    if (h.contains("liminal_locus")) {
      const auto& l = h["liminal_locus"];
      if (l.contains("unavailable")) {
        os << "  liminal locus: unavailable (" << str(l["unavailable"]) << ")\n";
      } else {
        os << "  liminal locus: " << l["count"] << " cells of dimension " << l["dim"] << "\n";
        os << "  locus cohomology: " << h["locus_cohomology"].dump() << "\n";
        for (const auto& [k, v] : h["du_bois_row"]["labeled"].items()) os << "  " << k << " = " << v << "\n";
      }
    }
  }
  if (r.contains("degeneration")) {
    const auto& d = r["degeneration"];
    os << st.bold("degeneration") << "\n  blocks: ";
    for (std::size_t i = 0; i < d["blocks"].size(); ++i) os << (i ? " * " : "") << str(d["blocks"][i]);
    os << "\n  core: " << str(d["core"]["label"]) << " (weight " << d["core"]["weight"] << ")\n";
    os << "  nilpotency index: " << d["nilpotency_index"] << "\n";
    os << "  maximal degeneration: " << (d["maximal_degeneration"].is_null() ? std::string("-") : d["maximal_degeneration"].dump()) << "\n";
  }
  if (r.contains("skipped"))
    for (const auto& [k, v] : r["skipped"].items()) os << "skipped " << k << ": " << str(v) << "\n";
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  namespace an = hyperstab::analysis;
  CLI::App app{"Stability and minimal exponents of projective hypersurfaces"};
  app.set_version_flag("--version", std::string(an::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::size_t vars = 0;
  bool as_json = false, trace = false;
  std::uint64_t seed = 0;
  int budget = 64;
  std::string hints_file;
  std::vector<std::string> sing_points, sing_subspaces;
  std::optional<int> sing_dim;
  app.add_option("--vars", vars, "number of variables (default: largest index + 1)");
  app.add_flag("--json", as_json, "emit JSON");
  app.add_flag("--trace", trace, "include derivation traces");
  app.add_option("--seed", seed, "seed for randomized probes")->capture_default_str();
  app.add_option("--budget", budget, "destabilizer search budget")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--hints-file", hints_file, "JSON file with points, subspaces, sing_dim")->check(CLI::ExistingFile);
  app.add_option("--sing-point", sing_points, "singular point, comma-separated projective coordinates");
  app.add_option("--sing-subspace", sing_subspaces, "subspace given by vanishing coordinates, e.g. x5,x6");
  app.add_option("--sing-dim", sing_dim, "dimension of the singular locus");

  std::string poly;
  bool all = false;
  auto add_poly = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("polynomial", poly, "polynomial in x0, x1, ...")->required();
    return c;
  };
  auto* analyze = add_poly("analyze", "run every analysis");
  analyze->add_flag("--all", all, "run every analysis (default)");
  auto* minexp = add_poly("minexp", "minimal exponent bounds and classification");
  auto* git = add_poly("git-check", "Hilbert-Mumford stability verdict");
  auto* hodge = add_poly("hodge", "Hodge numbers and the liminal locus");
  auto* degen = add_poly("degeneration", "core and nilpotency of the degeneration");
  auto* corpus = app.add_subcommand("corpus", "bundled fixtures");
  corpus->require_subcommand(1);
  auto* corpus_run = corpus->add_subcommand("run", "run every fixture and compare");
  auto* corpus_list = corpus->add_subcommand("list", "list fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Style st = style_from_env();
  try {
    if (*corpus_list) {
      json list = json::array();
      for (const auto& f : hyperstab::corpus::fixtures()) {
        if (as_json)
          list.push_back({{"name", f.name}, {"description", f.description}, {"polynomial", f.text}, {"num_vars", f.vars}});
        else
          std::cout << f.name << "  " << f.description << "\n    " << f.text << "\n";
      }
      if (as_json) emit_json(list);
      return 0;
    }
    if (*corpus_run) {
      json out = json::array();
      std::size_t failed = 0, total = 0;
      for (const auto& f : hyperstab::corpus::fixtures()) {
        auto req = hyperstab::corpus::request_for(f, seed, budget);
        req.trace = trace;
        auto report = an::run(req);
        auto bad = hyperstab::corpus::check(f, report);
        ++total;
        failed += !bad.empty();
        if (as_json) {
          out.push_back({{"name", f.name}, {"pass", bad.empty()}, {"mismatches", bad}, {"report", report}});
        } else {
          std::cout << (bad.empty() ? st.good("PASS") : st.bad("FAIL")) << "  " << f.name << "\n";
          for (const auto& b : bad) std::cout << "      " << b << "\n";
        }
      }
      if (as_json)
        emit_json({{"schema_version", an::kSchemaVersion}, {"fixtures", out}, {"passed", total - failed}, {"total", total}});
      else
        std::cout << (total - failed) << "/" << total << " fixtures pass\n";
      return failed ? 3 : 0;
    }

    an::Request req;
    req.text = poly;
    req.num_vars = vars ? vars : infer_vars(poly);
    req.seed = seed;
    req.budget = budget;
    req.trace = trace;
    if (!hints_file.empty()) {
      std::ifstream in(hints_file);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("hints file: ") + e.what());
      }
      req.hints = an::parse_hints_json(j, req.num_vars);
    }
    for (const auto& p : sing_points) req.hints.points.push_back(an::parse_point(p, req.num_vars));
    for (const auto& s : sing_subspaces) req.hints.subspaces.push_back(an::parse_subspace(s, req.num_vars));
    if (sing_dim) req.hints.sing_dim = sing_dim;
    if (!*analyze) {
      req.minexp = minexp->parsed();
      req.git = git->parsed();
      req.hodge = hodge->parsed();
      req.degeneration = degen->parsed();
    }
    auto report = an::run(req);
    if (!an::verify_report(report)) throw an::InternalError("embedded certificate failed re-verification");
    if (as_json)
      emit_json(report);
    else
      print_report(std::cout, report, st);
    return 0;
  } catch (const an::InternalError& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    // ParseError and invalid_argument derive from here; programming errors are reported as internal
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e) ||
        dynamic_cast<const std::domain_error*>(&e)) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
