#include "polyterm/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "polyterm/classify.hpp"

namespace polyterm {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Trs load_trs(const RunConfig& cfg) {
  TrsFormat fmt = cfg.format ? *cfg.format
                             : (ends_with(cfg.input, ".json") ? TrsFormat::sorted_json : TrsFormat::tpdb);
  return parse_trs(read_file(cfg.input), fmt);
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void print_classification(const Trs& trs, const TrsClass& cls, std::ostream& out) {
  out << "rules: " << trs.rules.size() << ", operations: " << trs.signature.ops().size()
      << ", sorts: " << trs.signature.sorts().size() << "\n";
  out << "left-linear: " << yes_no(cls.left_linear) << "\n";
  out << "linear: " << yes_no(cls.linear) << "\n";
  out << "planar: " << yes_no(cls.planar) << "\n";
  out << "non-duplicating: " << yes_no(cls.non_duplicating) << "\n";
  out << "weakly orthogonal: " << yes_no(cls.weakly_orthogonal) << "\n";
  out << "functional program: " << yes_no(cls.functional_program) << "\n";
  auto list = [&](const std::set<std::string>& s) {
    std::string r;
    for (const auto& x : s) r += (r.empty() ? "" : " ") + x;
    return r.empty() ? std::string("-") : r;
  };
  out << "constructors: " << list(cls.constructors) << "\n";
  out << "functions: " << list(cls.functions) << "\n";
  std::set<std::string> unused;
  for (CellKind k : cls.unused_structure) unused.insert(to_string(k));
  out << "unused structure cells: " << list(unused) << "\n";
  for (const auto& [key, k] : cls.k_table)
    out << "K" << key.second << "(" << key.first << ") = " << k << "\n";
  auto cps = critical_pairs(trs);
  out << "critical pairs: " << cps.size() << "\n";
  for (const CriticalPair& cp : cps)
    out << "  " << to_string(cp.peak) << " -> " << to_string(cp.left) << " | "
        << to_string(cp.right) << "  (" << cp.rules.first << " over " << cp.rules.second
        << " at " << to_string(cp.position) << ")\n";
}

int do_classify(const RunConfig& cfg, std::ostream& out) {
  Trs trs = load_trs(cfg);
  TrsClass cls = classify(trs);
  if (cfg.output == OutputFormat::json) {
    nlohmann::json j = to_json(cls);
    j["critical_pairs"] = nlohmann::json::array();
    for (const CriticalPair& cp : critical_pairs(trs)) j["critical_pairs"].push_back(to_json(cp));
    out << j.dump(2) << "\n";
  } else {
    print_classification(trs, cls, out);
  }
  return kExitOk;
}

int do_translate(const RunConfig& cfg, std::ostream& out) {
  Trs trs = load_trs(cfg);
  Polygraph pg = build_polygraph(trs, parse_cell_set(cfg.cells));
  if (cfg.output == OutputFormat::json) {
    out << to_json(pg).dump(2) << "\n";
    return kExitOk;
  }
  out << "1-cells: " << pg.sorts.size() << ", algebra 2-cells: " << pg.algebra_cells.size()
      << ", structure 2-cells: " << pg.structure_cells.size() << "\n";
  for (Family f : {Family::computation, Family::delta1, Family::delta2, Family::delta2_constructor,
                   Family::delta2_function})
    if (pg.count(f)) out << to_string(f) << ": " << pg.count(f) << "\n";
  out << "3-cells: " << pg.cells.size() << "\n";
  if (cfg.verbose)
    for (const ThreeCell& c : pg.cells)
      out << "\n" << c.name << " [" << to_string(c.family) << "]\n"
          << to_text(c.source) << "=>\n"
          << to_text(c.target);
  return kExitOk;
}

int do_normalize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.term.empty()) {
    err << "normalize needs --term\n";
    return kExitError;
  }
  Trs trs = load_trs(cfg);
  Polygraph pg = build_polygraph(trs, parse_cell_set(cfg.cells));
  Term t = parse_term(cfg.term, trs.signature);
  TwoPath f = translate_term(trs.signature, t, distinct_vars(t));
  NormalizeResult r = normalize(f, pg.cells, Strategy::leftmost_innermost, cfg.fuel);
  if (cfg.output == OutputFormat::json) {
    nlohmann::json j = to_json(r.trace);
    j["exhausted"] = r.exhausted;
    j["normal_form"] = text_lines(r.result);
    out << j.dump(2) << "\n";
  } else {
    out << to_text(f);
    for (const TraceStep& s : r.trace.steps) out << "-- " << s.cell << " (" << s.match << ")\n" << to_text(s.result);
    out << (r.exhausted ? "fuel exhausted" : "normal form") << " after " << r.trace.steps.size()
        << " step(s)\n";
  }
  return r.exhausted ? kExitUnknown : kExitOk;
}

int emit(const Certificate& cert, const RunConfig& cfg, std::ostream& out) {
  if (cfg.output == OutputFormat::json)
    out << to_json(cert).dump(2) << "\n";
  else
    out << report_text(cert);
  return cert.verdict == Verdict::terminating ? kExitOk : kExitUnknown;
}

int do_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.interp_path.empty()) {
    err << "verify needs --interp\n";
    return kExitError;
  }
  Trs trs = load_trs(cfg);
  Interpretation I = interpretation_from_json(nlohmann::json::parse(read_file(cfg.interp_path)));
  if (cfg.domain) I.domain = *cfg.domain;
  if (cfg.heat && *cfg.heat != I.heat_domain)
    throw InterpError("--heat disagrees with the interpretation file");
  return emit(verify(trs, I, cfg.route), cfg, out);
}

int do_search(const RunConfig& cfg, std::ostream& out) {
  Trs trs = load_trs(cfg);
  SearchBounds b = cfg.bounds;
  if (cfg.domain) b.domain = *cfg.domain;
  if (cfg.heat) b.heat = *cfg.heat;
  std::vector<Route> routes(std::begin(kAllRoutes), std::end(kAllRoutes));
  if (cfg.route) routes = {*cfg.route};
  return emit(search(trs, b, routes), cfg, out);
}

}  // namespace

CellSet parse_cell_set(const std::string& text) {
  CellSet cs;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part == "computation") {
    } else if (part == "delta1") {
      cs.delta1 = true;
    } else if (part == "delta2") {
      cs.constructors = cs.functions = true;
    } else if (part == "constructors") {
      cs.constructors = true;
    } else if (part == "functions") {
      cs.functions = true;
    } else if (part == "all") {
      cs.delta1 = cs.constructors = cs.functions = true;
    } else {
      throw std::invalid_argument("unknown cell family '" + part + "'");
    }
  }
  return cs;
}

std::string report_text(const Certificate& cert) {
  std::ostringstream out;
  const bool ok = cert.verdict == Verdict::terminating;
  out << "verdict: " << (ok ? "terminating" : "unknown");
  if (ok && cert.strict_cells.empty()) out << " (vacuous)";
  out << "\nroute: " << to_string(cert.route) << "\n";
  out << "obligation: " << cert.strict_cells.size() << " strict, " << cert.weak_cells.size()
      << " weak\n";
  out << "domain: " << to_string(cert.interpretation.domain)
      << ", heat: " << to_string(cert.interpretation.heat_domain) << "\n";
  if (!cert.checks.empty()) out << "checks:\n";
  for (const CheckResult& r : cert.checks)
    out << "  " << r.cell << " [" << to_string(r.family) << "] " << to_string(r.verdict)
        << ": heat " << to_string(r.source_heat) << " vs " << to_string(r.target_heat) << "\n";
  for (const SideCondition& sc : cert.side_conditions)
    out << "side condition " << sc.name << ": " << (sc.holds ? "holds" : "fails")
        << (sc.witness.empty() ? "" : " (" + sc.witness + ")") << "\n";
  if (const CheckResult* f = cert.first_failure())
    out << "first failing cell: " << f->cell << ", source heat " << to_string(f->source_heat)
        << ", target heat " << to_string(f->target_heat) << "; " << f->witness << "\n";
  if (!cert.bounds.empty()) {
    out << "candidate bounds (uncertified):\n";
    out << "  " << std::left << std::setw(10) << "function" << std::setw(20) << "size"
        << "time\n";
    for (const Bound& b : cert.bounds)
      out << "  " << std::setw(10) << b.function << std::setw(20) << b.size << b.time << "\n";
  }
  if (cert.stats)
    out << "candidates tried: " << cert.stats->candidates << " of " << cert.stats->budget << "\n";
  for (const std::string& n : cert.notes) out << "note: " << n << "\n";
  return out.str();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.mode) {
      case Mode::classify:
        return do_classify(cfg, out);
      case Mode::translate:
        return do_translate(cfg, out);
      case Mode::normalize:
        return do_normalize(cfg, out, err);
      case Mode::verify:
        return do_verify(cfg, out, err);
      case Mode::search:
        return do_search(cfg, out);
    }
  } catch (const ParseError& e) {
    err << cfg.input << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"polyterm: termination of left-linear rewriting systems via polygraphs"};
  std::vector<std::string> positional;
  std::string route, domain, heat, format = "text", input_format;
  RunConfig cfg;
  app.add_option("args", positional, "[mode] file; mode is verify, search, translate, classify or normalize")
      ->required()
      ->expected(1, 2);
  app.add_option("--interp", cfg.interp_path, "interpretation JSON (verify)");
  app.add_option("--route", route, "planar-linear, special, nondup, functional, partial, general");
  app.add_option("--domain", domain, "current domain: N or N+");
  app.add_option("--heat", heat, "heat domain: N or multiset");
  app.add_option("--cells", cfg.cells, "computation, delta1, delta2, constructors, functions, all");
  app.add_option("--max-degree", cfg.bounds.max_degree, "search: template degree")
      ->capture_default_str();
  app.add_option("--max-coeff", cfg.bounds.max_coeff, "search: largest coefficient")
      ->capture_default_str();
  app.add_option("--budget", cfg.bounds.budget, "search: candidate interpretations to try")
      ->capture_default_str();
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--input-format", input_format, "tpdb or json (default: by extension)")
      ->check(CLI::IsMember({"tpdb", "json"}));
  app.add_option("--fuel", cfg.fuel, "normalize: step limit")->capture_default_str();
  app.add_option("--term", cfg.term, "normalize: term to translate and normalize");
  app.add_flag("-v,--verbose", cfg.verbose, "list every 3-cell in translate mode");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kExitOk : kExitError;
  }
  try {
    if (positional.size() == 2) {
      static const std::map<std::string, Mode> modes{{"verify", Mode::verify},
                                                     {"search", Mode::search},
                                                     {"translate", Mode::translate},
                                                     {"classify", Mode::classify},
                                                     {"normalize", Mode::normalize}};
      auto it = modes.find(positional[0]);
      if (it == modes.end()) throw std::invalid_argument("unknown mode '" + positional[0] + "'");
      cfg.mode = it->second;
    }
    cfg.input = positional.back();
    if (!route.empty()) cfg.route = parse_route(route);
    if (!domain.empty()) cfg.domain = parse_domain(domain);
    if (!heat.empty()) cfg.heat = parse_heat_domain(heat);
    if (!input_format.empty())
      cfg.format = input_format == "json" ? TrsFormat::sorted_json : TrsFormat::tpdb;
    cfg.output = format == "json" ? OutputFormat::json : OutputFormat::text;
    parse_cell_set(cfg.cells);
    if (cfg.bounds.budget == 0) throw std::invalid_argument("--budget must be positive");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return run(cfg, out, err);
}

}  // namespace polyterm
