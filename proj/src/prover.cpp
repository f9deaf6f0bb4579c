#include "polyterm/prover.hpp"

#include <algorithm>
#include <functional>

namespace polyterm {

std::string to_string(Route r) {
  switch (r) {
    case Route::planar_linear:
      return "R-PLANAR-LINEAR";
    case Route::special:
      return "R-SPECIAL";
    case Route::nondup:
      return "R-NONDUP";
    case Route::functional:
      return "R-FUNCTIONAL";
    case Route::partial:
      return "R-PARTIAL";
    case Route::general:
      return "R-GENERAL";
  }
  return "?";
}

std::string route_option(Route r) {
  std::string s = to_string(r).substr(2);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

Route parse_route(const std::string& s) {
  for (Route r : kAllRoutes)
    if (s == to_string(r) || s == route_option(r)) return r;
  throw ProverError("unknown route '" + s + "'");
}

std::optional<std::string> route_blocker(Route r, const TrsClass& cls, HeatDomain heat) {
  if (!cls.left_linear) return "the system is not left-linear";
  switch (r) {
    case Route::planar_linear:
      if (!cls.linear) return "the system is not linear";
      if (!cls.planar) return "the system is not planar";
      return std::nullopt;
    case Route::special:
      if (heat != HeatDomain::multiset) return "heats must be multisets";
      return std::nullopt;
    case Route::nondup:
      if (!cls.non_duplicating) return "some right-hand side repeats a variable";
      return std::nullopt;
    case Route::functional:
      if (!cls.functional_program) return "the system is not a first-order functional program";
      return std::nullopt;
    case Route::partial:
      if (cls.unused_structure.empty()) return "every structure cell is used by some rule";
      return std::nullopt;
    case Route::general:
      return std::nullopt;
  }
  return "unknown route";
}

namespace {

std::vector<ThreeCell> delta2_cells(const Trs& trs, const TrsClass& cls,
                                    const std::function<bool(const ThreeCell&, bool)>& keep) {
  std::vector<ThreeCell> out;
  for (const OpDecl& op : trs.signature.ops()) {
    const bool is_ctor = cls.constructors.count(op.name) > 0;
    for (ThreeCell& c : gen_delta2(CellDecl::algebra(op), trs.signature.sorts())) {
      if (cls.functional_program)
        c.family = is_ctor ? Family::delta2_constructor : Family::delta2_function;
      if (keep(c, is_ctor)) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

ProofObligation dispatch(const TrsClass& cls, const Trs& trs, std::optional<Route> requested,
                         HeatDomain heat) {
  Route route = Route::general;
  if (requested) {
    if (auto why = route_blocker(*requested, cls, heat))
      throw ProverError("route " + to_string(*requested) + " does not apply: " + *why);
    route = *requested;
  } else {
    if (auto why = route_blocker(Route::general, cls, heat)) throw ProverError(*why);
    for (Route r : kAllRoutes)
      if (!route_blocker(r, cls, heat)) {
        route = r;
        break;
      }
  }
  ProofObligation ob{route, gen_computation(trs), {}, {}};
  switch (route) {
    case Route::planar_linear:
      break;
    case Route::special:
      ob.side_conditions = {"structure-canonical", "projection-dominated", "output-above-heat",
                            "heat-above-duplicated-input"};
      break;
    case Route::nondup:
      ob.side_conditions = {"tau-swap"};
      break;
    case Route::functional:
      ob.weak_cells = delta2_cells(trs, cls, [](const ThreeCell&, bool ctor) { return ctor; });
      break;
    case Route::partial:
      ob.weak_cells = delta2_cells(trs, cls, [&](const ThreeCell& c, bool) {
        return !cls.unused_structure.count(*c.concerns);
      });
      break;
    case Route::general:
      ob.weak_cells = delta2_cells(trs, cls, [](const ThreeCell&, bool) { return true; });
      break;
  }
  return ob;
}

// -- side conditions ------------------------------------------------------------

namespace {

HeatExpr in_domain(const HeatExpr& h, Domain d) {
  return d == Domain::positive ? h.shifted() : h;
}

bool same_currents(const CellInterp& a, const CellInterp& b) { return a.currents == b.currents; }

SideCondition tau_swap(const Trs& trs, const Interpretation& I) {
  SideCondition sc{"tau-swap", true, ""};
  for (const CellDecl& c : structure_cells(trs.signature.sorts())) {
    if (c.kind != CellKind::swap) continue;
    if (!same_currents(I.lookup(c), canonical_structure(c, I.heat_domain))) {
      sc.holds = false;
      sc.witness = c.name + " currents are not (x2, x1)";
      return sc;
    }
  }
  return sc;
}

SideCondition preserves_positive(const Trs& trs, const Interpretation& I) {
  SideCondition sc{"currents-preserve-positive", true, ""};
  std::vector<CellDecl> cells;
  for (const OpDecl& op : trs.signature.ops()) cells.push_back(CellDecl::algebra(op));
  for (const CellDecl& c : structure_cells(trs.signature.sorts())) cells.push_back(c);
  for (const CellDecl& c : cells)
    for (const Poly& p : I.lookup(c).currents)
      if (!poly_geq(shift_positive(p), Poly(1))) {
        sc.holds = false;
        sc.witness = c.name + " current " + to_string(p) + " may leave N+";
        return sc;
      }
  return sc;
}

}  // namespace

std::vector<SideCondition> check_special_conditions(const Trs& trs, const TrsClass& cls,
                                                    const Interpretation& I) {
  if (I.heat_domain != HeatDomain::multiset)
    throw ProverError("special-interpretation conditions need multiset heats");
  std::vector<SideCondition> out;

  SideCondition canon{"structure-canonical", true, ""};
  for (const CellDecl& c : structure_cells(trs.signature.sorts())) {
    CellInterp ci = I.lookup(c);
    if (!same_currents(ci, canonical_structure(c, I.heat_domain)) || !ci.heat.is_zero()) {
      canon.holds = false;
      canon.witness = c.name + " is not interpreted canonically with zero heat";
      break;
    }
  }
  out.push_back(canon);

  SideCondition proj{"projection-dominated", true, ""};
  SideCondition above{"output-above-heat", true, ""};
  for (const OpDecl& op : trs.signature.ops()) {
    CellInterp ci = I.lookup(CellDecl::algebra(op));
    const Poly& out_current = ci.currents.at(0);
    for (std::size_t i = 0; i < op.arity() && proj.holds; ++i)
      if (!domain_geq(out_current, Poly::var(standard_var(i)), I.domain)) {
        proj.holds = false;
        proj.witness = op.name + ": " + to_string(out_current) + " >= " + standard_var(i) +
                       " not certified";
      }
    if (above.holds && !heat_gt(in_domain(HeatExpr::of_bag({out_current}), I.domain),
                                in_domain(ci.heat, I.domain))) {
      above.holds = false;
      above.witness = op.name + ": {" + to_string(out_current) + "} > " + to_string(ci.heat) +
                      " not certified";
    }
  }
  out.push_back(proj);
  out.push_back(above);

  SideCondition dup{"heat-above-duplicated-input", true, ""};
  for (const auto& [key, k] : cls.k_table) {
    if (k < 2) continue;
    CellInterp ci = I.lookup(CellDecl::algebra(trs.signature.op(key.first)));
    HeatExpr xi = HeatExpr::of_bag({Poly::var(standard_var(key.second - 1))});
    if (!heat_gt(in_domain(ci.heat, I.domain), in_domain(xi, I.domain))) {
      dup.holds = false;
      dup.witness = key.first + ": " + to_string(ci.heat) + " > {" + standard_var(key.second - 1) +
                    "} not certified (K = " + std::to_string(k) + ")";
      break;
    }
  }
  out.push_back(dup);
  return out;
}

// -- verification --------------------------------------------------------------------

const CheckResult* Certificate::first_failure() const {
  std::size_t strict = strict_cells.size();
  for (std::size_t i = 0; i < checks.size(); ++i)
    if (!checks[i].passes(i < strict ? CheckMode::strict : CheckMode::weak)) return &checks[i];
  return nullptr;
}

namespace {

void add_notes(Certificate& cert, const Interpretation& I) {
  if (I.domain == Domain::positive)
    cert.notes.push_back("currents range over the positive integers (inputs shifted by one)");
  cert.notes.push_back(
      "comparisons use a sound but incomplete corner test; unknown does not mean "
      "non-terminating");
  if (cert.strict_cells.empty()) cert.notes.push_back("vacuous: no rules");
  if (!cert.bounds.empty())
    cert.notes.push_back("bounds are candidates read off the interpretation, not certified");
}

}  // namespace

Certificate verify(const Trs& trs, const Interpretation& I, std::optional<Route> requested) {
  TrsClass cls = classify(trs);
  ProofObligation ob = dispatch(cls, trs, requested, I.heat_domain);
  Certificate cert;
  cert.route = ob.route;
  cert.interpretation = I;
  for (const ThreeCell& c : ob.strict_cells) cert.strict_cells.emplace_back(c.name, to_string(c.family));
  for (const ThreeCell& c : ob.weak_cells) cert.weak_cells.emplace_back(c.name, to_string(c.family));

  bool ok = true;
  for (const ThreeCell& c : ob.strict_cells) {
    cert.checks.push_back(check_cell(c, I, CheckMode::strict));
    ok = ok && cert.checks.back().passes(CheckMode::strict);
  }
  for (const ThreeCell& c : ob.weak_cells) {
    cert.checks.push_back(check_cell(c, I, CheckMode::weak));
    ok = ok && cert.checks.back().passes(CheckMode::weak);
  }
  if (ob.route == Route::nondup) cert.side_conditions.push_back(tau_swap(trs, I));
  if (ob.route == Route::special)
    for (SideCondition& sc : check_special_conditions(trs, cls, I))
      cert.side_conditions.push_back(std::move(sc));
  if (I.domain == Domain::positive) cert.side_conditions.push_back(preserves_positive(trs, I));
  for (const SideCondition& sc : cert.side_conditions) ok = ok && sc.holds;

  cert.verdict = ok ? Verdict::terminating : Verdict::unknown;
  if (ok && ob.route == Route::functional) {
    for (const OpDecl& op : trs.signature.ops()) {
      if (!cls.functions.count(op.name)) continue;
      CellInterp ci = I.lookup(CellDecl::algebra(op));
      cert.bounds.push_back({op.name, to_string(ci.currents.at(0)), to_string(ci.heat)});
    }
  }
  add_notes(cert, I);
  return cert;
}

// -- search -----------------------------------------------------------------------------

namespace {

std::vector<Monomial> template_monomials(std::size_t arity, unsigned degree) {
  std::vector<Monomial> out{Monomial{}};
  std::function<void(std::size_t, unsigned, Monomial&)> grow = [&](std::size_t from, unsigned left,
                                                                   Monomial& m) {
    for (std::size_t v = from; v < arity && left > 0; ++v) {
      ++m[standard_var(v)];
      out.push_back(m);
      grow(v, left - 1, m);
      if (--m[standard_var(v)] == 0) m.erase(standard_var(v));
    }
  };
  Monomial m;
  grow(0, degree, m);
  std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    unsigned da = 0, db = 0;
    for (const auto& [_, e] : a) da += e;
    for (const auto& [_, e] : b) db += e;
    return da < db;
  });
  return out;
}

struct Slot {
  std::string op;
  bool heat = false;
  Monomial mono;
};

}  // namespace

Certificate search(const Trs& trs, const SearchBounds& bounds, const std::vector<Route>& routes) {
  if (bounds.budget == 0) throw ProverError("search budget must be positive");
  TrsClass cls = classify(trs);
  std::optional<Route> route;
  for (Route r : routes)
    if (!route_blocker(r, cls, bounds.heat)) {
      route = r;
      break;
    }
  if (!route) {
    Certificate cert;
    cert.notes.push_back("no requested route applies to this system");
    cert.stats = SearchStats{0, bounds.budget, false};
    return cert;
  }
  ProofObligation ob = dispatch(cls, trs, route, bounds.heat);

  std::set<std::string> zero_heat;
  for (const ThreeCell& c : ob.weak_cells)
    if (c.concerns == CellKind::dup) zero_heat.insert(c.op);

  std::vector<Slot> slots;
  for (const OpDecl& op : trs.signature.ops()) {
    auto monos = template_monomials(op.arity(), bounds.max_degree);
    for (const Monomial& m : monos) slots.push_back({op.name, false, m});
    if (!zero_heat.count(op.name))
      for (const Monomial& m : monos) slots.push_back({op.name, true, m});
  }

  Interpretation base;
  base.domain = bounds.domain;
  base.heat_domain = bounds.heat;
  for (const OpDecl& op : trs.signature.ops())
    base.cells[op.name] = CellInterp{{Poly(0)}, HeatExpr::zero(bounds.heat)};

  auto build = [&](const std::vector<std::int64_t>& coeffs) {
    Interpretation I = base;
    std::map<std::string, Poly> heats;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (coeffs[k] == 0) continue;
      Poly term;
      term.add_term(slots[k].mono, coeffs[k]);
      if (slots[k].heat)
        heats[slots[k].op] += term;
      else
        I.cells[slots[k].op].currents[0] += term;
    }
    for (auto& [op, h] : heats)
      I.cells[op].heat = bounds.heat == HeatDomain::scalar ? HeatExpr::of(h) : HeatExpr::of_bag({h});
    return I;
  };

  auto accepts = [&](const Interpretation& I) {
    for (const ThreeCell& c : ob.strict_cells)
      if (!check_cell(c, I, CheckMode::strict).passes(CheckMode::strict)) return false;
    for (const ThreeCell& c : ob.weak_cells)
      if (!check_cell(c, I, CheckMode::weak).passes(CheckMode::weak)) return false;
    return true;
  };

  SearchStats stats{0, bounds.budget, false};
  std::optional<Certificate> found;
  std::vector<std::int64_t> coeffs(slots.size(), 0);
  // coefficient vectors by total weight, then lexicographically
  std::function<bool(std::size_t, std::int64_t)> fill = [&](std::size_t k, std::int64_t left) {
    if (k == slots.size()) {
      if (left != 0) return false;
      if (stats.candidates == bounds.budget) {
        stats.budget_exhausted = true;
        return true;
      }
      ++stats.candidates;
      Interpretation I = build(coeffs);
      if (!accepts(I)) return false;
      Certificate cert = verify(trs, I, route);
      if (cert.verdict != Verdict::terminating) return false;
      found = std::move(cert);
      return true;
    }
    const std::int64_t rest_cap = static_cast<std::int64_t>(slots.size() - k - 1) * bounds.max_coeff;
    for (std::int64_t c = std::max<std::int64_t>(0, left - rest_cap);
         c <= std::min(bounds.max_coeff, left); ++c) {
      coeffs[k] = c;
      if (fill(k + 1, left - c)) return true;
    }
    coeffs[k] = 0;
    return false;
  };
  const std::int64_t max_weight = static_cast<std::int64_t>(slots.size()) * bounds.max_coeff;
  for (std::int64_t w = 0; w <= max_weight && !found && !stats.budget_exhausted; ++w) fill(0, w);

  if (found) {
    found->stats = stats;
    return *found;
  }
  Certificate cert;
  cert.route = *route;
  for (const ThreeCell& c : ob.strict_cells) cert.strict_cells.emplace_back(c.name, to_string(c.family));
  for (const ThreeCell& c : ob.weak_cells) cert.weak_cells.emplace_back(c.name, to_string(c.family));
  cert.interpretation = base;
  cert.stats = stats;
  cert.notes.push_back(stats.budget_exhausted ? "search budget exhausted"
                                              : "no candidate within the bounds works");
  return cert;
}

nlohmann::json to_json(const Certificate& cert) {
  auto cells = [](const std::vector<std::pair<std::string, std::string>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [name, family] : v) a.push_back({{"name", name}, {"family", family}});
    return a;
  };
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& r : cert.checks) checks.push_back(to_json(r));
  nlohmann::json sides = nlohmann::json::array();
  for (const SideCondition& sc : cert.side_conditions) {
    nlohmann::json s{{"name", sc.name}, {"holds", sc.holds}};
    if (!sc.witness.empty()) s["witness"] = sc.witness;
    sides.push_back(s);
  }
  nlohmann::json bounds = nlohmann::json::array();
  for (const Bound& b : cert.bounds)
    bounds.push_back(
        {{"function", b.function}, {"size", b.size}, {"time", b.time}, {"status", "candidate"}});
  nlohmann::json stats = nullptr;
  if (cert.stats)
    stats = {{"candidates", cert.stats->candidates},
             {"budget", cert.stats->budget},
             {"budget_exhausted", cert.stats->budget_exhausted}};
  return {{"verdict", cert.verdict == Verdict::terminating ? "terminating" : "unknown"},
          {"route", to_string(cert.route)},
          {"obligation", {{"strict", cells(cert.strict_cells)}, {"weak", cells(cert.weak_cells)}}},
          {"interpretation", to_json(cert.interpretation)},
          {"checks", checks},
          {"side_conditions", sides},
          {"bounds", bounds},
          {"stats", stats},
          {"notes", cert.notes}};
}

}  // namespace polyterm
