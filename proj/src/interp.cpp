#include "polyterm/interp.hpp"

#include <algorithm>
#include <functional>

namespace polyterm {

std::string to_string(Domain d) { return d == Domain::naturals ? "N" : "N+"; }
std::string to_string(HeatDomain h) { return h == HeatDomain::scalar ? "N" : "multiset"; }

Domain parse_domain(const std::string& s) {
  if (s == "N") return Domain::naturals;
  if (s == "N+") return Domain::positive;
  throw InterpError("unknown domain '" + s + "' (expected N or N+)");
}

HeatDomain parse_heat_domain(const std::string& s) {
  if (s == "N") return HeatDomain::scalar;
  if (s == "multiset") return HeatDomain::multiset;
  throw InterpError("unknown heat domain '" + s + "' (expected N or multiset)");
}

// -- heats --------------------------------------------------------------------

HeatExpr HeatExpr::of_bag(std::vector<Poly> entries) {
  HeatExpr h{HeatDomain::multiset, {}, {}};
  h.bag = std::move(entries);
  std::sort(h.bag.begin(), h.bag.end());
  return h;
}

HeatExpr HeatExpr::substitute(const std::map<std::string, Poly>& sigma) const {
  HeatExpr out{domain, scalar.substitute(sigma), {}};
  for (const Poly& p : bag) out.bag.push_back(p.substitute(sigma));
  std::sort(out.bag.begin(), out.bag.end());
  return out;
}

HeatExpr HeatExpr::shifted() const {
  HeatExpr out{domain, shift_positive(scalar), {}};
  for (const Poly& p : bag) out.bag.push_back(shift_positive(p));
  std::sort(out.bag.begin(), out.bag.end());
  return out;
}

HeatExpr operator+(const HeatExpr& a, const HeatExpr& b) {
  if (a.domain != b.domain) throw InterpError("mixed heat domains");
  HeatExpr out{a.domain, a.scalar + b.scalar, a.bag};
  out.bag.insert(out.bag.end(), b.bag.begin(), b.bag.end());
  std::sort(out.bag.begin(), out.bag.end());
  return out;
}

std::string to_string(const HeatExpr& h) {
  if (h.domain == HeatDomain::scalar) return to_string(h.scalar);
  std::string out = "{";
  for (std::size_t i = 0; i < h.bag.size(); ++i) {
    if (i) out += ", ";
    out += to_string(h.bag[i]);
  }
  return out + "}";
}

namespace {

// Sufficient multiset comparison: pair entries of b with distinct entries of a
// that dominate them; each unpaired b entry must sit strictly below an a entry
// that is unpaired or strictly above its partner.
bool bag_compare(const std::vector<Poly>& a, const std::vector<Poly>& b, bool strict) {
  if (a.size() + b.size() > 16) return false;
  std::vector<std::vector<char>> geq(a.size(), std::vector<char>(b.size()));
  std::vector<std::vector<char>> gt(a.size(), std::vector<char>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      gt[i][j] = poly_gt(a[i], b[j]);
      geq[i][j] = gt[i][j] || poly_geq(a[i], b[j]);
    }
  std::vector<int> partner(b.size(), -1);
  std::vector<char> taken(a.size(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t j) -> bool {
    if (j == b.size()) {
      // a entries that may dominate unpaired b entries
      std::vector<char> free(a.size(), 0);
      bool any = false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!taken[i]) free[i] = 1;
      for (std::size_t k = 0; k < b.size(); ++k)
        if (partner[k] >= 0 && gt[partner[k]][k]) free[partner[k]] = 1;
      for (std::size_t i = 0; i < a.size(); ++i) any = any || free[i];
      if (strict && !any) return false;
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (partner[k] >= 0) continue;
        bool dominated = false;
        for (std::size_t i = 0; i < a.size() && !dominated; ++i) dominated = free[i] && gt[i][k];
        if (!dominated) return false;
      }
      return true;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (taken[i] || !geq[i][j]) continue;
      taken[i] = 1;
      partner[j] = static_cast<int>(i);
      if (go(j + 1)) return true;
      taken[i] = 0;
      partner[j] = -1;
    }
    return go(j + 1);
  };
  return go(0);
}

}  // namespace

bool heat_geq(const HeatExpr& a, const HeatExpr& b) {
  if (a.domain != b.domain) throw InterpError("comparing heats of different domains");
  if (a.domain == HeatDomain::scalar) return poly_geq(a.scalar, b.scalar);
  return bag_compare(a.bag, b.bag, false);
}

bool heat_gt(const HeatExpr& a, const HeatExpr& b) {
  if (a.domain != b.domain) throw InterpError("comparing heats of different domains");
  if (a.domain == HeatDomain::scalar) return poly_gt(a.scalar, b.scalar);
  return bag_compare(a.bag, b.bag, true);
}

// -- interpretations ---------------------------------------------------------------

CellInterp canonical_structure(const CellDecl& cell, HeatDomain heat) {
  CellInterp ci{{}, HeatExpr::zero(heat)};
  switch (cell.kind) {
    case CellKind::swap:
      ci.currents = {Poly::var("x2"), Poly::var("x1")};
      break;
    case CellKind::dup:
      ci.currents = {Poly::var("x1"), Poly::var("x1")};
      break;
    case CellKind::erase:
      break;
    case CellKind::algebra:
      throw InterpError("no canonical interpretation for algebra cell '" + cell.name + "'");
  }
  return ci;
}

namespace {

const char* generic_key(CellKind k) {
  switch (k) {
    case CellKind::swap:
      return "tau";
    case CellKind::dup:
      return "delta";
    case CellKind::erase:
      return "eps";
    case CellKind::algebra:
      break;
  }
  return nullptr;
}

}  // namespace

bool Interpretation::has(const CellDecl& cell) const {
  if (cells.count(cell.name)) return true;
  return cell.is_structure();
}

CellInterp Interpretation::lookup(const CellDecl& cell) const {
  auto it = cells.find(cell.name);
  if (it == cells.end() && cell.is_structure()) it = cells.find(generic_key(cell.kind));
  if (it == cells.end()) {
    if (cell.is_structure()) return canonical_structure(cell, heat_domain);
    throw InterpError("no interpretation for cell '" + cell.name + "'");
  }
  if (it->second.currents.size() != cell.target.size())
    throw InterpError("cell '" + cell.name + "' needs " + std::to_string(cell.target.size()) +
                      " current(s), got " + std::to_string(it->second.currents.size()));
  return it->second;
}

Interpretation interpretation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InterpError("interpretation must be a JSON object");
  Interpretation I;
  if (j.contains("domain")) I.domain = parse_domain(j.at("domain").get<std::string>());
  if (j.contains("heat_domain"))
    I.heat_domain = parse_heat_domain(j.at("heat_domain").get<std::string>());
  if (!j.contains("cells")) return I;
  for (const auto& [name, entry] : j.at("cells").items()) {
    CellInterp ci{{}, HeatExpr::zero(I.heat_domain)};
    auto poly = [&](const nlohmann::json& v) {
      Poly p = v.is_number_integer() ? Poly(v.get<std::int64_t>())
                                     : parse_poly(v.get<std::string>());
      if (!p.nonnegative_coefficients())
        throw InterpError("cell '" + name + "': negative coefficient in '" + to_string(p) + "'");
      return p;
    };
    if (entry.contains("currents"))
      for (const auto& c : entry.at("currents")) ci.currents.push_back(poly(c));
    if (entry.contains("heat")) {
      const auto& h = entry.at("heat");
      if (h.is_array()) {
        if (I.heat_domain != HeatDomain::multiset)
          throw InterpError("cell '" + name + "': bag heat requires heat_domain multiset");
        std::vector<Poly> entries;
        for (const auto& e : h) entries.push_back(poly(e));
        ci.heat = HeatExpr::of_bag(std::move(entries));
      } else {
        Poly p = poly(h);
        if (I.heat_domain == HeatDomain::scalar)
          ci.heat = HeatExpr::of(p);
        else if (!p.is_zero())
          ci.heat = HeatExpr::of_bag({p});
      }
    }
    I.cells.emplace(name, std::move(ci));
  }
  return I;
}

nlohmann::json to_json(const Interpretation& I) {
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [name, ci] : I.cells) {
    nlohmann::json currents = nlohmann::json::array();
    for (const Poly& p : ci.currents) currents.push_back(to_string(p));
    nlohmann::json heat;
    if (ci.heat.domain == HeatDomain::scalar) {
      heat = to_string(ci.heat.scalar);
    } else {
      heat = nlohmann::json::array();
      for (const Poly& p : ci.heat.bag) heat.push_back(to_string(p));
    }
    cells[name] = {{"currents", currents}, {"heat", heat}};
  }
  return {{"domain", to_string(I.domain)},
          {"heat_domain", to_string(I.heat_domain)},
          {"cells", cells}};
}

// -- evaluation ---------------------------------------------------------------------

Evaluation evaluate(const TwoPath& f, const Interpretation& I) {
  std::vector<std::vector<Poly>> out(f.size());
  std::vector<Poly> inputs;
  for (std::size_t k = 0; k < f.source().size(); ++k) inputs.push_back(Poly::var(standard_var(k)));
  auto value = [&](const Endpoint& e) -> const Poly& {
    return e.is_boundary() ? inputs[e.port] : out[e.node][e.port];
  };
  HeatExpr heat = HeatExpr::zero(I.heat_domain);
  for (std::size_t n = 0; n < f.size(); ++n) {
    const Node& node = f.node(n);
    CellInterp ci = I.lookup(node.cell);
    std::map<std::string, Poly> sigma;
    for (std::size_t q = 0; q < node.inputs.size(); ++q)
      sigma.emplace(standard_var(q), value(node.inputs[q]));
    for (const Poly& c : ci.currents) out[n].push_back(c.substitute(sigma));
    heat = heat + ci.heat.substitute(sigma);
  }
  Evaluation ev{{}, std::move(heat)};
  for (const Endpoint& e : f.outputs()) ev.currents.push_back(value(e));
  return ev;
}

std::vector<Poly> eval_currents(const TwoPath& f, const Interpretation& I) {
  return evaluate(f, I).currents;
}

HeatExpr eval_heat(const TwoPath& f, const Interpretation& I) { return evaluate(f, I).heat; }

std::string to_string(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::strict:
      return "strict";
    case CheckVerdict::weak:
      return "weak";
    case CheckVerdict::fail:
      return "fail";
  }
  return "?";
}

bool domain_geq(const Poly& p, const Poly& q, Domain d) {
  return d == Domain::naturals ? poly_geq(p, q) : poly_geq(shift_positive(p), shift_positive(q));
}

bool domain_gt(const Poly& p, const Poly& q, Domain d) {
  return d == Domain::naturals ? poly_gt(p, q) : poly_gt(shift_positive(p), shift_positive(q));
}

CheckResult check_cell(const ThreeCell& c, const Interpretation& I, CheckMode mode) {
  Evaluation s = evaluate(c.source, I);
  Evaluation t = evaluate(c.target, I);
  CheckResult r{c.name, c.family, CheckVerdict::fail, s.currents, t.currents, s.heat, t.heat, ""};
  for (std::size_t k = 0; k < s.currents.size(); ++k)
    if (!domain_geq(s.currents[k], t.currents[k], I.domain)) {
      r.witness = "current " + std::to_string(k + 1) + ": " + to_string(s.currents[k]) +
                  " >= " + to_string(t.currents[k]) + " not certified";
      return r;
    }
  HeatExpr sh = I.domain == Domain::positive ? s.heat.shifted() : s.heat;
  HeatExpr th = I.domain == Domain::positive ? t.heat.shifted() : t.heat;
  if (heat_gt(sh, th)) {
    r.verdict = CheckVerdict::strict;
  } else if (heat_geq(sh, th)) {
    r.verdict = CheckVerdict::weak;
    if (mode == CheckMode::strict)
      r.witness = "heat: " + to_string(s.heat) + " > " + to_string(t.heat) + " not certified";
  } else {
    r.witness = "heat: " + to_string(s.heat) + " >= " + to_string(t.heat) + " not certified";
  }
  return r;
}

nlohmann::json to_json(const CheckResult& r) {
  auto polys = [](const std::vector<Poly>& ps) {
    nlohmann::json a = nlohmann::json::array();
    for (const Poly& p : ps) a.push_back(to_string(p));
    return a;
  };
  nlohmann::json j{{"cell", r.cell},
                   {"family", to_string(r.family)},
                   {"verdict", to_string(r.verdict)},
                   {"source_currents", polys(r.source_currents)},
                   {"target_currents", polys(r.target_currents)},
                   {"source_heat", to_string(r.source_heat)},
                   {"target_heat", to_string(r.target_heat)}};
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

}  // namespace polyterm
