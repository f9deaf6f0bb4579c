#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyterm/circuit.hpp"
#include "polyterm/poly.hpp"
#include "polyterm/translation.hpp"

namespace polyterm {

class InterpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Domain { naturals, positive };        // X = N or N+
enum class HeatDomain { scalar, multiset };      // M = N or [X]

std::string to_string(Domain d);
std::string to_string(HeatDomain h);
Domain parse_domain(const std::string& s);
HeatDomain parse_heat_domain(const std::string& s);

// A heat value: one polynomial, or a finite multiset of polynomials.
struct HeatExpr {
  HeatDomain domain = HeatDomain::scalar;
  Poly scalar;
  std::vector<Poly> bag;  // kept sorted

  static HeatExpr zero(HeatDomain d) { return {d, {}, {}}; }
  static HeatExpr of(Poly p) { return {HeatDomain::scalar, std::move(p), {}}; }
  static HeatExpr of_bag(std::vector<Poly> entries);

  bool is_zero() const { return domain == HeatDomain::scalar ? scalar.is_zero() : bag.empty(); }
  HeatExpr substitute(const std::map<std::string, Poly>& sigma) const;
  HeatExpr shifted() const;  // x -> x + 1 everywhere

  friend HeatExpr operator+(const HeatExpr& a, const HeatExpr& b);
  friend bool operator==(const HeatExpr&, const HeatExpr&) = default;
};

std::string to_string(const HeatExpr& h);

bool heat_geq(const HeatExpr& a, const HeatExpr& b);
bool heat_gt(const HeatExpr& a, const HeatExpr& b);

// Interpretation of one 2-cell, over variables x1..xm for its m inputs.
struct CellInterp {
  std::vector<Poly> currents;
  HeatExpr heat;
};

struct Interpretation {
  Domain domain = Domain::naturals;
  HeatDomain heat_domain = HeatDomain::scalar;
  // Cell names, or the generic keys "tau", "delta", "eps" for every sort.
  std::map<std::string, CellInterp> cells;

  // Structure cells fall back to swap / diagonal / erase with zero heat.
  CellInterp lookup(const CellDecl& cell) const;
  bool has(const CellDecl& cell) const;
};

CellInterp canonical_structure(const CellDecl& cell, HeatDomain heat);

Interpretation interpretation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Interpretation& interp);

struct Evaluation {
  std::vector<Poly> currents;
  HeatExpr heat;
};

// Global inputs are the variables x1..xk.
Evaluation evaluate(const TwoPath& f, const Interpretation& interp);
std::vector<Poly> eval_currents(const TwoPath& f, const Interpretation& interp);
HeatExpr eval_heat(const TwoPath& f, const Interpretation& interp);

enum class CheckMode { strict, weak };
enum class CheckVerdict { strict, weak, fail };

std::string to_string(CheckVerdict v);

struct CheckResult {
  std::string cell;
  Family family = Family::computation;
  CheckVerdict verdict = CheckVerdict::fail;
  std::vector<Poly> source_currents, target_currents;
  HeatExpr source_heat, target_heat;
  std::string witness;  // empty unless something failed to certify

  bool passes(CheckMode mode) const {
    return mode == CheckMode::strict ? verdict == CheckVerdict::strict
                                     : verdict != CheckVerdict::fail;
  }
};

// Comparisons honour interp.domain (positive inputs are shifted first).
CheckResult check_cell(const ThreeCell& c, const Interpretation& interp, CheckMode mode);

// geq / gt under the interpretation's current domain.
bool domain_geq(const Poly& p, const Poly& q, Domain d);
bool domain_gt(const Poly& p, const Poly& q, Domain d);

nlohmann::json to_json(const CheckResult& r);

}  // namespace polyterm
