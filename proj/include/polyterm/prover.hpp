#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyterm/classify.hpp"
#include "polyterm/interp.hpp"
#include "polyterm/translation.hpp"

namespace polyterm {

class ProverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// In priority order.
enum class Route { planar_linear, special, nondup, functional, partial, general };

inline constexpr Route kAllRoutes[] = {Route::planar_linear, Route::special,  Route::nondup,
                                       Route::functional,    Route::partial,  Route::general};

std::string to_string(Route r);        // "R-FUNCTIONAL"
std::string route_option(Route r);     // "functional"
Route parse_route(const std::string& s);  // accepts either spelling

struct ProofObligation {
  Route route = Route::general;
  std::vector<ThreeCell> strict_cells;
  std::vector<ThreeCell> weak_cells;
  std::vector<std::string> side_conditions;
};

// Empty when the route applies, otherwise the failing hypothesis.
std::optional<std::string> route_blocker(Route r, const TrsClass& cls, HeatDomain heat);

// Weakest applicable obligation, or the requested route when its hypotheses hold.
ProofObligation dispatch(const TrsClass& cls, const Trs& trs, std::optional<Route> requested,
                         HeatDomain heat = HeatDomain::scalar);

struct SideCondition {
  std::string name;
  bool holds = false;
  std::string witness;
};

std::vector<SideCondition> check_special_conditions(const Trs& trs, const TrsClass& cls,
                                                    const Interpretation& interp);

struct Bound {
  std::string function;
  std::string size;
  std::string time;
};

struct SearchStats {
  std::size_t candidates = 0;
  std::size_t budget = 0;
  bool budget_exhausted = false;
};

enum class Verdict { terminating, unknown };

struct Certificate {
  Verdict verdict = Verdict::unknown;
  Route route = Route::general;
  std::vector<std::pair<std::string, std::string>> strict_cells;  // (name, family)
  std::vector<std::pair<std::string, std::string>> weak_cells;
  Interpretation interpretation;
  std::vector<CheckResult> checks;
  std::vector<SideCondition> side_conditions;
  std::vector<Bound> bounds;
  std::optional<SearchStats> stats;
  std::vector<std::string> notes;

  const CheckResult* first_failure() const;
};

Certificate verify(const Trs& trs, const Interpretation& interp,
                   std::optional<Route> requested = std::nullopt);

enum class Template { affine, quadratic };

struct SearchBounds {
  unsigned max_degree = 2;
  std::int64_t max_coeff = 3;
  std::size_t budget = 200000;  // candidate interpretations
  Domain domain = Domain::naturals;
  HeatDomain heat = HeatDomain::scalar;
};

// Tries the routes in order and searches under the first whose hypotheses hold.
Certificate search(const Trs& trs, const SearchBounds& bounds,
                   const std::vector<Route>& routes = {std::begin(kAllRoutes),
                                                       std::end(kAllRoutes)});

nlohmann::json to_json(const Certificate& cert);

}  // namespace polyterm
