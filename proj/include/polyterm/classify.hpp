#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polyterm/circuit.hpp"
#include "polyterm/trs.hpp"

namespace polyterm {

struct CriticalPair {
  Term peak;
  Term left;   // outer rule applied at the root
  Term right;  // inner rule applied at `position`
  Position position;
  std::pair<std::string, std::string> rules;  // (outer, inner)
};

struct TrsClass {
  bool left_linear = true;
  bool linear = true;
  bool planar = true;
  bool non_duplicating = true;
  // Every critical pair is trivial. Local confluence would be enough for the
  // functional route, but only this stronger property is acted upon.
  bool weakly_orthogonal = true;
  bool functional_program = false;
  std::set<std::string> constructors;
  std::set<std::string> functions;
  // Structure cells absent from every translated rule side.
  std::set<CellKind> unused_structure;
  // (function, 1-based argument index) -> K_i
  std::map<std::pair<std::string, std::size_t>, std::size_t> k_table;
};

TrsClass classify(const Trs& trs);

std::optional<Substitution> unify(const Term& a, const Term& b);

std::vector<CriticalPair> critical_pairs(const Trs& trs);
bool is_weakly_orthogonal(const Trs& trs);

nlohmann::json to_json(const TrsClass& cls);
nlohmann::json to_json(const CriticalPair& cp);

}  // namespace polyterm
