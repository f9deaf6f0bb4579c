#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyterm/circuit.hpp"
#include "polyterm/trs.hpp"

namespace polyterm {

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which family a 3-cell belongs to. `delta2` is used for structure cells
// pushing past an algebra cell when no constructor/function split applies.
enum class Family { computation, delta1, delta2, delta2_constructor, delta2_function };

std::string to_string(Family family);
bool is_delta2(Family family);

// A rewrite rule on circuits.
struct ThreeCell {
  std::string name;
  TwoPath source;
  TwoPath target;
  Family family = Family::computation;
  // Structure 2-cell kind a Delta3-2 cell pushes (swap/dup/erase).
  std::optional<CellKind> concerns;
  // Algebra cell a Delta3-2 cell pushes past.
  std::string op;
};

// Selects 3-cell families; computation cells are always included.
struct CellSet {
  bool delta1 = false;
  bool constructors = false;
  bool functions = false;
  // When set, Delta3-2 cells are kept only if they concern one of these kinds.
  std::optional<std::set<CellKind>> concerning;

  static CellSet computation_only() { return {}; }
  static CellSet delta2() { return {false, true, true, std::nullopt}; }
  static CellSet all() { return {true, true, true, std::nullopt}; }
  static CellSet program() { return {false, true, false, std::nullopt}; }
};

struct Polygraph {
  std::vector<Sort> sorts;
  std::vector<CellDecl> algebra_cells;
  std::vector<CellDecl> structure_cells;
  std::vector<ThreeCell> cells;

  std::size_t count(Family family) const;
};

// Term-to-circuit translation over the variable family `xs`.
struct TermTranslation {
  TwoPath path;
  // Node index in `path` of every operation occurrence of the term.
  std::map<Position, std::size_t> node_at;
};

TermTranslation translate_term_traced(const Signature& sig, const Term& u,
                                      const std::vector<Term>& xs);
TwoPath translate_term(const Signature& sig, const Term& u, const std::vector<Term>& xs);

// delta_x : x => x x
TwoPath structure_dup(const OnePath& x);
// eps_x : x => *
TwoPath structure_erase(const OnePath& x);
// tau_{x,zeta} : x zeta => zeta x
TwoPath structure_swap(const OnePath& x, const Sort& zeta);
// tau_{x,y} : x y => y x, moving the wires of y leftwards one at a time.
TwoPath structure_swap(const OnePath& x, const OnePath& y);

// Canonical structure circuit sending input `sources[k]` to output k:
// erasures and right-comb duplications first, then the permutation bringing
// each output into place from the right. Copies of one wire never cross.
TwoPath structure_map(const OnePath& inputs, const std::vector<std::size_t>& sources);

// One 3-cell per rule; the variable family is the lhs variables left to right.
// Throws TranslationError on a non-left-linear rule.
std::vector<ThreeCell> gen_computation(const Trs& trs);

// The 2m + 2 cells pushing tau, delta and eps past the algebra cell `phi`.
std::vector<ThreeCell> gen_delta2(const CellDecl& phi, const std::vector<Sort>& sorts);

// The m(m^2 + 6m + 5) cells among structure 2-cells.
std::vector<ThreeCell> gen_delta1(const std::vector<Sort>& sorts);

// Structure 2-cells: one tau per ordered sort pair, one delta and eps per sort.
std::vector<CellDecl> structure_cells(const std::vector<Sort>& sorts);

// Throws TranslationError when the constructor/function split is requested
// for a system that is not a first-order functional program.
Polygraph build_polygraph(const Trs& trs, const CellSet& cells);

// Counts of the full standard translation: p + 2n(m+1) + m(m^2+6m+5).
std::size_t standard_cell_count(std::size_t rules, std::size_t ops, std::size_t sorts);

nlohmann::json to_json(const Polygraph& pg);

}  // namespace polyterm
