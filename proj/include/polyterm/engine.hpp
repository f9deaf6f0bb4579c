#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyterm/circuit.hpp"
#include "polyterm/translation.hpp"

namespace polyterm {

// A convex embedding of cells[cell].source into a host circuit.
struct Match {
  std::size_t cell = 0;
  // image[i] is the host node playing pattern node i
  std::vector<std::size_t> image;

  std::string digest() const;
};

struct TraceStep {
  std::string cell;
  std::string match;
  TwoPath result;
};

struct RewriteTrace {
  TwoPath initial;
  std::vector<TraceStep> steps;

  const TwoPath& last() const { return steps.empty() ? initial : steps.back().result; }
};

enum class Strategy { any, leftmost_innermost };

struct NormalizeResult {
  TwoPath result;
  RewriteTrace trace;
  bool exhausted = false;
};

inline constexpr std::size_t kDefaultFuel = 10000;
inline constexpr std::size_t kDefaultCycleBound = 50000;

std::vector<Match> find_redexes(const TwoPath& f, const std::vector<ThreeCell>& cells);
// Matches of one cell only; `cell_index` is recorded in each Match.
std::vector<Match> find_matches(const TwoPath& f, const TwoPath& pattern, std::size_t cell_index);

TwoPath apply(const TwoPath& f, const std::vector<ThreeCell>& cells, const Match& m);

NormalizeResult normalize(const TwoPath& f, const std::vector<ThreeCell>& cells,
                          Strategy strategy = Strategy::any, std::size_t fuel = kDefaultFuel);

bool is_normal(const TwoPath& f, const std::vector<ThreeCell>& cells);

struct NormalForms {
  std::vector<TwoPath> forms;  // one per deformation class, in discovery order
  std::size_t states = 0;
  bool complete = true;  // false when the state bound was hit
};

// Explores every reduction path (all strategies) up to `bound` distinct states.
NormalForms all_normal_forms(const TwoPath& f, const std::vector<ThreeCell>& cells,
                             std::size_t bound = kDefaultCycleBound);

std::optional<RewriteTrace> detect_cycle(const TwoPath& f, const std::vector<ThreeCell>& cells,
                                         std::size_t bound = kDefaultCycleBound);

nlohmann::json to_json(const RewriteTrace& trace);

}  // namespace polyterm
