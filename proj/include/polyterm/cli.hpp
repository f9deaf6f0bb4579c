#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polyterm/engine.hpp"
#include "polyterm/prover.hpp"

namespace polyterm {

enum class Mode { verify, search, translate, classify, normalize };
enum class OutputFormat { text, json };

struct RunConfig {
  std::string input;
  std::optional<TrsFormat> format;  // guessed from the extension when unset
  Mode mode = Mode::search;
  std::string interp_path;
  SearchBounds bounds;
  std::optional<Route> route;
  std::optional<Domain> domain;
  std::optional<HeatDomain> heat;
  std::string cells = "all";
  OutputFormat output = OutputFormat::text;
  std::size_t fuel = kDefaultFuel;
  std::string term;  // normalize
  bool verbose = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnknown = 1;
inline constexpr int kExitError = 2;

// Runs one mode; diagnostics go to `err`, reports to `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Command-line front end over run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Human-readable certificate.
std::string report_text(const Certificate& cert);

CellSet parse_cell_set(const std::string& text);

}  // namespace polyterm
