#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace polyterm {

using Sort = std::string;

// Raised on malformed input text; carries a 1-based line/column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Raised when a signature, term or rule violates well-formedness.
class TrsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OpDecl {
  std::string name;
  std::vector<Sort> inputs;
  Sort output;

  std::size_t arity() const { return inputs.size(); }
  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

// Ordered sorts and operations; insertion order is preserved everywhere.
class Signature {
 public:
  void add_sort(const Sort& sort);
  void add_op(OpDecl op);

  bool has_sort(const Sort& sort) const;
  const OpDecl* find_op(std::string_view name) const;
  const OpDecl& op(std::string_view name) const;

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<OpDecl>& ops() const { return ops_; }

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.sorts_ == b.sorts_ && a.ops_ == b.ops_;
  }

 private:
  std::vector<Sort> sorts_;
  std::vector<OpDecl> ops_;
  std::map<std::string, std::size_t, std::less<>> op_index_;
};

struct Term {
  std::string name;
  Sort sort;
  bool is_var = false;
  std::vector<Term> args;

  static Term var(std::string name, Sort sort);
  static Term app(std::string op, Sort sort, std::vector<Term> args = {});

  friend bool operator==(const Term&, const Term&) = default;
};

// Child indices from the root, 0-based. Printed 1-based ("1.2", root = "e").
using Position = std::vector<std::size_t>;

std::string to_string(const Position& pos);
std::string to_string(const Term& t);

struct Rule {
  std::string name;
  Term lhs;
  Term rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Trs {
  Signature signature;
  std::vector<Rule> rules;

  // Throws TrsError when an invariant of the system is broken.
  void validate() const;

  friend bool operator==(const Trs&, const Trs&) = default;
};

enum class TrsFormat { tpdb, sorted_json };

// The sort used when embedding unsorted TPDB input.
inline constexpr std::string_view kDefaultSort = "o";

Trs parse_trs(std::string_view text, TrsFormat format);
Trs parse_tpdb(std::string_view text);
Trs parse_sorted_json(std::string_view text);
nlohmann::json to_json(const Trs& trs);

// Term built against a signature from the TPDB-style syntax `f(x, g(y))`;
// identifiers listed in `vars` (or not declared as operations) are variables.
Term parse_term(std::string_view text, const Signature& sig,
                const std::map<std::string, Sort>& vars = {});

// -- term utilities ---------------------------------------------------------

// Distinct variables in left-to-right order of first occurrence.
std::vector<Term> distinct_vars(const Term& t);
// Every variable occurrence, left to right.
std::vector<Term> var_occurrences(const Term& t);
// Number of occurrences of variable `name` in `t`.
std::size_t count_var(const Term& t, std::string_view name);

std::size_t term_size(const Term& t);
std::size_t term_depth(const Term& t);
bool is_ground(const Term& t);

// Positions in pre-order.
std::vector<Position> positions(const Term& t);
const Term& subterm(const Term& t, const Position& pos);
Term replace_at(const Term& t, const Position& pos, Term replacement);

using Substitution = std::map<std::string, Term>;

Term substitute(const Term& t, const Substitution& sigma);
// One-way matching: returns sigma with substitute(pattern, sigma) == t.
std::optional<Substitution> match(const Term& pattern, const Term& t);

struct Step {
  std::size_t rule;
  Position position;
  Term result;
};

// All one-step reducts of `t`, in rule order then pre-order position.
std::vector<Step> rewrite_steps(const Trs& trs, const Term& t);

// Operations occurring as the root of some left-hand side, in signature order.
std::vector<std::string> defined_symbols(const Trs& trs);

// All ground terms over `sig` with at most `max_size` symbols, by size.
std::vector<Term> ground_terms(const Signature& sig, std::size_t max_size);

}  // namespace polyterm
