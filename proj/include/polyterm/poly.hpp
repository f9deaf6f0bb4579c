#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polyterm {

class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Orders x2 before x10: alphabetic prefix first, then the numeric suffix.
struct VarLess {
  bool operator()(const std::string& a, const std::string& b) const;
};

// variable -> exponent (exponents are >= 1)
using Monomial = std::map<std::string, unsigned, VarLess>;

// Multivariate polynomial with integer coefficients. Differences need
// negative coefficients; interpretations themselves only use naturals.
class Poly {
 public:
  Poly() = default;
  Poly(std::int64_t c);  // NOLINT: constants convert implicitly
  static Poly var(const std::string& name);

  bool is_zero() const { return terms_.empty(); }
  std::int64_t constant() const;
  std::int64_t coeff(const Monomial& m) const;
  const std::map<Monomial, std::int64_t>& terms() const { return terms_; }
  std::vector<std::string> variables() const;
  unsigned degree() const;
  bool nonnegative_coefficients() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly pow(unsigned e) const;

  // Simultaneous substitution; unmapped variables stay.
  Poly substitute(const std::map<std::string, Poly>& sigma) const;
  std::int64_t eval(const std::map<std::string, std::int64_t>& point) const;

  friend bool operator==(const Poly&, const Poly&) = default;
  friend auto operator<=>(const Poly&, const Poly&) = default;

  void add_term(const Monomial& m, std::int64_t c);

 private:
  std::map<Monomial, std::int64_t> terms_;
};

// Terms by degree descending, then by variable order: "x1*x2 + 2*x2 + 1".
std::string to_string(const Poly& p);

// Integers, identifiers, + - * ^ and parentheses.
Poly parse_poly(std::string_view text);

// x1, ..., xn
std::vector<std::string> standard_vars(std::size_t n);
std::string standard_var(std::size_t i);  // 0-based: standard_var(0) = "x1"

// Sound tests over the naturals. False means "not certified".
bool poly_geq(const Poly& p, const Poly& q);
bool poly_gt(const Poly& p, const Poly& q);

// Substitutes x -> x + 1 for every variable (restriction to positive inputs).
Poly shift_positive(const Poly& p);

}  // namespace polyterm
