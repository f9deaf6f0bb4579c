#include "polyterm/poly.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace polyterm {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw PolyError("coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw PolyError("coefficient overflow");
  return r;
}

unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [_, e] : m) d += e;
  return d;
}

std::pair<std::string_view, std::string_view> split_suffix(std::string_view s) {
  std::size_t k = s.size();
  while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
  return {s.substr(0, k), s.substr(k)};
}

}  // namespace

bool VarLess::operator()(const std::string& a, const std::string& b) const {
  auto [pa, na] = split_suffix(a);
  auto [pb, nb] = split_suffix(b);
  if (pa != pb) return pa < pb;
  // compare digit strings numerically: shorter (after leading zeros) is smaller
  auto strip = [](std::string_view n) {
    while (n.size() > 1 && n[0] == '0') n.remove_prefix(1);
    return n;
  };
  std::string_view sa = strip(na), sb = strip(nb);
  if (sa.size() != sb.size()) return sa.size() < sb.size();
  if (sa != sb) return sa < sb;
  return a < b;
}

Poly::Poly(std::int64_t c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::var(const std::string& name) {
  Poly p;
  p.terms_.emplace(Monomial{{name, 1}}, 1);
  return p;
}

void Poly::add_term(const Monomial& m, std::int64_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second = checked_add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

std::int64_t Poly::constant() const { return coeff({}); }

std::int64_t Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

std::vector<std::string> Poly::variables() const {
  std::set<std::string, VarLess> vars;
  for (const auto& [m, _] : terms_)
    for (const auto& [v, e] : m) vars.insert(v);
  return {vars.begin(), vars.end()};
}

unsigned Poly::degree() const {
  unsigned d = 0;
  for (const auto& [m, _] : terms_) d = std::max(d, total_degree(m));
  return d;
}

bool Poly::nonnegative_coefficients() const {
  for (const auto& [_, c] : terms_)
    if (c < 0) return false;
  return true;
}

Poly Poly::operator-() const {
  Poly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, checked_mul(c, -1));
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      out.add_term(m, checked_mul(ca, cb));
    }
  return out;
}

Poly Poly::pow(unsigned e) const {
  Poly out(1);
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

Poly Poly::substitute(const std::map<std::string, Poly>& sigma) const {
  Poly out;
  for (const auto& [m, c] : terms_) {
    Poly term(c);
    for (const auto& [v, e] : m) {
      auto it = sigma.find(v);
      term = term * (it == sigma.end() ? Poly::var(v) : it->second).pow(e);
    }
    out += term;
  }
  return out;
}

std::int64_t Poly::eval(const std::map<std::string, std::int64_t>& point) const {
  std::int64_t sum = 0;
  for (const auto& [m, c] : terms_) {
    std::int64_t t = c;
    for (const auto& [v, e] : m) {
      auto it = point.find(v);
      if (it == point.end()) throw PolyError("no value for variable '" + v + "'");
      for (unsigned k = 0; k < e; ++k) t = checked_mul(t, it->second);
    }
    sum = checked_add(sum, t);
  }
  return sum;
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Monomial, std::int64_t>> terms(p.terms().begin(), p.terms().end());
  // higher degree first; within a degree, higher powers of earlier variables first
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    unsigned da = total_degree(a.first), db = total_degree(b.first);
    if (da != db) return da > db;
    auto ia = a.first.begin(), ib = b.first.begin();
    for (; ia != a.first.end() && ib != b.first.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return VarLess{}(ia->first, ib->first);
      if (ia->second != ib->second) return ia->second > ib->second;
    }
    return false;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    std::int64_t mag = c < 0 ? -c : c;
    if (first)
      out << (c < 0 ? "-" : "");
    else
      out << (c < 0 ? " - " : " + ");
    first = false;
    bool wrote = false;
    if (mag != 1 || m.empty()) {
      out << mag;
      wrote = true;
    }
    for (const auto& [v, e] : m) {
      if (wrote) out << "*";
      out << v;
      if (e > 1) out << "^" << e;
      wrote = true;
    }
  }
  return out.str();
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : s_(text) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw PolyError("polynomial '" + std::string(s_) + "': " + what + " at offset " +
                    std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  std::int64_t integer() {
    skip();
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_])))
      fail("expected an integer");
    std::int64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
      v = checked_add(checked_mul(v, 10), s_[i_++] - '0');
    return v;
  }
  Poly expr() {
    Poly p = term();
    for (;;) {
      if (eat('+'))
        p = p + term();
      else if (eat('-'))
        p = p - term();
      else
        return p;
    }
  }
  Poly term() {
    Poly p = unary();
    while (eat('*')) p = p * unary();
    return p;
  }
  Poly unary() {
    if (eat('-')) return -unary();
    Poly base = atom();
    if (eat('^')) {
      std::int64_t e = integer();
      if (e > 64) fail("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }
  Poly atom() {
    skip();
    if (eat('(')) {
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) return Poly(integer());
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      std::size_t start = i_;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
      return Poly::var(std::string(s_.substr(start, i_ - start)));
    }
    fail("expected a term");
  }
};

// Every corner: each variable either 0 or shifted by one.
template <class Check>
bool all_corners(const Poly& d, Check check) {
  std::vector<std::string> vars = d.variables();
  if (vars.size() > 20) return false;
  for (std::uint32_t mask = 0; mask < (1u << vars.size()); ++mask) {
    std::map<std::string, Poly> sigma;
    for (std::size_t k = 0; k < vars.size(); ++k)
      sigma[vars[k]] = (mask >> k) & 1u ? Poly::var(vars[k]) + Poly(1) : Poly(0);
    if (!check(d.substitute(sigma))) return false;
  }
  return true;
}

}  // namespace

Poly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

std::string standard_var(std::size_t i) { return "x" + std::to_string(i + 1); }

std::vector<std::string> standard_vars(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(standard_var(i));
  return out;
}

bool poly_geq(const Poly& p, const Poly& q) {
  return all_corners(p - q, [](const Poly& c) { return c.nonnegative_coefficients(); });
}

bool poly_gt(const Poly& p, const Poly& q) {
  return all_corners(p - q, [](const Poly& c) {
    return c.nonnegative_coefficients() && c.constant() >= 1;
  });
}

Poly shift_positive(const Poly& p) {
  std::map<std::string, Poly> sigma;
  for (const std::string& v : p.variables()) sigma[v] = Poly::var(v) + Poly(1);
  return p.substitute(sigma);
}

}  // namespace polyterm
