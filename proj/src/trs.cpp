#include "polyterm/trs.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace polyterm {

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

// -- Signature --------------------------------------------------------------

void Signature::add_sort(const Sort& sort) {
  if (sort.empty()) throw TrsError("empty sort name");
  if (!has_sort(sort)) sorts_.push_back(sort);
}

void Signature::add_op(OpDecl op) {
  if (op.name.empty()) throw TrsError("empty operation name");
  if (find_op(op.name) != nullptr)
    throw TrsError("duplicate operation '" + op.name + "'");
  for (const auto& s : op.inputs)
    if (!has_sort(s))
      throw TrsError("operation '" + op.name + "' uses undeclared sort '" + s +
                     "'");
  if (!has_sort(op.output))
    throw TrsError("operation '" + op.name + "' uses undeclared sort '" +
                   op.output + "'");
  op_index_.emplace(op.name, ops_.size());
  ops_.push_back(std::move(op));
}

bool Signature::has_sort(const Sort& sort) const {
  return std::find(sorts_.begin(), sorts_.end(), sort) != sorts_.end();
}

const OpDecl* Signature::find_op(std::string_view name) const {
  auto it = op_index_.find(name);
  return it == op_index_.end() ? nullptr : &ops_[it->second];
}

const OpDecl& Signature::op(std::string_view name) const {
  const OpDecl* d = find_op(name);
  if (d == nullptr) throw TrsError("unknown operation '" + std::string(name) + "'");
  return *d;
}

// -- Term -------------------------------------------------------------------

Term Term::var(std::string name, Sort sort) {
  Term t;
  t.name = std::move(name);
  t.sort = std::move(sort);
  t.is_var = true;
  return t;
}

Term Term::app(std::string op, Sort sort, std::vector<Term> args) {
  Term t;
  t.name = std::move(op);
  t.sort = std::move(sort);
  t.args = std::move(args);
  return t;
}

std::string to_string(const Position& pos) {
  if (pos.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(pos[i] + 1);
  }
  return out;
}

std::string to_string(const Term& t) {
  if (t.is_var || t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ",";
    out += to_string(t.args[i]);
  }
  return out + ")";
}

namespace {

void check_term(const Term& t, const Signature& sig,
                std::map<std::string, Sort>& var_sorts) {
  if (t.is_var) {
    if (!t.args.empty()) throw TrsError("variable '" + t.name + "' has arguments");
    if (!sig.has_sort(t.sort))
      throw TrsError("variable '" + t.name + "' has undeclared sort");
    auto [it, fresh] = var_sorts.emplace(t.name, t.sort);
    if (!fresh && it->second != t.sort)
      throw TrsError("variable '" + t.name + "' used at two sorts");
    return;
  }
  const OpDecl& op = sig.op(t.name);
  if (op.arity() != t.args.size())
    throw TrsError("operation '" + t.name + "' expects " +
                   std::to_string(op.arity()) + " arguments");
  if (op.output != t.sort) throw TrsError("ill-sorted term at '" + t.name + "'");
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (t.args[i].sort != op.inputs[i])
      throw TrsError("ill-sorted argument " + std::to_string(i + 1) + " of '" +
                     t.name + "'");
    check_term(t.args[i], sig, var_sorts);
  }
}

}  // namespace

void Trs::validate() const {
  std::set<std::string> names;
  for (const Rule& r : rules) {
    if (!names.insert(r.name).second)
      throw TrsError("duplicate rule name '" + r.name + "'");
    if (r.lhs.is_var)
      throw TrsError("rule " + r.name + ": left-hand side is a variable");
    std::map<std::string, Sort> var_sorts;
    check_term(r.lhs, signature, var_sorts);
    check_term(r.rhs, signature, var_sorts);
    if (r.lhs.sort != r.rhs.sort)
      throw TrsError("rule " + r.name + ": sides have different sorts");
    for (const Term& v : distinct_vars(r.rhs))
      if (count_var(r.lhs, v.name) == 0)
        throw TrsError("rule " + r.name + ": variable '" + v.name +
                       "' of the right-hand side is not in the left-hand side");
  }
}

// -- TPDB parsing -----------------------------------------------------------

namespace {

struct Token {
  enum Kind { lparen, rparen, comma, arrow, ident, end } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token tok{Token::end, "", line_, column_};
    if (pos_ >= text_.size()) return tok;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      tok.kind = Token::lparen;
    } else if (c == ')') {
      advance();
      tok.kind = Token::rparen;
    } else if (c == ',') {
      advance();
      tok.kind = Token::comma;
    } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      advance();
      advance();
      tok.kind = Token::arrow;
    } else {
      tok.kind = Token::ident;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
            d == ',')
          break;
        if (d == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
        tok.text += d;
        advance();
      }
    }
    return tok;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// Untyped term as read from TPDB text; sorts are attached afterwards.
struct RawTerm {
  std::string name;
  std::vector<RawTerm> args;
  bool has_parens = false;
  std::size_t line = 0;
  std::size_t column = 0;
};

class TpdbParser {
 public:
  explicit TpdbParser(std::string_view text) : lexer_(text) { shift(); }

  Trs parse() {
    std::vector<std::pair<RawTerm, RawTerm>> raw_rules;
    std::vector<Token> rule_starts;
    while (tok_.kind != Token::end) {
      expect(Token::lparen, "'('");
      if (tok_.kind != Token::ident) fail("expected a section keyword");
      std::string keyword = tok_.text;
      shift();
      if (keyword == "VAR") {
        while (tok_.kind == Token::ident) {
          vars_.insert(tok_.text);
          shift();
        }
        expect(Token::rparen, "')' closing VAR");
      } else if (keyword == "RULES") {
        while (tok_.kind != Token::rparen) {
          if (tok_.kind == Token::end) fail("unterminated RULES section");
          rule_starts.push_back(tok_);
          RawTerm lhs = parse_raw();
          expect(Token::arrow, "'->'");
          RawTerm rhs = parse_raw();
          if (tok_.kind == Token::ident && tok_.text == "|")
            fail("conditional rules are not supported");
          raw_rules.emplace_back(std::move(lhs), std::move(rhs));
        }
        shift();
      } else if (keyword == "COMMENT") {
        skip_balanced();
      } else {
        fail("unsupported section '" + keyword + "'");
      }
    }
    return build(raw_rules, rule_starts);
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.column);
  }

  void expect(Token::Kind kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    shift();
  }

  void skip_balanced() {
    int depth = 1;
    while (depth > 0) {
      if (tok_.kind == Token::end) fail("unterminated section");
      if (tok_.kind == Token::lparen) ++depth;
      if (tok_.kind == Token::rparen) --depth;
      shift();
    }
  }

  RawTerm parse_raw() {
    if (tok_.kind != Token::ident) fail("expected a term");
    RawTerm t;
    t.name = tok_.text;
    t.line = tok_.line;
    t.column = tok_.column;
    shift();
    if (tok_.kind == Token::lparen) {
      t.has_parens = true;
      shift();
      if (tok_.kind != Token::rparen) {
        t.args.push_back(parse_raw());
        while (tok_.kind == Token::comma) {
          shift();
          t.args.push_back(parse_raw());
        }
      }
      expect(Token::rparen, "')'");
    }
    return t;
  }

  void collect_ops(const RawTerm& t, std::vector<std::string>& order,
                   std::map<std::string, std::size_t>& arity) {
    if (vars_.count(t.name)) {
      if (t.has_parens)
        throw ParseError("variable '" + t.name + "' applied to arguments", t.line,
                         t.column);
      return;
    }
    auto [it, fresh] = arity.emplace(t.name, t.args.size());
    if (fresh) {
      order.push_back(t.name);
    } else if (it->second != t.args.size()) {
      throw ParseError("operation '" + t.name + "' used with arities " +
                           std::to_string(it->second) + " and " +
                           std::to_string(t.args.size()),
                       t.line, t.column);
    }
    for (const auto& a : t.args) collect_ops(a, order, arity);
  }

  Term to_term(const RawTerm& t, const Sort& sort) const {
    if (vars_.count(t.name)) return Term::var(t.name, sort);
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(to_term(a, sort));
    return Term::app(t.name, sort, std::move(args));
  }

  Trs build(const std::vector<std::pair<RawTerm, RawTerm>>& raw_rules,
            const std::vector<Token>& starts) {
    std::vector<std::string> order;
    std::map<std::string, std::size_t> arity;
    for (const auto& [l, r] : raw_rules) {
      collect_ops(l, order, arity);
      collect_ops(r, order, arity);
    }
    Trs trs;
    const Sort sort(kDefaultSort);
    if (!order.empty()) trs.signature.add_sort(sort);
    for (const auto& name : order)
      trs.signature.add_op({name, std::vector<Sort>(arity[name], sort), sort});
    for (std::size_t i = 0; i < raw_rules.size(); ++i) {
      const auto& [l, r] = raw_rules[i];
      Rule rule{"r" + std::to_string(i + 1), to_term(l, sort), to_term(r, sort)};
      if (rule.lhs.is_var)
        throw ParseError("left-hand side is a variable", starts[i].line,
                         starts[i].column);
      for (const Term& v : distinct_vars(rule.rhs))
        if (count_var(rule.lhs, v.name) == 0)
          throw ParseError("variable '" + v.name +
                               "' of the right-hand side is not in the left-hand side",
                           starts[i].line, starts[i].column);
      trs.rules.push_back(std::move(rule));
    }
    trs.validate();
    return trs;
  }

  Lexer lexer_;
  Token tok_{Token::end, "", 1, 1};
  std::set<std::string> vars_;
};

// -- sorted JSON --------------------------------------------------------------

Term json_term(const nlohmann::json& j, const Signature& sig,
               std::optional<Sort> expected, std::map<std::string, Sort>& vars,
               const std::string& rule) {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    auto it = vars.find(name);
    if (!expected) {
      throw TrsError("rule " + rule + ": variable '" + name +
                     "' at the root of a left-hand side");
    }
    if (it != vars.end() && it->second != *expected)
      throw TrsError("rule " + rule + ": variable '" + name +
                     "' used at two sorts");
    if (it == vars.end()) vars.emplace(name, *expected);
    return Term::var(name, *expected);
  }
  if (!j.is_array() || j.empty() || !j[0].is_string())
    throw TrsError("rule " + rule + ": terms are [op, args...] arrays or variable strings");
  const OpDecl* op = sig.find_op(j[0].get<std::string>());
  if (op == nullptr)
    throw TrsError("rule " + rule + ": unknown operation '" +
                   j[0].get<std::string>() + "'");
  if (j.size() - 1 != op->arity())
    throw TrsError("rule " + rule + ": operation '" + op->name + "' expects " +
                   std::to_string(op->arity()) + " arguments");
  if (expected && *expected != op->output)
    throw TrsError("rule " + rule + ": ill-sorted occurrence of '" + op->name + "'");
  std::vector<Term> args;
  for (std::size_t i = 0; i < op->arity(); ++i)
    args.push_back(json_term(j[i + 1], sig, op->inputs[i], vars, rule));
  return Term::app(op->name, op->output, std::move(args));
}

nlohmann::json term_json(const Term& t) {
  if (t.is_var) return t.name;
  nlohmann::json j = nlohmann::json::array();
  j.push_back(t.name);
  for (const auto& a : t.args) j.push_back(term_json(a));
  return j;
}

}  // namespace

Trs parse_tpdb(std::string_view text) { return TpdbParser(text).parse(); }

Trs parse_sorted_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset only; report it as column on line 1 of the flattened input
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("invalid JSON", line, col);
  }
  try {
    Trs trs;
    for (const auto& s : j.at("sorts")) trs.signature.add_sort(s.get<std::string>());
    for (const auto& o : j.at("ops"))
      trs.signature.add_op({o.at("name").get<std::string>(),
                            o.value("inputs", std::vector<std::string>{}),
                            o.at("output").get<std::string>()});
    std::size_t idx = 0;
    for (const auto& r : j.value("rules", nlohmann::json::array())) {
      ++idx;
      std::string name = r.value("name", "r" + std::to_string(idx));
      std::map<std::string, Sort> vars;
      Term lhs = json_term(r.at("lhs"), trs.signature, std::nullopt, vars, name);
      Term rhs = json_term(r.at("rhs"), trs.signature, lhs.sort, vars, name);
      trs.rules.push_back({name, std::move(lhs), std::move(rhs)});
    }
    trs.validate();
    return trs;
  } catch (const nlohmann::json::exception& e) {
    throw TrsError(std::string("malformed sorted JSON: ") + e.what());
  }
}

Trs parse_trs(std::string_view text, TrsFormat format) {
  return format == TrsFormat::tpdb ? parse_tpdb(text) : parse_sorted_json(text);
}

nlohmann::json to_json(const Trs& trs) {
  nlohmann::json j;
  j["sorts"] = trs.signature.sorts();
  j["ops"] = nlohmann::json::array();
  for (const auto& op : trs.signature.ops())
    j["ops"].push_back({{"name", op.name}, {"inputs", op.inputs}, {"output", op.output}});
  j["rules"] = nlohmann::json::array();
  for (const auto& r : trs.rules)
    j["rules"].push_back(
        {{"name", r.name}, {"lhs", term_json(r.lhs)}, {"rhs", term_json(r.rhs)}});
  return j;
}

Term parse_term(std::string_view text, const Signature& sig,
                const std::map<std::string, Sort>& vars) {
  Lexer lexer(text);
  Token tok = lexer.next();
  auto shift = [&] { tok = lexer.next(); };
  std::function<Term(std::optional<Sort>)> term = [&](std::optional<Sort> expected) {
    if (tok.kind != Token::ident) throw ParseError("expected a term", tok.line, tok.column);
    Token head = tok;
    shift();
    auto v = vars.find(head.text);
    const OpDecl* op = v == vars.end() ? sig.find_op(head.text) : nullptr;
    if (op == nullptr) {
      if (tok.kind == Token::lparen)
        throw ParseError("unknown operation '" + head.text + "'", head.line, head.column);
      Sort s = v != vars.end() ? v->second
                               : (expected ? *expected
                                           : (sig.sorts().size() == 1
                                                  ? sig.sorts()[0]
                                                  : throw ParseError("cannot infer sort of '" + head.text + "'",
                                                                     head.line, head.column)));
      if (expected && s != *expected)
        throw ParseError("ill-sorted variable '" + head.text + "'", head.line, head.column);
      return Term::var(head.text, s);
    }
    std::vector<Term> args;
    if (tok.kind == Token::lparen) {
      shift();
      if (tok.kind != Token::rparen) {
        args.push_back(term(op->inputs.empty() ? std::nullopt
                                               : std::optional<Sort>(op->inputs[0])));
        while (tok.kind == Token::comma) {
          shift();
          std::size_t k = args.size();
          args.push_back(term(k < op->inputs.size() ? std::optional<Sort>(op->inputs[k])
                                                    : std::nullopt));
        }
      }
      if (tok.kind != Token::rparen) throw ParseError("expected ')'", tok.line, tok.column);
      shift();
    }
    if (args.size() != op->arity())
      throw ParseError("operation '" + op->name + "' expects " +
                           std::to_string(op->arity()) + " arguments",
                       head.line, head.column);
    if (expected && op->output != *expected)
      throw ParseError("ill-sorted occurrence of '" + op->name + "'", head.line, head.column);
    return Term::app(op->name, op->output, std::move(args));
  };
  Term t = term(std::nullopt);
  if (tok.kind != Token::end) throw ParseError("trailing input", tok.line, tok.column);
  return t;
}

// -- term utilities -----------------------------------------------------------

namespace {

void collect_occurrences(const Term& t, std::vector<Term>& out) {
  if (t.is_var) {
    out.push_back(t);
    return;
  }
  for (const auto& a : t.args) collect_occurrences(a, out);
}

void collect_positions(const Term& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    cur.push_back(i);
    collect_positions(t.args[i], cur, out);
    cur.pop_back();
  }
}

bool match_into(const Term& pattern, const Term& t, Substitution& sigma) {
  if (pattern.is_var) {
    if (pattern.sort != t.sort) return false;
    auto [it, fresh] = sigma.emplace(pattern.name, t);
    return fresh || it->second == t;
  }
  if (t.is_var || pattern.name != t.name || pattern.args.size() != t.args.size())
    return false;
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (!match_into(pattern.args[i], t.args[i], sigma)) return false;
  return true;
}

}  // namespace

std::vector<Term> var_occurrences(const Term& t) {
  std::vector<Term> out;
  collect_occurrences(t, out);
  return out;
}

std::vector<Term> distinct_vars(const Term& t) {
  std::vector<Term> out;
  for (Term& v : var_occurrences(t)) {
    bool seen = std::any_of(out.begin(), out.end(),
                            [&](const Term& w) { return w.name == v.name; });
    if (!seen) out.push_back(std::move(v));
  }
  return out;
}

std::size_t count_var(const Term& t, std::string_view name) {
  if (t.is_var) return t.name == name ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : t.args) n += count_var(a, name);
  return n;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& a : t.args) n += term_size(a);
  return n;
}

std::size_t term_depth(const Term& t) {
  std::size_t d = 0;
  for (const auto& a : t.args) d = std::max(d, term_depth(a));
  return d + 1;
}

bool is_ground(const Term& t) {
  if (t.is_var) return false;
  return std::all_of(t.args.begin(), t.args.end(), is_ground);
}

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  collect_positions(t, cur, out);
  return out;
}

const Term& subterm(const Term& t, const Position& pos) {
  const Term* cur = &t;
  for (std::size_t i : pos) {
    if (i >= cur->args.size()) throw TrsError("position " + to_string(pos) + " out of range");
    cur = &cur->args[i];
  }
  return *cur;
}

Term replace_at(const Term& t, const Position& pos, Term replacement) {
  Term out = t;
  Term* cur = &out;
  for (std::size_t i : pos) {
    if (i >= cur->args.size()) throw TrsError("position " + to_string(pos) + " out of range");
    cur = &cur->args[i];
  }
  *cur = std::move(replacement);
  return out;
}

Term substitute(const Term& t, const Substitution& sigma) {
  if (t.is_var) {
    auto it = sigma.find(t.name);
    return it == sigma.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, sigma);
  return out;
}

std::optional<Substitution> match(const Term& pattern, const Term& t) {
  Substitution sigma;
  if (!match_into(pattern, t, sigma)) return std::nullopt;
  return sigma;
}

std::vector<Step> rewrite_steps(const Trs& trs, const Term& t) {
  std::vector<Step> out;
  std::vector<Position> ps = positions(t);
  for (std::size_t r = 0; r < trs.rules.size(); ++r) {
    const Rule& rule = trs.rules[r];
    for (const Position& p : ps) {
      const Term& sub = subterm(t, p);
      if (sub.is_var) continue;
      if (auto sigma = match(rule.lhs, sub))
        out.push_back({r, p, replace_at(t, p, substitute(rule.rhs, *sigma))});
    }
  }
  return out;
}

std::vector<std::string> defined_symbols(const Trs& trs) {
  std::set<std::string> roots;
  for (const auto& r : trs.rules) roots.insert(r.lhs.name);
  std::vector<std::string> out;
  for (const auto& op : trs.signature.ops())
    if (roots.count(op.name)) out.push_back(op.name);
  return out;
}

std::vector<Term> ground_terms(const Signature& sig, std::size_t max_size) {
  // by_size[n][sort] = ground terms of exactly n symbols
  std::vector<std::map<Sort, std::vector<Term>>> by_size(max_size + 1);
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const OpDecl& op : sig.ops()) {
      // distribute n - 1 symbols over the arguments
      std::function<void(std::size_t, std::size_t, std::vector<Term>&)> fill =
          [&](std::size_t arg, std::size_t left, std::vector<Term>& args) {
            if (arg == op.arity()) {
              if (left == 0) by_size[n][op.output].push_back(Term::app(op.name, op.output, args));
              return;
            }
            for (std::size_t k = 1; k <= left; ++k) {
              auto it = by_size[k].find(op.inputs[arg]);
              if (it == by_size[k].end()) continue;
              for (const Term& sub : it->second) {
                args.push_back(sub);
                fill(arg + 1, left - k, args);
                args.pop_back();
              }
            }
          };
      std::vector<Term> args;
      fill(0, n - 1, args);
    }
  }
  std::vector<Term> out;
  for (std::size_t n = 1; n <= max_size; ++n)
    for (const Sort& s : sig.sorts())
      if (auto it = by_size[n].find(s); it != by_size[n].end())
        out.insert(out.end(), it->second.begin(), it->second.end());
  return out;
}

}  // namespace polyterm
