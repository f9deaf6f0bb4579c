#include <doctest.h>

#include "polyterm/classify.hpp"
#include "support.hpp"

using namespace polyterm;
using namespace testing_support;

TEST_CASE("classify: double") {
  TrsClass c = classify(load("double"));
  CHECK(c.linear);
  CHECK(c.planar);
  CHECK(c.left_linear);
  CHECK(c.non_duplicating);
  CHECK(c.functional_program);
  CHECK(c.unused_structure == std::set<CellKind>{CellKind::swap, CellKind::dup, CellKind::erase});
  CHECK(critical_pairs(load("double")).empty());
}

TEST_CASE("classify: division") {
  Trs t = load("division");
  TrsClass c = classify(t);
  CHECK(c.left_linear);
  CHECK_FALSE(c.linear);
  CHECK_FALSE(c.non_duplicating);
  CHECK(c.functional_program);
  CHECK(c.weakly_orthogonal);
  CHECK(c.constructors == std::set<std::string>{"0", "s"});
  CHECK(c.functions == std::set<std::string>{"M", "Q"});
  CHECK(c.unused_structure == std::set<CellKind>{CellKind::swap});
  CHECK(c.k_table.at({"M", 1}) == 1);
  CHECK(c.k_table.at({"M", 2}) == 1);
  CHECK(c.k_table.at({"Q", 1}) == 1);
  CHECK(c.k_table.at({"Q", 2}) == 2);
  CHECK(c.k_table.size() == 4);

  auto cps = critical_pairs(t);
  REQUIRE(cps.size() == 1);
  CHECK(to_string(cps[0].peak) == "M(0,0)");
  CHECK(cps[0].left == cps[0].right);
  CHECK(cps[0].rules == std::pair<std::string, std::string>{"r1", "r2"});
}

TEST_CASE("classify: small systems") {
  auto cps = critical_pairs(parse_tpdb("(RULES f(a) -> a  a -> b)"));
  REQUIRE(cps.size() == 1);
  CHECK(to_string(cps[0].peak) == "f(a)");
  CHECK(cps[0].position == Position{0});
  CHECK_FALSE(is_weakly_orthogonal(parse_tpdb("(RULES a -> b  a -> c)")));

  TrsClass sw = classify(load("swap"));
  CHECK(sw.linear);
  CHECK_FALSE(sw.planar);
  CHECK(sw.non_duplicating);

  // erasing but still planar on the kept variables
  TrsClass er = classify(parse_tpdb("(VAR x y) (RULES f(x, y) -> g(y))"));
  CHECK_FALSE(er.linear);
  CHECK(er.planar);
  CHECK(er.unused_structure.count(CellKind::erase) == 0);

  // a function below a left-hand root breaks the partition
  TrsClass np = classify(parse_tpdb("(VAR x) (RULES f(x) -> x  g(f(x)) -> x)"));
  CHECK_FALSE(np.functional_program);

  TrsClass nl = classify(parse_tpdb("(VAR x) (RULES f(x, x) -> x)"));
  CHECK_FALSE(nl.left_linear);
  CHECK_FALSE(nl.functional_program);

  // ground argument: K is the max over an empty set
  TrsClass g = classify(parse_tpdb("(VAR x) (RULES h(a, x) -> x)"));
  CHECK(g.k_table.at({"h", 1}) == 0);
  CHECK(g.k_table.at({"h", 2}) == 1);
}

namespace {

// Martelli-Montanari with an explicit equation list; independent of the library.
std::optional<Substitution> mm_unify(const Term& a, const Term& b) {
  std::vector<std::pair<Term, Term>> eqs{{a, b}};
  Substitution sol;
  std::function<bool(const std::string&, const Term&)> occurs = [&](const std::string& v, const Term& t) {
    if (t.is_var) return t.name == v;
    for (auto& x : t.args)
      if (occurs(v, x)) return true;
    return false;
  };
  while (!eqs.empty()) {
    auto [s, t] = eqs.back();
    eqs.pop_back();
    if (s == t) continue;
    if (!s.is_var && t.is_var) std::swap(s, t);
    if (s.is_var) {
      if (occurs(s.name, t)) return std::nullopt;
      Substitution one{{s.name, t}};
      for (auto& [l, r] : eqs) {
        l = substitute(l, one);
        r = substitute(r, one);
      }
      for (auto& [k, v] : sol) v = substitute(v, one);
      sol[s.name] = t;
      continue;
    }
    if (s.name != t.name || s.args.size() != t.args.size()) return std::nullopt;
    for (std::size_t i = 0; i < s.args.size(); ++i) eqs.push_back({s.args[i], t.args[i]});
  }
  return sol;
}

Term rename(const Term& t, const std::string& prefix) {
  if (t.is_var) return Term::var(prefix + t.name, t.sort);
  Term r = t;
  for (auto& a : r.args) a = rename(a, prefix);
  return r;
}

// (outer, inner, position) of every overlap.
std::set<std::tuple<std::string, std::string, std::string>> oracle_overlaps(const Trs& trs) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (std::size_t o = 0; o < trs.rules.size(); ++o)
    for (std::size_t i = 0; i < trs.rules.size(); ++i) {
      Term outer = rename(trs.rules[o].lhs, "L"), inner = rename(trs.rules[i].lhs, "R");
      for (auto& p : positions(outer)) {
        const Term& sub = subterm(outer, p);
        if (sub.is_var) continue;
        if (p.empty() && i <= o) continue;
        if (mm_unify(sub, inner)) out.insert({trs.rules[o].name, trs.rules[i].name, to_string(p)});
      }
    }
  return out;
}

std::string random_term(std::mt19937& rng, int depth, const std::vector<std::string>& vars, bool root) {
  std::uniform_int_distribution<int> pick(0, 5);
  int k = pick(rng);
  if (depth == 0 || k == 0) {
    if (!root && !vars.empty() && pick(rng) < 4) return vars[rng() % vars.size()];
    return "a";
  }
  if (k <= 2) return "g(" + random_term(rng, depth - 1, vars, false) + ")";
  return "f(" + random_term(rng, depth - 1, vars, false) + "," + random_term(rng, depth - 1, vars, false) + ")";
}

Trs random_trs(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::string text = "(VAR x y) (RULES ";
  int n = count(rng);
  for (int r = 0; r < n; ++r) {
    std::string lhs = random_term(rng, 3, {"x", "y"}, true);
    std::vector<std::string> present;
    for (std::string v : {"x", "y"})
      if (lhs.find(v) != std::string::npos) present.push_back(v);
    text += lhs + " -> " + random_term(rng, 3, present, false) + " ";
  }
  return parse_tpdb(text + ")");
}

}  // namespace

TEST_CASE("critical pairs agree with a brute-force overlap oracle") {
  std::mt19937 rng(11);
  for (int k = 0; k < 300; ++k) {
    Trs t = random_trs(rng);
    std::set<std::tuple<std::string, std::string, std::string>> got;
    for (auto& cp : critical_pairs(t)) {
      got.insert({cp.rules.first, cp.rules.second, to_string(cp.position)});
      // both sides really are one step from the peak
      bool left = false, right = false;
      for (auto& st : rewrite_steps(t, cp.peak)) {
        left = left || (st.position.empty() && st.result == cp.left);
        right = right || (st.position == cp.position && st.result == cp.right);
      }
      CHECK(left);
      CHECK(right);
    }
    CHECK(got == oracle_overlaps(t));
  }
}

TEST_CASE("classification properties on random systems") {
  std::mt19937 rng(5);
  for (int k = 0; k < 300; ++k) {
    Trs t = random_trs(rng);
    TrsClass c = classify(t);
    if (c.linear) CHECK(c.non_duplicating);
    bool k_small = true;
    for (auto& [key, v] : c.k_table) k_small = k_small && v <= 1;
    if (c.functional_program) {
      CHECK(k_small == c.non_duplicating);
      CHECK(c.left_linear);
      std::set<std::string> all;
      for (auto& op : t.signature.ops()) all.insert(op.name);
      std::set<std::string> joined = c.constructors;
      joined.insert(c.functions.begin(), c.functions.end());
      CHECK(joined == all);
      for (auto& f : c.functions) CHECK(c.constructors.count(f) == 0);
    }
    if (c.linear && c.planar)
      CHECK(c.unused_structure == std::set<CellKind>{CellKind::swap, CellKind::dup, CellKind::erase});
    CHECK(to_json(classify(t)) == to_json(c));
  }
}
