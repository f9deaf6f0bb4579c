#include <doctest.h>

#include <algorithm>

#include "polyterm/classify.hpp"
#include "polyterm/translation.hpp"
#include "support.hpp"

using namespace polyterm;
using namespace testing_support;

namespace {
const Sort kNat = "o";
TwoPath gen(const CellDecl& c) { return TwoPath::generator(c); }
TwoPath id(std::size_t n) { return TwoPath::identity(OnePath(n, kNat)); }
std::vector<Term> vars(std::initializer_list<const char*> names) {
  std::vector<Term> out;
  for (auto n : names) out.push_back(Term::var(n, kNat));
  return out;
}
std::size_t count_kind(const TwoPath& f, CellKind k) {
  return std::count_if(f.nodes().begin(), f.nodes().end(), [&](const Node& n) { return n.cell.kind == k; });
}
std::size_t count_name(const TwoPath& f, const std::string& name) {
  return std::count_if(f.nodes().begin(), f.nodes().end(), [&](const Node& n) { return n.cell.name == name; });
}
const ThreeCell& find_cell(const std::vector<ThreeCell>& cells, const std::string& name) {
  for (auto& c : cells)
    if (c.name == name) return c;
  throw std::runtime_error("no cell " + name);
}

// Output k of a structure circuit reads input result[k].
std::vector<std::size_t> wiring(const TwoPath& f) {
  std::vector<std::size_t> out;
  std::function<std::size_t(Endpoint)> back = [&](Endpoint e) -> std::size_t {
    if (e.is_boundary()) return e.port;
    const Node& n = f.node(e.node);
    if (n.cell.kind == CellKind::swap) return back(n.inputs[1 - e.port]);
    return back(n.inputs[0]);
  };
  for (auto& e : f.outputs()) out.push_back(back(e));
  return out;
}

std::vector<ThreeCell> delta1_only() { return gen_delta1({kNat}); }
}  // namespace

TEST_CASE("term translations") {
  Trs div = load("division"), ar = load("arith");
  auto s = CellDecl::algebra(div.signature.op("s"));
  auto a = CellDecl::algebra(ar.signature.op("A"));

  auto sx = translate_term(div.signature, parse_term("s(x)", div.signature, {{"x", kNat}}), vars({"x", "y"}));
  CHECK(eq_mod_deformation(sx, compose0(gen(s), gen(CellDecl::erase(kNat)))));

  auto axx = translate_term(ar.signature, parse_term("A(x, x)", ar.signature), vars({"x"}));
  CHECK(eq_mod_deformation(axx, compose1(gen(CellDecl::dup(kNat)), gen(a))));

  auto ayx = translate_term(ar.signature, parse_term("A(x, y)", ar.signature), vars({"y", "x"}));
  CHECK(eq_mod_deformation(ayx, compose1(gen(CellDecl::swap(kNat, kNat)), gen(a))));

  CHECK_THROWS(translate_term(ar.signature, parse_term("A(x, y)", ar.signature), vars({"x"})));
}

TEST_CASE("structure circuits by induction") {
  CHECK(eq_mod_deformation(structure_dup({}), id(0)));
  CHECK(eq_mod_deformation(structure_dup({kNat}), gen(CellDecl::dup(kNat))));
  CHECK(structure_erase({kNat, kNat}).size() == 2);
  auto sw = structure_swap(OnePath{kNat, kNat}, kNat);
  CHECK(sw.size() == 2);
  CHECK(count_kind(sw, CellKind::swap) == 2);
  CHECK(sw.source() == OnePath(3, kNat));
  CHECK(wiring(sw) == std::vector<std::size_t>{2, 0, 1});

  // two ways of building the same block swap agree on the wiring
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t m = 0; m <= 3; ++m) {
      OnePath x(n, kNat), y(m, kNat);
      std::vector<std::size_t> want;
      for (std::size_t k = 0; k < m; ++k) want.push_back(n + k);
      for (std::size_t k = 0; k < n; ++k) want.push_back(k);
      auto t = structure_swap(x, y);
      CHECK(wiring(t) == want);
      CHECK(count_kind(t, CellKind::swap) == n * m);
      CHECK(eq_mod_deformation(t, structure_map(concat(x, y), want)));
    }

  // duplication: the copies come out as x then x, each input read twice
  for (std::size_t n = 0; n <= 4; ++n) {
    auto d = structure_dup(OnePath(n, kNat));
    std::vector<std::size_t> want;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t k = 0; k < n; ++k) want.push_back(k);
    CHECK(wiring(d) == want);
    CHECK(count_kind(d, CellKind::dup) == n);
  }
}

TEST_CASE("structure_map realises its wiring and is normal") {
  auto d1 = delta1_only();
  std::mt19937 rng(3);
  for (int k = 0; k < 300; ++k) {
    std::size_t inputs = rng() % 4, outputs = rng() % 5;
    if (inputs == 0) outputs = 0;
    std::vector<std::size_t> src;
    for (std::size_t o = 0; o < outputs; ++o) src.push_back(rng() % inputs);
    auto f = structure_map(OnePath(inputs, kNat), src);
    CHECK(wiring(f) == src);
    CHECK(is_normal(f, d1));
    CHECK_FALSE(f.has_algebra());
  }
}

TEST_CASE("computation cells") {
  Trs dbl = load("double"), div = load("division");
  auto cd = gen_computation(dbl);
  REQUIRE(cd.size() == 2);
  auto s = gen(CellDecl::algebra(dbl.signature.op("s")));
  auto D = gen(CellDecl::algebra(dbl.signature.op("D")));
  CHECK(eq_mod_deformation(cd[1].source, compose1(s, D)));
  CHECK(eq_mod_deformation(cd[1].target, compose1(compose1(D, s), s)));

  auto cq = gen_computation(div);
  CHECK(count_kind(cq[4].target, CellKind::dup) == 1);
  CHECK_FALSE(cq[4].source.has_structure());

  auto ground = gen_computation(parse_tpdb("(RULES a -> b)"));
  CHECK(ground[0].source.size() == 1);
  CHECK_FALSE(ground[0].target.has_structure());

  CHECK_THROWS_AS(gen_computation(parse_tpdb("(VAR x) (RULES f(x, x) -> x)")), TranslationError);
}

TEST_CASE("structure cells past algebra cells") {
  Trs div = load("division");
  auto q = CellDecl::algebra(div.signature.op("Q"));
  auto cells = gen_delta2(q, {kNat});
  CHECK(cells.size() == 4);
  const ThreeCell& dup = find_cell(cells, "Q.delta");
  CHECK(count_name(dup.target, "Q") == 2);
  CHECK(count_kind(dup.target, CellKind::dup) == 2);
  CHECK(count_kind(dup.target, CellKind::swap) == 1);
  CHECK(eq_mod_deformation(dup.source, compose1(gen(q), gen(CellDecl::dup(kNat)))));
  CHECK(eq_mod_deformation(dup.target, compose1(structure_dup({kNat, kNat}), compose0(gen(q), gen(q)))));

  auto zero = CellDecl::algebra(div.signature.op("0"));
  const ThreeCell& ez = find_cell(gen_delta2(zero, {kNat}), "0.eps");
  CHECK(ez.target.empty());
  CHECK(ez.target.source().empty());

  CHECK(gen_delta2(q, {"a", "b"}).size() == 6);
}

TEST_CASE("family counts") {
  CHECK(gen_delta1({kNat}).size() == 12);
  CHECK(gen_delta1({"a", "b"}).size() == 42);
  CHECK(gen_delta1({"a", "b", "c"}).size() == 3 * (9 + 18 + 5));
  CHECK(structure_cells({"a", "b"}).size() == 8);

  auto inv = find_cell(gen_delta1({kNat}), "involution[o,o]");
  auto tau = gen(CellDecl::swap(kNat, kNat));
  CHECK(eq_mod_deformation(inv.source, compose1(tau, tau)));
  CHECK(eq_mod_deformation(inv.target, id(2)));

  Trs div = load("division"), dbl = load("double");
  CHECK(build_polygraph(div, CellSet::all()).cells.size() == 33);
  CHECK(build_polygraph(div, CellSet::program()).cells.size() == 13);
  CHECK(build_polygraph(dbl, CellSet::computation_only()).cells.size() == 2);
  CHECK(standard_cell_count(5, 4, 1) == 33);
  CHECK(standard_cell_count(5, 4, 2) == 5 + 24 + 42);

  CellSet only_dup = CellSet::delta2();
  only_dup.concerning = std::set<CellKind>{CellKind::dup};
  CHECK(build_polygraph(div, only_dup).cells.size() == 5 + 4);

  CHECK_THROWS_AS(build_polygraph(parse_tpdb("(VAR x) (RULES f(x) -> x  g(f(x)) -> x)"), CellSet::program()),
                  TranslationError);
}

TEST_CASE("interfaces and shapes of generated cells") {
  for (auto name : {"double", "division", "arith", "swap"}) {
    Trs t = load(name);
    auto pg = build_polygraph(t, CellSet::all());
    for (auto& c : pg.cells) {
      CHECK(c.source.source() == c.target.source());
      CHECK(c.source.target() == c.target.target());
    }
    TrsClass cls = classify(t);
    if (cls.linear && cls.planar)
      for (auto& c : gen_computation(t)) {
        CHECK_FALSE(c.source.has_structure());
        CHECK_FALSE(c.target.has_structure());
      }
    auto xs = vars({"x", "y"});
    for (auto& u : all_terms(t.signature, {"x", "y"}, 4))
      CHECK(structure_then_algebra(translate_term(t.signature, u, xs)));
  }
}

TEST_CASE("traced translation locates operation nodes") {
  Trs div = load("division");
  Term u = parse_term("Q(s(x), M(x, y))", div.signature);
  auto tr = translate_term_traced(div.signature, u, distinct_vars(u));
  for (auto& p : positions(u)) {
    const Term& sub = subterm(u, p);
    if (sub.is_var) continue;
    CHECK(tr.path.node(tr.node_at.at(p)).cell.name == sub.name);
  }
  CHECK(tr.node_at.size() == 3);
}

TEST_CASE("polygraph json") {
  auto j = to_json(build_polygraph(load("division"), CellSet::all()));
  CHECK(j.dump() == to_json(build_polygraph(load("division"), CellSet::all())).dump());
}
