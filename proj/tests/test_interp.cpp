#include <doctest.h>

#include <algorithm>

#include "polyterm/translation.hpp"
#include "support.hpp"

using namespace polyterm;
using namespace testing_support;

namespace {
const Sort kNat = "o";
TwoPath gen(const CellDecl& c) { return TwoPath::generator(c); }
TwoPath id(std::size_t n) { return TwoPath::identity(OnePath(n, kNat)); }
Poly P(const char* s) { return parse_poly(s); }

Interpretation arith_values() {
  Interpretation I;
  I.cells["0"] = {{Poly(1)}, HeatExpr::of(0)};
  I.cells["s"] = {{P("x1 + 1")}, HeatExpr::of(0)};
  I.cells["A"] = {{P("x1 + x2")}, HeatExpr::of(P("x1"))};
  I.cells["M"] = {{P("x1*x2")}, HeatExpr::of(P("(x1 + 1)*x2"))};
  return I;
}

Interpretation division_values() {
  Interpretation I;
  I.cells["0"] = {{Poly(1)}, HeatExpr::of(0)};
  I.cells["s"] = {{P("x1 + 1")}, HeatExpr::of(0)};
  I.cells["M"] = {{P("x1*x2")}, HeatExpr::of(P("x1 + x2"))};
  I.cells["Q"] = {{P("x1 + x2")}, HeatExpr::of(P("x1*x2 + 1"))};
  I.cells["tau"] = {{P("x2"), P("x1")}, HeatExpr::of(P("1"))};
  return I;
}

std::vector<TwoPath> corpus() {
  Trs div = load("division");
  std::vector<CellDecl> gens;
  for (auto& o : div.signature.ops()) gens.push_back(CellDecl::algebra(o));
  for (auto& s : structure_cells({kNat})) gens.push_back(s);
  return enumerate_circuits(gens, 2, 3, 3);
}

// x_{k+1} -> poly, so a circuit's inputs can be renamed to another's outputs.
std::map<std::string, Poly> feed(const std::vector<Poly>& currents, std::size_t offset = 0) {
  std::map<std::string, Poly> sigma;
  for (std::size_t k = 0; k < currents.size(); ++k) sigma[standard_var(k + offset)] = currents[k];
  return sigma;
}

std::vector<Poly> rename(const std::vector<Poly>& ps, std::size_t offset) {
  std::vector<Poly> out;
  std::map<std::string, Poly> sigma;
  for (std::size_t k = 0; k < 8; ++k) sigma[standard_var(k)] = Poly::var(standard_var(k + offset));
  for (auto& p : ps) out.push_back(p.substitute(sigma));
  return out;
}

// Multiset comparison of concrete values: sorted descending, lexicographic.
int compare_bags(std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  if (a == b) return 0;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()) ? 1 : -1;
}
}  // namespace

TEST_CASE("worked evaluations") {
  Trs ar = load("arith");
  auto m = CellDecl::algebra(ar.signature.op("M"));
  auto s = CellDecl::algebra(ar.signature.op("s"));
  auto f = compose1(compose0(id(1), gen(s)), gen(m));
  Interpretation I = arith_values();
  CHECK(eval_currents(f, I) == std::vector<Poly>{P("x1*(x2 + 1)")});
  CHECK(eval_heat(f, I) == HeatExpr::of(P("(x1 + 1)*(x2 + 1)")));
  CHECK(eval_currents(id(2), I) == std::vector<Poly>{P("x1"), P("x2")});
  CHECK(eval_heat(id(2), I).is_zero());
  CHECK(eval_heat(structure_dup({kNat, kNat, kNat}), I).is_zero());

  Interpretation missing;
  CHECK_THROWS_AS(eval_currents(f, missing), InterpError);
}

TEST_CASE("division last rule") {
  Trs div = load("division");
  Interpretation I = load_interp("division");
  auto r5 = gen_computation(div)[4];
  CHECK(eval_currents(r5.source, I) == std::vector<Poly>{P("x1 + 2")});
  CHECK(eval_currents(r5.target, I) == std::vector<Poly>{P("x1 + 2")});
  CHECK(eval_heat(r5.source, I) == HeatExpr::of(P("x1*x2 + 2*x2")));
  CHECK(eval_heat(r5.target, I) == HeatExpr::of(P("x1*x2 + x2")));

  CHECK(check_cell(r5, I, CheckMode::strict).verdict == CheckVerdict::strict);
  Interpretation N = I;
  N.domain = Domain::naturals;
  auto weak_only = check_cell(r5, N, CheckMode::strict);
  CHECK(weak_only.verdict == CheckVerdict::weak);
  CHECK_FALSE(weak_only.passes(CheckMode::strict));
  CHECK(weak_only.passes(CheckMode::weak));

  auto q = CellDecl::algebra(div.signature.op("Q"));
  for (auto& c : gen_delta2(q, {kNat}))
    if (c.name == "Q.delta") {
      auto r = check_cell(c, I, CheckMode::weak);
      CHECK(r.verdict == CheckVerdict::fail);
      CHECK(r.source_heat == HeatExpr::of(P("x1*x2")));
      CHECK(r.target_heat == HeatExpr::of(P("2*x1*x2")));
      CHECK_FALSE(r.witness.empty());
    }
}

TEST_CASE("double rule under the planar interpretation") {
  Trs dbl = load("double");
  auto r2 = gen_computation(dbl)[1];
  auto r = check_cell(r2, load_interp("double"), CheckMode::strict);
  CHECK(r.verdict == CheckVerdict::strict);
  CHECK(r.source_heat == HeatExpr::of(P("x1 + 1")));
  CHECK(r.target_heat == HeatExpr::of(P("x1")));
  CHECK(r.source_currents == std::vector<Poly>{P("2*x1 + 2")});
  CHECK(to_json(r)["verdict"] == "strict");
}

TEST_CASE("compositional evaluation") {
  Interpretation I = division_values();
  auto cs = corpus();
  std::size_t seq = 0;
  for (std::size_t a = 0; a < cs.size(); a += 7)
    for (std::size_t b = 0; b < cs.size(); b += 5) {
      const TwoPath &f = cs[a], &g = cs[b];
      // side by side: g reads the variables after f's
      Evaluation ef = evaluate(f, I), eg = evaluate(g, I);
      Evaluation fg = evaluate(compose0(f, g), I);
      std::vector<Poly> want = ef.currents;
      for (auto& p : rename(eg.currents, f.source().size())) want.push_back(p);
      CHECK(fg.currents == want);
      CHECK(fg.heat == ef.heat + eg.heat.substitute(feed(rename(
                                     {Poly::var("x1"), Poly::var("x2"), Poly::var("x3")}, f.source().size()))));
      if (f.target() != g.source()) continue;
      ++seq;
      Evaluation h = evaluate(compose1(f, g), I);
      auto sigma = feed(ef.currents);
      std::vector<Poly> through;
      for (auto& p : eg.currents) through.push_back(p.substitute(sigma));
      CHECK(h.currents == through);
      CHECK(h.heat == ef.heat + eg.heat.substitute(sigma));
    }
  CHECK(seq > 20);
}

TEST_CASE("evaluation ignores deformation") {
  Interpretation I = division_values();
  auto cs = corpus();
  for (std::size_t a = 0; a < cs.size(); a += 11) {
    const TwoPath& f = cs[a];
    const TwoPath& g = cs[(a * 7 + 3) % cs.size()];
    auto l = compose1(compose0(f, TwoPath::identity(g.source())), compose0(TwoPath::identity(f.target()), g));
    auto r = compose1(compose0(TwoPath::identity(f.source()), g), compose0(f, TwoPath::identity(g.target())));
    CHECK(evaluate(l, I).currents == evaluate(r, I).currents);
    CHECK(evaluate(l, I).heat == evaluate(r, I).heat);
  }
}

TEST_CASE("heat grows with a cell's heat and currents") {
  Interpretation lo = division_values(), hi = division_values();
  hi.cells["s"] = {{P("x1 + 2")}, HeatExpr::of(P("1"))};
  std::mt19937 rng(1);
  for (auto& f : corpus()) {
    if (rng() % 3) continue;
    Poly d = eval_heat(f, hi).scalar - eval_heat(f, lo).scalar;
    CHECK(min_difference(d, 0, f.source().size() == 0 ? 1 : f.source().size(), 4) >= 0);
  }
}

TEST_CASE("multiset heats") {
  Poly i = Poly::var("x1"), j = Poly::var("x2");
  CHECK_FALSE(heat_gt(HeatExpr::of_bag({i + j}), HeatExpr::of_bag({i, j})));
  CHECK(heat_gt(HeatExpr::of_bag({i + 1}), HeatExpr::of_bag({i})));
  CHECK(heat_gt(HeatExpr::of_bag({i + 1}), HeatExpr::of_bag({i, i})));
  CHECK(heat_gt(HeatExpr::of_bag({i, j}), HeatExpr::of_bag({j})));
  CHECK_FALSE(heat_gt(HeatExpr::of_bag({j}), HeatExpr::of_bag({i, j})));
  auto h = HeatExpr::of_bag({i * j, i + 2});
  CHECK(heat_geq(h, h));
  CHECK_FALSE(heat_gt(h, h));
  CHECK((HeatExpr::of_bag({i}) + HeatExpr::of_bag({j})).bag.size() == 2);
  CHECK_THROWS_AS(HeatExpr::of(i) + HeatExpr::of_bag({j}), InterpError);
}

TEST_CASE("multiset comparison is sound against concrete bags") {
  std::mt19937 rng(17);
  std::size_t certified = 0;
  for (int k = 0; k < 600; ++k) {
    std::vector<Poly> a, b;
    for (std::size_t n = rng() % 3 + 1; n > 0; --n) a.push_back(random_poly(rng, 2, 2, 2));
    for (std::size_t n = rng() % 3; n > 0; --n) b.push_back(random_poly(rng, 2, 2, 2));
    bool ge = heat_geq(HeatExpr::of_bag(a), HeatExpr::of_bag(b));
    bool gt = heat_gt(HeatExpr::of_bag(a), HeatExpr::of_bag(b));
    if (!ge && !gt) continue;
    ++certified;
    for (std::int64_t x = 0; x <= 4; ++x)
      for (std::int64_t y = 0; y <= 4; ++y) {
        std::map<std::string, std::int64_t> pt{{"x1", x}, {"x2", y}};
        std::vector<std::int64_t> va, vb;
        for (auto& p : a) va.push_back(p.eval(pt));
        for (auto& p : b) vb.push_back(p.eval(pt));
        int c = compare_bags(va, vb);
        if (gt) CHECK(c > 0);
        if (ge) CHECK(c >= 0);
      }
  }
  CHECK(certified > 50);
}

TEST_CASE("interpretation files") {
  Interpretation I = load_interp("division");
  CHECK(I.domain == Domain::positive);
  CHECK(I.heat_domain == HeatDomain::scalar);
  CHECK(interpretation_from_json(to_json(I)).cells.size() == I.cells.size());
  CHECK(to_json(interpretation_from_json(to_json(I))) == to_json(I));

  // structure cells fall back to the canonical choice
  Interpretation D = load_interp("double");
  auto d = D.lookup(CellDecl::dup(kNat));
  CHECK(d.currents == std::vector<Poly>{P("x1"), P("x1")});
  CHECK(d.heat.is_zero());
  CHECK(D.lookup(CellDecl::swap(kNat, kNat)).currents == std::vector<Poly>{P("x2"), P("x1")});
  CHECK(D.lookup(CellDecl::erase(kNat)).currents.empty());

  auto neg = nlohmann::json::parse(R"({"cells": {"s": {"currents": ["x1 - 1"], "heat": "0"}}})");
  CHECK_THROWS_AS(interpretation_from_json(neg), InterpError);
  auto bag_in_scalar = nlohmann::json::parse(R"({"cells": {"s": {"currents": ["x1"], "heat": ["x1"]}}})");
  CHECK_THROWS_AS(interpretation_from_json(bag_in_scalar), InterpError);
  auto bag = nlohmann::json::parse(
      R"({"heat_domain": "multiset", "cells": {"s": {"currents": ["x1 + 1"], "heat": ["x1", "1"]}, "0": {"currents": ["1"], "heat": "0"}}})");
  Interpretation B = interpretation_from_json(bag);
  CHECK(B.cells.at("s").heat.bag.size() == 2);
  CHECK(B.cells.at("0").heat.bag.empty());
  CHECK_THROWS_AS(parse_domain("Z"), InterpError);
}
