#include "polyterm/translation.hpp"

#include <algorithm>
#include <cassert>

#include "polyterm/classify.hpp"

namespace polyterm {

std::string to_string(Family family) {
  switch (family) {
    case Family::computation:
      return "computation";
    case Family::delta1:
      return "delta1";
    case Family::delta2:
      return "delta2";
    case Family::delta2_constructor:
      return "delta2-constructor";
    case Family::delta2_function:
      return "delta2-function";
  }
  return "?";
}

bool is_delta2(Family family) {
  return family == Family::delta2 || family == Family::delta2_constructor ||
         family == Family::delta2_function;
}

std::size_t Polygraph::count(Family family) const {
  return static_cast<std::size_t>(std::count_if(
      cells.begin(), cells.end(), [&](const ThreeCell& c) { return c.family == family; }));
}

namespace {

TwoPath id(const OnePath& x) { return TwoPath::identity(x); }
TwoPath gen(const CellDecl& c) { return TwoPath::generator(c); }

// Layer-by-layer construction: each step is (left offset, cell).
TwoPath chain(const OnePath& source, const std::vector<std::pair<std::size_t, CellDecl>>& steps) {
  LayeredForm form{source, {}};
  std::size_t width = source.size();
  for (const auto& [left, cell] : steps) {
    assert(left + cell.source.size() <= width);
    form.layers.push_back({left, cell, width - left - cell.source.size()});
    width = width - cell.source.size() + cell.target.size();
  }
  return from_layers(form);
}

// delta ; (id * delta) ; (id * id * delta) ... with `copies` outputs
TwoPath dup_comb(const Sort& s, std::size_t copies) {
  if (copies == 0) return gen(CellDecl::erase(s));
  if (copies == 1) return id({s});
  std::vector<std::pair<std::size_t, CellDecl>> steps;
  for (std::size_t k = 0; k + 1 < copies; ++k) steps.emplace_back(k, CellDecl::dup(s));
  return chain({s}, steps);
}

}  // namespace

TwoPath structure_erase(const OnePath& x) {
  TwoPath out = id({});
  for (const Sort& s : x) out = compose0(out, gen(CellDecl::erase(s)));
  return out;
}

TwoPath structure_swap(const OnePath& x, const Sort& zeta) {
  if (x.empty()) return id({zeta});
  OnePath prefix(x.begin(), x.end() - 1);
  const Sort& last = x.back();
  TwoPath first = compose0(id(prefix), gen(CellDecl::swap(last, zeta)));
  TwoPath second = compose0(structure_swap(prefix, zeta), id({last}));
  return compose1(first, second);
}

TwoPath structure_swap(const OnePath& x, const OnePath& y) {
  if (y.empty()) return id(x);
  const Sort& head = y.front();
  OnePath rest(y.begin() + 1, y.end());
  TwoPath first = compose0(structure_swap(x, head), id(rest));
  TwoPath second = compose0(id({head}), structure_swap(x, rest));
  return compose1(first, second);
}

TwoPath structure_dup(const OnePath& x) {
  if (x.empty()) return id({});
  OnePath prefix(x.begin(), x.end() - 1);
  const Sort& last = x.back();
  TwoPath dups = compose0(structure_dup(prefix), gen(CellDecl::dup(last)));
  TwoPath middle =
      compose0(compose0(id(prefix), structure_swap(prefix, last)), id({last}));
  return compose1(dups, middle);
}

TwoPath structure_map(const OnePath& inputs, const std::vector<std::size_t>& sources) {
  std::vector<std::vector<std::size_t>> uses(inputs.size());
  for (std::size_t k = 0; k < sources.size(); ++k) {
    if (sources[k] >= inputs.size()) throw TranslationError("structure map out of range");
    uses[sources[k]].push_back(k);
  }
  TwoPath out = id({});
  std::vector<std::size_t> row;  // destination output of each current wire
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out = compose0(out, dup_comb(inputs[i], uses[i].size()));
    row.insert(row.end(), uses[i].begin(), uses[i].end());
  }
  std::vector<std::pair<std::size_t, CellDecl>> swaps;
  OnePath sorts;
  for (std::size_t k : row) sorts.push_back(inputs[sources[k]]);
  const OnePath after_dup = sorts;
  for (std::size_t p = 0; p < row.size(); ++p) {
    std::size_t q = static_cast<std::size_t>(std::find(row.begin(), row.end(), p) - row.begin());
    for (; q > p; --q) {
      swaps.emplace_back(q - 1, CellDecl::swap(sorts[q - 1], sorts[q]));
      std::swap(row[q - 1], row[q]);
      std::swap(sorts[q - 1], sorts[q]);
    }
  }
  return compose1(out, chain(after_dup, swaps));
}

// -- term translation -----------------------------------------------------------

namespace {

struct AlgebraPart {
  TwoPath path;
  std::vector<std::pair<Position, std::size_t>> nodes;
};

AlgebraPart algebra_part(const Signature& sig, const Term& u, Position& pos) {
  if (u.is_var) return {id({u.sort}), {}};
  const OpDecl& op = sig.op(u.name);
  AlgebraPart args{id({}), {}};
  for (std::size_t i = 0; i < u.args.size(); ++i) {
    pos.push_back(i);
    AlgebraPart a = algebra_part(sig, u.args[i], pos);
    pos.pop_back();
    for (auto& [p, n] : a.nodes) args.nodes.emplace_back(p, n + args.path.size());
    args.path = compose0(args.path, a.path);
  }
  args.nodes.emplace_back(pos, args.path.size());
  args.path = compose1(args.path, gen(CellDecl::algebra(op)));
  return args;
}

}  // namespace

TermTranslation translate_term_traced(const Signature& sig, const Term& u,
                                      const std::vector<Term>& xs) {
  OnePath inputs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!xs[i].is_var) throw TranslationError("variable family contains a non-variable");
    for (std::size_t j = 0; j < i; ++j)
      if (xs[j].name == xs[i].name)
        throw TranslationError("variable family repeats '" + xs[i].name + "'");
    inputs.push_back(xs[i].sort);
  }
  std::vector<std::size_t> sources;
  for (const Term& v : var_occurrences(u)) {
    auto it = std::find_if(xs.begin(), xs.end(), [&](const Term& x) { return x.name == v.name; });
    if (it == xs.end()) throw TranslationError("unknown variable '" + v.name + "'");
    if (it->sort != v.sort) throw TranslationError("sort mismatch for variable '" + v.name + "'");
    sources.push_back(static_cast<std::size_t>(it - xs.begin()));
  }
  TwoPath prefix = structure_map(inputs, sources);
  Position pos;
  AlgebraPart alg = algebra_part(sig, u, pos);
  TermTranslation out{compose1(prefix, alg.path), {}};
  for (auto& [p, n] : alg.nodes) out.node_at.emplace(p, n + prefix.size());
  return out;
}

TwoPath translate_term(const Signature& sig, const Term& u, const std::vector<Term>& xs) {
  return translate_term_traced(sig, u, xs).path;
}

// -- 3-cell generation ------------------------------------------------------------

std::vector<ThreeCell> gen_computation(const Trs& trs) {
  std::vector<ThreeCell> out;
  for (const Rule& r : trs.rules) {
    std::vector<Term> xs = distinct_vars(r.lhs);
    if (xs.size() != var_occurrences(r.lhs).size())
      throw TranslationError("rule " + r.name + " is not left-linear");
    out.push_back({r.name, translate_term(trs.signature, r.lhs, xs),
                   translate_term(trs.signature, r.rhs, xs), Family::computation,
                   std::nullopt, ""});
  }
  return out;
}

std::vector<ThreeCell> gen_delta2(const CellDecl& phi, const std::vector<Sort>& sorts) {
  if (phi.is_structure() || phi.target.size() != 1)
    throw TranslationError("Delta3-2 cells are generated for algebra cells only");
  const OnePath& x = phi.source;
  const Sort& xi = phi.target[0];
  std::vector<ThreeCell> out;
  for (const Sort& zeta : sorts) {
    out.push_back({phi.name + ".tau_left[" + zeta + "]",
                   compose1(compose0(gen(phi), id({zeta})), gen(CellDecl::swap(xi, zeta))),
                   compose1(structure_swap(x, zeta), compose0(id({zeta}), gen(phi))),
                   Family::delta2, CellKind::swap, phi.name});
    out.push_back({phi.name + ".tau_right[" + zeta + "]",
                   compose1(compose0(id({zeta}), gen(phi)), gen(CellDecl::swap(zeta, xi))),
                   compose1(structure_swap(OnePath{zeta}, x), compose0(gen(phi), id({zeta}))),
                   Family::delta2, CellKind::swap, phi.name});
  }
  out.push_back({phi.name + ".delta", compose1(gen(phi), gen(CellDecl::dup(xi))),
                 compose1(structure_dup(x), compose0(gen(phi), gen(phi))), Family::delta2,
                 CellKind::dup, phi.name});
  out.push_back({phi.name + ".eps", compose1(gen(phi), gen(CellDecl::erase(xi))),
                 structure_erase(x), Family::delta2, CellKind::erase, phi.name});
  return out;
}

std::vector<ThreeCell> gen_delta1(const std::vector<Sort>& sorts) {
  using S = std::vector<std::pair<std::size_t, CellDecl>>;
  const auto tau = CellDecl::swap;
  const auto dup = CellDecl::dup;
  const auto eps = CellDecl::erase;
  std::vector<ThreeCell> out;
  auto add = [&](std::string name, TwoPath source, TwoPath target, std::optional<CellKind> k) {
    out.push_back({std::move(name), std::move(source), std::move(target), Family::delta1, k, ""});
  };

  // three colours
  for (const Sort& a : sorts)
    for (const Sort& b : sorts)
      for (const Sort& c : sorts)
        add("yang_baxter[" + a + "," + b + "," + c + "]",
            chain({a, b, c}, S{{0, tau(a, b)}, {1, tau(a, c)}, {0, tau(b, c)}}),
            chain({a, b, c}, S{{1, tau(b, c)}, {0, tau(a, c)}, {1, tau(a, b)}}),
            CellKind::swap);

  // two colours
  for (const Sort& a : sorts)
    for (const Sort& b : sorts) {
      const std::string tag = "[" + a + "," + b + "]";
      add("involution" + tag, chain({a, b}, S{{0, tau(a, b)}, {0, tau(b, a)}}), id({a, b}),
          CellKind::swap);
      add("swap_dup_left" + tag, chain({a, b}, S{{0, tau(a, b)}, {0, dup(b)}}),
          chain({a, b}, S{{1, dup(b)}, {0, tau(a, b)}, {1, tau(a, b)}}), CellKind::dup);
      add("swap_dup_right" + tag, chain({a, b}, S{{0, tau(a, b)}, {1, dup(a)}}),
          chain({a, b}, S{{0, dup(a)}, {1, tau(a, b)}, {0, tau(a, b)}}), CellKind::dup);
      add("swap_eps_left" + tag, chain({a, b}, S{{0, tau(a, b)}, {0, eps(b)}}),
          chain({a, b}, S{{1, eps(b)}}), CellKind::erase);
      add("swap_eps_right" + tag, chain({a, b}, S{{0, tau(a, b)}, {1, eps(a)}}),
          chain({a, b}, S{{0, eps(a)}}), CellKind::erase);
      add("dup_cross" + tag,
          chain({a, b}, S{{0, dup(a)}, {1, tau(a, b)}, {0, tau(a, b)}, {1, tau(a, a)}}),
          chain({a, b}, S{{0, dup(a)}, {1, tau(a, b)}, {0, tau(a, b)}}), CellKind::dup);
    }

  // one colour
  for (const Sort& a : sorts) {
    const std::string tag = "[" + a + "]";
    add("coassoc" + tag, chain({a}, S{{0, dup(a)}, {0, dup(a)}}),
        chain({a}, S{{0, dup(a)}, {1, dup(a)}}), CellKind::dup);
    add("cocomm" + tag, chain({a}, S{{0, dup(a)}, {0, tau(a, a)}}), gen(dup(a)), CellKind::dup);
    add("counit_left" + tag, chain({a}, S{{0, dup(a)}, {0, eps(a)}}), id({a}), CellKind::dup);
    add("counit_right" + tag, chain({a}, S{{0, dup(a)}, {1, eps(a)}}), id({a}), CellKind::dup);
    add("comb_swap" + tag, chain({a}, S{{0, dup(a)}, {1, dup(a)}, {0, tau(a, a)}}),
        chain({a}, S{{0, dup(a)}, {1, dup(a)}}), CellKind::dup);
  }

  const std::size_t m = sorts.size();
  if (out.size() != m * (m * m + 6 * m + 5))
    throw TranslationError("internal: Delta3-1 count mismatch");
  return out;
}

std::vector<CellDecl> structure_cells(const std::vector<Sort>& sorts) {
  std::vector<CellDecl> out;
  for (const Sort& a : sorts)
    for (const Sort& b : sorts) out.push_back(CellDecl::swap(a, b));
  for (const Sort& a : sorts) out.push_back(CellDecl::dup(a));
  for (const Sort& a : sorts) out.push_back(CellDecl::erase(a));
  return out;
}

Polygraph build_polygraph(const Trs& trs, const CellSet& cells) {
  Polygraph pg;
  pg.sorts = trs.signature.sorts();
  for (const OpDecl& op : trs.signature.ops()) pg.algebra_cells.push_back(CellDecl::algebra(op));
  pg.structure_cells = structure_cells(pg.sorts);
  pg.cells = gen_computation(trs);

  const bool split_requested = cells.constructors != cells.functions;
  const bool any_delta2 = cells.constructors || cells.functions;
  std::optional<TrsClass> cls;
  if (any_delta2) {
    cls = classify(trs);
    if (split_requested && !cls->functional_program)
      throw TranslationError(
          "constructor/function split requested for a system that is not a "
          "first-order functional program");
  }
  if (any_delta2) {
    for (const CellDecl& phi : pg.algebra_cells) {
      const bool is_ctor = cls->constructors.count(phi.name) > 0;
      Family fam = Family::delta2;
      if (cls->functional_program)
        fam = is_ctor ? Family::delta2_constructor : Family::delta2_function;
      const bool wanted = cls->functional_program
                              ? (is_ctor ? cells.constructors : cells.functions)
                              : true;
      if (!wanted) continue;
      for (ThreeCell& c : gen_delta2(phi, pg.sorts)) {
        if (cells.concerning && !cells.concerning->count(*c.concerns)) continue;
        c.family = fam;
        pg.cells.push_back(std::move(c));
      }
    }
  }
  if (cells.delta1)
    for (ThreeCell& c : gen_delta1(pg.sorts)) pg.cells.push_back(std::move(c));
  return pg;
}

std::size_t standard_cell_count(std::size_t p, std::size_t n, std::size_t m) {
  return p + 2 * n * (m + 1) + m * (m * m + 6 * m + 5);
}

nlohmann::json to_json(const Polygraph& pg) {
  nlohmann::json j;
  j["one_cells"] = pg.sorts;
  j["two_cells"] = nlohmann::json::array();
  for (const auto* group : {&pg.algebra_cells, &pg.structure_cells})
    for (const CellDecl& c : *group)
      j["two_cells"].push_back({{"name", c.name},
                                {"kind", to_string(c.kind)},
                                {"source", c.source},
                                {"target", c.target}});
  j["three_cells"] = nlohmann::json::array();
  std::map<std::string, std::size_t> counts;
  for (const ThreeCell& c : pg.cells) {
    ++counts[to_string(c.family)];
    j["three_cells"].push_back({{"name", c.name},
                                {"family", to_string(c.family)},
                                {"source", text_lines(c.source)},
                                {"target", text_lines(c.target)}});
  }
  j["counts"] = counts;
  j["counts"]["total"] = pg.cells.size();
  return j;
}

}  // namespace polyterm
