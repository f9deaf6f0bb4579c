#pragma once

#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polyterm/engine.hpp"
#include "polyterm/interp.hpp"
#include "polyterm/poly.hpp"
#include "polyterm/trs.hpp"

namespace testing_support {

using namespace polyterm;

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(POLYTERM_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Trs load(const std::string& name) { return parse_tpdb(data_file(name + ".trs")); }

inline Interpretation load_interp(const std::string& name) {
  return interpretation_from_json(nlohmann::json::parse(data_file(name + "_interp.json")));
}

// All terms over `sig` plus the given variables (all of sort "o"), up to max_size symbols.
inline std::vector<Term> all_terms(const Signature& sig, const std::vector<std::string>& vars,
                                   std::size_t max_size) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (std::size_t n = 1; n <= max_size; ++n) {
    if (n == 1)
      for (auto& v : vars) by_size[1].push_back(Term::var(v, "o"));
    for (auto& op : sig.ops()) {
      std::size_t k = op.arity();
      if (k == 0) {
        if (n == 1) by_size[1].push_back(Term::app(op.name, op.output));
        continue;
      }
      // distribute n-1 symbols over k children
      std::vector<Term> args(k);
      std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t left) {
        if (i == k) {
          if (left == 0) by_size[n].push_back(Term::app(op.name, op.output, args));
          return;
        }
        for (std::size_t s = 1; s + (k - i - 1) <= left; ++s)
          for (auto& t : by_size[s]) {
            args[i] = t;
            fill(i + 1, left - s);
          }
      };
      fill(0, n - 1);
    }
  }
  std::vector<Term> out;
  for (auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Adds one generator (anywhere) to each circuit; keeps widths <= max_width.
inline std::vector<TwoPath> extend(const std::vector<TwoPath>& frontier,
                                   const std::vector<CellDecl>& gens, std::size_t max_width) {
  std::vector<TwoPath> next;
  for (auto& f : frontier) {
    std::size_t w = f.target().size();
    for (auto& g : gens)
      for (std::size_t off = 0; off + g.source.size() <= w; ++off) {
        std::size_t rest = w - off - g.source.size();
        if (off + g.target.size() + rest > max_width) continue;
        auto layer = compose0(compose0(TwoPath::identity(OnePath(off, "o")), TwoPath::generator(g)),
                              TwoPath::identity(OnePath(rest, "o")));
        next.push_back(compose1(f, layer));
      }
  }
  return next;
}

// Every circuit (up to deformation) of at most max_nodes nodes, single sort "o".
inline std::vector<TwoPath> enumerate_circuits(const std::vector<CellDecl>& gens,
                                               std::size_t max_in, std::size_t max_nodes,
                                               std::size_t max_width) {
  std::set<std::string> seen;
  std::vector<TwoPath> out, frontier;
  for (std::size_t w = 0; w <= max_in; ++w) frontier.push_back(TwoPath::identity(OnePath(w, "o")));
  for (std::size_t n = 0; n <= max_nodes; ++n) {
    std::vector<TwoPath> kept;
    for (auto& f : frontier)
      if (seen.insert(canonical_key(f)).second) kept.push_back(f);
    out.insert(out.end(), kept.begin(), kept.end());
    if (n == max_nodes) break;
    frontier = extend(kept, gens, max_width);
  }
  return out;
}

// One weakly connected piece; free wires count as pieces of their own.
inline bool connected(const TwoPath& f) {
  std::size_t n = f.size(), k = f.source().size();
  std::vector<std::size_t> parent(n + k + f.outputs().size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  auto join = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
  auto id = [&](const Endpoint& e) { return e.is_boundary() ? n + e.port : e.node; };
  for (std::size_t i = 0; i < n; ++i)
    for (auto& e : f.node(i).inputs) join(i, id(e));
  for (std::size_t o = 0; o < f.outputs().size(); ++o) join(n + k + o, id(f.outputs()[o]));
  std::set<std::size_t> roots;
  for (std::size_t x = 0; x < parent.size(); ++x) roots.insert(find(x));
  return roots.size() <= 1;
}

// No structure node reads a wire produced by an algebra node.
inline bool structure_then_algebra(const TwoPath& f) {
  for (auto& n : f.nodes()) {
    if (!n.cell.is_structure()) continue;
    for (auto& e : n.inputs)
      if (!e.is_boundary() && !f.node(e.node).cell.is_structure()) return false;
  }
  return true;
}

// Depth-bounded search for a term repeated along one rewrite path.
inline bool revisits(const Trs& trs, const Term& start, std::size_t depth) {
  std::vector<std::string> path;
  std::function<bool(const Term&, std::size_t)> go = [&](const Term& t, std::size_t d) {
    std::string key = to_string(t);
    for (auto& p : path)
      if (p == key) return true;
    if (d == depth) return false;
    path.push_back(key);
    for (auto& st : rewrite_steps(trs, t))
      if (go(st.result, d + 1)) return true;
    path.pop_back();
    return false;
  };
  return go(start, 0);
}

inline Poly random_poly(std::mt19937& rng, std::size_t vars, unsigned degree, std::int64_t coeff) {
  std::uniform_int_distribution<int> terms(0, 4);
  std::uniform_int_distribution<std::int64_t> c(0, coeff);
  std::uniform_int_distribution<unsigned> e(0, degree);
  std::uniform_int_distribution<std::size_t> v(0, vars - 1);
  Poly p;
  int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    Poly m = c(rng);
    unsigned d = e(rng);
    for (unsigned k = 0; k < d; ++k) m = m * Poly::var(standard_var(v(rng)));
    p += m;
  }
  return p;
}

// Evaluates p - q on every point of {0..hi}^vars; reports min value.
inline std::int64_t min_difference(const Poly& p, const Poly& q, std::size_t vars, std::int64_t hi) {
  std::int64_t best = INT64_MAX;
  std::vector<std::int64_t> pt(vars, 0);
  while (true) {
    std::map<std::string, std::int64_t> point;
    for (std::size_t i = 0; i < vars; ++i) point[standard_var(i)] = pt[i];
    best = std::min(best, p.eval(point) - q.eval(point));
    std::size_t i = 0;
    while (i < vars && pt[i] == hi) pt[i++] = 0;
    if (i == vars) break;
    ++pt[i];
  }
  return best;
}

}  // namespace testing_support
