#include "polyterm/classify.hpp"

#include <algorithm>

#include "polyterm/translation.hpp"

namespace polyterm {

namespace {

std::vector<std::string> occurrence_names(const Term& t) {
  std::vector<std::string> out;
  for (const Term& v : var_occurrences(t)) out.push_back(v.name);
  return out;
}

bool has_repeats(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  return std::adjacent_find(names.begin(), names.end()) != names.end();
}

void collect_ops(const Term& t, std::set<std::string>& out) {
  if (t.is_var) return;
  out.insert(t.name);
  for (const Term& a : t.args) collect_ops(a, out);
}

Term rename(const Term& t, const std::string& prefix) {
  if (t.is_var) return Term::var(prefix + t.name, t.sort);
  Term out = t;
  for (Term& a : out.args) a = rename(a, prefix);
  return out;
}

// Renames variables to x1, x2, ... by first occurrence in `order`.
void rename_canonically(CriticalPair& cp) {
  Substitution sigma;
  std::size_t next = 1;
  for (const Term& v : distinct_vars(cp.peak))
    sigma.emplace(v.name, Term::var("x" + std::to_string(next++), v.sort));
  cp.peak = substitute(cp.peak, sigma);
  cp.left = substitute(cp.left, sigma);
  cp.right = substitute(cp.right, sigma);
}

const Term& walk(const Term& t, const Substitution& sigma) {
  const Term* cur = &t;
  while (cur->is_var) {
    auto it = sigma.find(cur->name);
    if (it == sigma.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool occurs(const std::string& name, const Term& t, const Substitution& sigma) {
  const Term& w = walk(t, sigma);
  if (w.is_var) return w.name == name;
  return std::any_of(w.args.begin(), w.args.end(),
                     [&](const Term& a) { return occurs(name, a, sigma); });
}

bool unify_into(const Term& a, const Term& b, Substitution& sigma) {
  const Term& x = walk(a, sigma);
  const Term& y = walk(b, sigma);
  if (x.sort != y.sort) return false;
  if (x.is_var && y.is_var && x.name == y.name) return true;
  if (x.is_var) {
    if (occurs(x.name, y, sigma)) return false;
    sigma.emplace(x.name, y);
    return true;
  }
  if (y.is_var) return unify_into(y, x, sigma);
  if (x.name != y.name || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!unify_into(x.args[i], y.args[i], sigma)) return false;
  return true;
}

Term resolve(const Term& t, const Substitution& sigma) {
  const Term& w = walk(t, sigma);
  if (w.is_var) return w;
  Term out = w;
  for (Term& a : out.args) a = resolve(a, sigma);
  return out;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution sigma;
  if (!unify_into(a, b, sigma)) return std::nullopt;
  Substitution out;
  for (const auto& [name, _] : sigma) {
    (void)_;
    out.emplace(name, resolve(Term::var(name, sigma.at(name).sort), sigma));
  }
  return out;
}

std::vector<CriticalPair> critical_pairs(const Trs& trs) {
  std::vector<CriticalPair> out;
  for (std::size_t o = 0; o < trs.rules.size(); ++o) {
    const Rule& outer = trs.rules[o];
    Term olhs = rename(outer.lhs, "1.");
    Term orhs = rename(outer.rhs, "1.");
    for (std::size_t i = 0; i < trs.rules.size(); ++i) {
      const Rule& inner = trs.rules[i];
      Term ilhs = rename(inner.lhs, "2.");
      Term irhs = rename(inner.rhs, "2.");
      for (const Position& p : positions(olhs)) {
        const Term& sub = subterm(olhs, p);
        if (sub.is_var) continue;
        // root overlaps: never a rule with itself, and each unordered pair once
        if (p.empty() && i <= o) continue;
        auto sigma = unify(sub, ilhs);
        if (!sigma) continue;
        Term peak = substitute(olhs, *sigma);
        CriticalPair cp{peak, substitute(orhs, *sigma),
                        replace_at(peak, p, substitute(irhs, *sigma)), p,
                        {outer.name, inner.name}};
        rename_canonically(cp);
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

bool is_weakly_orthogonal(const Trs& trs) {
  for (const CriticalPair& cp : critical_pairs(trs))
    if (!(cp.left == cp.right)) return false;
  return true;
}

TrsClass classify(const Trs& trs) {
  TrsClass c;
  std::set<std::string> roots, below_root;
  for (const Rule& r : trs.rules) {
    auto lhs_names = occurrence_names(r.lhs);
    auto rhs_names = occurrence_names(r.rhs);
    const bool lhs_rep = has_repeats(lhs_names);
    const bool rhs_rep = has_repeats(rhs_names);
    if (lhs_rep) c.left_linear = false;
    if (rhs_rep) c.non_duplicating = false;
    {
      auto a = lhs_names, b = rhs_names;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (lhs_rep || rhs_rep || a != b) c.linear = false;
    }
    // planar: rhs occurrences never step back in lhs order
    std::vector<Term> xs = distinct_vars(r.lhs);
    std::size_t last = 0;
    for (const std::string& v : rhs_names) {
      std::size_t idx = static_cast<std::size_t>(
          std::find_if(xs.begin(), xs.end(), [&](const Term& x) { return x.name == v; }) -
          xs.begin());
      if (idx < last) c.planar = false;
      last = idx;
    }
    roots.insert(r.lhs.name);
    for (const Term& a : r.lhs.args) collect_ops(a, below_root);
  }

  bool partition = true;
  for (const OpDecl& op : trs.signature.ops()) {
    if (roots.count(op.name)) {
      c.functions.insert(op.name);
      if (below_root.count(op.name)) partition = false;
    } else {
      c.constructors.insert(op.name);
    }
  }
  c.weakly_orthogonal = is_weakly_orthogonal(trs);
  c.functional_program = c.left_linear && partition && c.weakly_orthogonal;

  c.unused_structure = {CellKind::swap, CellKind::dup, CellKind::erase};
  for (const Rule& r : trs.rules) {
    std::vector<Term> xs = distinct_vars(r.lhs);
    for (const Term* side : {&r.lhs, &r.rhs})
      for (const Node& n : translate_term(trs.signature, *side, xs).nodes())
        c.unused_structure.erase(n.cell.kind);
  }

  for (const std::string& phi : c.functions) {
    const OpDecl& op = trs.signature.op(phi);
    for (std::size_t i = 1; i <= op.arity(); ++i) c.k_table[{phi, i}] = 0;
  }
  for (const Rule& r : trs.rules) {
    for (std::size_t i = 0; i < r.lhs.args.size(); ++i) {
      std::size_t& k = c.k_table[{r.lhs.name, i + 1}];
      for (const Term& v : distinct_vars(r.lhs.args[i]))
        k = std::max(k, count_var(r.rhs, v.name));
    }
  }
  return c;
}

nlohmann::json to_json(const TrsClass& c) {
  nlohmann::json kinds = nlohmann::json::array();
  for (CellKind k : c.unused_structure) kinds.push_back(to_string(k));
  nlohmann::json k_table = nlohmann::json::array();
  for (const auto& [key, value] : c.k_table)
    k_table.push_back({{"function", key.first}, {"index", key.second}, {"K", value}});
  return {{"left_linear", c.left_linear},
          {"linear", c.linear},
          {"planar", c.planar},
          {"non_duplicating", c.non_duplicating},
          {"weakly_orthogonal", c.weakly_orthogonal},
          {"functional_program", c.functional_program},
          {"constructors", c.constructors},
          {"functions", c.functions},
          {"unused_structure", kinds},
          {"k_table", k_table}};
}

nlohmann::json to_json(const CriticalPair& cp) {
  return {{"peak", to_string(cp.peak)},
          {"left", to_string(cp.left)},
          {"right", to_string(cp.right)},
          {"position", to_string(cp.position)},
          {"rules", {cp.rules.first, cp.rules.second}}};
}

}  // namespace polyterm
