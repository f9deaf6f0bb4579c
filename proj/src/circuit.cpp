#include "polyterm/circuit.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

namespace polyterm {

OnePath concat(const OnePath& a, const OnePath& b) {
  OnePath out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string to_string(const OnePath& p) {
  if (p.empty()) return "*";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += " ";
    out += p[i];
  }
  return out;
}

std::string to_string(CellKind kind) {
  switch (kind) {
    case CellKind::algebra:
      return "algebra";
    case CellKind::swap:
      return "tau";
    case CellKind::dup:
      return "delta";
    case CellKind::erase:
      return "eps";
  }
  return "?";
}

CellDecl CellDecl::algebra(const OpDecl& op) {
  return {op.name, op.inputs, {op.output}, CellKind::algebra};
}

CellDecl CellDecl::swap(const Sort& left, const Sort& right) {
  return {"tau[" + left + "," + right + "]", {left, right}, {right, left}, CellKind::swap};
}

CellDecl CellDecl::dup(const Sort& sort) {
  return {"delta[" + sort + "]", {sort}, {sort, sort}, CellKind::dup};
}

CellDecl CellDecl::erase(const Sort& sort) {
  return {"eps[" + sort + "]", {sort}, {}, CellKind::erase};
}

// -- TwoPath ----------------------------------------------------------------

TwoPath TwoPath::identity(const OnePath& x) {
  TwoPath f;
  f.source_ = x;
  for (std::size_t k = 0; k < x.size(); ++k) f.outputs_.push_back({Endpoint::kBoundary, k});
  return f;
}

TwoPath TwoPath::generator(const CellDecl& cell) {
  TwoPath f;
  f.source_ = cell.source;
  Node n{cell, {}};
  for (std::size_t k = 0; k < cell.source.size(); ++k)
    n.inputs.push_back({Endpoint::kBoundary, k});
  f.nodes_.push_back(std::move(n));
  for (std::size_t k = 0; k < cell.target.size(); ++k) f.outputs_.push_back({0, k});
  return f;
}

TwoPath TwoPath::from_parts(OnePath source, std::vector<Node> nodes,
                            std::vector<Endpoint> outputs) {
  const std::size_t n = nodes.size();
  auto driver_sort = [&](const Endpoint& e) -> const Sort& {
    if (e.is_boundary()) {
      if (e.port >= source.size()) throw CircuitError("dangling global input reference");
      return source[e.port];
    }
    if (e.node >= n || e.port >= nodes[e.node].cell.target.size())
      throw CircuitError("dangling node output reference");
    return nodes[e.node].cell.target[e.port];
  };
  std::set<Endpoint> used;
  auto use = [&](const Endpoint& e) {
    if (!used.insert(e).second) throw CircuitError("wire driver used twice");
  };
  for (const Node& node : nodes) {
    if (node.inputs.size() != node.cell.source.size())
      throw CircuitError("node '" + node.cell.name + "' has wrong input count");
    for (std::size_t i = 0; i < node.inputs.size(); ++i) {
      if (driver_sort(node.inputs[i]) != node.cell.source[i])
        throw CircuitError("sort mismatch at input of '" + node.cell.name + "'");
      use(node.inputs[i]);
    }
  }
  for (const Endpoint& e : outputs) {
    driver_sort(e);
    use(e);
  }
  std::size_t expected = source.size();
  for (const Node& node : nodes) expected += node.cell.target.size();
  if (used.size() != expected) throw CircuitError("unconnected wire end");

  // stable topological sort (Kahn, smallest original index first)
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const Endpoint& e : nodes[i].inputs)
      if (!e.is_boundary()) {
        ++indeg[i];
        succ[e.node].push_back(i);
      }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t j : succ[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (order.size() != n) throw CircuitError("circuit contains a cycle");
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;
  auto remap = [&](Endpoint e) {
    if (!e.is_boundary()) e.node = rank[e.node];
    return e;
  };

  TwoPath f;
  f.source_ = std::move(source);
  for (std::size_t k = 0; k < n; ++k) {
    Node node = std::move(nodes[order[k]]);
    for (Endpoint& e : node.inputs) e = remap(e);
    f.nodes_.push_back(std::move(node));
  }
  for (const Endpoint& e : outputs) f.outputs_.push_back(remap(e));
  return f;
}

OnePath TwoPath::target() const {
  OnePath out;
  for (const Endpoint& e : outputs_) out.push_back(sort_of(e));
  return out;
}

const Sort& TwoPath::sort_of(const Endpoint& e) const {
  if (e.is_boundary()) return source_.at(e.port);
  return nodes_.at(e.node).cell.target.at(e.port);
}

std::vector<std::vector<Sink>> TwoPath::sinks() const {
  std::vector<std::vector<Sink>> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    out[i].resize(nodes_[i].cell.target.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t p = 0; p < nodes_[i].inputs.size(); ++p) {
      const Endpoint& e = nodes_[i].inputs[p];
      if (!e.is_boundary()) out[e.node][e.port] = {i, p};
    }
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    const Endpoint& e = outputs_[k];
    if (!e.is_boundary()) out[e.node][e.port] = {Endpoint::kBoundary, k};
  }
  return out;
}

std::vector<Sink> TwoPath::boundary_sinks() const {
  std::vector<Sink> out(source_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t p = 0; p < nodes_[i].inputs.size(); ++p) {
      const Endpoint& e = nodes_[i].inputs[p];
      if (e.is_boundary()) out[e.port] = {i, p};
    }
  for (std::size_t k = 0; k < outputs_.size(); ++k)
    if (outputs_[k].is_boundary()) out[outputs_[k].port] = {Endpoint::kBoundary, k};
  return out;
}

bool TwoPath::has_structure() const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [](const Node& n) { return n.cell.is_structure(); });
}

bool TwoPath::has_algebra() const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [](const Node& n) { return !n.cell.is_structure(); });
}

TwoPath compose0(const TwoPath& f, const TwoPath& g) {
  const std::size_t shift_nodes = f.size();
  const std::size_t shift_in = f.source().size();
  std::vector<Node> nodes = f.nodes();
  for (Node n : g.nodes()) {
    for (Endpoint& e : n.inputs) {
      if (e.is_boundary())
        e.port += shift_in;
      else
        e.node += shift_nodes;
    }
    nodes.push_back(std::move(n));
  }
  std::vector<Endpoint> outputs = f.outputs();
  for (Endpoint e : g.outputs()) {
    if (e.is_boundary())
      e.port += shift_in;
    else
      e.node += shift_nodes;
    outputs.push_back(e);
  }
  return TwoPath::from_parts(concat(f.source(), g.source()), std::move(nodes),
                             std::move(outputs));
}

TwoPath compose1(const TwoPath& f, const TwoPath& g) {
  if (f.target() != g.source())
    throw CircuitError("cannot plug " + to_string(f.target()) + " into " +
                       to_string(g.source()));
  const std::size_t shift = f.size();
  std::vector<Node> nodes = f.nodes();
  auto plug = [&](Endpoint e) {
    if (e.is_boundary()) return f.outputs()[e.port];
    e.node += shift;
    return e;
  };
  for (Node n : g.nodes()) {
    for (Endpoint& e : n.inputs) e = plug(e);
    nodes.push_back(std::move(n));
  }
  std::vector<Endpoint> outputs;
  for (const Endpoint& e : g.outputs()) outputs.push_back(plug(e));
  return TwoPath::from_parts(f.source(), std::move(nodes), std::move(outputs));
}

// -- canonical labelling ------------------------------------------------------

namespace {

struct Labelling {
  const TwoPath& f;
  std::vector<std::vector<Sink>> sinks;

  explicit Labelling(const TwoPath& path) : f(path), sinks(path.sinks()) {}

  // Breadth-first from `seeds`, following ports in order; appends to `order`.
  void traverse(std::deque<std::size_t> queue, std::vector<std::size_t>& label,
                std::vector<std::size_t>& order) const {
    while (!queue.empty()) {
      std::size_t n = queue.front();
      queue.pop_front();
      auto visit = [&](std::size_t m) {
        if (label[m] == Endpoint::kBoundary) {
          label[m] = order.size();
          order.push_back(m);
          queue.push_back(m);
        }
      };
      for (const Endpoint& e : f.node(n).inputs)
        if (!e.is_boundary()) visit(e.node);
      for (const Sink& s : sinks[n])
        if (!s.is_boundary()) visit(s.node);
    }
  }

  std::string encode(const std::vector<std::size_t>& order,
                     const std::vector<std::size_t>& label) const {
    std::string out;
    for (std::size_t n : order) {
      out += f.node(n).cell.name;
      out += '(';
      for (const Endpoint& e : f.node(n).inputs) {
        if (e.is_boundary())
          out += "i" + std::to_string(e.port);
        else
          out += std::to_string(label[e.node]) + "." + std::to_string(e.port);
        out += ';';
      }
      out += ')';
    }
    return out;
  }
};

struct CanonicalResult {
  std::vector<std::size_t> order;
  std::string key;
};

CanonicalResult canonicalize(const TwoPath& f) {
  Labelling lab(f);
  const std::size_t n = f.size();
  std::vector<std::size_t> label(n, Endpoint::kBoundary);
  std::vector<std::size_t> order;

  std::deque<std::size_t> seeds;
  auto seed = [&](std::size_t m) {
    if (label[m] == Endpoint::kBoundary) {
      label[m] = order.size();
      order.push_back(m);
      seeds.push_back(m);
    }
  };
  for (const Sink& s : f.boundary_sinks())
    if (!s.is_boundary()) seed(s.node);
  for (const Endpoint& e : f.outputs())
    if (!e.is_boundary()) seed(e.node);
  lab.traverse(seeds, label, order);

  std::string key = to_string(f.source()) + "|" + lab.encode(order, label) + "|";
  for (const Endpoint& e : f.outputs()) {
    if (e.is_boundary())
      key += "i" + std::to_string(e.port);
    else
      key += std::to_string(label[e.node]) + "." + std::to_string(e.port);
    key += ';';
  }

  // components not reachable from the interface
  std::vector<std::pair<std::string, std::vector<std::size_t>>> floating;
  for (std::size_t start = 0; start < n; ++start) {
    if (label[start] != Endpoint::kBoundary) continue;
    std::vector<std::size_t> probe(n, Endpoint::kBoundary);
    std::vector<std::size_t> comp;
    probe[start] = 0;
    comp.push_back(start);
    lab.traverse({start}, probe, comp);
    std::string best;
    std::vector<std::size_t> best_order;
    for (std::size_t root : comp) {
      std::vector<std::size_t> local(n, Endpoint::kBoundary);
      std::vector<std::size_t> local_order{root};
      local[root] = 0;
      lab.traverse({root}, local, local_order);
      std::string enc = lab.encode(local_order, local);
      if (best_order.empty() || enc < best) {
        best = std::move(enc);
        best_order = std::move(local_order);
      }
    }
    for (std::size_t m : comp) label[m] = 0;  // mark as handled
    floating.emplace_back(std::move(best), std::move(best_order));
  }
  std::sort(floating.begin(), floating.end());
  for (auto& [enc, comp_order] : floating) {
    key += "|" + enc;
    order.insert(order.end(), comp_order.begin(), comp_order.end());
  }
  return {std::move(order), std::move(key)};
}

}  // namespace

std::string canonical_key(const TwoPath& f) { return canonicalize(f).key; }

std::vector<std::size_t> canonical_order(const TwoPath& f) {
  return canonicalize(f).order;
}

bool eq_mod_deformation(const TwoPath& f, const TwoPath& g) {
  if (f.size() != g.size() || f.source() != g.source() || f.target() != g.target())
    return false;
  return canonical_key(f) == canonical_key(g);
}

// -- layered form -------------------------------------------------------------

namespace {

class Layerer {
 public:
  explicit Layerer(const TwoPath& f) : f_(f) {}

  bool run(LayeredForm& out) {
    std::vector<bool> placed(f_.size(), false);
    std::vector<Endpoint> row;
    for (std::size_t k = 0; k < f_.source().size(); ++k)
      row.push_back({Endpoint::kBoundary, k});
    std::vector<Layer> layers;
    if (!search(placed, row, layers)) return false;
    out.source = f_.source();
    out.layers = std::move(layers);
    return true;
  }

 private:
  void place(std::size_t n, std::size_t pos, std::vector<bool>& placed,
             std::vector<Endpoint>& row, std::vector<Layer>& layers) const {
    const Node& node = f_.node(n);
    const std::size_t k = node.inputs.size();
    layers.push_back({pos, node.cell, row.size() - pos - k});
    row.erase(row.begin() + static_cast<std::ptrdiff_t>(pos),
              row.begin() + static_cast<std::ptrdiff_t>(pos + k));
    std::vector<Endpoint> outs;
    for (std::size_t p = 0; p < node.cell.target.size(); ++p) outs.push_back({n, p});
    row.insert(row.begin() + static_cast<std::ptrdiff_t>(pos), outs.begin(), outs.end());
    placed[n] = true;
  }

  bool search(std::vector<bool> placed, std::vector<Endpoint> row,
              std::vector<Layer>& layers) {
    const std::size_t mark = layers.size();
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t n = 0; n < f_.size(); ++n) {
        const Node& node = f_.node(n);
        if (placed[n] || node.inputs.empty()) continue;
        auto it = std::find(row.begin(), row.end(), node.inputs[0]);
        if (it == row.end()) continue;
        std::size_t pos = static_cast<std::size_t>(it - row.begin());
        if (pos + node.inputs.size() > row.size()) continue;
        bool contiguous = true;
        for (std::size_t i = 0; i < node.inputs.size(); ++i)
          contiguous = contiguous && row[pos + i] == node.inputs[i];
        if (!contiguous) continue;
        place(n, pos, placed, row, layers);
        progress = true;
      }
    }
    std::size_t pending = f_.size();
    for (std::size_t n = 0; n < f_.size(); ++n)
      if (!placed[n] && f_.node(n).inputs.empty()) {
        pending = n;
        break;
      }
    if (pending == f_.size()) {
      bool done = std::all_of(placed.begin(), placed.end(), [](bool b) { return b; }) &&
                  row == f_.outputs();
      if (!done) layers.resize(mark);
      return done;
    }
    std::string key = state_key(placed, row);
    if (failed_.count(key)) {
      layers.resize(mark);
      return false;
    }
    for (std::size_t pos = 0; pos <= row.size(); ++pos) {
      auto p2 = placed;
      auto r2 = row;
      const std::size_t before = layers.size();
      place(pending, pos, p2, r2, layers);
      if (search(p2, r2, layers)) return true;
      layers.resize(before);
    }
    failed_.insert(std::move(key));
    layers.resize(mark);
    return false;
  }

  static std::string state_key(const std::vector<bool>& placed,
                               const std::vector<Endpoint>& row) {
    std::string k;
    for (bool b : placed) k += b ? '1' : '0';
    for (const Endpoint& e : row)
      k += "/" + std::to_string(e.node) + ":" + std::to_string(e.port);
    return k;
  }

  const TwoPath& f_;
  std::unordered_set<std::string> failed_;
};

}  // namespace

LayeredForm layered(const TwoPath& f) {
  LayeredForm form;
  if (!Layerer(f).run(form)) throw CircuitError("circuit admits no planar layering");
  return form;
}

TwoPath from_layers(const LayeredForm& form) {
  TwoPath acc = TwoPath::identity(form.source);
  for (const Layer& layer : form.layers) {
    OnePath row = acc.target();
    if (layer.left + layer.cell.source.size() + layer.right != row.size())
      throw CircuitError("layer width does not match the current interface");
    OnePath left(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(layer.left));
    OnePath right(row.end() - static_cast<std::ptrdiff_t>(layer.right), row.end());
    TwoPath step = compose0(compose0(TwoPath::identity(left), TwoPath::generator(layer.cell)),
                            TwoPath::identity(right));
    acc = compose1(acc, step);
  }
  return acc;
}

std::string to_text(const TwoPath& f) {
  std::ostringstream out;
  out << "in: " << to_string(f.source()) << "\n";
  try {
    LayeredForm form = layered(f);
    for (const Layer& layer : form.layers) {
      for (std::size_t i = 0; i < layer.left; ++i) out << "| ";
      out << layer.cell.name;
      for (std::size_t i = 0; i < layer.right; ++i) out << " |";
      out << "\n";
    }
  } catch (const CircuitError&) {
    out << "(no planar layering) " << canonical_key(f) << "\n";
  }
  out << "out: " << to_string(f.target()) << "\n";
  return out.str();
}

nlohmann::json to_json(const TwoPath& f) {
  std::vector<std::size_t> order = canonical_order(f);
  std::vector<std::size_t> label(f.size());
  for (std::size_t k = 0; k < order.size(); ++k) label[order[k]] = k;
  auto endpoint = [&](const Endpoint& e) {
    if (e.is_boundary()) return nlohmann::json{{"input", e.port}};
    return nlohmann::json{{"node", label[e.node]}, {"port", e.port}};
  };
  nlohmann::json j;
  j["source"] = f.source();
  j["target"] = f.target();
  j["nodes"] = nlohmann::json::array();
  for (std::size_t n : order) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const Endpoint& e : f.node(n).inputs) inputs.push_back(endpoint(e));
    j["nodes"].push_back({{"cell", f.node(n).cell.name}, {"inputs", inputs}});
  }
  j["outputs"] = nlohmann::json::array();
  for (const Endpoint& e : f.outputs()) j["outputs"].push_back(endpoint(e));
  return j;
}

nlohmann::json text_lines(const TwoPath& f) {
  nlohmann::json arr = nlohmann::json::array();
  std::istringstream in(to_text(f));
  for (std::string line; std::getline(in, line);) arr.push_back(line);
  return arr;
}

}  // namespace polyterm
