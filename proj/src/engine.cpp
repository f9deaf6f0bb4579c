#include "polyterm/engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace polyterm {

std::string Match::digest() const {
  std::string out = std::to_string(cell) + "@";
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(image[i]);
  }
  return out;
}

namespace {

struct Embedder {
  const TwoPath& host;
  const TwoPath& pattern;
  std::vector<std::vector<Sink>> host_sinks;
  std::vector<std::vector<Sink>> pat_sinks;
  std::vector<std::vector<std::size_t>> host_succ;
  std::vector<std::size_t> order;  // pattern nodes, neighbours first
  std::vector<std::size_t> image;
  std::vector<char> used;
  std::vector<std::vector<std::size_t>> found;

  Embedder(const TwoPath& h, const TwoPath& p)
      : host(h), pattern(p), host_sinks(h.sinks()), pat_sinks(p.sinks()),
        host_succ(h.size()), image(p.size(), Endpoint::kBoundary), used(h.size(), 0) {
    for (std::size_t i = 0; i < h.size(); ++i)
      for (const Endpoint& e : h.node(i).inputs)
        if (!e.is_boundary()) host_succ[e.node].push_back(i);
    // connected pattern nodes are placed right after a neighbour when possible
    std::vector<char> placed(p.size(), 0);
    for (std::size_t seed = 0; seed < p.size(); ++seed) {
      if (placed[seed]) continue;
      std::vector<std::size_t> queue{seed};
      placed[seed] = 1;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::size_t n = queue[qi];
        order.push_back(n);
        std::vector<std::size_t> next;
        for (const Endpoint& e : p.node(n).inputs)
          if (!e.is_boundary()) next.push_back(e.node);
        for (const Sink& s : pat_sinks[n])
          if (!s.is_boundary()) next.push_back(s.node);
        for (std::size_t m : next)
          if (!placed[m]) {
            placed[m] = 1;
            queue.push_back(m);
          }
      }
    }
  }

  // Local consistency of mapping pattern node pn to host node hn against
  // every already mapped pattern node.
  bool consistent(std::size_t pn, std::size_t hn) const {
    const Node& pnode = pattern.node(pn);
    const Node& hnode = host.node(hn);
    if (!(pnode.cell == hnode.cell)) return false;
    for (std::size_t q = 0; q < pnode.inputs.size(); ++q) {
      const Endpoint& pe = pnode.inputs[q];
      const Endpoint& he = hnode.inputs[q];
      if (pe.is_boundary()) {
        // wire enters from outside the image
        if (!he.is_boundary() && used[he.node]) return false;
      } else if (image[pe.node] != Endpoint::kBoundary) {
        if (he.is_boundary() || he.node != image[pe.node] || he.port != pe.port) return false;
      } else if (he.is_boundary() || used[he.node]) {
        return false;
      }
    }
    for (std::size_t r = 0; r < pat_sinks[pn].size(); ++r) {
      const Sink& ps = pat_sinks[pn][r];
      const Sink& hs = host_sinks[hn][r];
      if (ps.is_boundary()) {
        if (!hs.is_boundary() && used[hs.node]) return false;
      } else if (image[ps.node] != Endpoint::kBoundary) {
        if (hs.is_boundary() || hs.node != image[ps.node] || hs.port != ps.port) return false;
      } else if (hs.is_boundary() || used[hs.node]) {
        return false;
      }
    }
    return true;
  }

  bool convex() const {
    std::vector<char> in_image(host.size(), 0);
    for (std::size_t h : image) in_image[h] = 1;
    std::vector<char> seen(host.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t h : image)
      for (std::size_t s : host_succ[h])
        if (!in_image[s] && !seen[s]) {
          seen[s] = 1;
          stack.push_back(s);
        }
    while (!stack.empty()) {
      std::size_t n = stack.back();
      stack.pop_back();
      for (std::size_t s : host_succ[n]) {
        if (in_image[s]) return false;
        if (!seen[s]) {
          seen[s] = 1;
          stack.push_back(s);
        }
      }
    }
    return true;
  }

  void search(std::size_t depth) {
    if (depth == order.size()) {
      if (convex()) found.push_back(image);
      return;
    }
    const std::size_t pn = order[depth];
    for (std::size_t hn = 0; hn < host.size(); ++hn) {
      if (used[hn] || !consistent(pn, hn)) continue;
      image[pn] = hn;
      used[hn] = 1;
      search(depth + 1);
      used[hn] = 0;
      image[pn] = Endpoint::kBoundary;
    }
  }
};

bool has_pass_through(const TwoPath& pattern) {
  return std::any_of(pattern.outputs().begin(), pattern.outputs().end(),
                     [](const Endpoint& e) { return e.is_boundary(); });
}

}  // namespace

std::vector<Match> find_matches(const TwoPath& f, const TwoPath& pattern, std::size_t cell_index) {
  std::vector<Match> out;
  if (pattern.empty() || has_pass_through(pattern) || pattern.size() > f.size()) return out;
  Embedder e(f, pattern);
  e.search(0);
  std::sort(e.found.begin(), e.found.end());
  for (auto& img : e.found) out.push_back({cell_index, std::move(img)});
  return out;
}

std::vector<Match> find_redexes(const TwoPath& f, const std::vector<ThreeCell>& cells) {
  std::vector<Match> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto ms = find_matches(f, cells[c].source, c);
    out.insert(out.end(), ms.begin(), ms.end());
  }
  return out;
}

bool is_normal(const TwoPath& f, const std::vector<ThreeCell>& cells) {
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (!find_matches(f, cells[c].source, c).empty()) return false;
  return true;
}

TwoPath apply(const TwoPath& f, const std::vector<ThreeCell>& cells, const Match& m) {
  const TwoPath& pat = cells.at(m.cell).source;
  const TwoPath& tgt = cells.at(m.cell).target;
  std::vector<std::size_t> fresh(f.size(), Endpoint::kBoundary);
  std::vector<char> in_image(f.size(), 0);
  for (std::size_t h : m.image) in_image[h] = 1;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!in_image[i]) fresh[i] = kept++;

  // host drivers of the pattern's global inputs
  std::vector<Endpoint> entry;
  for (const Sink& s : pat.boundary_sinks()) entry.push_back(f.node(m.image[s.node]).inputs[s.port]);
  auto remap_host = [&](const Endpoint& e) {
    if (e.is_boundary()) return e;
    return Endpoint{fresh[e.node], e.port};
  };
  auto remap_target = [&](const Endpoint& e) {
    if (e.is_boundary()) return remap_host(entry[e.port]);
    return Endpoint{kept + e.node, e.port};
  };
  // pattern output k leaves host node image[n] at port r
  std::map<Endpoint, std::size_t> exit_index;
  for (std::size_t k = 0; k < pat.outputs().size(); ++k) {
    const Endpoint& pe = pat.outputs()[k];
    exit_index[{m.image[pe.node], pe.port}] = k;
  }
  auto remap = [&](const Endpoint& e) {
    if (!e.is_boundary() && in_image[e.node])
      return remap_target(tgt.outputs()[exit_index.at(e)]);
    return remap_host(e);
  };

  std::vector<Node> nodes;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (in_image[i]) continue;
    Node n = f.node(i);
    for (Endpoint& e : n.inputs) e = remap(e);
    nodes.push_back(std::move(n));
  }
  for (const Node& tn : tgt.nodes()) {
    Node n = tn;
    for (Endpoint& e : n.inputs) e = remap_target(e);
    nodes.push_back(std::move(n));
  }
  std::vector<Endpoint> outputs;
  for (const Endpoint& e : f.outputs()) outputs.push_back(remap(e));
  TwoPath out = TwoPath::from_parts(f.source(), std::move(nodes), std::move(outputs));
  if (out.target() != f.target()) throw CircuitError("rewrite step changed the interface");
  return out;
}

namespace {

std::optional<Match> pick(const TwoPath& f, const std::vector<ThreeCell>& cells, Strategy s) {
  if (s == Strategy::any) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto ms = find_matches(f, cells[c].source, c);
      if (!ms.empty()) return ms.front();
    }
    return std::nullopt;
  }
  auto all = find_redexes(f, cells);
  if (all.empty()) return std::nullopt;
  auto key = [](const Match& m) { return *std::max_element(m.image.begin(), m.image.end()); };
  return *std::min_element(all.begin(), all.end(), [&](const Match& a, const Match& b) {
    return key(a) < key(b);
  });
}

}  // namespace

NormalizeResult normalize(const TwoPath& f, const std::vector<ThreeCell>& cells,
                          Strategy strategy, std::size_t fuel) {
  NormalizeResult r{f, {f, {}}, false};
  for (;;) {
    auto m = pick(r.result, cells, strategy);
    if (!m) return r;
    if (fuel == 0) {
      r.exhausted = true;
      return r;
    }
    --fuel;
    r.result = apply(r.result, cells, *m);
    r.trace.steps.push_back({cells[m->cell].name, m->digest(), r.result});
  }
}

NormalForms all_normal_forms(const TwoPath& f, const std::vector<ThreeCell>& cells,
                             std::size_t bound) {
  NormalForms out;
  std::unordered_set<std::string> seen{canonical_key(f)};
  std::set<std::string> form_keys;
  std::vector<TwoPath> queue{f};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const TwoPath cur = queue[qi];
    auto ms = find_redexes(cur, cells);
    if (ms.empty()) {
      if (form_keys.insert(canonical_key(cur)).second) out.forms.push_back(cur);
      continue;
    }
    for (const Match& m : ms) {
      TwoPath next = apply(cur, cells, m);
      if (!seen.insert(canonical_key(next)).second) continue;
      if (seen.size() > bound) {
        out.complete = false;
        out.states = seen.size();
        return out;
      }
      queue.push_back(std::move(next));
    }
  }
  out.states = seen.size();
  return out;
}

std::optional<RewriteTrace> detect_cycle(const TwoPath& f, const std::vector<ThreeCell>& cells,
                                         std::size_t bound) {
  // Breadth-first over canonical states. A cycle needs an edge into a state
  // no deeper than its source; each such edge triggers a reachability check
  // over the edges seen so far, and one last check runs on the whole graph.
  struct Edge {
    std::size_t to;
    std::string cell, match;
  };
  std::vector<TwoPath> states{f};
  std::vector<std::size_t> depth{0};
  std::vector<std::vector<Edge>> out(1);
  std::vector<std::pair<std::size_t, const Edge*>> parent{{0, nullptr}};
  std::unordered_map<std::string, std::size_t> index{{canonical_key(f), 0}};

  // Path of edges from `from` to `to`, if the explored graph has one.
  auto path_between = [&](std::size_t from, std::size_t to) -> std::optional<std::vector<const Edge*>> {
    std::vector<const Edge*> via(states.size(), nullptr);
    std::vector<std::size_t> prev(states.size(), 0);
    std::vector<bool> seen(states.size(), false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      if (u == to) {
        std::vector<const Edge*> path;
        for (std::size_t v = to; v != from; v = prev[v]) path.push_back(via[v]);
        return std::vector<const Edge*>(path.rbegin(), path.rend());
      }
      for (const Edge& e : out[u])
        if (!seen[e.to]) {
          seen[e.to] = true;
          via[e.to] = &e;
          prev[e.to] = u;
          queue.push_back(e.to);
        }
    }
    return std::nullopt;
  };

  // Trace: root to v, then around the cycle v -> ... -> u -> v.
  auto build = [&](std::size_t v, const std::vector<const Edge*>& loop) {
    std::vector<const Edge*> lead;
    for (std::size_t x = v; parent[x].second != nullptr; x = parent[x].first) lead.push_back(parent[x].second);
    RewriteTrace trace{f, {}};
    for (auto it = lead.rbegin(); it != lead.rend(); ++it)
      trace.steps.push_back({(*it)->cell, (*it)->match, states[(*it)->to]});
    for (const Edge* e : loop) trace.steps.push_back({e->cell, e->match, states[e->to]});
    return trace;
  };

  // Edge lists are only appended to after a node is expanded, so pointers
  // into them stay valid once the node's list is complete.
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    std::vector<Edge> edges;
    std::vector<std::size_t> back;
    for (const Match& m : find_redexes(states[u], cells)) {
      TwoPath next = apply(states[u], cells, m);
      std::string key = canonical_key(next);
      auto it = index.find(key);
      std::size_t v;
      if (it == index.end()) {
        if (states.size() >= bound) continue;
        v = states.size();
        index.emplace(std::move(key), v);
        states.push_back(std::move(next));
        depth.push_back(depth[u] + 1);
        out.emplace_back();
        parent.push_back({u, nullptr});
        queue.push_back(v);
      } else {
        v = it->second;
        if (depth[v] <= depth[u]) back.push_back(edges.size());
      }
      edges.push_back({v, cells[m.cell].name, m.digest()});
    }
    out[u] = std::move(edges);
    for (const Edge& e : out[u])
      if (parent[e.to].second == nullptr && e.to != 0 && parent[e.to].first == u) parent[e.to].second = &e;
    for (std::size_t k : back) {
      const Edge& e = out[u][k];
      if (auto p = path_between(e.to, u)) {
        p->push_back(&e);
        return build(e.to, *p);
      }
    }
  }
  // Whatever was explored: look for a back edge with one colouring pass.
  std::vector<char> color(states.size(), 0);
  for (std::size_t root = 0; root < states.size(); ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next == out[u].size()) {
        color[u] = 2;
        stack.pop_back();
        continue;
      }
      const Edge& e = out[u][next++];
      if (color[e.to] == 1) {
        auto p = path_between(e.to, u);
        p->push_back(&e);
        return build(e.to, *p);
      }
      if (color[e.to] == 0) {
        color[e.to] = 1;
        stack.push_back({e.to, 0});
      }
    }
  }
  return std::nullopt;
}

nlohmann::json to_json(const RewriteTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TraceStep& s : trace.steps)
    steps.push_back({{"cell", s.cell}, {"match", s.match}, {"result", text_lines(s.result)}});
  return {{"initial", text_lines(trace.initial)}, {"steps", steps}};
}

}  // namespace polyterm
