#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyterm/trs.hpp"

namespace polyterm {

// A 1-path: an ordered product of sorts; empty is the unit product.
using OnePath = std::vector<Sort>;

OnePath concat(const OnePath& a, const OnePath& b);
std::string to_string(const OnePath& p);

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CellKind { algebra, swap, dup, erase };

std::string to_string(CellKind kind);

// A 2-cell: a typed gate.
struct CellDecl {
  std::string name;
  OnePath source;
  OnePath target;
  CellKind kind = CellKind::algebra;

  bool is_structure() const { return kind != CellKind::algebra; }

  static CellDecl algebra(const OpDecl& op);
  static CellDecl swap(const Sort& left, const Sort& right);
  static CellDecl dup(const Sort& sort);
  static CellDecl erase(const Sort& sort);

  friend bool operator==(const CellDecl&, const CellDecl&) = default;
};

// Where a wire starts: output `port` of node `node`, or global input `port`
// when `node == kBoundary`.
struct Endpoint {
  static constexpr std::size_t kBoundary = static_cast<std::size_t>(-1);

  std::size_t node = kBoundary;
  std::size_t port = 0;

  bool is_boundary() const { return node == kBoundary; }
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct Node {
  CellDecl cell;
  // Driver of each input port.
  std::vector<Endpoint> inputs;
};

// Where a wire ends: input `port` of node `node`, or global output `port`.
using Sink = Endpoint;

// An algebraic circuit: an acyclic port network with ordered interfaces.
// Every wire joins exactly one driver to exactly one sink; nodes are kept in
// a topological order (each node's drivers precede it).
class TwoPath {
 public:
  TwoPath() = default;

  static TwoPath identity(const OnePath& x);
  static TwoPath generator(const CellDecl& cell);

  // Builds from raw parts, re-sorting nodes topologically (stable with
  // respect to the given order). Throws CircuitError on malformed wiring.
  static TwoPath from_parts(OnePath source, std::vector<Node> nodes,
                            std::vector<Endpoint> outputs);

  const OnePath& source() const { return source_; }
  OnePath target() const;

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<Endpoint>& outputs() const { return outputs_; }

  // Sort carried by the wire leaving `e`.
  const Sort& sort_of(const Endpoint& e) const;

  // sinks()[node][port] for node outputs; boundary_sinks()[k] for global inputs.
  std::vector<std::vector<Sink>> sinks() const;
  std::vector<Sink> boundary_sinks() const;

  bool has_structure() const;
  bool has_algebra() const;

 private:
  OnePath source_;
  std::vector<Node> nodes_;
  std::vector<Endpoint> outputs_;
};

TwoPath compose0(const TwoPath& f, const TwoPath& g);
// Plugs f's outputs into g's inputs; throws CircuitError if t1(f) != s1(g).
TwoPath compose1(const TwoPath& f, const TwoPath& g);

// A string identifying the circuit up to deformation: equal keys iff there
// is a bijection of nodes and wires preserving cells, port order and the
// global interface order.
std::string canonical_key(const TwoPath& f);
bool eq_mod_deformation(const TwoPath& f, const TwoPath& g);

// Node indices in canonical order (the order used by canonical_key).
std::vector<std::size_t> canonical_order(const TwoPath& f);

struct Layer {
  std::size_t left = 0;
  CellDecl cell;
  std::size_t right = 0;
};

struct LayeredForm {
  OnePath source;
  std::vector<Layer> layers;
};

// One gate per layer, left and right padded with identity wires.
// Throws CircuitError if the network admits no planar layering.
LayeredForm layered(const TwoPath& f);
TwoPath from_layers(const LayeredForm& form);

// Layered text diagram: interface line, one line per layer, interface line.
std::string to_text(const TwoPath& f);
nlohmann::json to_json(const TwoPath& f);
// to_text split into lines, as a JSON array of strings.
nlohmann::json text_lines(const TwoPath& f);

}  // namespace polyterm
