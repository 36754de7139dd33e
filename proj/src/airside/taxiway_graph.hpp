#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"

namespace cvq::airside {

struct Node {
  NodeId id = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  bool gate = false;
  bool threshold = false;
};

struct Adjacency {
  NodeId to = 0;
  double length_m = 0.0;
};

/// Undirected taxiway lattice with labeled gate and runway-threshold nodes.
class TaxiwayGraph {
 public:
  void add_node(const Node& node);
  /// Adds an undirected edge. When `length_m` is absent the Euclidean distance
  /// between the endpoints is used.
  void add_edge(NodeId a, NodeId b, std::optional<double> length_m = std::nullopt);

  [[nodiscard]] bool has_node(NodeId id) const { return index_.contains(id); }
  [[nodiscard]] const Node& node(NodeId id) const;
  [[nodiscard]] std::span<const Node> nodes() const { return nodes_; }
  [[nodiscard]] std::span<const Adjacency> neighbors(NodeId id) const;
  [[nodiscard]] std::size_t edge_count() const { return edge_count_; }

  /// Gate node ids in ascending order.
  [[nodiscard]] std::vector<NodeId> gates() const;
  /// Threshold node ids in ascending order.
  [[nodiscard]] std::vector<NodeId> thresholds() const;

 private:
  std::size_t checked_index(NodeId id) const;

  std::vector<Node> nodes_;
  std::vector<std::vector<Adjacency>> adjacency_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::size_t edge_count_ = 0;
};

/// Parses the line-oriented lattice format:
///   node <id> <x_m> <y_m> [gate|threshold]
///   edge <id1> <id2> [length_m]
/// Blank lines and `#` comments are ignored. Throws InputError with the line
/// number on malformed input.
TaxiwayGraph parse_lattice(std::istream& in, const std::string& source_name = "<lattice>");
TaxiwayGraph load_lattice(const std::filesystem::path& path);
void write_lattice(const TaxiwayGraph& graph, std::ostream& out);

struct TaxiPath {
  std::vector<NodeId> nodes;
  double length_m = 0.0;
};

/// Minimum-length path between two nodes. Among equal-length paths the
/// lexicographically smallest node-id sequence is returned. Throws ConfigError
/// if no path exists and InputError if either node is unknown.
TaxiPath shortest_path(const TaxiwayGraph& graph, NodeId from, NodeId to);

}  // namespace cvq::airside
