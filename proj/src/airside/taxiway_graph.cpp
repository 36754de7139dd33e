#include "airside/taxiway_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "core/errors.hpp"

namespace cvq::airside {

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void TaxiwayGraph::add_node(const Node& node) {
  if (index_.contains(node.id)) {
    throw InputError("duplicate node id " + std::to_string(node.id));
  }
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(node);
  adjacency_.emplace_back();
}

void TaxiwayGraph::add_edge(NodeId a, NodeId b, std::optional<double> length_m) {
  const std::size_t ia = checked_index(a);
  const std::size_t ib = checked_index(b);
  if (a == b) throw InputError("self-loop edge on node " + std::to_string(a));
  double length = 0.0;
  if (length_m) {
    length = *length_m;
  } else {
    length = std::hypot(nodes_[ia].x_m - nodes_[ib].x_m, nodes_[ia].y_m - nodes_[ib].y_m);
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InputError("edge " + std::to_string(a) + "-" + std::to_string(b) +
                     " must have a strictly positive length");
  }
  adjacency_[ia].push_back({b, length});
  adjacency_[ib].push_back({a, length});
  ++edge_count_;
}

const Node& TaxiwayGraph::node(NodeId id) const { return nodes_[checked_index(id)]; }

std::span<const Adjacency> TaxiwayGraph::neighbors(NodeId id) const {
  return adjacency_[checked_index(id)];
}

std::vector<NodeId> TaxiwayGraph::gates() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.gate) out.push_back(n.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> TaxiwayGraph::thresholds() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.threshold) out.push_back(n.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t TaxiwayGraph::checked_index(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown node id " + std::to_string(id));
  return it->second;
}

TaxiwayGraph parse_lattice(std::istream& in, const std::string& source_name) {
  TaxiwayGraph graph;
  struct PendingEdge {
    NodeId a, b;
    std::optional<double> length;
    std::size_t line;
  };
  std::vector<PendingEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    if (keyword == "node") {
      Node n;
      if (!(fields >> n.id >> n.x_m >> n.y_m)) parse_fail(source_name, line_no, "expected: node <id> <x_m> <y_m> [gate|threshold]");
      std::string label;
      while (fields >> label) {
        if (label == "gate") {
          n.gate = true;
        } else if (label == "threshold") {
          n.threshold = true;
        } else {
          parse_fail(source_name, line_no, "unknown node label '" + label + "'");
        }
      }
      try {
        graph.add_node(n);
      } catch (const InputError& e) {
        parse_fail(source_name, line_no, e.what());
      }
    } else if (keyword == "edge") {
      PendingEdge e{};
      e.line = line_no;
      if (!(fields >> e.a >> e.b)) parse_fail(source_name, line_no, "expected: edge <id1> <id2> [length_m]");
      std::string token;
      if (fields >> token) {
        try {
          std::size_t used = 0;
          e.length = std::stod(token, &used);
          if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
          parse_fail(source_name, line_no, "invalid edge length '" + token + "'");
        }
        if (fields >> token) parse_fail(source_name, line_no, "trailing fields after edge length");
      }
      edges.push_back(e);
    } else {
      parse_fail(source_name, line_no, "unknown record '" + keyword + "'");
    }
  }
  // Edges may reference nodes declared later in the file.
  for (const auto& e : edges) {
    try {
      graph.add_edge(e.a, e.b, e.length);
    } catch (const InputError& err) {
      parse_fail(source_name, e.line, err.what());
    }
  }
  return graph;
}

TaxiwayGraph load_lattice(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lattice file " + path.string());
  return parse_lattice(in, path.string());
}

void write_lattice(const TaxiwayGraph& graph, std::ostream& out) {
  for (const auto& n : graph.nodes()) {
    out << "node " << n.id << ' ' << n.x_m << ' ' << n.y_m;
    if (n.gate) out << " gate";
    if (n.threshold) out << " threshold";
    out << '\n';
  }
  for (const auto& n : graph.nodes()) {
    for (const auto& adj : graph.neighbors(n.id)) {
      if (adj.to > n.id) out << "edge " << n.id << ' ' << adj.to << ' ' << adj.length_m << '\n';
    }
  }
}

TaxiPath shortest_path(const TaxiwayGraph& graph, NodeId from, NodeId to) {
  if (!graph.has_node(from)) throw InputError("unknown node id " + std::to_string(from));
  if (!graph.has_node(to)) throw InputError("unknown node id " + std::to_string(to));

  // Distances to the target, then a greedy walk from the source that always
  // takes the smallest-id neighbour lying on some shortest path. Every such
  // choice can be completed, so the walk yields the lexicographically
  // smallest minimal sequence.
  std::unordered_map<NodeId, double> dist;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  dist[to] = 0.0;
  frontier.emplace(0.0, to);
  while (!frontier.empty()) {
    auto [d, u] = frontier.top();
    frontier.pop();
    if (d > dist[u]) continue;
    for (const auto& adj : graph.neighbors(u)) {
      const double candidate = d + adj.length_m;
      auto it = dist.find(adj.to);
      if (it == dist.end() || candidate < it->second) {
        dist[adj.to] = candidate;
        frontier.emplace(candidate, adj.to);
      }
    }
  }
  auto reached = dist.find(from);
  if (reached == dist.end()) {
    throw ConfigError("no taxi path from node " + std::to_string(from) + " to node " + std::to_string(to));
  }

  TaxiPath path;
  path.nodes.push_back(from);
  NodeId current = from;
  while (current != to) {
    const double here = dist.at(current);
    std::optional<NodeId> next;
    double step_length = 0.0;
    for (const auto& adj : graph.neighbors(current)) {
      auto it = dist.find(adj.to);
      if (it == dist.end() || !(it->second < here)) continue;
      if (!nearly_equal(it->second + adj.length_m, here)) continue;
      if (!next || adj.to < *next || (adj.to == *next && adj.length_m < step_length)) {
        next = adj.to;
        step_length = adj.length_m;
      }
    }
    if (!next) throw ConfigError("shortest path reconstruction failed at node " + std::to_string(current));
    path.nodes.push_back(*next);
    path.length_m += step_length;
    current = *next;
  }
  return path;
}

}  // namespace cvq::airside
