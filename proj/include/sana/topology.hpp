#pragma once

#include <optional>
#include <vector>

#include "sana/rng.hpp"
#include "sana/types.hpp"

namespace sana {

struct LinkSpec {
  NodeId a = 0;
  NodeId b = 0;
  std::uint32_t bandwidth = 0;  // 0 = use TopologySpec::default_bandwidth
  bool operator==(const LinkSpec&) const = default;
};

/// Declarative topology: explicit edge list over nodes [0, node_count).
struct TopologySpec {
  std::uint32_t node_count = 0;
  std::vector<LinkSpec> links;
  std::uint32_t default_bandwidth = 4;
  bool operator==(const TopologySpec&) const = default;
};

struct Link {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  std::uint32_t bandwidth = 1;
};

/// Validated undirected, connected, simple graph.
class Network {
 public:
  std::uint32_t node_count() const noexcept { return static_cast<std::uint32_t>(adjacency_.size()); }
  const std::vector<Link>& links() const noexcept { return links_; }
  /// Neighbors of `n` in ascending id order.
  const std::vector<NodeId>& neighbors(NodeId n) const { return adjacency_.at(n); }
  /// Index into links() for the link joining u and v, if any.
  std::optional<std::size_t> link_index(NodeId u, NodeId v) const;
  std::uint32_t bandwidth(NodeId u, NodeId v) const;
  bool contains(NodeId n) const noexcept { return n < node_count(); }

 private:
  friend Network build_topology(const TopologySpec& spec);
  std::vector<Link> links_;
  std::vector<std::vector<NodeId>> adjacency_;
  // adjacency-parallel: link index for adjacency_[n][i]
  std::vector<std::vector<std::size_t>> adjacency_links_;
};

/// Throws Error with code DisconnectedGraph, DuplicateLink, SelfLoop,
/// UnknownNode, TooFewNodes or InvalidBandwidth.
Network build_topology(const TopologySpec& spec);

/// G(n, p) edge sampling, retried until connected (at most `max_attempts`).
TopologySpec erdos_renyi_spec(std::uint32_t nodes, double p, Rng& rng,
                              std::uint32_t bandwidth, int max_attempts = 10000);

/// Breadth-first connectivity check on a raw spec (no validation).
bool is_connected(const TopologySpec& spec);

/// All-pairs shortest-path next hops over unit link costs.
class RoutingTable {
 public:
  RoutingTable() = default;
  explicit RoutingTable(const Network& net);

  /// Next node on a minimum-hop path from `src` toward `dst`; ties go to
  /// the smallest neighbor id. next_hop(n, n) == n.
  NodeId next_hop(NodeId src, NodeId dst) const { return next_[index(src, dst)]; }
  std::uint32_t distance(NodeId src, NodeId dst) const { return dist_[index(src, dst)]; }
  std::uint32_t node_count() const noexcept { return n_; }
  std::uint32_t diameter() const;

 private:
  std::size_t index(NodeId s, NodeId d) const { return static_cast<std::size_t>(s) * n_ + d; }
  std::uint32_t n_ = 0;
  std::vector<NodeId> next_;
  std::vector<std::uint32_t> dist_;
};

inline RoutingTable compute_routing(const Network& net) { return RoutingTable(net); }

/// Brandes betweenness centrality (unnormalized, undirected).
std::vector<double> betweenness(const Network& net);

/// Ids of the `k` highest-betweenness nodes, ties to the smaller id.
std::vector<NodeId> top_betweenness(const Network& net, std::size_t k);

}  // namespace sana
