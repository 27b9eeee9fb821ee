#include "sana/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <string>

namespace sana {

namespace {

constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

std::vector<std::vector<NodeId>> raw_adjacency(const TopologySpec& spec) {
  std::vector<std::vector<NodeId>> adj(spec.node_count);
  for (const auto& l : spec.links) {
    if (l.a < spec.node_count && l.b < spec.node_count && l.a != l.b) {
      adj[l.a].push_back(l.b);
      adj[l.b].push_back(l.a);
    }
  }
  return adj;
}

}  // namespace

bool is_connected(const TopologySpec& spec) {
  if (spec.node_count == 0) return false;
  const auto adj = raw_adjacency(spec);
  std::vector<bool> seen(spec.node_count, false);
  std::deque<NodeId> frontier{0};
  seen[0] = true;
  std::uint32_t reached = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push_back(v);
      }
    }
  }
  return reached == spec.node_count;
}

Network build_topology(const TopologySpec& spec) {
  if (spec.node_count < 2) {
    throw Error("TooFewNodes", "topology needs at least 2 nodes, got " + std::to_string(spec.node_count));
  }
  Network net;
  net.adjacency_.assign(spec.node_count, {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& l : spec.links) {
    if (l.a >= spec.node_count || l.b >= spec.node_count) {
      throw Error("UnknownNode", "link " + std::to_string(l.a) + "-" + std::to_string(l.b) +
                                     " references an undeclared node");
    }
    if (l.a == l.b) throw Error("SelfLoop", "self-loop at node " + std::to_string(l.a));
    const NodeId lo = std::min(l.a, l.b);
    const NodeId hi = std::max(l.a, l.b);
    if (!seen.insert({lo, hi}).second) {
      throw Error("DuplicateLink", "duplicate link " + std::to_string(lo) + "-" + std::to_string(hi));
    }
    const std::uint32_t bw = l.bandwidth == 0 ? spec.default_bandwidth : l.bandwidth;
    if (bw < 1) throw Error("InvalidBandwidth", "link bandwidth must be >= 1");
    net.links_.push_back({lo, hi, bw});
  }
  std::sort(net.links_.begin(), net.links_.end(),
            [](const Link& x, const Link& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (const auto& l : net.links_) {
    net.adjacency_[l.a].push_back(l.b);
    net.adjacency_[l.b].push_back(l.a);
  }
  for (auto& row : net.adjacency_) std::sort(row.begin(), row.end());
  net.adjacency_links_.resize(spec.node_count);
  for (NodeId n = 0; n < spec.node_count; ++n) {
    for (NodeId m : net.adjacency_[n]) {
      const NodeId lo = std::min(n, m);
      const NodeId hi = std::max(n, m);
      const auto it = std::lower_bound(net.links_.begin(), net.links_.end(), Link{lo, hi, 0},
                                       [](const Link& x, const Link& y) {
                                         return std::tie(x.a, x.b) < std::tie(y.a, y.b);
                                       });
      net.adjacency_links_[n].push_back(static_cast<std::size_t>(it - net.links_.begin()));
    }
  }
  if (!is_connected(spec)) throw Error("DisconnectedGraph", "topology is not connected");
  return net;
}

std::optional<std::size_t> Network::link_index(NodeId u, NodeId v) const {
  if (!contains(u)) return std::nullopt;
  const auto& row = adjacency_[u];
  const auto it = std::lower_bound(row.begin(), row.end(), v);
  if (it == row.end() || *it != v) return std::nullopt;
  return adjacency_links_[u][static_cast<std::size_t>(it - row.begin())];
}

std::uint32_t Network::bandwidth(NodeId u, NodeId v) const {
  const auto idx = link_index(u, v);
  if (!idx) throw Error("UnknownLink", "no link " + std::to_string(u) + "-" + std::to_string(v));
  return links_[*idx].bandwidth;
}

TopologySpec erdos_renyi_spec(std::uint32_t nodes, double p, Rng& rng, std::uint32_t bandwidth,
                              int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    TopologySpec spec;
    spec.node_count = nodes;
    spec.default_bandwidth = bandwidth;
    for (NodeId a = 0; a < nodes; ++a) {
      for (NodeId b = a + 1; b < nodes; ++b) {
        if (bernoulli(rng, p)) spec.links.push_back({a, b, 0});
      }
    }
    if (is_connected(spec)) return spec;
  }
  throw Error("DisconnectedGraph", "no connected G(n,p) sample within the retry budget");
}

RoutingTable::RoutingTable(const Network& net) : n_(net.node_count()) {
  next_.assign(static_cast<std::size_t>(n_) * n_, 0);
  dist_.assign(static_cast<std::size_t>(n_) * n_, kUnreachable);
  // Dijkstra from every destination; links are symmetric so dist(d, s) == dist(s, d).
  using Item = std::pair<std::uint32_t, NodeId>;
  for (NodeId d = 0; d < n_; ++d) {
    std::vector<std::uint32_t> dist(n_, kUnreachable);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[d] = 0;
    heap.push({0, d});
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (du != dist[u]) continue;
      for (NodeId v : net.neighbors(u)) {
        if (du + 1 < dist[v]) {
          dist[v] = du + 1;
          heap.push({dist[v], v});
        }
      }
    }
    for (NodeId s = 0; s < n_; ++s) {
      dist_[index(s, d)] = dist[s];
      if (s == d) {
        next_[index(s, d)] = d;
        continue;
      }
      // neighbors are sorted, so the first one on a shortest path is the smallest id
      for (NodeId v : net.neighbors(s)) {
        if (dist[v] + 1 == dist[s]) {
          next_[index(s, d)] = v;
          break;
        }
      }
    }
  }
}

std::uint32_t RoutingTable::diameter() const {
  std::uint32_t best = 0;
  for (auto d : dist_) {
    if (d != kUnreachable) best = std::max(best, d);
  }
  return best;
}

std::vector<double> betweenness(const Network& net) {
  const std::uint32_t n = net.node_count();
  std::vector<double> cb(n, 0.0);
  for (NodeId s = 0; s < n; ++s) {
    std::vector<NodeId> order;
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<double> sigma(n, 0.0);
    std::vector<int> dist(n, -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<NodeId> q{s};
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop_front();
      order.push_back(v);
      for (NodeId w : net.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    std::vector<double> delta(n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  for (auto& c : cb) c /= 2.0;
  return cb;
}

std::vector<NodeId> top_betweenness(const Network& net, std::size_t k) {
  const auto cb = betweenness(net);
  std::vector<NodeId> ids(cb.size());
  for (NodeId i = 0; i < ids.size(); ++i) ids[i] = i;
  std::stable_sort(ids.begin(), ids.end(), [&](NodeId x, NodeId y) { return cb[x] > cb[y]; });
  ids.resize(std::min(k, ids.size()));
  return ids;
}

}  // namespace sana
