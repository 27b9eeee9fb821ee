#pragma once

// Independent reference implementations the unit and acceptance tests
// compare the simulator against.

#include <string>
#include <vector>

#include "sana/engine.hpp"

namespace sana::oracle {

/// All-pairs hop distances by Bellman-Ford relaxation over the link list.
/// Unreachable pairs hold UINT32_MAX.
std::vector<std::vector<std::uint32_t>> bellman_ford(const Network& net);

/// Connectivity by BFS from node 0.
bool bfs_connected(std::uint32_t nodes, const std::vector<LinkSpec>& links);

/// Random connected graph with up to `max_nodes` nodes.
Network random_small_graph(Rng& rng, std::uint32_t max_nodes);

struct TransportViolations {
  std::uint64_t fifo = 0;
  std::uint64_t priority = 0;
  std::uint64_t capacity = 0;
  std::uint64_t bandwidth = 0;
  std::uint64_t eviction = 0;
  std::uint64_t conservation = 0;
  std::uint64_t total() const { return fifo + priority + capacity + bandwidth + eviction + conservation; }
  std::string describe() const;
};

/// Rebuilds every queue from the log and checks each Forward, Admit, Drop
/// and Evict against the queueing rules.
TransportViolations replay_transport(const EventLog& log, const Network& net, std::size_t capacity);

/// Nodes whose outgoing pheromone reaches the threshold with a quorum of
/// ants, by enumerating every ordered node pair.
std::vector<NodeId> brute_declare(const Network& net, const PheromoneMap& map,
                                  const std::vector<std::uint32_t>& ants);

/// Per-node ant counts for the living ants in `pop`.
std::vector<std::uint32_t> ant_counts(const CellPopulation& pop, std::uint32_t nodes);

struct CorpusItem {
  Bytes payload;
  bool malicious = false;
};

/// `worm` packets that embed one of `signatures` and `benign` packets that
/// contain none of them.
std::vector<CorpusItem> mixed_corpus(Rng& rng, const std::vector<Bytes>& signatures, std::size_t worm,
                                     std::size_t benign);

/// An explicit-topology scenario on a random connected graph of at most
/// `max_nodes` nodes, with stations at nodes 0 and 1.
ScenarioConfig small_scenario(Rng& rng, std::uint32_t max_nodes);

}  // namespace sana::oracle
