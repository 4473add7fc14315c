#pragma once

#include "coopnet/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coopnet {

using NodeId = std::uint32_t;

// Super-peer overlay: a small backbone of high-fitness nodes carries all
// transaction traffic; every full node keeps one primary and two backup
// super-peer connections. Backbone nodes are instructed to keep direct
// connections to each other (the "ring" is how they are enumerated and
// exported, routing between any two of them is one hop).

struct FitnessMetrics {
    double uptime_fraction = 1.0;  // [0,1]
    double bandwidth_in = 100.0;   // Mbit/s
    double bandwidth_out = 100.0;  // Mbit/s
    double latency_ms = 50.0;      // median probe latency
    double redundancy_degree = 1;  // independent links
    double cpu_score = 0.5;        // normalized [0,1]
    bool chain_present = true;
};

struct FitnessWeights {
    double uptime = 1.0 / 7;
    double bandwidth_in = 1.0 / 7;
    double bandwidth_out = 1.0 / 7;
    double latency = 1.0 / 7;
    double redundancy = 1.0 / 7;
    double cpu = 1.0 / 7;
    double chain = 1.0 / 7;
    // normalization references: a component at or beyond its reference
    // scores 1.0; latency scores latency_floor / latency (capped at 1)
    double bandwidth_ref = 1000.0;
    double latency_floor_ms = 10.0;
    double redundancy_ref = 3.0;

    bool valid() const;
};

/// Weighted sum of normalized components; latency contributes inversely.
double score_fitness(const FitnessMetrics& m, const FitnessWeights& w);

struct OverlayConfig {
    std::uint32_t super_peer_count = 100;
    std::uint32_t max_connection_fraction_ppm = 100'000; // 10%
    std::int64_t reconfigure_period_ms = 7LL * 24 * 3600 * 1000;

    std::uint32_t connection_cap(std::uint32_t live_full_nodes) const {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(live_full_nodes) *
                                          max_connection_fraction_ppm / 1'000'000);
    }
};

struct NodeConnections {
    NodeId primary = 0;
    std::vector<NodeId> backups; // exactly 2 in a healthy topology
};

struct Topology {
    std::vector<NodeId> super_peers;                  // ascending
    std::map<NodeId, NodeConnections> edges;          // full node -> its super peers
    std::vector<std::pair<NodeId, NodeId>> ring_edges; // successor ring over super_peers
    std::map<NodeId, std::uint32_t> capacities;        // per-super-peer cap at last rebuild
    std::map<NodeId, NodeId> aggregators;              // super peer -> fronting aggregator

    bool is_super_peer(NodeId n) const;
    std::uint32_t connection_count(NodeId sp) const;
    std::vector<NodeId> attached_full_nodes(NodeId sp) const; // ascending
};

struct SelectionResult {
    std::vector<NodeId> super_peers; // ascending
    bool shortfall = false;          // fewer candidates than requested
};

/// Top N by score, ties broken by ascending node id. If fewer than N
/// candidates exist, all are selected and the shortfall flag is set.
SelectionResult select_super_peers(const std::vector<std::pair<NodeId, double>>& candidates,
                                   const OverlayConfig& cfg);

struct ConnectionPlan {
    NodeId primary = 0;
    std::vector<NodeId> backups;
};

struct NoCapacity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyRegistry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform sample (without replacement) of live nodes for a joining peer.
std::vector<NodeId> bootstrap_peers(const std::vector<NodeId>& registry, std::size_t count,
                                    RngStream& rng);

/// Join: solicit the super-peer set from up to ten random connected nodes
/// (modeled by sampling the bootstrap view), then connect to the three
/// lowest-latency super peers with spare capacity. Throws NoCapacity when
/// fewer than three are eligible.
ConnectionPlan join_network(NodeId new_node, const std::vector<NodeId>& bootstrap_view,
                            const Topology& topology, const OverlayConfig& cfg,
                            const std::map<NodeId, double>& latency_to_sp,
                            std::uint32_t live_full_nodes, RngStream& rng);

struct SeedCandidate {
    NodeId id = 0;
    double latency_ms = 0;
    std::uint32_t load = 0; // active seeding sessions
};

/// Pick the seed agent minimizing latency * (1 + load); ties by id.
NodeId select_seed_agent(const std::vector<SeedCandidate>& candidates);

struct ReconfigureInputs {
    std::vector<std::pair<NodeId, double>> fitness_scores; // all live nodes
    std::vector<NodeId> live_nodes;                        // ascending
    // pairwise latency estimate used when rehoming orphaned full nodes
    std::map<NodeId, std::map<NodeId, double>> latency;
};

/// Weekly reconfiguration: recompute the super-peer set, demote/promote,
/// re-run join for every full node whose connections broke, rebuild the ring.
Topology reconfigure(const Topology& topology, const ReconfigureInputs& in,
                     const OverlayConfig& cfg, RngStream& rng);

/// Invariant check used by tests and the runtime monitor; returns human
/// readable violations, empty when healthy.
std::vector<std::string> check_topology(const Topology& t, std::uint32_t live_full_nodes,
                                        const OverlayConfig& cfg);

std::string topology_to_json(const Topology& t);

} // namespace coopnet
