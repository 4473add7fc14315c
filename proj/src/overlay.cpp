#include "coopnet/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace coopnet {

bool FitnessWeights::valid() const {
    const double ws[] = {uptime, bandwidth_in, bandwidth_out, latency, redundancy, cpu, chain};
    double sum = 0;
    for (double w : ws) {
        if (w < 0 || !std::isfinite(w)) return false;
        sum += w;
    }
    return std::abs(sum - 1.0) < 1e-9 && bandwidth_ref > 0 && latency_floor_ms > 0 &&
           redundancy_ref > 0;
}

double score_fitness(const FitnessMetrics& m, const FitnessWeights& w) {
    auto clamp01 = [](double v) { return v < 0 ? 0.0 : (v > 1 ? 1.0 : v); };
    double latency_component =
        m.latency_ms <= w.latency_floor_ms ? 1.0 : w.latency_floor_ms / m.latency_ms;
    return w.uptime * clamp01(m.uptime_fraction) +
           w.bandwidth_in * clamp01(m.bandwidth_in / w.bandwidth_ref) +
           w.bandwidth_out * clamp01(m.bandwidth_out / w.bandwidth_ref) +
           w.latency * clamp01(latency_component) +
           w.redundancy * clamp01(m.redundancy_degree / w.redundancy_ref) +
           w.cpu * clamp01(m.cpu_score) + w.chain * (m.chain_present ? 1.0 : 0.0);
}

bool Topology::is_super_peer(NodeId n) const {
    return std::binary_search(super_peers.begin(), super_peers.end(), n);
}

std::uint32_t Topology::connection_count(NodeId sp) const {
    std::uint32_t count = 0;
    for (const auto& [node, conn] : edges) {
        if (conn.primary == sp) ++count;
        for (NodeId b : conn.backups)
            if (b == sp) ++count;
    }
    return count;
}

std::vector<NodeId> Topology::attached_full_nodes(NodeId sp) const {
    std::vector<NodeId> out;
    for (const auto& [node, conn] : edges) {
        if (conn.primary == sp || std::find(conn.backups.begin(), conn.backups.end(), sp) !=
                                      conn.backups.end())
            out.push_back(node);
    }
    return out;
}

SelectionResult select_super_peers(const std::vector<std::pair<NodeId, double>>& candidates,
                                   const OverlayConfig& cfg) {
    std::vector<std::pair<NodeId, double>> ranked = candidates;
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    SelectionResult result;
    std::size_t n = std::min<std::size_t>(cfg.super_peer_count, ranked.size());
    result.shortfall = ranked.size() < cfg.super_peer_count;
    result.super_peers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) result.super_peers.push_back(ranked[i].first);
    std::sort(result.super_peers.begin(), result.super_peers.end());
    return result;
}

std::vector<NodeId> bootstrap_peers(const std::vector<NodeId>& registry, std::size_t count,
                                    RngStream& rng) {
    if (registry.empty()) throw EmptyRegistry("bootstrap registry is empty");
    return rng.sample(registry, count);
}

ConnectionPlan join_network(NodeId new_node, const std::vector<NodeId>& bootstrap_view,
                            const Topology& topology, const OverlayConfig& cfg,
                            const std::map<NodeId, double>& latency_to_sp,
                            std::uint32_t live_full_nodes, RngStream& rng) {
    if (bootstrap_view.empty()) throw EmptyRegistry("bootstrap view is empty");
    // solicitation round: ten random connected nodes are asked for the
    // super-peer set; everyone agrees on it, so one draw settles the view
    (void)bootstrap_peers(bootstrap_view, 10, rng);

    const std::uint32_t cap = cfg.connection_cap(live_full_nodes);
    std::vector<std::pair<double, NodeId>> eligible;
    for (NodeId sp : topology.super_peers) {
        if (sp == new_node) continue;
        if (topology.connection_count(sp) >= cap) continue;
        auto it = latency_to_sp.find(sp);
        double lat = it == latency_to_sp.end() ? 1e9 : it->second;
        eligible.push_back({lat, sp});
    }
    std::sort(eligible.begin(), eligible.end());
    if (eligible.size() < 3) throw NoCapacity("fewer than three eligible super peers");
    ConnectionPlan plan;
    plan.primary = eligible[0].second;
    plan.backups = {eligible[1].second, eligible[2].second};
    return plan;
}

NodeId select_seed_agent(const std::vector<SeedCandidate>& candidates) {
    if (candidates.empty()) throw EmptyRegistry("no seed agents");
    const SeedCandidate* best = &candidates.front();
    auto cost = [](const SeedCandidate& c) { return c.latency_ms * (1.0 + c.load); };
    for (const auto& c : candidates) {
        double cb = cost(*best), cc = cost(c);
        if (cc < cb || (cc == cb && c.id < best->id)) best = &c;
    }
    return best->id;
}

namespace {

std::vector<std::pair<NodeId, NodeId>> build_ring(const std::vector<NodeId>& sps) {
    std::vector<std::pair<NodeId, NodeId>> ring;
    if (sps.size() < 2) return ring;
    for (std::size_t i = 0; i < sps.size(); ++i)
        ring.push_back({sps[i], sps[(i + 1) % sps.size()]});
    return ring;
}

} // namespace

Topology reconfigure(const Topology& topology, const ReconfigureInputs& in,
                     const OverlayConfig& cfg, RngStream& rng) {
    SelectionResult sel = select_super_peers(in.fitness_scores, cfg);
    Topology next;
    next.super_peers = sel.super_peers;
    next.ring_edges = build_ring(next.super_peers);
    next.aggregators = topology.aggregators; // rebuilt by the engine if rings are on

    std::set<NodeId> sp_set(next.super_peers.begin(), next.super_peers.end());
    std::uint32_t full_nodes = 0;
    for (NodeId n : in.live_nodes)
        if (!sp_set.count(n)) ++full_nodes;
    const std::uint32_t cap = cfg.connection_cap(full_nodes);
    for (NodeId sp : next.super_peers) next.capacities[sp] = cap;

    // keep existing assignments that are still valid, rejoin the rest
    for (NodeId n : in.live_nodes) {
        if (sp_set.count(n)) continue;
        auto old = topology.edges.find(n);
        bool keep = old != topology.edges.end() && sp_set.count(old->second.primary) &&
                    old->second.backups.size() == 2;
        if (keep)
            for (NodeId b : old->second.backups) keep = keep && sp_set.count(b) > 0;
        if (keep) {
            next.edges[n] = old->second;
            continue;
        }
        std::map<NodeId, double> lat;
        auto row = in.latency.find(n);
        for (NodeId sp : next.super_peers) {
            double l = 50.0;
            if (row != in.latency.end()) {
                auto cell = row->second.find(sp);
                if (cell != row->second.end()) l = cell->second;
            }
            lat[sp] = l;
        }
        ConnectionPlan plan = join_network(n, in.live_nodes, next, cfg, lat, full_nodes, rng);
        next.edges[n] = NodeConnections{plan.primary, plan.backups};
    }
    return next;
}

std::vector<std::string> check_topology(const Topology& t, std::uint32_t live_full_nodes,
                                        const OverlayConfig& cfg) {
    std::vector<std::string> violations;
    for (const auto& [node, conn] : t.edges) {
        if (conn.backups.size() != 2)
            violations.push_back("node " + std::to_string(node) + " lacks 2 backups");
        if (!t.is_super_peer(conn.primary))
            violations.push_back("node " + std::to_string(node) + " primary not a super peer");
        for (NodeId b : conn.backups)
            if (!t.is_super_peer(b))
                violations.push_back("node " + std::to_string(node) + " backup not a super peer");
        std::set<NodeId> distinct{conn.primary};
        for (NodeId b : conn.backups) distinct.insert(b);
        if (distinct.size() != 1 + conn.backups.size())
            violations.push_back("node " + std::to_string(node) + " duplicate connections");
    }
    const std::uint32_t cap = cfg.connection_cap(live_full_nodes);
    for (NodeId sp : t.super_peers) {
        if (t.connection_count(sp) > cap)
            violations.push_back("super peer " + std::to_string(sp) + " over capacity");
    }
    if (t.super_peers.size() >= 2 && t.ring_edges.size() != t.super_peers.size())
        violations.push_back("ring incomplete");
    return violations;
}

std::string topology_to_json(const Topology& t) {
    std::ostringstream os;
    os << "{\"super_peers\":[";
    for (std::size_t i = 0; i < t.super_peers.size(); ++i)
        os << (i ? "," : "") << t.super_peers[i];
    os << "],\"ring\":[";
    for (std::size_t i = 0; i < t.ring_edges.size(); ++i)
        os << (i ? "," : "") << "[" << t.ring_edges[i].first << "," << t.ring_edges[i].second
           << "]";
    os << "],\"edges\":[";
    bool first = true;
    for (const auto& [node, conn] : t.edges) {
        os << (first ? "" : ",") << "{\"node\":" << node << ",\"primary\":" << conn.primary
           << ",\"backups\":[";
        for (std::size_t i = 0; i < conn.backups.size(); ++i)
            os << (i ? "," : "") << conn.backups[i];
        os << "]}";
        first = false;
    }
    os << "],\"aggregators\":[";
    bool firsta = true;
    for (const auto& [sp, agg] : t.aggregators) {
        os << (firsta ? "" : ",") << "[" << sp << "," << agg << "]";
        firsta = false;
    }
    os << "]}";
    return os.str();
}

} // namespace coopnet
