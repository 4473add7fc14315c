#include "coopnet/consensus.hpp"

#include <algorithm>
#include <set>

namespace coopnet {

const char* to_string(VoteOutcome o) {
    switch (o) {
    case VoteOutcome::yes: return "yes";
    case VoteOutcome::no: return "no";
    case VoteOutcome::no_quorum: return "no-quorum";
    }
    return "?";
}

const char* to_string(VerdictOutcome o) {
    switch (o) {
    case VerdictOutcome::upheld: return "upheld";
    case VerdictOutcome::rejected: return "rejected";
    case VerdictOutcome::misbehavior_proven: return "misbehavior-proven";
    }
    return "?";
}

VoteOutcome tally_votes(const std::vector<Vote>& votes, const StakeTable& stakes) {
    const std::uint64_t total = stakes.total();
    std::uint64_t yes_stake = 0, no_stake = 0;
    std::set<Address> seen;
    for (const Vote& v : votes) {
        if (!seen.insert(v.voter).second) continue; // first vote counts
        std::uint64_t s = stakes.stake_of(v.voter);
        (v.yes ? yes_stake : no_stake) += s;
    }
    const std::uint64_t responding = yes_stake + no_stake;
    if (2 * yes_stake > total) return VoteOutcome::yes;
    if (2 * responding <= total) return VoteOutcome::no_quorum;
    return VoteOutcome::no;
}

ReplayResult replay_attest(const std::vector<LogEntry>& accused_log,
                           const PayloadArchive& archive, const MintReference& ref) {
    auto diverge = [](std::uint64_t idx, std::string what) {
        return ReplayResult{false, idx, std::move(what)};
    };

    std::map<Digest, std::int64_t> arrivals;       // txid -> logged consensus arrival
    std::map<Digest, AckedTransaction> pending;    // acked, not yet sealed
    std::int64_t last_ack_ms = INT64_MIN;

    for (const LogEntry& e : accused_log) {
        const Bytes* payload = archive.find(e.payload_digest);
        switch (e.activity_kind) {
        case ActivityKind::receive_tx: {
            if (!payload) return diverge(e.index, "arrival payload missing from archive");
            ArrivalRecord rec = ArrivalRecord::decode(*payload);
            arrivals[rec.txid] = rec.arrival_ms;
            break;
        }
        case ActivityKind::ack_tx:
        case ActivityKind::reject_tx: {
            if (!payload) return diverge(e.index, "ack payload missing from archive");
            AckRecord rec = AckRecord::decode(*payload);
            auto arr = arrivals.find(rec.txid);
            if (arr == arrivals.end())
                return diverge(e.index, "ack for a transaction never logged as received");
            if (rec.ack_ms != arr->second)
                return diverge(e.index, "ack timestamp differs from logged arrival");
            if (rec.ack_ms < last_ack_ms)
                return diverge(e.index,
                               "ack timestamp regresses against the log's entanglement order");
            last_ack_ms = rec.ack_ms;
            if (ack_status_is_accept(rec.status)) {
                AckedTransaction at;
                at.tx = std::make_shared<Transaction>(); // only id and stamp feed the rebuild
                auto tx = std::make_shared<Transaction>();
                tx->id = rec.txid;
                at.tx = tx;
                at.ack_timestamp = rec.ack_ms;
                pending[rec.txid] = at;
            }
            break;
        }
        case ActivityKind::new_block_hash: {
            if (!payload) return diverge(e.index, "seal payload missing from archive");
            SealRecord rec = SealRecord::decode(*payload);
            const Block* parent = ref.parent_block ? ref.parent_block(rec.height - 1) : nullptr;
            if (!parent) return diverge(e.index, "sealed height has no known parent block");
            std::vector<AckedTransaction> acked;
            acked.reserve(pending.size());
            for (const auto& [txid, at] : pending) acked.push_back(at);
            std::sort(acked.begin(), acked.end(), acked_before);
            if (acked.size() > ref.policy.max_block_txs)
                acked.resize(ref.policy.max_block_txs); // overflow awaits the next cycle
            Block rebuilt = build_block(acked, *parent, ref.policy, ref.reward_address);
            if (rebuilt.block_hash != rec.block_hash)
                return diverge(e.index, "sealed block differs from rebuild over logged inputs");
            for (const auto& at : rebuilt.txs) pending.erase(at.tx->id);
            break;
        }
        default: break; // entanglement, probes, votes: nothing to re-execute
        }
    }
    return ReplayResult{};
}

namespace {

/// nullopt = no contradiction; otherwise the index where the held head and
/// the presented log disagree.
std::optional<std::uint64_t> head_contradicts_log(const Authenticator& held,
                                                  const std::vector<LogEntry>& log,
                                                  ByteView signer_public_key,
                                                  const CryptoProvider& provider) {
    if (!provider.verify(signer_public_key, held.signed_bytes(), held.signature))
        return std::nullopt; // unverifiable claim, not evidence
    if (log.size() <= held.head_index) return log.size();
    if (log[held.head_index].authenticator != held.head_digest) return held.head_index;
    return std::nullopt;
}

} // namespace

Verdict resolve_dispute(const DisputeCase& c, const StakeTable& stakes,
                        const std::vector<Vote>& votes, const CryptoProvider& provider) {
    Verdict v;
    v.proposal_id = c.proposal_id;

    auto tampered = [&](const DisputeSide& side) -> std::optional<std::uint64_t> {
        VerificationReport r = verify_log(side.log, side.head, &provider, side.public_key);
        if (!r.ok) return r.first_bad_index;
        return std::nullopt;
    };
    if (auto bad = tampered(c.accused)) {
        v.outcome = VerdictOutcome::misbehavior_proven;
        v.guilty = c.accused.party;
        v.evidence = LogRef{c.accused.party, *bad};
        v.detail = "accused log fails verification";
        return v;
    }
    if (auto bad = tampered(c.accuser)) {
        v.outcome = VerdictOutcome::misbehavior_proven;
        v.guilty = c.accuser.party;
        v.evidence = LogRef{c.accuser.party, *bad};
        v.detail = "accuser log fails verification";
        return v;
    }
    if (c.accuser.held_counterparty_head) {
        if (auto idx = head_contradicts_log(*c.accuser.held_counterparty_head, c.accused.log,
                                            c.accused.public_key, provider)) {
            v.outcome = VerdictOutcome::misbehavior_proven;
            v.guilty = c.accused.party;
            v.evidence = LogRef{c.accused.party, *idx};
            v.detail = "accused signed a head its presented log does not contain";
            return v;
        }
    }
    if (c.accused.held_counterparty_head) {
        if (auto idx = head_contradicts_log(*c.accused.held_counterparty_head, c.accuser.log,
                                            c.accuser.public_key, provider)) {
            v.outcome = VerdictOutcome::misbehavior_proven;
            v.guilty = c.accuser.party;
            v.evidence = LogRef{c.accuser.party, *idx};
            v.detail = "accuser signed a head its presented log does not contain";
            return v;
        }
    }
    if (c.mint_reference && c.archive) {
        ReplayResult r = replay_attest(c.accused.log, *c.archive, *c.mint_reference);
        if (!r.matches) {
            v.outcome = VerdictOutcome::misbehavior_proven;
            v.guilty = c.accused.party;
            v.evidence = LogRef{c.accused.party, r.diverged_index};
            v.detail = r.what;
            return v;
        }
    }
    // both replays consistent: ambiguous (e.g. pure network loss), vote it out
    switch (tally_votes(votes, stakes)) {
    case VoteOutcome::yes: v.outcome = VerdictOutcome::upheld; return v;
    case VoteOutcome::no: v.outcome = VerdictOutcome::rejected; return v;
    case VoteOutcome::no_quorum: throw Unresolvable("no quorum and no replay divergence");
    }
    throw Unresolvable("unreachable");
}

BanResult ban_node(const Topology& topology, NodeId node, const Verdict& verdict) {
    if (verdict.outcome != VerdictOutcome::misbehavior_proven &&
        verdict.outcome != VerdictOutcome::upheld)
        throw NotAuthorized("ban requires proven misbehavior or an upheld ban vote");
    BanResult result;
    result.topology = topology;
    Topology& t = result.topology;
    auto sp_it = std::find(t.super_peers.begin(), t.super_peers.end(), node);
    if (sp_it != t.super_peers.end()) {
        t.super_peers.erase(sp_it);
        t.ring_edges.clear();
        if (t.super_peers.size() >= 2)
            for (std::size_t i = 0; i < t.super_peers.size(); ++i)
                t.ring_edges.push_back(
                    {t.super_peers[i], t.super_peers[(i + 1) % t.super_peers.size()]});
        t.capacities.erase(node);
        t.aggregators.erase(node);
        for (auto it = t.edges.begin(); it != t.edges.end();) {
            NodeConnections& conn = it->second;
            bool touched = conn.primary == node ||
                           std::find(conn.backups.begin(), conn.backups.end(), node) !=
                               conn.backups.end();
            if (touched) {
                result.orphaned.push_back(it->first);
                it = t.edges.erase(it);
            } else {
                ++it;
            }
        }
    } else {
        t.edges.erase(node);
    }
    std::sort(result.orphaned.begin(), result.orphaned.end());
    return result;
}

} // namespace coopnet
