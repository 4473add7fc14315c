#pragma once

#include "coopnet/crypto.hpp"
#include "coopnet/ledger.hpp"
#include "coopnet/overlay.hpp"
#include "coopnet/records.hpp"
#include "coopnet/tamper_log.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace coopnet {

// Consensus is invoked primarily when misbehavior is detected: replay the
// accused node's logged operations first (cryptographic evidence beats
// votes), fall back to a stake-weighted vote only when both sides' logs
// check out.

struct StakeTable {
    std::map<Address, std::uint64_t> entries;

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [a, s] : entries) sum += s;
        return sum;
    }
    std::uint64_t stake_of(const Address& a) const {
        auto it = entries.find(a);
        return it == entries.end() ? 0 : it->second;
    }
};

struct Vote {
    Address voter;
    Digest proposal_id;
    bool yes = false;
    Signature signature; // over VoteRecord bytes
};

enum class VoteOutcome : std::uint8_t { yes, no, no_quorum };
const char* to_string(VoteOutcome o);

/// Strict-majority stake-weighted tally. Duplicate votes from one address
/// are dropped (first counted). Exactly half of the total offered stake is
/// never enough: yes needs yes-stake > total/2, a decision of any kind needs
/// responding stake > total/2.
VoteOutcome tally_votes(const std::vector<Vote>& votes, const StakeTable& stakes);

// ---- replay attestation ----

struct ReplayResult {
    bool matches = true;
    std::uint64_t diverged_index = 0; // log entry where the first mismatch appears
    std::string what;
};

/// Everything the deterministic re-execution of a mint's log needs.
struct MintReference {
    MintPolicy policy;
    Address reward_address;
    /// Block the sealed height should have extended (by height).
    std::function<const Block*(std::uint64_t)> parent_block;
};

/// Re-execute the mint function over the accused log's recorded inputs.
/// Checks, per entry: ack timestamps equal the logged consensus arrival and
/// never regress along the log (the cross-entry order the entanglement
/// receipts pin down), and each seal's block hash equals an independent
/// rebuild from the acked records seen so far. The log must already pass
/// verify_log; tampering is a different, stronger proof.
ReplayResult replay_attest(const std::vector<LogEntry>& accused_log,
                           const PayloadArchive& archive, const MintReference& ref);

// ---- disputes ----

enum class VerdictOutcome : std::uint8_t { upheld, rejected, misbehavior_proven };
const char* to_string(VerdictOutcome o);

struct Verdict {
    Digest proposal_id;
    VerdictOutcome outcome = VerdictOutcome::rejected;
    Address guilty;                       // set when misbehavior was proven
    std::optional<LogRef> evidence;       // log id + entry index
    std::string detail;
};

struct Unresolvable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAuthorized : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DisputeSide {
    Address party;
    Bytes public_key;
    std::vector<LogEntry> log;
    Authenticator head;
    /// Authenticator of the opposing party previously received by this side
    /// (e.g. the mint head carried by a transaction ack). Entry content at
    /// that index must match, or the opposing side rewrote history.
    std::optional<Authenticator> held_counterparty_head;
};

struct DisputeCase {
    Digest proposal_id;
    DisputeSide accuser;
    DisputeSide accused;
    /// Set when the accused acts as mint and its log can be replayed.
    std::optional<MintReference> mint_reference;
    const PayloadArchive* archive = nullptr;
};

/// Replay/evidence first; vote fallback only when both logs are consistent.
/// Throws Unresolvable when there is no divergence and no quorum.
Verdict resolve_dispute(const DisputeCase& c, const StakeTable& stakes,
                        const std::vector<Vote>& votes, const CryptoProvider& provider);

struct BanResult {
    Topology topology;
    std::vector<NodeId> orphaned; // full nodes that must re-join
};

/// Remove a node from the topology. Requires a misbehavior-proven verdict or
/// an upheld ban proposal; throws NotAuthorized otherwise.
BanResult ban_node(const Topology& topology, NodeId node, const Verdict& verdict);

} // namespace coopnet
