#pragma once

#include "coopnet/bytes.hpp"
#include "coopnet/crypto.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coopnet {

// Per-node append-only justification log. Each entry's authenticator
// hash-chains to its predecessor, so replaying the entries from genesis
// reproduces the head digest and any mutation is detectable. Entangling a
// peer's signed head into the local log yields cross-log happens-before
// evidence that is independent of either node's clock.

enum class ActivityKind : std::uint8_t {
    issue_tx,
    receive_tx,
    ack_tx,
    accept_tx,
    reject_tx,
    new_block_hash,
    entangle,
    agent_handoff,
    audit_probe,
    vote,
};

const char* to_string(ActivityKind k);
std::optional<ActivityKind> activity_kind_from_string(const std::string& s);

struct LogEntry {
    std::uint64_t index = 0;
    std::int64_t local_timestamp = 0; // node-local virtual ms, may be skewed
    ActivityKind activity_kind = ActivityKind::issue_tx;
    Digest payload_digest;
    Address counterparty;
    Digest prev_authenticator;
    Digest authenticator;

    bool operator==(const LogEntry&) const = default;

    /// Canonical bytes excluding the authenticator field.
    Bytes canonical_bytes() const;
};

/// Running hash of entry 0's predecessor: hash("GENESIS").
const Digest& genesis_auth();

/// authenticator = hash(prev || hash(canonical entry bytes))
Digest chain_authenticator(const Digest& prev, const LogEntry& entry);

/// Signed log head, the unit of entanglement and attestation.
struct Authenticator {
    Address log_owner;
    std::uint64_t head_index = 0;
    Digest head_digest;
    Signature signature;

    bool operator==(const Authenticator&) const = default;

    /// Bytes covered by the owner's signature.
    Bytes signed_bytes() const;
};

struct EntanglementReceipt {
    /// Index in the receiving log where the remote head was recorded.
    std::uint64_t local_entry_index = 0;
    Authenticator remote_authenticator;

    bool operator==(const EntanglementReceipt&) const = default;
};

struct MonotonicityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadSignature : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TamperLog {
public:
    TamperLog() = default;
    TamperLog(Address owner, const KeyPair& keys, const CryptoProvider* provider)
        : owner_(std::move(owner)), keys_(keys), provider_(provider) {}

    const Address& owner() const { return owner_; }
    const std::vector<LogEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    /// Append a new entry chained to the current head.
    /// Throws MonotonicityViolation if the timestamp regresses.
    const LogEntry& append(ActivityKind kind, const Digest& payload_digest,
                           const Address& counterparty, std::int64_t local_timestamp);

    /// Signed head over the last entry. Log must be non-empty.
    Authenticator current_authenticator() const;

    /// Record a peer's signed head as an entangle entry.
    /// Throws BadSignature (leaving the log unchanged) if the authenticator
    /// does not verify against remote_public_key.
    EntanglementReceipt entangle(const Authenticator& remote, ByteView remote_public_key,
                                 std::int64_t local_timestamp);

    const std::vector<EntanglementReceipt>& receipts() const { return receipts_; }

private:
    Address owner_;
    KeyPair keys_;
    const CryptoProvider* provider_ = nullptr;
    std::vector<LogEntry> entries_;
    std::vector<EntanglementReceipt> receipts_;
};

enum class VerifyFailure : std::uint8_t {
    chain_break,
    head_mismatch,
    signature_invalid,
    index_gap,
};

const char* to_string(VerifyFailure f);

struct VerificationReport {
    bool ok = true;
    // Present exactly when ok is false. Failures of the head claim itself
    // (head-mismatch, signature-invalid) report entries.size().
    std::optional<std::uint64_t> first_bad_index;
    std::optional<VerifyFailure> reason;
};

/// Recompute the whole chain and compare against the claimed head.
/// provider/public_key check the head signature; pass nullptr to skip it
/// (in-process checks where the head was taken from the log directly).
VerificationReport verify_log(const std::vector<LogEntry>& entries,
                              const Authenticator& claimed_head,
                              const CryptoProvider* provider = nullptr,
                              ByteView owner_public_key = {});

// ---- cross-log temporal order ----

struct LogRef {
    Address log;
    std::uint64_t index = 0;

    auto operator<=>(const LogRef&) const = default;
};

/// A receipt together with the log that recorded it.
struct TaggedReceipt {
    Address recorder;
    EntanglementReceipt receipt;
};

struct InconsistentReceipts : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Happens-before relation implied by per-log sequence order plus
/// entanglement receipts. Makes no claim for unrelated pairs. Timestamps are
/// deliberately ignored: the order depends only on receipts, so it is
/// invariant under any per-node clock skew.
class OrderRelation {
public:
    bool precedes(const LogRef& a, const LogRef& b) const;

    /// Every cross-log constraint edge (remote ref happens-before local ref).
    const std::vector<std::pair<LogRef, LogRef>>& cross_edges() const { return edges_; }

private:
    friend OrderRelation derive_order(const Address&, const Address&,
                                      const std::vector<TaggedReceipt>&);
    std::vector<std::pair<LogRef, LogRef>> edges_; // (before, after), exclusive frontier
};

/// Derive the partial order over (log, entry index) pairs for two logs.
/// Throws InconsistentReceipts if the receipts imply a cycle.
OrderRelation derive_order(const Address& log_a, const Address& log_b,
                           const std::vector<TaggedReceipt>& receipts);

// ---- export (JSON, per the node log API) ----

struct ExportedLog {
    std::string owner;
    Bytes public_key;
    Authenticator head;
    std::vector<LogEntry> entries;
};

std::string export_log_json(const TamperLog& log, ByteView public_key);
/// Throws std::runtime_error with a diagnostic on malformed input.
ExportedLog parse_log_json(const std::string& text);

} // namespace coopnet
