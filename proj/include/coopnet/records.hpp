#pragma once

#include "coopnet/bytes.hpp"
#include "coopnet/crypto.hpp"
#include "coopnet/wire.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace coopnet {

// Canonical protocol records. These are the payloads behind log entries and
// the bodies of signed messages; both live and replayed paths decode the
// same bytes, so the encodings are pinned here.

enum class AckStatus : std::uint8_t {
    accepted,
    invalid_missing_input,
    invalid_double_spend,
    invalid_value_overflow,
    invalid_immature_coinbase,
    invalid_bad_signature,
    free_quota_exhausted,
};
const char* to_string(AckStatus s);
bool ack_status_is_accept(AckStatus s);

/// What the mint logs when a transaction arrives.
struct ArrivalRecord {
    Digest txid;
    std::int64_t arrival_ms = 0; // consensus clock at the delivery event

    Bytes encode() const;
    static ArrivalRecord decode(ByteView b);
};

/// What the mint logs (and sends back) when it decides on a transaction.
struct AckRecord {
    Digest txid;
    std::int64_t ack_ms = 0;
    AckStatus status = AckStatus::accepted;

    Bytes encode() const;
    static AckRecord decode(ByteView b);
};

/// Seal announcement: enough for any replica holding the acked stream to
/// rebuild the block and compare hashes.
struct SealRecord {
    std::uint64_t height = 0;
    Digest block_hash;
    Digest prev_hash;
    std::int64_t timestamp = 0;
    std::vector<std::pair<Digest, std::int64_t>> txs; // (txid, ack_ms) in block order

    Bytes encode() const;
    static SealRecord decode(ByteView b);
};

/// Super-peer confirmation binding a seal into its tamper-evident log.
struct ConfirmRecord {
    std::uint64_t height = 0;
    Digest block_hash;
    Address confirmer;

    Bytes encode() const;
    static ConfirmRecord decode(ByteView b);
};

struct HandoffRecord {
    std::uint8_t agent_kind = 0;
    std::uint64_t sequence = 0;
    Bytes payload;

    Bytes encode() const;
    static HandoffRecord decode(ByteView b);
};

struct VoteRecord {
    Digest proposal_id;
    bool yes = false;

    Bytes encode() const;
    static VoteRecord decode(ByteView b);
};

/// Digest -> canonical payload bytes, the side store that makes log replay
/// possible (logs carry only payload digests).
class PayloadArchive {
public:
    void put(const Bytes& payload) { store_[hash_bytes(payload)] = payload; }
    const Bytes* find(const Digest& d) const {
        auto it = store_.find(d);
        return it == store_.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return store_.size(); }

private:
    std::map<Digest, Bytes> store_;
};

} // namespace coopnet
