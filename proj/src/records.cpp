#include "coopnet/records.hpp"

namespace coopnet {

const char* to_string(AckStatus s) {
    switch (s) {
    case AckStatus::accepted: return "accepted";
    case AckStatus::invalid_missing_input: return "invalid(missing-input)";
    case AckStatus::invalid_double_spend: return "invalid(double-spend)";
    case AckStatus::invalid_value_overflow: return "invalid(value-overflow)";
    case AckStatus::invalid_immature_coinbase: return "invalid(immature-coinbase)";
    case AckStatus::invalid_bad_signature: return "invalid(bad-signature)";
    case AckStatus::free_quota_exhausted: return "free-quota-exhausted";
    }
    return "?";
}

bool ack_status_is_accept(AckStatus s) { return s == AckStatus::accepted; }

namespace {
Digest read_digest(WireReader& r) {
    Digest d;
    ByteView v = r.raw(32);
    std::copy(v.begin(), v.end(), d.bytes.begin());
    return d;
}
} // namespace

Bytes ArrivalRecord::encode() const {
    Wire w;
    w.str("arrival").raw(txid.view()).i64(arrival_ms);
    return w.take();
}

ArrivalRecord ArrivalRecord::decode(ByteView b) {
    WireReader r(b);
    if (r.str() != "arrival") throw WireError{};
    ArrivalRecord rec;
    rec.txid = read_digest(r);
    rec.arrival_ms = r.i64();
    return rec;
}

Bytes AckRecord::encode() const {
    Wire w;
    w.str("ack").raw(txid.view()).i64(ack_ms).u8(static_cast<std::uint8_t>(status));
    return w.take();
}

AckRecord AckRecord::decode(ByteView b) {
    WireReader r(b);
    if (r.str() != "ack") throw WireError{};
    AckRecord rec;
    rec.txid = read_digest(r);
    rec.ack_ms = r.i64();
    rec.status = static_cast<AckStatus>(r.u8());
    return rec;
}

Bytes SealRecord::encode() const {
    Wire w;
    w.str("seal").u64(height).raw(block_hash.view()).raw(prev_hash.view()).i64(timestamp);
    w.u32(static_cast<std::uint32_t>(txs.size()));
    for (const auto& [txid, ack_ms] : txs) w.raw(txid.view()).i64(ack_ms);
    return w.take();
}

SealRecord SealRecord::decode(ByteView b) {
    WireReader r(b);
    if (r.str() != "seal") throw WireError{};
    SealRecord rec;
    rec.height = r.u64();
    rec.block_hash = read_digest(r);
    rec.prev_hash = read_digest(r);
    rec.timestamp = r.i64();
    std::uint32_t n = r.u32();
    rec.txs.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Digest txid = read_digest(r);
        std::int64_t ack = r.i64();
        rec.txs.push_back({txid, ack});
    }
    return rec;
}

Bytes ConfirmRecord::encode() const {
    Wire w;
    w.str("confirm").u64(height).raw(block_hash.view()).str(confirmer.value);
    return w.take();
}

ConfirmRecord ConfirmRecord::decode(ByteView b) {
    WireReader r(b);
    if (r.str() != "confirm") throw WireError{};
    ConfirmRecord rec;
    rec.height = r.u64();
    rec.block_hash = read_digest(r);
    rec.confirmer = Address{r.str()};
    return rec;
}

Bytes HandoffRecord::encode() const {
    Wire w;
    w.str("handoff").u8(agent_kind).u64(sequence).blob(payload);
    return w.take();
}

HandoffRecord HandoffRecord::decode(ByteView b) {
    WireReader r(b);
    if (r.str() != "handoff") throw WireError{};
    HandoffRecord rec;
    rec.agent_kind = r.u8();
    rec.sequence = r.u64();
    rec.payload = r.blob();
    return rec;
}

Bytes VoteRecord::encode() const {
    Wire w;
    w.str("vote").raw(proposal_id.view()).u8(yes ? 1 : 0);
    return w.take();
}

VoteRecord VoteRecord::decode(ByteView b) {
    WireReader r(b);
    if (r.str() != "vote") throw WireError{};
    VoteRecord rec;
    rec.proposal_id = read_digest(r);
    rec.yes = r.u8() != 0;
    return rec;
}

} // namespace coopnet
