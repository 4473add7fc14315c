#include "coopnet/tamper_log.hpp"

#include "coopnet/wire.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

namespace coopnet {

const char* to_string(ActivityKind k) {
    switch (k) {
    case ActivityKind::issue_tx: return "issue-tx";
    case ActivityKind::receive_tx: return "receive-tx";
    case ActivityKind::ack_tx: return "ack-tx";
    case ActivityKind::accept_tx: return "accept-tx";
    case ActivityKind::reject_tx: return "reject-tx";
    case ActivityKind::new_block_hash: return "new-block-hash";
    case ActivityKind::entangle: return "entangle";
    case ActivityKind::agent_handoff: return "agent-handoff";
    case ActivityKind::audit_probe: return "audit-probe";
    case ActivityKind::vote: return "vote";
    }
    return "?";
}

std::optional<ActivityKind> activity_kind_from_string(const std::string& s) {
    static const std::map<std::string, ActivityKind> table = {
        {"issue-tx", ActivityKind::issue_tx},
        {"receive-tx", ActivityKind::receive_tx},
        {"ack-tx", ActivityKind::ack_tx},
        {"accept-tx", ActivityKind::accept_tx},
        {"reject-tx", ActivityKind::reject_tx},
        {"new-block-hash", ActivityKind::new_block_hash},
        {"entangle", ActivityKind::entangle},
        {"agent-handoff", ActivityKind::agent_handoff},
        {"audit-probe", ActivityKind::audit_probe},
        {"vote", ActivityKind::vote},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

const char* to_string(VerifyFailure f) {
    switch (f) {
    case VerifyFailure::chain_break: return "chain-break";
    case VerifyFailure::head_mismatch: return "head-mismatch";
    case VerifyFailure::signature_invalid: return "signature-invalid";
    case VerifyFailure::index_gap: return "index-gap";
    }
    return "?";
}

Bytes LogEntry::canonical_bytes() const {
    Wire w;
    w.u64(index)
        .i64(local_timestamp)
        .u8(static_cast<std::uint8_t>(activity_kind))
        .raw(payload_digest.view())
        .str(counterparty.value)
        .raw(prev_authenticator.view());
    return w.take();
}

const Digest& genesis_auth() {
    static const Digest g = hash_string("GENESIS");
    return g;
}

Digest chain_authenticator(const Digest& prev, const LogEntry& entry) {
    Digest inner = hash_bytes(entry.canonical_bytes());
    return hash_pair(prev.view(), inner.view());
}

Bytes Authenticator::signed_bytes() const {
    Wire w;
    w.str(log_owner.value).u64(head_index).raw(head_digest.view());
    return w.take();
}

const LogEntry& TamperLog::append(ActivityKind kind, const Digest& payload_digest,
                                  const Address& counterparty, std::int64_t local_timestamp) {
    if (!entries_.empty() && local_timestamp < entries_.back().local_timestamp)
        throw MonotonicityViolation("log timestamp regressed on " + owner_.value);
    LogEntry e;
    e.index = entries_.size();
    e.local_timestamp = local_timestamp;
    e.activity_kind = kind;
    e.payload_digest = payload_digest;
    e.counterparty = counterparty;
    e.prev_authenticator = entries_.empty() ? genesis_auth() : entries_.back().authenticator;
    e.authenticator = chain_authenticator(e.prev_authenticator, e);
    entries_.push_back(std::move(e));
    return entries_.back();
}

Authenticator TamperLog::current_authenticator() const {
    if (entries_.empty()) throw std::logic_error("authenticator of empty log");
    Authenticator a;
    a.log_owner = owner_;
    a.head_index = entries_.back().index;
    a.head_digest = entries_.back().authenticator;
    a.signature = provider_->sign(keys_, a.signed_bytes());
    return a;
}

EntanglementReceipt TamperLog::entangle(const Authenticator& remote, ByteView remote_public_key,
                                        std::int64_t local_timestamp) {
    if (!provider_->verify(remote_public_key, remote.signed_bytes(), remote.signature))
        throw BadSignature("entangle: remote authenticator signature invalid");
    Wire w;
    w.str(remote.log_owner.value).u64(remote.head_index).raw(remote.head_digest.view());
    const LogEntry& e =
        append(ActivityKind::entangle, hash_bytes(w.bytes()), remote.log_owner, local_timestamp);
    EntanglementReceipt r{e.index, remote};
    receipts_.push_back(r);
    return r;
}

VerificationReport verify_log(const std::vector<LogEntry>& entries,
                              const Authenticator& claimed_head, const CryptoProvider* provider,
                              ByteView owner_public_key) {
    VerificationReport report;
    Digest prev = genesis_auth();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const LogEntry& e = entries[i];
        if (e.index != i) {
            report.ok = false;
            report.first_bad_index = i;
            report.reason = VerifyFailure::index_gap;
            return report;
        }
        if (e.prev_authenticator != prev || chain_authenticator(prev, e) != e.authenticator) {
            report.ok = false;
            report.first_bad_index = i;
            report.reason = VerifyFailure::chain_break;
            return report;
        }
        prev = e.authenticator;
    }
    if (entries.empty() || claimed_head.head_index != entries.size() - 1 ||
        claimed_head.head_digest != prev) {
        report.ok = false;
        report.first_bad_index = entries.size();
        report.reason = VerifyFailure::head_mismatch;
        return report;
    }
    if (provider &&
        !provider->verify(owner_public_key, claimed_head.signed_bytes(), claimed_head.signature)) {
        report.ok = false;
        report.first_bad_index = entries.size();
        report.reason = VerifyFailure::signature_invalid;
        return report;
    }
    return report;
}

OrderRelation derive_order(const Address& log_a, const Address& log_b,
                           const std::vector<TaggedReceipt>& receipts) {
    OrderRelation rel;
    for (const auto& tr : receipts) {
        const Address& local = tr.recorder;
        const Address& remote = tr.receipt.remote_authenticator.log_owner;
        if ((local != log_a && local != log_b) || (remote != log_a && remote != log_b)) continue;
        if (local == remote) continue;
        // every remote entry <= head_index precedes every local entry > local_entry_index
        rel.edges_.push_back({LogRef{remote, tr.receipt.remote_authenticator.head_index},
                              LogRef{local, tr.receipt.local_entry_index}});
    }
    // A cycle needs a pair of opposite-direction edges whose windows overlap:
    // (B,<=b1) < (A,>a1) together with (A,<=a2) < (B,>b2) where a2 > a1 and b1 > b2.
    for (const auto& [r1_before, r1_after] : rel.edges_) {
        for (const auto& [r2_before, r2_after] : rel.edges_) {
            if (r1_before.log != r2_after.log || r1_after.log != r2_before.log) continue;
            if (r2_before.index > r1_after.index && r1_before.index > r2_after.index)
                throw InconsistentReceipts("entanglement receipts imply a cycle");
        }
    }
    return rel;
}

bool OrderRelation::precedes(const LogRef& a, const LogRef& b) const {
    if (a.log == b.log) return a.index < b.index;
    for (const auto& [before, after] : edges_) {
        if (before.log == a.log && after.log == b.log && a.index <= before.index &&
            b.index > after.index)
            return true;
    }
    return false;
}

// ---- JSON export / import ----

namespace {
using nlohmann::json;

json authenticator_to_json(const Authenticator& a) {
    return json{{"owner", a.log_owner.value},
                {"head_index", a.head_index},
                {"head_digest", a.head_digest.hex()},
                {"signature", hex_encode(a.signature.bytes)},
                {"signer", a.signature.signer.value}};
}

Authenticator authenticator_from_json(const json& j) {
    Authenticator a;
    a.log_owner = Address{j.at("owner").get<std::string>()};
    a.head_index = j.at("head_index").get<std::uint64_t>();
    auto hd = Digest::from_hex(j.at("head_digest").get<std::string>());
    if (!hd) throw std::runtime_error("bad head_digest");
    a.head_digest = *hd;
    auto sig = hex_decode(j.at("signature").get<std::string>());
    if (!sig) throw std::runtime_error("bad signature hex");
    a.signature.bytes = *sig;
    a.signature.signer = Address{j.at("signer").get<std::string>()};
    return a;
}
} // namespace

std::string export_log_json(const TamperLog& log, ByteView public_key) {
    json entries = json::array();
    for (const auto& e : log.entries()) {
        entries.push_back({{"index", e.index},
                           {"local_timestamp_ms", e.local_timestamp},
                           {"kind", to_string(e.activity_kind)},
                           {"payload_digest", e.payload_digest.hex()},
                           {"counterparty", e.counterparty.value},
                           {"prev_authenticator", e.prev_authenticator.hex()},
                           {"authenticator", e.authenticator.hex()}});
    }
    json doc{{"schema_version", 1},
             {"owner", log.owner().value},
             {"public_key", hex_encode(public_key)},
             {"head", authenticator_to_json(log.current_authenticator())},
             {"entries", std::move(entries)}};
    return doc.dump(2);
}

ExportedLog parse_log_json(const std::string& text) {
    json doc = json::parse(text); // throws json::parse_error on malformed input
    ExportedLog out;
    out.owner = doc.at("owner").get<std::string>();
    auto pk = hex_decode(doc.at("public_key").get<std::string>());
    if (!pk) throw std::runtime_error("bad public_key hex");
    out.public_key = *pk;
    out.head = authenticator_from_json(doc.at("head"));
    for (const auto& je : doc.at("entries")) {
        LogEntry e;
        e.index = je.at("index").get<std::uint64_t>();
        e.local_timestamp = je.at("local_timestamp_ms").get<std::int64_t>();
        auto kind = activity_kind_from_string(je.at("kind").get<std::string>());
        if (!kind) throw std::runtime_error("unknown activity kind");
        e.activity_kind = *kind;
        auto pd = Digest::from_hex(je.at("payload_digest").get<std::string>());
        auto pa = Digest::from_hex(je.at("prev_authenticator").get<std::string>());
        auto au = Digest::from_hex(je.at("authenticator").get<std::string>());
        if (!pd || !pa || !au) throw std::runtime_error("bad digest hex in entry");
        e.payload_digest = *pd;
        e.prev_authenticator = *pa;
        e.authenticator = *au;
        e.counterparty = Address{je.at("counterparty").get<std::string>()};
        out.entries.push_back(std::move(e));
    }
    return out;
}

} // namespace coopnet
