#include "coopnet/ledger.hpp"

#include "coopnet/wire.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace coopnet {

const char* to_string(TxKind k) {
    switch (k) {
    case TxKind::payment: return "payment";
    case TxKind::coinbase: return "coinbase";
    case TxKind::stake_to_self: return "stake-to-self";
    }
    return "?";
}

const char* to_string(TxInvalidReason r) {
    switch (r) {
    case TxInvalidReason::missing_input: return "missing-input";
    case TxInvalidReason::double_spend: return "double-spend";
    case TxInvalidReason::value_overflow: return "value-overflow";
    case TxInvalidReason::immature_coinbase: return "immature-coinbase";
    case TxInvalidReason::bad_signature: return "bad-signature";
    }
    return "?";
}

Bytes Transaction::canonical_bytes() const {
    Wire w;
    w.u8(static_cast<std::uint8_t>(kind)).str(issuer.value).blob(issuer_public_key);
    w.u32(static_cast<std::uint32_t>(inputs.size()));
    for (const auto& in : inputs) w.raw(in.txid.view()).u32(in.vout);
    w.u32(static_cast<std::uint32_t>(outputs.size()));
    for (const auto& out : outputs) w.str(out.to.value).u64(out.amount);
    w.u64(fee).u64(coinbase_height);
    return w.take();
}

Transaction make_transaction(TxKind kind, const KeyPair& issuer, std::vector<OutPoint> inputs,
                             std::vector<TxOutput> outputs, std::uint64_t fee,
                             const CryptoProvider& provider) {
    if (kind == TxKind::coinbase) throw std::invalid_argument("use make_coinbase");
    if (kind == TxKind::stake_to_self) {
        if (fee != 0) throw std::invalid_argument("stake-to-self must carry no fee");
        for (const auto& o : outputs)
            if (o.to != issuer.address)
                throw std::invalid_argument("stake-to-self pays only its issuer");
    }
    Transaction tx;
    tx.kind = kind;
    tx.issuer = issuer.address;
    tx.issuer_public_key = issuer.public_key;
    tx.inputs = std::move(inputs);
    tx.outputs = std::move(outputs);
    tx.fee = fee;
    tx.seal_id();
    tx.signature = provider.sign(issuer, tx.canonical_bytes());
    return tx;
}

Transaction make_coinbase(const Address& reward_address, std::uint64_t amount,
                          std::uint64_t height) {
    Transaction tx;
    tx.kind = TxKind::coinbase;
    tx.issuer = reward_address;
    tx.outputs.push_back({reward_address, amount});
    tx.coinbase_height = height;
    tx.seal_id();
    return tx;
}

bool acked_before(const AckedTransaction& a, const AckedTransaction& b) {
    if (a.ack_timestamp != b.ack_timestamp) return a.ack_timestamp < b.ack_timestamp;
    return a.tx->id < b.tx->id;
}

Bytes Block::canonical_bytes() const {
    Wire w;
    w.u64(height).raw(prev_hash.view()).i64(timestamp);
    w.blob(coinbase.canonical_bytes());
    w.u32(static_cast<std::uint32_t>(txs.size()));
    for (const auto& at : txs) w.raw(at.tx->id.view()).i64(at.ack_timestamp);
    return w.take();
}

std::uint64_t Block::total_fees() const {
    std::uint64_t sum = 0;
    for (const auto& at : txs) sum += at.tx->fee;
    return sum;
}

ValidationResult validate_transaction(const Transaction& tx, const UtxoMap& utxo,
                                      std::uint64_t current_height,
                                      const CryptoProvider& provider) {
    if (address_of(tx.issuer_public_key) != tx.issuer)
        return ValidationResult::invalid(TxInvalidReason::bad_signature);
    if (!provider.verify(tx.issuer_public_key, tx.canonical_bytes(), tx.signature))
        return ValidationResult::invalid(TxInvalidReason::bad_signature);

    unsigned __int128 in_total = 0;
    std::vector<OutPoint> seen;
    for (const auto& in : tx.inputs) {
        if (std::find(seen.begin(), seen.end(), in) != seen.end())
            return ValidationResult::invalid(TxInvalidReason::double_spend);
        seen.push_back(in);
        auto it = utxo.find(in);
        if (it == utxo.end()) return ValidationResult::invalid(TxInvalidReason::missing_input);
        // single-signer model: only the owning address can spend an output
        if (it->second.owner != tx.issuer)
            return ValidationResult::invalid(TxInvalidReason::bad_signature);
        if (it->second.from_coinbase &&
            current_height < it->second.creation_height + kCoinbaseMaturity)
            return ValidationResult::invalid(TxInvalidReason::immature_coinbase);
        in_total += it->second.amount;
    }
    unsigned __int128 out_total = 0;
    for (const auto& out : tx.outputs) out_total += out.amount;
    if (out_total > in_total) return ValidationResult::invalid(TxInvalidReason::value_overflow);
    if (in_total - out_total != tx.fee)
        return ValidationResult::invalid(TxInvalidReason::value_overflow);
    if (tx.kind == TxKind::stake_to_self) {
        if (tx.fee != 0) return ValidationResult::invalid(TxInvalidReason::value_overflow);
        for (const auto& out : tx.outputs)
            if (out.to != tx.issuer)
                return ValidationResult::invalid(TxInvalidReason::value_overflow);
    }
    return ValidationResult::ok();
}

FreeRuleResult apply_free_transaction_rule(const Transaction& tx, const BlockInProgress& bip,
                                           const MintPolicy& policy) {
    if (tx.fee > 0) return FreeRuleResult::accepted;
    if (bip.zero_fee_count < policy.free_tx_quota()) return FreeRuleResult::accepted;
    return FreeRuleResult::rejected_free_quota;
}

Block build_block(std::vector<AckedTransaction> acked, const Block& prev,
                  const MintPolicy& policy, const Address& reward_address) {
    if (acked.size() > policy.max_block_txs)
        throw CapacityExceeded("acked list exceeds max_block_txs");
    std::sort(acked.begin(), acked.end(), acked_before);
    Block b;
    b.height = prev.height + 1;
    b.prev_hash = prev.block_hash;
    b.timestamp = prev.timestamp + policy.block_interval_ms;
    b.txs = std::move(acked);
    std::uint64_t fees = b.total_fees();
    b.coinbase = make_coinbase(reward_address, block_subsidy(b.height) + fees, b.height);
    b.block_hash = hash_bytes(b.canonical_bytes());
    return b;
}

Block build_genesis(const std::vector<TxOutput>& funding) {
    std::uint64_t total = 0;
    for (const auto& o : funding) total += o.amount;
    if (total != block_subsidy(0))
        throw std::invalid_argument("genesis funding must sum to subsidy(0)");
    Block b;
    b.height = 0;
    b.timestamp = 0;
    Transaction cb;
    cb.kind = TxKind::coinbase;
    cb.outputs = funding;
    cb.coinbase_height = 0;
    if (!funding.empty()) cb.issuer = funding.front().to;
    cb.seal_id();
    b.coinbase = std::move(cb);
    b.block_hash = hash_bytes(b.canonical_bytes());
    return b;
}

namespace {

void apply_tx_outputs(UtxoMap& utxo, const Transaction& tx, std::uint64_t height) {
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i) {
        utxo[OutPoint{tx.id, i}] =
            UtxoEntry{tx.outputs[i].to, tx.outputs[i].amount, height, tx.kind == TxKind::coinbase};
    }
}

} // namespace

Chain append_block(const Chain& chain, BlockPtr block, const CryptoProvider& provider) {
    const Block& b = *block;
    if (chain.empty()) {
        if (b.height != 0 || !b.prev_hash.is_zero()) throw BadLinkage("genesis linkage");
    } else {
        if (b.prev_hash != chain.head()->block_hash || b.height != chain.head()->height + 1)
            throw BadLinkage("block does not extend the chain head");
        if (!chain.empty() && b.timestamp <= chain.head()->timestamp)
            throw BadLinkage("block timestamp must advance");
    }
    auto utxo = std::make_shared<UtxoMap>(*chain.utxo);
    std::uint64_t fees = 0;
    for (const auto& at : b.txs) {
        const Transaction& tx = *at.tx;
        ValidationResult vr = validate_transaction(tx, *utxo, b.height, provider);
        if (!vr.valid)
            throw InvalidBlockTx(std::string("block tx invalid: ") + to_string(*vr.reason));
        for (const auto& in : tx.inputs) utxo->erase(in);
        apply_tx_outputs(*utxo, tx, b.height);
        fees += tx.fee;
    }
    std::uint64_t expected = block_subsidy(b.height) + fees;
    std::uint64_t minted = 0;
    for (const auto& o : b.coinbase.outputs) minted += o.amount;
    if (b.height > 0 && minted != expected)
        throw InvalidBlockTx("coinbase amount mismatch");
    apply_tx_outputs(*utxo, b.coinbase, b.height);
    Chain next;
    next.blocks = chain.blocks;
    next.blocks.push_back(std::move(block));
    next.utxo = std::move(utxo);
    return next;
}

std::pair<Chain, std::vector<AckedTransaction>> revert_last_block(const Chain& chain,
                                                                  const CryptoProvider& provider) {
    if (chain.empty()) throw EmptyChain("nothing to revert");
    std::vector<AckedTransaction> released = chain.head()->txs;
    // refold from genesis; exact restoration matters more than speed here
    Chain prior;
    for (std::size_t i = 0; i + 1 < chain.blocks.size(); ++i)
        prior = append_block(prior, chain.blocks[i], provider);
    return {std::move(prior), std::move(released)};
}

std::uint64_t block_subsidy(std::uint64_t height) {
    std::uint64_t halvings = height / kHalvingInterval;
    if (halvings >= 64) return 0;
    return kInitialSubsidy >> halvings;
}

std::map<Address, std::uint64_t> stake_snapshot(const Chain& chain, const TimeWindow& window) {
    std::map<Address, std::uint64_t> stakes;
    for (const auto& bp : chain.blocks) {
        if (bp->timestamp <= window.start_ms || bp->timestamp > window.end_ms) continue;
        for (const auto& at : bp->txs) {
            if (at.tx->kind != TxKind::stake_to_self) continue;
            std::uint64_t value = 0;
            for (const auto& o : at.tx->outputs) value += o.amount;
            stakes[at.tx->issuer] += value;
        }
    }
    return stakes;
}

std::uint64_t total_utxo_value(const Chain& chain) {
    std::uint64_t sum = 0;
    for (const auto& [op, entry] : *chain.utxo) sum += entry.amount;
    return sum;
}

std::string block_to_jsonl(const Block& b) {
    std::ostringstream os;
    os << "{\"height\":" << b.height << ",\"hash\":\"" << b.block_hash.hex() << "\",\"prev\":\""
       << b.prev_hash.hex() << "\",\"time_ms\":" << b.timestamp << ",\"coinbase_sat\":";
    std::uint64_t minted = 0;
    for (const auto& o : b.coinbase.outputs) minted += o.amount;
    os << minted << ",\"tx_count\":" << b.txs.size() << ",\"txids\":[";
    for (std::size_t i = 0; i < b.txs.size(); ++i) {
        if (i) os << ",";
        os << "\"" << b.txs[i].tx->id.hex() << "\"";
    }
    os << "]}";
    return os.str();
}

} // namespace coopnet
