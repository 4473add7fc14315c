#pragma once

#include "coopnet/bytes.hpp"
#include "coopnet/crypto.hpp"
#include "coopnet/tamper_log.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace coopnet {

// Simplified UTXO ledger on a single non-forking chain. Bitcoin's subsidy
// schedule and the 100-block coinbase maturity are kept; script evaluation,
// wire formats and difficulty are not modeled.

inline constexpr std::uint64_t kInitialSubsidy = 5'000'000'000; // satoshis
inline constexpr std::uint64_t kHalvingInterval = 210'000;      // blocks
inline constexpr std::uint64_t kCoinbaseMaturity = 100;         // blocks

enum class TxKind : std::uint8_t { payment, coinbase, stake_to_self };
const char* to_string(TxKind k);

struct OutPoint {
    Digest txid;
    std::uint32_t vout = 0;

    auto operator<=>(const OutPoint&) const = default;
};

struct TxOutput {
    Address to;
    std::uint64_t amount = 0;

    bool operator==(const TxOutput&) const = default;
};

struct Transaction {
    Digest id; // hash of canonical bytes
    TxKind kind = TxKind::payment;
    Address issuer;
    Bytes issuer_public_key;
    std::vector<OutPoint> inputs;
    std::vector<TxOutput> outputs;
    std::uint64_t fee = 0;            // declared; checked against input values
    std::uint64_t coinbase_height = 0; // uniquifies coinbases, 0 otherwise
    Signature signature;               // over canonical bytes, not covered by id

    Bytes canonical_bytes() const;

    /// Fill in id from the canonical bytes.
    void seal_id() { id = hash_bytes(canonical_bytes()); }
};

using TxPtr = std::shared_ptr<const Transaction>;

/// Build and sign a payment or stake-to-self transaction.
/// Stake-to-self shape (fee 0, all outputs back to the issuer) is enforced
/// here so malformed stakes cannot be constructed by honest code.
Transaction make_transaction(TxKind kind, const KeyPair& issuer,
                             std::vector<OutPoint> inputs, std::vector<TxOutput> outputs,
                             std::uint64_t fee, const CryptoProvider& provider);

Transaction make_coinbase(const Address& reward_address, std::uint64_t amount,
                          std::uint64_t height);

struct AckedTransaction {
    TxPtr tx;
    std::int64_t ack_timestamp = 0; // mint consensus-clock ms
    Authenticator mint_authenticator;
};

/// Sort key for deterministic block assembly: (ack_timestamp, tx id).
bool acked_before(const AckedTransaction& a, const AckedTransaction& b);

struct Block {
    std::uint64_t height = 0;
    Digest prev_hash;
    std::int64_t timestamp = 0; // exact multiple of the block interval
    Transaction coinbase;
    std::vector<AckedTransaction> txs; // sorted by (ack_timestamp, tx id)
    Digest block_hash;

    Bytes canonical_bytes() const;
    std::uint64_t total_fees() const;
};

using BlockPtr = std::shared_ptr<const Block>;

struct MintPolicy {
    std::int64_t block_interval_ms = 600'000;
    std::uint32_t max_block_txs = 1000;
    std::uint32_t free_tx_fraction_ppm = 50'000; // 5%

    std::uint32_t free_tx_quota() const {
        return static_cast<std::uint32_t>(
            static_cast<std::uint64_t>(max_block_txs) * free_tx_fraction_ppm / 1'000'000);
    }
};

struct UtxoEntry {
    Address owner;
    std::uint64_t amount = 0;
    std::uint64_t creation_height = 0;
    bool from_coinbase = false;

    bool operator==(const UtxoEntry&) const = default;
};

// std::map keeps iteration deterministic; unordered iteration must never
// feed anything that ends up in a trace.
using UtxoMap = std::map<OutPoint, UtxoEntry>;

enum class TxInvalidReason : std::uint8_t {
    missing_input,
    double_spend,
    value_overflow,
    immature_coinbase,
    bad_signature,
};
const char* to_string(TxInvalidReason r);

struct ValidationResult {
    bool valid = true;
    std::optional<TxInvalidReason> reason;

    static ValidationResult ok() { return {}; }
    static ValidationResult invalid(TxInvalidReason r) { return {false, r}; }
};

/// Validate a submitted transaction against the UTXO set at current_height
/// (the height of the block under construction).
ValidationResult validate_transaction(const Transaction& tx, const UtxoMap& utxo,
                                      std::uint64_t current_height,
                                      const CryptoProvider& provider);

struct BlockInProgress {
    std::uint32_t zero_fee_count = 0;
    std::uint32_t total_count = 0;
};

enum class FreeRuleResult : std::uint8_t { accepted, rejected_free_quota };

/// The free-transaction rule: a bounded fraction of each block may be
/// zero-fee; fee-paying transactions are never subject to it.
FreeRuleResult apply_free_transaction_rule(const Transaction& tx, const BlockInProgress& bip,
                                           const MintPolicy& policy);

struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadLinkage : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidBlockTx : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyChain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic block construction: any party holding the same acked
/// stream produces a byte-identical block. Input order does not matter;
/// the (ack_timestamp, tx id) order is established here.
Block build_block(std::vector<AckedTransaction> acked, const Block& prev,
                  const MintPolicy& policy, const Address& reward_address);

/// Genesis: block 0, zero prev hash, a single coinbase of subsidy(0) split
/// over the given funding outputs (amounts must sum to subsidy(0)).
Block build_genesis(const std::vector<TxOutput>& funding);

struct Chain {
    std::vector<BlockPtr> blocks;
    std::shared_ptr<const UtxoMap> utxo = std::make_shared<UtxoMap>();

    std::uint64_t height() const { return blocks.empty() ? 0 : blocks.back()->height; }
    bool empty() const { return blocks.empty(); }
    const BlockPtr& head() const { return blocks.back(); }
};

/// Append after full validation; the UTXO set advances by exactly the
/// block's effects. Throws BadLinkage / InvalidBlockTx.
Chain append_block(const Chain& chain, BlockPtr block, const CryptoProvider& provider);

/// Inverse of append: restores the prior UTXO set exactly and returns the
/// reverted block's non-coinbase transactions for re-inclusion.
std::pair<Chain, std::vector<AckedTransaction>> revert_last_block(const Chain& chain,
                                                                  const CryptoProvider& provider);

std::uint64_t block_subsidy(std::uint64_t height);

struct TimeWindow {
    std::int64_t start_ms = 0; // exclusive
    std::int64_t end_ms = 0;   // inclusive
};

/// Total value of stake-to-self transactions confirmed inside the window,
/// per address. Addresses without a fresh stake-to-self have no entry.
std::map<Address, std::uint64_t> stake_snapshot(const Chain& chain, const TimeWindow& window);

std::uint64_t total_utxo_value(const Chain& chain);

/// One JSON object per block (chain.jsonl line format).
std::string block_to_jsonl(const Block& b);

} // namespace coopnet
