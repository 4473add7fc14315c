#pragma once

#include "coopnet/bytes.hpp"

#include <memory>
#include <string>

namespace coopnet {

/// SHA-256 of the input. Deterministic, always 32 bytes.
Digest hash_bytes(ByteView data);
Digest hash_string(const std::string& s);
/// hash(a || b) without materializing the concatenation.
Digest hash_pair(ByteView a, ByteView b);

/// Short printable node identity derived from a public key:
/// lowercase hex of the first 20 bytes of sha256(public_key).
struct Address {
    std::string value;

    auto operator<=>(const Address&) const = default;
    bool empty() const { return value.empty(); }
};

Address address_of(ByteView public_key);

struct Signature {
    Bytes bytes;
    Address signer;

    bool operator==(const Signature&) const = default;
};

struct KeyPair {
    Bytes public_key;
    Bytes private_key;
    Address address;

    bool operator==(const KeyPair&) const = default;
};

// The protocol needs only collision resistance and unforgeability, not a
// particular scheme, so signing is behind a provider interface. The default
// is Ed25519 (deterministic per RFC 8032, which the byte-identical trace
// contract relies on); the stub provider derives keys and signatures from
// SHA-256 alone and is a fast drop-in for tests. Not a real signature
// scheme: anyone who knows a public key can forge, which no simulated
// adversary does.
class CryptoProvider {
public:
    virtual ~CryptoProvider() = default;

    virtual std::string name() const = 0;
    /// Deterministic per seed; seed must be 32 bytes.
    virtual KeyPair keygen(ByteView seed32) const = 0;
    virtual Signature sign(const KeyPair& key, ByteView message) const = 0;
    /// Returns false (never throws) on any mismatch or malformed input.
    virtual bool verify(ByteView public_key, ByteView message, const Signature& sig) const = 0;
};

std::unique_ptr<CryptoProvider> make_ed25519_provider();
std::unique_ptr<CryptoProvider> make_stub_provider();
/// "ed25519" or "stub"; throws std::invalid_argument otherwise.
std::unique_ptr<CryptoProvider> make_provider(const std::string& name);

} // namespace coopnet
