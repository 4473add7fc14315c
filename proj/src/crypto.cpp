#include "coopnet/crypto.hpp"

#include "coopnet/wire.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace coopnet {

namespace {

const char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string hex_encode(ByteView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

std::optional<Bytes> hex_decode(const std::string& hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::optional<Digest> Digest::from_hex(const std::string& h) {
    auto raw = hex_decode(h);
    if (!raw || raw->size() != 32) return std::nullopt;
    Digest d;
    std::memcpy(d.bytes.data(), raw->data(), 32);
    return d;
}

Digest hash_bytes(ByteView data) {
    Digest d;
    unsigned int len = 0;
    if (1 != EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) ||
        len != 32)
        throw std::runtime_error("sha256 failed");
    return d;
}

Digest hash_string(const std::string& s) { return hash_bytes(as_bytes(s)); }

Digest hash_pair(ByteView a, ByteView b) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    Digest d;
    unsigned int len = 0;
    if (!ctx || 1 != EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) ||
        1 != EVP_DigestUpdate(ctx, a.data(), a.size()) ||
        1 != EVP_DigestUpdate(ctx, b.data(), b.size()) ||
        1 != EVP_DigestFinal_ex(ctx, d.bytes.data(), &len) || len != 32) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    return d;
}

Address address_of(ByteView public_key) {
    Digest d = hash_bytes(public_key);
    return Address{hex_encode({d.bytes.data(), 20})};
}

namespace {

class Ed25519Provider final : public CryptoProvider {
public:
    std::string name() const override { return "ed25519"; }

    KeyPair keygen(ByteView seed32) const override {
        if (seed32.size() != 32) throw std::invalid_argument("keygen seed must be 32 bytes");
        EVP_PKEY* key =
            EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed32.data(), seed32.size());
        if (!key) throw std::runtime_error("ed25519 keygen failed");
        KeyPair kp;
        kp.private_key.assign(seed32.begin(), seed32.end());
        kp.public_key.resize(32);
        std::size_t publen = 32;
        if (1 != EVP_PKEY_get_raw_public_key(key, kp.public_key.data(), &publen) || publen != 32) {
            EVP_PKEY_free(key);
            throw std::runtime_error("ed25519 pubkey extraction failed");
        }
        EVP_PKEY_free(key);
        kp.address = address_of(kp.public_key);
        return kp;
    }

    Signature sign(const KeyPair& key, ByteView message) const override {
        EVP_PKEY* pk = EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                                    key.private_key.data(), key.private_key.size());
        if (!pk) throw std::runtime_error("ed25519 bad private key");
        EVP_MD_CTX* ctx = EVP_MD_CTX_new();
        Signature sig;
        sig.bytes.resize(64);
        sig.signer = key.address;
        std::size_t siglen = 64;
        if (!ctx || 1 != EVP_DigestSignInit(ctx, nullptr, nullptr, nullptr, pk) ||
            1 != EVP_DigestSign(ctx, sig.bytes.data(), &siglen, message.data(), message.size()) ||
            siglen != 64) {
            EVP_MD_CTX_free(ctx);
            EVP_PKEY_free(pk);
            throw std::runtime_error("ed25519 sign failed");
        }
        EVP_MD_CTX_free(ctx);
        EVP_PKEY_free(pk);
        return sig;
    }

    bool verify(ByteView public_key, ByteView message, const Signature& sig) const override {
        if (public_key.size() != 32 || sig.bytes.size() != 64) return false;
        EVP_PKEY* pk = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key.data(),
                                                   public_key.size());
        if (!pk) return false;
        EVP_MD_CTX* ctx = EVP_MD_CTX_new();
        bool ok = ctx && 1 == EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, pk) &&
                  1 == EVP_DigestVerify(ctx, sig.bytes.data(), sig.bytes.size(), message.data(),
                                        message.size());
        EVP_MD_CTX_free(ctx);
        EVP_PKEY_free(pk);
        return ok;
    }
};

class StubProvider final : public CryptoProvider {
public:
    std::string name() const override { return "stub"; }

    KeyPair keygen(ByteView seed32) const override {
        if (seed32.size() != 32) throw std::invalid_argument("keygen seed must be 32 bytes");
        KeyPair kp;
        kp.private_key.assign(seed32.begin(), seed32.end());
        Digest pub = hash_pair(as_bytes(std::string("stub-pub")), seed32);
        kp.public_key.assign(pub.bytes.begin(), pub.bytes.end());
        kp.address = address_of(kp.public_key);
        return kp;
    }

    Signature sign(const KeyPair& key, ByteView message) const override {
        Signature sig;
        sig.signer = key.address;
        Digest d = tag(key.public_key, message);
        sig.bytes.assign(d.bytes.begin(), d.bytes.end());
        return sig;
    }

    bool verify(ByteView public_key, ByteView message, const Signature& sig) const override {
        if (sig.bytes.size() != 32) return false;
        Digest d = tag(public_key, message);
        return std::equal(d.bytes.begin(), d.bytes.end(), sig.bytes.begin());
    }

private:
    static Digest tag(ByteView public_key, ByteView message) {
        Wire w;
        w.str("stub-sig").blob(public_key).blob(message);
        return hash_bytes(w.bytes());
    }
};

} // namespace

std::unique_ptr<CryptoProvider> make_ed25519_provider() {
    return std::make_unique<Ed25519Provider>();
}

std::unique_ptr<CryptoProvider> make_stub_provider() { return std::make_unique<StubProvider>(); }

std::unique_ptr<CryptoProvider> make_provider(const std::string& name) {
    if (name == "ed25519") return make_ed25519_provider();
    if (name == "stub") return make_stub_provider();
    throw std::invalid_argument("unknown crypto provider: " + name);
}

} // namespace coopnet
