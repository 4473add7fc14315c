#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coopnet {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(const std::string& s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

std::string hex_encode(ByteView data);
std::optional<Bytes> hex_decode(const std::string& hex);

/// 32-byte content hash value.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;

    std::string hex() const { return hex_encode(bytes); }
    static std::optional<Digest> from_hex(const std::string& h);

    ByteView view() const { return {bytes.data(), bytes.size()}; }
    bool is_zero() const {
        for (auto b : bytes)
            if (b) return false;
        return true;
    }
};

struct DigestHash {
    std::size_t operator()(const Digest& d) const {
        std::size_t v;
        std::memcpy(&v, d.bytes.data(), sizeof(v));
        return v;
    }
};

} // namespace coopnet
