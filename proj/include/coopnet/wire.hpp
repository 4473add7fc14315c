#pragma once

#include "coopnet/bytes.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coopnet {

// Canonical serialization used for everything that gets hashed or signed:
// fixed field order, big-endian integers, u32-length-prefixed byte strings.
// Two implementations producing the same logical value must emit identical
// bytes, so digests recompute bit-exactly anywhere.
class Wire {
public:
    Wire& u8(std::uint8_t v) {
        buf_.push_back(v);
        return *this;
    }
    Wire& u32(std::uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }
    Wire& u64(std::uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }
    Wire& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    /// Raw fixed-width bytes, no length prefix (digests, fixed arrays).
    Wire& raw(ByteView v) {
        buf_.insert(buf_.end(), v.begin(), v.end());
        return *this;
    }
    /// Length-prefixed byte string.
    Wire& blob(ByteView v) {
        u32(static_cast<std::uint32_t>(v.size()));
        return raw(v);
    }
    Wire& str(const std::string& s) { return blob(as_bytes(s)); }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

struct WireError : std::runtime_error {
    WireError() : std::runtime_error("malformed canonical bytes") {}
};

class WireReader {
public:
    explicit WireReader(ByteView data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_++];
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_++];
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    ByteView raw(std::size_t n) {
        need(n);
        ByteView v = data_.subspan(pos_, n);
        pos_ += n;
        return v;
    }
    Bytes blob() {
        std::uint32_t n = u32();
        ByteView v = raw(n);
        return Bytes(v.begin(), v.end());
    }
    std::string str() {
        Bytes b = blob();
        return std::string(b.begin(), b.end());
    }
    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) throw WireError{};
    }
    ByteView data_;
    std::size_t pos_ = 0;
};

} // namespace coopnet
