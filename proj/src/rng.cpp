#include "coopnet/rng.hpp"

#include "coopnet/crypto.hpp"
#include "coopnet/wire.hpp"

namespace coopnet {

std::uint64_t derive_stream_seed(std::uint64_t root_seed, const std::string& label) {
    Wire w;
    w.u64(root_seed).str(label);
    Digest d = hash_bytes(w.bytes());
    std::uint64_t seed = 0;
    for (int i = 0; i < 8; ++i) seed = seed << 8 | d.bytes[static_cast<std::size_t>(i)];
    return seed;
}

} // namespace coopnet
