#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace coopnet {

// Deterministic RNG stream. std::uniform_int_distribution is not pinned down
// by the standard, so bounded draws are implemented by hand on top of
// mt19937_64 (whose output sequence is fully specified). One root seed per
// scenario; independent streams are derived by hashing (root || label) so
// adding a new consumer never perturbs existing streams.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, bound). bound = 0 returns 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        // rejection sampling, unbiased
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    double unit() { // [0,1) with 53 bits
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    bool chance(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Sample k distinct elements, preserving draw order.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& pool, std::size_t k) {
        std::vector<T> scratch = pool;
        if (k >= scratch.size()) {
            shuffle(scratch);
            return scratch;
        }
        std::vector<T> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(scratch.size() - i));
            std::swap(scratch[i], scratch[j]);
            out.push_back(scratch[i]);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

/// Derive the seed for a named stream from the scenario root seed.
std::uint64_t derive_stream_seed(std::uint64_t root_seed, const std::string& label);

inline RngStream derive_stream(std::uint64_t root_seed, const std::string& label) {
    return RngStream(derive_stream_seed(root_seed, label));
}

} // namespace coopnet
