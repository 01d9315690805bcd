#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include <elk/bigint.hpp>

namespace elk {

// Deterministic seedable source.  All randomized operations in the library
// take an Rng& so that a fixed seed reproduces a run bit for bit; the raw
// engine is mt19937_64, whose output sequence is pinned by the standard.
// Range reduction is done by masked rejection, never by modulo, so draws are
// exactly uniform and independent of the platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform on [lo, hi], inclusive
    std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform_u64: empty range");
        std::uint64_t span = hi - lo;
        if (span == ~std::uint64_t{0}) return eng_();
        std::uint64_t range = span + 1;
        std::uint64_t mask = ~std::uint64_t{0};
        int bits = 64;
        while (bits > 1 && (range - 1) >> (bits - 1) == 0) {
            --bits;
            mask >>= 1;
        }
        for (;;) {
            std::uint64_t v = eng_() & mask;
            if (v < range) return lo + v;
        }
    }

    // uniform on [lo, hi], inclusive
    BigInt uniform_bigint(const BigInt& lo, const BigInt& hi) {
        if (lo > hi) throw std::invalid_argument("uniform_bigint: empty range");
        BigInt span = hi - lo;
        if (span == 0) return lo;
        unsigned bits = msb_index(span) + 1;
        unsigned words = (bits + 63) / 64;
        unsigned top_bits = bits - 64 * (words - 1);
        std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0}
                                                : ((std::uint64_t{1} << top_bits) - 1);
        for (;;) {
            BigInt v = 0;
            for (unsigned w = 0; w < words; ++w) {
                std::uint64_t chunk = eng_();
                if (w + 1 == words) chunk &= top_mask;
                v <<= 64;
                v |= BigInt(chunk);
            }
            if (v <= span) return lo + v;
        }
    }

    bool coin() { return (eng_() & 1) != 0; }

private:
    std::mt19937_64 eng_;
};

// probabilistic Miller-Rabin with random bases; false = proven composite
inline bool miller_rabin(const BigInt& n, unsigned rounds, Rng& rng) {
    if (n < 2) return false;
    if (n == 2 || n == 3) return true;
    if ((n & 1) == 0) return false;
    for (unsigned i = 0; i < rounds; ++i) {
        BigInt a = rng.uniform_bigint(2, n - 2);
        if (miller_rabin_witness(n, a)) return false;
    }
    return true;
}

}  // namespace elk
