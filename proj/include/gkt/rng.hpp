#pragma once

#include <cstdint>
#include <random>

#include "gkt/integer.hpp"

namespace gkt {

// Seeded deterministic source. mt19937_64 output is fixed by the standard,
// so equal seeds give equal streams on every platform; nothing here goes
// through std::uniform_int_distribution, whose algorithm is unspecified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform over [0, bound) by rejection on the bit length of bound - 1.
    Integer below(const Integer& bound) {
        if (bound <= 1) {
            if (bound == 1) {
                return 0;
            }
            throw Error(ErrorCode::OutOfRange, "rng bound must be positive");
        }
        const Integer max = bound - 1;
        const std::size_t bits = bit_length(max);
        const std::size_t words = (bits + 63) / 64;
        Integer mask = 1;
        mask <<= bits;
        mask -= 1;
        for (;;) {
            Integer candidate = 0;
            for (std::size_t i = 0; i < words; ++i) {
                candidate <<= 64;
                candidate += from_u64(next_u64());
            }
            candidate &= mask;
            if (candidate < bound) {
                return candidate;
            }
        }
    }

    // Uniform over [0, bound) for machine-sized bounds.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw Error(ErrorCode::OutOfRange, "rng bound must be positive");
        }
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            const std::uint64_t v = next_u64();
            if (v < limit) {
                return v % bound;
            }
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gkt
