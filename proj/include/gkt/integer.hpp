#pragma once

// Arbitrary-precision integers and their canonical encodings.
//
// Text form: lowercase hex, big-endian, no leading zeros ("0" for zero).
// Binary form: fixed-width big-endian, width chosen by the caller.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkt/error.hpp"

namespace gkt {

using Integer = mpz_class;
using Bytes = std::vector<std::uint8_t>;

inline std::size_t bit_length(const Integer& v) {
    return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline std::size_t byte_length(const Integer& v) {
    return (bit_length(v) + 7) / 8;
}

inline std::string to_hex(const Integer& v) {
    if (sgn(v) < 0) {
        throw Error(ErrorCode::OutOfRange, "negative integers have no hex encoding");
    }
    return v.get_str(16);
}

inline Integer from_hex(std::string_view text) {
    if (text.empty()) {
        throw Error(ErrorCode::Parse, "empty hex integer");
    }
    if (text.size() > 1 && text.front() == '0') {
        throw Error(ErrorCode::Parse, "hex integer has leading zeros: " + std::string(text));
    }
    for (char c : text) {
        const bool digit = c >= '0' && c <= '9';
        const bool lower = c >= 'a' && c <= 'f';
        if (!digit && !lower) {
            throw Error(ErrorCode::Parse, "not a lowercase hex integer: " + std::string(text));
        }
    }
    return Integer(std::string(text), 16);
}

inline Bytes to_fixed_bytes(const Integer& v, std::size_t width) {
    if (sgn(v) < 0 || byte_length(v) > width) {
        throw Error(ErrorCode::OutOfRange,
                    "integer does not fit in " + std::to_string(width) + " bytes");
    }
    Bytes out(width, 0);
    if (sgn(v) == 0) {
        return out;
    }
    std::size_t written = 0;
    const std::size_t len = byte_length(v);
    mpz_export(out.data() + (width - len), &written, 1, 1, 1, 0, v.get_mpz_t());
    return out;
}

inline Integer from_bytes(std::span<const std::uint8_t> bytes) {
    Integer v;
    if (!bytes.empty()) {
        mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    }
    return v;
}

inline Integer from_u64(std::uint64_t v) {
    Integer out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return out;
}

inline void append_be64(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

}  // namespace gkt
