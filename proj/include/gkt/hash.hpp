#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "gkt/error.hpp"

namespace gkt {

enum class HashAlgorithm { Sha256 };

// The one hash used for key commitments and certificate signatures.
inline constexpr HashAlgorithm kProtocolHash = HashAlgorithm::Sha256;
inline constexpr std::size_t kDigestSize = 32;

using Digest = std::array<std::uint8_t, kDigestSize>;

inline std::string_view hash_name(HashAlgorithm h) {
    switch (h) {
        case HashAlgorithm::Sha256: return "sha256";
    }
    return "unknown";
}

inline Digest digest(HashAlgorithm h, std::span<const std::uint8_t> data) {
    const EVP_MD* md = nullptr;
    switch (h) {
        case HashAlgorithm::Sha256: md = EVP_sha256(); break;
    }
    Digest out{};
    unsigned int len = 0;
    if (md == nullptr || EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 ||
        len != kDigestSize) {
        throw std::runtime_error("digest computation failed");
    }
    return out;
}

inline std::string digest_to_hex(const Digest& d) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * d.size());
    for (std::uint8_t b : d) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

inline Digest digest_from_hex(std::string_view text) {
    if (text.size() != 2 * kDigestSize) {
        throw Error(ErrorCode::Parse, "digest must be 64 hex characters");
    }
    auto nibble = [&](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        throw Error(ErrorCode::Parse, "digest is not lowercase hex");
    };
    Digest out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) | nibble(text[2 * i + 1]));
    }
    return out;
}

}  // namespace gkt
