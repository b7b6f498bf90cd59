// SPDX-License-Identifier: Apache-2.0
#include "hybridseal/common.hpp"

#include <sodium.h>

#include <mutex>

namespace hybridseal {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_parameter: return "invalid-parameter";
        case ErrorKind::unsupported_algorithm: return "unsupported-algorithm";
        case ErrorKind::unsupported_version: return "unsupported-version";
        case ErrorKind::malformed_key: return "malformed-key";
        case ErrorKind::malformed_ciphertext: return "malformed-ciphertext";
        case ErrorKind::malformed_signature: return "malformed-signature";
        case ErrorKind::malformed_encoding: return "malformed-encoding";
        case ErrorKind::authentication_failure: return "authentication-failure";
        case ErrorKind::downgrade_refused: return "downgrade-refused";
        case ErrorKind::insufficient_samples: return "insufficient-samples";
        case ErrorKind::degenerate_variance: return "degenerate-variance";
        case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

void ensure_crypto_init() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (sodium_init() < 0) {
            throw std::runtime_error("libsodium initialization failed");
        }
    });
}

Bytes random_bytes(std::size_t n) {
    ensure_crypto_init();
    Bytes out(n);
    if (n > 0) {
        randombytes_buf(out.data(), n);
    }
    return out;
}

bool constant_time_equal(ByteSpan a, ByteSpan b) noexcept {
    if (a.size() != b.size()) {
        return false;
    }
    if (a.empty()) {
        return true;
    }
    return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

void secure_wipe(void* data, std::size_t len) noexcept {
    if (data != nullptr && len > 0) {
        sodium_memzero(data, len);
    }
}

std::string to_hex(ByteSpan data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        raise(ErrorKind::invalid_parameter, "hex string has odd length");
    }
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_nibble(hex[2 * i]);
        const int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            raise(ErrorKind::invalid_parameter, "non-hex character");
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

}  // namespace hybridseal
