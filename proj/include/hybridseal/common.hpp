// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hybridseal {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

// Serialization format version written into every key, ciphertext,
// signature and envelope structure.
inline constexpr std::uint32_t kFormatVersion = 1;

enum class ErrorKind {
    invalid_parameter,
    unsupported_algorithm,
    unsupported_version,
    malformed_key,
    malformed_ciphertext,
    malformed_signature,
    malformed_encoding,
    authentication_failure,
    downgrade_refused,
    insufficient_samples,
    degenerate_variance,
    io_error,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

// Idempotent process-wide initialization of the crypto backends.
// Called internally by everything that needs it; safe from any thread.
void ensure_crypto_init();

Bytes random_bytes(std::size_t n);

// Constant-time comparison; false for length mismatch.
bool constant_time_equal(ByteSpan a, ByteSpan b) noexcept;

void secure_wipe(void* data, std::size_t len) noexcept;

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

// Byte buffer for secret key material. Wipes its storage on destruction.
class SecretBytes {
public:
    SecretBytes() = default;
    explicit SecretBytes(Bytes data) : data_(std::move(data)) {}
    SecretBytes(const SecretBytes&) = default;
    SecretBytes& operator=(const SecretBytes&) = default;
    SecretBytes(SecretBytes&&) noexcept = default;
    SecretBytes& operator=(SecretBytes&&) noexcept = default;
    ~SecretBytes() { secure_wipe(data_.data(), data_.size()); }

    ByteSpan bytes() const noexcept { return data_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

private:
    Bytes data_;
};

}  // namespace hybridseal
