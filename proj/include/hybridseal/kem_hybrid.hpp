// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <utility>

#include "hybridseal/algorithm.hpp"
#include "hybridseal/common.hpp"

namespace hybridseal {

// Classical-only mode is an explicit, deliberate downgrade. Every operation
// that could run without a PQC half takes this policy and refuses the
// classical-only algorithm unless `allow_classical_only` is set.
struct DowngradePolicy {
    bool allow_classical_only = false;
};

inline constexpr DowngradePolicy kAllowClassicalOnly{true};

struct HybridPublicKey {
    std::string alg;
    Bytes cls_pub;
    Bytes pqc_pub;
    std::uint32_t version = kFormatVersion;
};

struct HybridKeyPair {
    std::string alg;
    Bytes cls_pub;
    SecretBytes cls_sec;
    Bytes pqc_pub;
    SecretBytes pqc_sec;
    std::uint32_t version = kFormatVersion;

    // Projection that discards both secret halves.
    HybridPublicKey public_key() const;
};

struct HybridCiphertext {
    std::string alg;
    Bytes cls_eph_pub;  // sender's ephemeral X25519 public key
    Bytes pqc_ct;
    std::uint32_t version = kFormatVersion;
};

// The 32-byte combined shared secret. Compares in constant time and wipes
// itself on destruction.
class SharedSecret {
public:
    static constexpr std::size_t kLen = 32;

    SharedSecret() = default;
    explicit SharedSecret(const std::array<std::uint8_t, kLen>& value) : value_(value) {}
    SharedSecret(const SharedSecret&) = default;
    SharedSecret& operator=(const SharedSecret&) = default;
    ~SharedSecret() { secure_wipe(value_.data(), value_.size()); }

    ByteSpan bytes() const noexcept { return value_; }
    bool operator==(const SharedSecret& other) const noexcept {
        return constant_time_equal(value_, other.value_);
    }
    bool operator!=(const SharedSecret& other) const noexcept { return !(*this == other); }

private:
    std::array<std::uint8_t, kLen> value_{};
};

// Generates a fresh hybrid keypair. Both halves are drawn from independent
// randomness and each half passes a pairwise consistency check
// (encapsulate/decapsulate roundtrip) before the keypair is returned.
HybridKeyPair generate_keypair(std::string_view alg = kDefaultKemAlg);

std::pair<HybridCiphertext, SharedSecret> encapsulate(const HybridPublicKey& recipient,
                                                      DowngradePolicy policy = {});

// Recovers the sender's shared secret. A tampered pqc_ct of valid length
// yields a different secret without an error (implicit rejection); only
// algorithm mismatch or wrong component lengths raise malformed_ciphertext.
SharedSecret decapsulate(const HybridKeyPair& kp, const HybridCiphertext& ct,
                         DowngradePolicy policy = {});

// X25519-only keypair with an empty PQC half. Refused unless the policy
// explicitly allows the downgrade.
HybridKeyPair classical_only_keypair(DowngradePolicy policy);

// The shared-secret combiner: HKDF-SHA256 over cls_share || pqc_share with
// an empty salt and the transcript-binding info string
//   "hybridseal/v1/" || alg_name || 0x00 || cls_eph_pub || pqc_ct.
// Exposed so the derivation can be checked against independent oracles.
// pqc_share is empty in classical-only mode.
SharedSecret combine_shared_secrets(ByteSpan cls_share, ByteSpan pqc_share,
                                    std::string_view alg_name, ByteSpan cls_eph_pub,
                                    ByteSpan pqc_ct);

}  // namespace hybridseal
