// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "hybridseal/common.hpp"
#include "hybridseal/kem_hybrid.hpp"

namespace hybridseal {

// Envelope encryption: a hybrid KEM establishes a 32-byte key which drives
// AES-256-GCM over the payload. The 32-byte KEM output is used as the AEAD
// key directly; the combiner already ran HKDF with transcript binding.
//
// CBOR schema, canonical key order:
//   { "v": uint, "alg": text, "kem_ct": bstr, "nonce": bstr,
//     "aad": bstr, "ct": bstr }
struct Envelope {
    std::uint32_t version = kFormatVersion;
    std::string alg;  // "<kem alg>+AES-256-GCM"
    Bytes kem_ct;     // CBOR-encoded HybridCiphertext
    Bytes nonce;      // 12 bytes, fresh per seal
    Bytes aad;        // may be empty
    Bytes ct;         // AEAD ciphertext || tag
};

Envelope seal(const HybridPublicKey& recipient, ByteSpan plaintext, ByteSpan aad = {},
              DowngradePolicy policy = {});

// Returns the plaintext iff AEAD authentication passes. Wrong-key opens
// fail here as authentication_failure, never as a KEM-level error.
Bytes open(const HybridKeyPair& kp, const Envelope& env, DowngradePolicy policy = {});

Bytes encode_envelope(const Envelope& env);
Envelope decode_envelope(ByteSpan data);

}  // namespace hybridseal
