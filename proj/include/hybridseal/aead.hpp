// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hybridseal/common.hpp"

namespace hybridseal {

// AES-256-GCM.
inline constexpr std::size_t kAeadKeyLen = 32;
inline constexpr std::size_t kAeadNonceLen = 12;
inline constexpr std::size_t kAeadTagLen = 16;

// Returns ciphertext || 16-byte tag. Throws invalid_parameter on wrong
// key/nonce length.
Bytes aead_seal(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan plaintext);

// Inverse of aead_seal. Throws authentication_failure when the tag does not
// verify (tamper and wrong key are indistinguishable).
Bytes aead_open(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan ciphertext);

}  // namespace hybridseal
