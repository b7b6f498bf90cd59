// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hybridseal/common.hpp"

namespace hybridseal {

// HKDF-SHA256 expand bound: 255 blocks of the 32-byte hash output.
inline constexpr std::size_t kHkdfSha256MaxOutput = 255 * 32;
inline constexpr std::size_t kHkdfMinOutput = 16;

struct KdfSpec {
    std::size_t output_len = 32;
    Bytes salt;  // empty selects the HKDF default (a hash-length zero block)
    Bytes info;
};

// One-shot HKDF-SHA256 extract+expand. Deterministic in all inputs.
// Throws invalid_parameter for empty ikm or an output length outside
// [kHkdfMinOutput, kHkdfSha256MaxOutput].
Bytes hkdf_sha256(ByteSpan ikm, const KdfSpec& spec);

}  // namespace hybridseal
