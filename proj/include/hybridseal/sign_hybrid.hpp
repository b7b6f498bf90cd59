// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "hybridseal/algorithm.hpp"
#include "hybridseal/common.hpp"

namespace hybridseal {

struct HybridSigPublicKey {
    std::string alg;
    Bytes cls_pub;
    Bytes pqc_pub;
    std::uint32_t version = kFormatVersion;
};

struct HybridSigKeyPair {
    std::string alg;
    Bytes cls_pub;
    SecretBytes cls_sec;
    Bytes pqc_pub;
    SecretBytes pqc_sec;
    std::uint32_t version = kFormatVersion;

    HybridSigPublicKey public_key() const;
};

struct HybridSignature {
    std::string alg;
    Bytes cls_sig;
    Bytes pqc_sig;
    std::uint32_t version = kFormatVersion;
};

// Fresh co-signing keypair; halves independently generated, each checked
// with a sign/verify pairwise consistency test.
HybridSigKeyPair generate_signing_keypair(std::string_view alg = kDefaultSigAlg);

// Signs the raw message with both components. The PQC component uses hedged
// signing, so two signatures over the same message may differ.
HybridSignature sign(const HybridSigKeyPair& kp, ByteSpan message);

// Strict-AND verification: true iff both components verify. Returns false
// on any verification failure; throws malformed_signature only when a
// component has the wrong length for the declared algorithm.
bool verify(const HybridSigPublicKey& pub, ByteSpan message, const HybridSignature& sig);

}  // namespace hybridseal
