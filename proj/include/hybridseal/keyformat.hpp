// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>

#include "hybridseal/common.hpp"
#include "hybridseal/kem_hybrid.hpp"
#include "hybridseal/sign_hybrid.hpp"

namespace hybridseal {

// Wire schema (CDDL):
//
//   hybrid-record = {
//     "v"   : uint,   ; format version (currently 1)
//     "alg" : text,   ; e.g. "X25519+ML-KEM-768"
//     "cls" : bstr,   ; classical component bytes
//     "pqc" : bstr,   ; PQC component bytes
//     ? "params" : map,
//   }
//
// Encoding is canonical: definite lengths, map keys in exactly the order
// above. Keys, ciphertexts and signatures all share this one shape; the
// typed decoders below validate component lengths for the claimed type.
//
// Private-key records carry secret || public concatenated in each component
// (the ML-DSA-65 public key is not recoverable from its secret key by
// slicing, so both halves are stored).
struct CborRecord {
    std::uint32_t version = kFormatVersion;
    std::string alg;
    Bytes cls;
    Bytes pqc;
    Bytes params_cbor;  // canonical CBOR of the optional params map; empty = absent
};

Bytes encode_record(const CborRecord& record);

// Schema + version gate. Checks "v" before anything else; throws
// unsupported_version (naming the version) for v > 1, unsupported_algorithm
// for an unknown "alg", malformed_encoding for anything structurally wrong
// (missing field, wrong CBOR type, trailing bytes, duplicate keys).
CborRecord decode_record(ByteSpan data);

Bytes encode_cbor(const HybridPublicKey& key);
Bytes encode_cbor(const HybridKeyPair& key);
Bytes encode_cbor(const HybridCiphertext& ct);
Bytes encode_cbor(const HybridSigPublicKey& key);
Bytes encode_cbor(const HybridSigKeyPair& key);
Bytes encode_cbor(const HybridSignature& sig);

HybridPublicKey decode_public_key(ByteSpan data);
HybridKeyPair decode_keypair(ByteSpan data);
HybridCiphertext decode_ciphertext(ByteSpan data);
HybridSigPublicKey decode_sig_public_key(ByteSpan data);
HybridSigKeyPair decode_sig_keypair(ByteSpan data);
HybridSignature decode_signature(ByteSpan data);

enum class PemLabel { hybrid_public_key, hybrid_private_key };

// PEM armor over the CBOR bytes, 64-column base64 body. Unknown labels are
// rejected on decode.
std::string pem_encode(PemLabel label, ByteSpan cbor);
std::pair<PemLabel, Bytes> pem_decode(std::string_view text);

// Classical-to-hybrid upgrade. The supplied classical secret key is reused
// verbatim as the classical half and paired with a freshly generated PQC
// half. Takes a 32-byte X25519 secret key (KEM) or a 64-byte Ed25519 secret
// key (signatures); anything else is malformed_key.
HybridKeyPair upgrade_classical_kem(ByteSpan x25519_secret_key);
HybridSigKeyPair upgrade_classical_sig(ByteSpan ed25519_secret_key);

}  // namespace hybridseal
