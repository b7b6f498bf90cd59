// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "hybridseal/algorithm.hpp"
#include "hybridseal/common.hpp"

namespace hybridseal {

struct KemKeyPair {
    Bytes public_key;
    SecretBytes secret_key;
};

struct KemEncapsulation {
    Bytes ciphertext;
    Bytes shared_secret;
};

// Capability interface over one concrete KEM primitive. Instances are
// immutable after construction and safe to share across threads.
class KemBackend {
public:
    virtual ~KemBackend() = default;

    virtual std::string_view name() const noexcept = 0;
    virtual std::size_t public_key_len() const noexcept = 0;
    virtual std::size_t secret_key_len() const noexcept = 0;
    virtual std::size_t ciphertext_len() const noexcept = 0;
    virtual std::size_t shared_secret_len() const noexcept = 0;

    virtual KemKeyPair keygen() const = 0;
    virtual KemEncapsulation encapsulate(ByteSpan public_key) const = 0;

    // Implicit rejection semantics: a well-sized but invalid ciphertext
    // yields a pseudorandom secret, never an error.
    virtual Bytes decapsulate(ByteSpan secret_key, ByteSpan ciphertext) const = 0;
};

struct SigKeyPair {
    Bytes public_key;
    SecretBytes secret_key;
};

class SigBackend {
public:
    virtual ~SigBackend() = default;

    virtual std::string_view name() const noexcept = 0;
    virtual std::size_t public_key_len() const noexcept = 0;
    virtual std::size_t secret_key_len() const noexcept = 0;
    virtual std::size_t signature_len() const noexcept = 0;

    virtual SigKeyPair keygen() const = 0;
    virtual Bytes sign(ByteSpan secret_key, ByteSpan message) const = 0;

    // Returns false (never throws) on wrong key, wrong message or a
    // corrupted signature of valid length.
    virtual bool verify(ByteSpan public_key, ByteSpan message, ByteSpan signature) const = 0;
};

// Component backend registry. A fixed compile-time table; the same name
// always resolves to the same backend instance.
const KemBackend& kem_backend(std::string_view name);  // "X25519", "ML-KEM-768"
const SigBackend& sig_backend(std::string_view name);  // "Ed25519", "ML-DSA-65"

// A hybrid suite pairs a classical backend with a PQC backend under one
// registered AlgorithmId. `pqc` is null for the classical-only identity.
struct KemSuite {
    AlgorithmId id;
    const KemBackend* classical;
    const KemBackend* pqc;
};

struct SigSuite {
    AlgorithmId id;
    const SigBackend* classical;
    const SigBackend* pqc;
};

const KemSuite& kem_suite(std::string_view alg_name);
const SigSuite& sig_suite(std::string_view alg_name);

}  // namespace hybridseal
