// SPDX-License-Identifier: Apache-2.0
//
// Concrete primitive backends and the static algorithm registry.
// X25519/Ed25519 are backed by libsodium; ML-KEM-768 and ML-DSA-65 by the
// vendored PQClean reference implementations.

#include "hybridseal/backend.hpp"

#include <sodium.h>

#include <algorithm>
#include <array>
#include <sstream>

extern "C" {
#include "crypto_kem/ml-kem-768/clean/api.h"
#include "crypto_sign/ml-dsa-65/clean/api.h"
}

#include "hybridseal/algorithm.hpp"

namespace hybridseal {

namespace {

class X25519Kem final : public KemBackend {
public:
    std::string_view name() const noexcept override { return "X25519"; }
    std::size_t public_key_len() const noexcept override { return crypto_scalarmult_BYTES; }
    std::size_t secret_key_len() const noexcept override { return crypto_scalarmult_SCALARBYTES; }
    std::size_t ciphertext_len() const noexcept override { return crypto_scalarmult_BYTES; }
    std::size_t shared_secret_len() const noexcept override { return crypto_scalarmult_BYTES; }

    KemKeyPair keygen() const override {
        ensure_crypto_init();
        Bytes sk = random_bytes(secret_key_len());
        Bytes pk(public_key_len());
        crypto_scalarmult_base(pk.data(), sk.data());
        return {std::move(pk), SecretBytes(std::move(sk))};
    }

    // DH-as-KEM: the "ciphertext" is a fresh ephemeral public key.
    KemEncapsulation encapsulate(ByteSpan public_key) const override {
        ensure_crypto_init();
        if (public_key.size() != public_key_len()) {
            raise(ErrorKind::malformed_key, "X25519 public key must be 32 bytes");
        }
        Bytes esk = random_bytes(secret_key_len());
        Bytes epk(public_key_len());
        crypto_scalarmult_base(epk.data(), esk.data());
        Bytes ss(shared_secret_len());
        if (crypto_scalarmult(ss.data(), esk.data(), public_key.data()) != 0) {
            secure_wipe(esk.data(), esk.size());
            raise(ErrorKind::malformed_key, "X25519 public key is a low-order point");
        }
        secure_wipe(esk.data(), esk.size());
        return {std::move(epk), std::move(ss)};
    }

    Bytes decapsulate(ByteSpan secret_key, ByteSpan ciphertext) const override {
        ensure_crypto_init();
        if (secret_key.size() != secret_key_len()) {
            raise(ErrorKind::malformed_key, "X25519 secret key must be 32 bytes");
        }
        if (ciphertext.size() != ciphertext_len()) {
            raise(ErrorKind::malformed_ciphertext, "X25519 ephemeral share must be 32 bytes");
        }
        Bytes ss(shared_secret_len(), 0);
        // A low-order peer point yields the all-zero share instead of an
        // error: decapsulation must not expose a distinguishing oracle, and
        // the PQC half keeps the combined secret unpredictable.
        if (crypto_scalarmult(ss.data(), secret_key.data(), ciphertext.data()) != 0) {
            std::fill(ss.begin(), ss.end(), 0);
        }
        return ss;
    }
};

class MlKem768 final : public KemBackend {
public:
    std::string_view name() const noexcept override { return "ML-KEM-768"; }
    std::size_t public_key_len() const noexcept override {
        return PQCLEAN_MLKEM768_CLEAN_CRYPTO_PUBLICKEYBYTES;
    }
    std::size_t secret_key_len() const noexcept override {
        return PQCLEAN_MLKEM768_CLEAN_CRYPTO_SECRETKEYBYTES;
    }
    std::size_t ciphertext_len() const noexcept override {
        return PQCLEAN_MLKEM768_CLEAN_CRYPTO_CIPHERTEXTBYTES;
    }
    std::size_t shared_secret_len() const noexcept override {
        return PQCLEAN_MLKEM768_CLEAN_CRYPTO_BYTES;
    }

    KemKeyPair keygen() const override {
        Bytes pk(public_key_len());
        Bytes sk(secret_key_len());
        PQCLEAN_MLKEM768_CLEAN_crypto_kem_keypair(pk.data(), sk.data());
        return {std::move(pk), SecretBytes(std::move(sk))};
    }

    KemEncapsulation encapsulate(ByteSpan public_key) const override {
        if (public_key.size() != public_key_len()) {
            raise(ErrorKind::malformed_key, "ML-KEM-768 public key must be 1184 bytes");
        }
        Bytes ct(ciphertext_len());
        Bytes ss(shared_secret_len());
        PQCLEAN_MLKEM768_CLEAN_crypto_kem_enc(ct.data(), ss.data(), public_key.data());
        return {std::move(ct), std::move(ss)};
    }

    Bytes decapsulate(ByteSpan secret_key, ByteSpan ciphertext) const override {
        if (secret_key.size() != secret_key_len()) {
            raise(ErrorKind::malformed_key, "ML-KEM-768 secret key must be 2400 bytes");
        }
        if (ciphertext.size() != ciphertext_len()) {
            raise(ErrorKind::malformed_ciphertext, "ML-KEM-768 ciphertext must be 1088 bytes");
        }
        Bytes ss(shared_secret_len());
        // FIPS 203 implicit rejection: never fails on well-sized input.
        PQCLEAN_MLKEM768_CLEAN_crypto_kem_dec(ss.data(), ciphertext.data(), secret_key.data());
        return ss;
    }
};

class Ed25519Sig final : public SigBackend {
public:
    std::string_view name() const noexcept override { return "Ed25519"; }
    std::size_t public_key_len() const noexcept override { return crypto_sign_PUBLICKEYBYTES; }
    std::size_t secret_key_len() const noexcept override { return crypto_sign_SECRETKEYBYTES; }
    std::size_t signature_len() const noexcept override { return crypto_sign_BYTES; }

    SigKeyPair keygen() const override {
        ensure_crypto_init();
        Bytes pk(public_key_len());
        Bytes sk(secret_key_len());
        crypto_sign_keypair(pk.data(), sk.data());
        return {std::move(pk), SecretBytes(std::move(sk))};
    }

    Bytes sign(ByteSpan secret_key, ByteSpan message) const override {
        ensure_crypto_init();
        if (secret_key.size() != secret_key_len()) {
            raise(ErrorKind::malformed_key, "Ed25519 secret key must be 64 bytes");
        }
        Bytes sig(signature_len());
        unsigned long long siglen = 0;
        crypto_sign_detached(sig.data(), &siglen, message.data(), message.size(),
                             secret_key.data());
        sig.resize(siglen);
        return sig;
    }

    bool verify(ByteSpan public_key, ByteSpan message, ByteSpan signature) const override {
        ensure_crypto_init();
        if (public_key.size() != public_key_len() || signature.size() != signature_len()) {
            return false;
        }
        return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                           public_key.data()) == 0;
    }
};

class MlDsa65 final : public SigBackend {
public:
    std::string_view name() const noexcept override { return "ML-DSA-65"; }
    std::size_t public_key_len() const noexcept override {
        return PQCLEAN_MLDSA65_CLEAN_CRYPTO_PUBLICKEYBYTES;
    }
    std::size_t secret_key_len() const noexcept override {
        return PQCLEAN_MLDSA65_CLEAN_CRYPTO_SECRETKEYBYTES;
    }
    std::size_t signature_len() const noexcept override {
        return PQCLEAN_MLDSA65_CLEAN_CRYPTO_BYTES;
    }

    SigKeyPair keygen() const override {
        Bytes pk(public_key_len());
        Bytes sk(secret_key_len());
        PQCLEAN_MLDSA65_CLEAN_crypto_sign_keypair(pk.data(), sk.data());
        return {std::move(pk), SecretBytes(std::move(sk))};
    }

    Bytes sign(ByteSpan secret_key, ByteSpan message) const override {
        if (secret_key.size() != secret_key_len()) {
            raise(ErrorKind::malformed_key, "ML-DSA-65 secret key must be 4032 bytes");
        }
        Bytes sig(signature_len());
        std::size_t siglen = 0;
        PQCLEAN_MLDSA65_CLEAN_crypto_sign_signature(sig.data(), &siglen, message.data(),
                                                    message.size(), secret_key.data());
        sig.resize(siglen);
        return sig;
    }

    bool verify(ByteSpan public_key, ByteSpan message, ByteSpan signature) const override {
        if (public_key.size() != public_key_len() || signature.size() != signature_len()) {
            return false;
        }
        return PQCLEAN_MLDSA65_CLEAN_crypto_sign_verify(signature.data(), signature.size(),
                                                        message.data(), message.size(),
                                                        public_key.data()) == 0;
    }
};

const X25519Kem& x25519_instance() {
    static const X25519Kem instance;
    return instance;
}
const MlKem768& mlkem768_instance() {
    static const MlKem768 instance;
    return instance;
}
const Ed25519Sig& ed25519_instance() {
    static const Ed25519Sig instance;
    return instance;
}
const MlDsa65& mldsa65_instance() {
    static const MlDsa65 instance;
    return instance;
}

constexpr std::array<AlgorithmId, 3> kRegisteredAlgorithms{{
    {kDefaultKemAlg, AlgKind::kem, 3},
    {kDefaultSigAlg, AlgKind::sig, 3},
    {kClassicalOnlyKemAlg, AlgKind::kem, 1},
}};

[[noreturn]] void unknown_algorithm(std::string_view name) {
    std::ostringstream msg;
    msg << "\"" << name << "\" is not registered; registered ids:";
    for (const auto& alg : kRegisteredAlgorithms) {
        msg << " \"" << alg.name << "\"";
    }
    raise(ErrorKind::unsupported_algorithm, msg.str());
}

}  // namespace

const AlgorithmId& algorithm(std::string_view name) {
    for (const auto& alg : kRegisteredAlgorithms) {
        if (alg.name == name) {
            return alg;
        }
    }
    unknown_algorithm(name);
}

std::vector<std::string_view> registered_algorithms() {
    std::vector<std::string_view> names;
    names.reserve(kRegisteredAlgorithms.size());
    for (const auto& alg : kRegisteredAlgorithms) {
        names.push_back(alg.name);
    }
    return names;
}

const KemBackend& kem_backend(std::string_view name) {
    if (name == "X25519") return x25519_instance();
    if (name == "ML-KEM-768") return mlkem768_instance();
    raise(ErrorKind::unsupported_algorithm,
          "\"" + std::string(name) + "\" is not a registered KEM backend; "
          "registered: \"X25519\" \"ML-KEM-768\"");
}

const SigBackend& sig_backend(std::string_view name) {
    if (name == "Ed25519") return ed25519_instance();
    if (name == "ML-DSA-65") return mldsa65_instance();
    raise(ErrorKind::unsupported_algorithm,
          "\"" + std::string(name) + "\" is not a registered signature backend; "
          "registered: \"Ed25519\" \"ML-DSA-65\"");
}

const KemSuite& kem_suite(std::string_view alg_name) {
    static const KemSuite hybrid{algorithm(kDefaultKemAlg), &x25519_instance(),
                                 &mlkem768_instance()};
    static const KemSuite classical_only{algorithm(kClassicalOnlyKemAlg), &x25519_instance(),
                                         nullptr};
    if (alg_name == kDefaultKemAlg) return hybrid;
    if (alg_name == kClassicalOnlyKemAlg) return classical_only;
    const AlgorithmId& id = algorithm(alg_name);  // throws for unknown names
    if (id.kind != AlgKind::kem) {
        raise(ErrorKind::unsupported_algorithm,
              "\"" + std::string(alg_name) + "\" is a signature suite, not a KEM");
    }
    unknown_algorithm(alg_name);
}

const SigSuite& sig_suite(std::string_view alg_name) {
    static const SigSuite hybrid{algorithm(kDefaultSigAlg), &ed25519_instance(),
                                 &mldsa65_instance()};
    if (alg_name == kDefaultSigAlg) return hybrid;
    const AlgorithmId& id = algorithm(alg_name);
    if (id.kind != AlgKind::sig) {
        raise(ErrorKind::unsupported_algorithm,
              "\"" + std::string(alg_name) + "\" is a KEM suite, not a signature suite");
    }
    unknown_algorithm(alg_name);
}

}  // namespace hybridseal
