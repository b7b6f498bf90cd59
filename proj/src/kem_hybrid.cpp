// SPDX-License-Identifier: Apache-2.0
//
// The hybrid-by-default KEM: one keypair, one encapsulate, one decapsulate,
// combining X25519 with ML-KEM-768 through HKDF-SHA256.

#include "hybridseal/kem_hybrid.hpp"

#include <algorithm>

#include "hybridseal/backend.hpp"
#include "hybridseal/kdf.hpp"

namespace hybridseal {

namespace {

constexpr std::string_view kInfoPrefix = "hybridseal/v1/";

void check_policy(std::string_view alg, DowngradePolicy policy) {
    if (alg == kClassicalOnlyKemAlg && !policy.allow_classical_only) {
        raise(ErrorKind::downgrade_refused,
              "classical-only mode requires the explicit downgrade flag");
    }
}

const KemSuite& suite_for(std::string_view alg, DowngradePolicy policy) {
    const KemSuite& suite = kem_suite(alg);
    check_policy(alg, policy);
    return suite;
}

void check_public_key(const KemSuite& suite, const HybridPublicKey& pub) {
    const std::size_t pqc_len = suite.pqc ? suite.pqc->public_key_len() : 0;
    if (pub.cls_pub.size() != suite.classical->public_key_len() ||
        pub.pqc_pub.size() != pqc_len) {
        raise(ErrorKind::malformed_key, "component lengths do not match " + pub.alg);
    }
}

void check_ciphertext(const KemSuite& suite, const HybridCiphertext& ct) {
    const std::size_t pqc_len = suite.pqc ? suite.pqc->ciphertext_len() : 0;
    if (ct.cls_eph_pub.size() != suite.classical->ciphertext_len() ||
        ct.pqc_ct.size() != pqc_len) {
        raise(ErrorKind::malformed_ciphertext, "component lengths do not match " + ct.alg);
    }
}

void pairwise_consistency_check(const KemBackend& backend, const KemKeyPair& kp) {
    KemEncapsulation enc = backend.encapsulate(kp.public_key);
    Bytes recovered = backend.decapsulate(kp.secret_key.bytes(), enc.ciphertext);
    if (!constant_time_equal(recovered, enc.shared_secret)) {
        throw std::runtime_error(std::string(backend.name()) +
                                 " keypair failed its pairwise consistency check");
    }
}

}  // namespace

HybridPublicKey HybridKeyPair::public_key() const {
    return HybridPublicKey{alg, cls_pub, pqc_pub, version};
}

SharedSecret combine_shared_secrets(ByteSpan cls_share, ByteSpan pqc_share,
                                    std::string_view alg_name, ByteSpan cls_eph_pub,
                                    ByteSpan pqc_ct) {
    // Eq-style ordering: classical share first, then the PQC share.
    Bytes ikm;
    ikm.reserve(cls_share.size() + pqc_share.size());
    ikm.insert(ikm.end(), cls_share.begin(), cls_share.end());
    ikm.insert(ikm.end(), pqc_share.begin(), pqc_share.end());

    KdfSpec spec;
    spec.output_len = SharedSecret::kLen;
    spec.info.reserve(kInfoPrefix.size() + alg_name.size() + 1 + cls_eph_pub.size() +
                      pqc_ct.size());
    spec.info.insert(spec.info.end(), kInfoPrefix.begin(), kInfoPrefix.end());
    spec.info.insert(spec.info.end(), alg_name.begin(), alg_name.end());
    spec.info.push_back(0x00);
    spec.info.insert(spec.info.end(), cls_eph_pub.begin(), cls_eph_pub.end());
    spec.info.insert(spec.info.end(), pqc_ct.begin(), pqc_ct.end());

    Bytes okm = hkdf_sha256(ikm, spec);
    secure_wipe(ikm.data(), ikm.size());
    std::array<std::uint8_t, SharedSecret::kLen> value{};
    std::copy(okm.begin(), okm.end(), value.begin());
    secure_wipe(okm.data(), okm.size());
    return SharedSecret(value);
}

HybridKeyPair generate_keypair(std::string_view alg) {
    const AlgorithmId& id = algorithm(alg);
    if (id.kind != AlgKind::kem) {
        raise(ErrorKind::unsupported_algorithm,
              "\"" + std::string(alg) + "\" is not a KEM algorithm");
    }
    const KemSuite& suite = kem_suite(alg);

    KemKeyPair cls = suite.classical->keygen();
    pairwise_consistency_check(*suite.classical, cls);

    HybridKeyPair kp;
    kp.alg = std::string(alg);
    kp.cls_pub = std::move(cls.public_key);
    kp.cls_sec = std::move(cls.secret_key);
    if (suite.pqc != nullptr) {
        KemKeyPair pqc = suite.pqc->keygen();
        pairwise_consistency_check(*suite.pqc, pqc);
        kp.pqc_pub = std::move(pqc.public_key);
        kp.pqc_sec = std::move(pqc.secret_key);
    }
    return kp;
}

std::pair<HybridCiphertext, SharedSecret> encapsulate(const HybridPublicKey& recipient,
                                                      DowngradePolicy policy) {
    const KemSuite& suite = suite_for(recipient.alg, policy);
    check_public_key(suite, recipient);

    KemEncapsulation cls = suite.classical->encapsulate(recipient.cls_pub);
    HybridCiphertext ct;
    ct.alg = recipient.alg;
    ct.cls_eph_pub = std::move(cls.ciphertext);

    Bytes pqc_share;
    if (suite.pqc != nullptr) {
        KemEncapsulation pqc = suite.pqc->encapsulate(recipient.pqc_pub);
        ct.pqc_ct = std::move(pqc.ciphertext);
        pqc_share = std::move(pqc.shared_secret);
    }

    SharedSecret ss = combine_shared_secrets(cls.shared_secret, pqc_share, recipient.alg,
                                             ct.cls_eph_pub, ct.pqc_ct);
    secure_wipe(cls.shared_secret.data(), cls.shared_secret.size());
    secure_wipe(pqc_share.data(), pqc_share.size());
    return {std::move(ct), ss};
}

SharedSecret decapsulate(const HybridKeyPair& kp, const HybridCiphertext& ct,
                         DowngradePolicy policy) {
    if (kp.alg != ct.alg) {
        raise(ErrorKind::malformed_ciphertext,
              "ciphertext algorithm \"" + ct.alg + "\" does not match keypair \"" + kp.alg +
                  "\"");
    }
    const KemSuite& suite = suite_for(kp.alg, policy);
    check_ciphertext(suite, ct);

    Bytes cls_share = suite.classical->decapsulate(kp.cls_sec.bytes(), ct.cls_eph_pub);
    Bytes pqc_share;
    if (suite.pqc != nullptr) {
        pqc_share = suite.pqc->decapsulate(kp.pqc_sec.bytes(), ct.pqc_ct);
    }

    SharedSecret ss =
        combine_shared_secrets(cls_share, pqc_share, kp.alg, ct.cls_eph_pub, ct.pqc_ct);
    secure_wipe(cls_share.data(), cls_share.size());
    secure_wipe(pqc_share.data(), pqc_share.size());
    return ss;
}

HybridKeyPair classical_only_keypair(DowngradePolicy policy) {
    if (!policy.allow_classical_only) {
        raise(ErrorKind::downgrade_refused,
              "classical-only keypair generation requires the explicit downgrade flag");
    }
    return generate_keypair(kClassicalOnlyKemAlg);
}

}  // namespace hybridseal
