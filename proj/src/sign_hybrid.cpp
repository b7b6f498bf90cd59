// SPDX-License-Identifier: Apache-2.0
#include "hybridseal/sign_hybrid.hpp"

#include "hybridseal/backend.hpp"

namespace hybridseal {

namespace {

// Fixed probe message for the keygen pairwise consistency test.
constexpr std::uint8_t kPctProbe[32] = {'h', 'y', 'b', 'r', 'i', 'd', 's', 'e',
                                        'a', 'l', '-', 'p', 'c', 't', 0,   1,
                                        2,   3,   4,   5,   6,   7,   8,   9,
                                        10,  11,  12,  13,  14,  15,  16,  17};

void pairwise_consistency_check(const SigBackend& backend, const SigKeyPair& kp) {
    Bytes sig = backend.sign(kp.secret_key.bytes(), kPctProbe);
    if (!backend.verify(kp.public_key, kPctProbe, sig)) {
        throw std::runtime_error(std::string(backend.name()) +
                                 " keypair failed its pairwise consistency check");
    }
}

}  // namespace

HybridSigPublicKey HybridSigKeyPair::public_key() const {
    return HybridSigPublicKey{alg, cls_pub, pqc_pub, version};
}

HybridSigKeyPair generate_signing_keypair(std::string_view alg) {
    const AlgorithmId& id = algorithm(alg);
    if (id.kind != AlgKind::sig) {
        raise(ErrorKind::unsupported_algorithm,
              "\"" + std::string(alg) + "\" is not a signature algorithm");
    }
    const SigSuite& suite = sig_suite(alg);

    SigKeyPair cls = suite.classical->keygen();
    pairwise_consistency_check(*suite.classical, cls);
    SigKeyPair pqc = suite.pqc->keygen();
    pairwise_consistency_check(*suite.pqc, pqc);

    HybridSigKeyPair kp;
    kp.alg = std::string(alg);
    kp.cls_pub = std::move(cls.public_key);
    kp.cls_sec = std::move(cls.secret_key);
    kp.pqc_pub = std::move(pqc.public_key);
    kp.pqc_sec = std::move(pqc.secret_key);
    return kp;
}

HybridSignature sign(const HybridSigKeyPair& kp, ByteSpan message) {
    const SigSuite& suite = sig_suite(kp.alg);
    if (kp.cls_sec.size() != suite.classical->secret_key_len() ||
        kp.pqc_sec.size() != suite.pqc->secret_key_len()) {
        raise(ErrorKind::malformed_key, "component lengths do not match " + kp.alg);
    }
    HybridSignature sig;
    sig.alg = kp.alg;
    sig.cls_sig = suite.classical->sign(kp.cls_sec.bytes(), message);
    sig.pqc_sig = suite.pqc->sign(kp.pqc_sec.bytes(), message);
    return sig;
}

bool verify(const HybridSigPublicKey& pub, ByteSpan message, const HybridSignature& sig) {
    if (pub.alg != sig.alg) {
        return false;
    }
    const SigSuite& suite = sig_suite(pub.alg);
    if (sig.cls_sig.size() != suite.classical->signature_len() ||
        sig.pqc_sig.size() != suite.pqc->signature_len()) {
        raise(ErrorKind::malformed_signature,
              "signature component lengths do not match " + sig.alg);
    }
    // Strict AND: evaluate both components, succeed only if both do.
    const bool cls_ok = suite.classical->verify(pub.cls_pub, message, sig.cls_sig);
    const bool pqc_ok = suite.pqc->verify(pub.pqc_pub, message, sig.pqc_sig);
    return cls_ok && pqc_ok;
}

}  // namespace hybridseal
