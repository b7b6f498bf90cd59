// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <thread>

#include "hybridseal/backend.hpp"
#include "hybridseal/kem_hybrid.hpp"
#include "test_support.hpp"

using namespace hybridseal;

TEST_CASE("generate_keypair produces the documented component sizes") {
    HybridKeyPair kp = generate_keypair();
    CHECK(kp.alg == "X25519+ML-KEM-768");
    CHECK(kp.cls_pub.size() == 32);
    CHECK(kp.pqc_pub.size() == 1184);
    CHECK(kp.version == 1);

    HybridPublicKey pub = kp.public_key();
    CHECK(pub.alg == kp.alg);
    CHECK(pub.cls_pub == kp.cls_pub);
    CHECK(pub.pqc_pub == kp.pqc_pub);

    HybridKeyPair other = generate_keypair();
    CHECK(kp.cls_pub != other.cls_pub);
    CHECK(kp.pqc_pub != other.pqc_pub);

    CHECK_THROWS_AS((void)generate_keypair("Ed25519+ML-DSA-65"), Error);
    try {
        (void)generate_keypair("Ed25519+ML-DSA-65");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_algorithm);
    }
}

TEST_CASE("encapsulate/decapsulate roundtrip over 1000 random keypairs") {
    for (int i = 0; i < 1000; ++i) {
        HybridKeyPair kp = generate_keypair();
        auto [ct, ss_sender] = encapsulate(kp.public_key());
        SharedSecret ss_receiver = decapsulate(kp, ct);
        REQUIRE(ss_receiver == ss_sender);
    }
}

TEST_CASE("two encapsulations differ in ciphertext and secret") {
    HybridKeyPair kp = generate_keypair();
    auto [ct1, ss1] = encapsulate(kp.public_key());
    auto [ct2, ss2] = encapsulate(kp.public_key());
    CHECK(ct1.cls_eph_pub != ct2.cls_eph_pub);
    CHECK(ct1.pqc_ct != ct2.pqc_ct);
    CHECK(ss1 != ss2);
}

TEST_CASE("the combiner equals an independent HKDF oracle on the concatenation") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const Bytes ss_cls = testsupport::seeded_bytes(rng, 32);
        const Bytes ss_pqc = testsupport::seeded_bytes(rng, 32);
        const Bytes eph = testsupport::seeded_bytes(rng, 32);
        const Bytes pqc_ct = testsupport::seeded_bytes(rng, 1088);

        SharedSecret ours =
            combine_shared_secrets(ss_cls, ss_pqc, kDefaultKemAlg, eph, pqc_ct);

        Bytes ikm = ss_cls;
        ikm.insert(ikm.end(), ss_pqc.begin(), ss_pqc.end());
        const Bytes info = testsupport::combiner_info(kDefaultKemAlg, eph, pqc_ct);
        const Bytes expect = testsupport::oracle_hkdf_sha256(ikm, {}, info, 32);
        CHECK(Bytes(ours.bytes().begin(), ours.bytes().end()) == expect);
    }
}

TEST_CASE("combiner input order is classical-first") {
    std::mt19937_64 rng(43);
    const Bytes a = testsupport::seeded_bytes(rng, 32);
    const Bytes b = testsupport::seeded_bytes(rng, 32);
    const Bytes eph = testsupport::seeded_bytes(rng, 32);
    const Bytes ct = testsupport::seeded_bytes(rng, 1088);

    SharedSecret forward = combine_shared_secrets(a, b, kDefaultKemAlg, eph, ct);
    SharedSecret swapped = combine_shared_secrets(b, a, kDefaultKemAlg, eph, ct);
    CHECK(forward != swapped);

    Bytes ba = b;
    ba.insert(ba.end(), a.begin(), a.end());
    const Bytes info = testsupport::combiner_info(kDefaultKemAlg, eph, ct);
    CHECK(Bytes(swapped.bytes().begin(), swapped.bytes().end()) ==
          testsupport::oracle_hkdf_sha256(ba, {}, info, 32));
}

TEST_CASE("replacing either component secret changes the derived secret") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 25; ++trial) {
        const Bytes ss_cls = testsupport::seeded_bytes(rng, 32);
        const Bytes ss_pqc = testsupport::seeded_bytes(rng, 32);
        const Bytes eph = testsupport::seeded_bytes(rng, 32);
        const Bytes ct = testsupport::seeded_bytes(rng, 1088);

        SharedSecret base = combine_shared_secrets(ss_cls, ss_pqc, kDefaultKemAlg, eph, ct);
        SharedSecret cls_swapped = combine_shared_secrets(testsupport::seeded_bytes(rng, 32),
                                                          ss_pqc, kDefaultKemAlg, eph, ct);
        SharedSecret pqc_swapped = combine_shared_secrets(
            ss_cls, testsupport::seeded_bytes(rng, 32), kDefaultKemAlg, eph, ct);
        CHECK(base != cls_swapped);
        CHECK(base != pqc_swapped);
    }
}

TEST_CASE("transcript binding: a different ciphertext changes the secret") {
    std::mt19937_64 rng(45);
    const Bytes ss_cls = testsupport::seeded_bytes(rng, 32);
    const Bytes ss_pqc = testsupport::seeded_bytes(rng, 32);
    const Bytes eph = testsupport::seeded_bytes(rng, 32);
    Bytes ct = testsupport::seeded_bytes(rng, 1088);

    SharedSecret base = combine_shared_secrets(ss_cls, ss_pqc, kDefaultKemAlg, eph, ct);
    ct[17] ^= 0x01;
    SharedSecret rebound = combine_shared_secrets(ss_cls, ss_pqc, kDefaultKemAlg, eph, ct);
    CHECK(base != rebound);
}

TEST_CASE("decapsulating a tampered pqc ciphertext yields a different secret, no error") {
    HybridKeyPair kp = generate_keypair();
    auto [ct, ss_sender] = encapsulate(kp.public_key());

    HybridCiphertext tampered = ct;
    tampered.pqc_ct[512] ^= 0x20;
    SharedSecret ss = decapsulate(kp, tampered);
    CHECK(ss.bytes().size() == 32);
    CHECK(ss != ss_sender);
}

TEST_CASE("malformed ciphertexts are rejected by length and algorithm checks") {
    HybridKeyPair kp = generate_keypair();
    auto [ct, ss] = encapsulate(kp.public_key());

    HybridCiphertext truncated = ct;
    truncated.cls_eph_pub.resize(31);
    CHECK_THROWS_AS((void)decapsulate(kp, truncated), Error);
    try {
        (void)decapsulate(kp, truncated);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::malformed_ciphertext);
    }

    HybridCiphertext wrong_alg = ct;
    wrong_alg.alg = "X25519-only";
    CHECK_THROWS_AS((void)decapsulate(kp, wrong_alg), Error);

    HybridPublicKey bad_pub = kp.public_key();
    bad_pub.pqc_pub.resize(100);
    CHECK_THROWS_AS((void)encapsulate(bad_pub), Error);
    try {
        (void)encapsulate(bad_pub);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::malformed_key);
    }
}

TEST_CASE("classical-only mode requires the explicit downgrade flag everywhere") {
    CHECK_THROWS_AS((void)classical_only_keypair({}), Error);
    try {
        (void)classical_only_keypair({});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::downgrade_refused);
    }

    HybridKeyPair kp = classical_only_keypair(kAllowClassicalOnly);
    CHECK(kp.alg == "X25519-only");
    CHECK(kp.pqc_pub.empty());
    CHECK(kp.pqc_sec.empty());

    // Hybrid operations refuse the downgraded key unless the flag travels too.
    CHECK_THROWS_AS((void)encapsulate(kp.public_key()), Error);
    try {
        (void)encapsulate(kp.public_key());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::downgrade_refused);
    }

    auto [ct, ss_sender] = encapsulate(kp.public_key(), kAllowClassicalOnly);
    CHECK(ct.pqc_ct.empty());
    CHECK_THROWS_AS((void)decapsulate(kp, ct), Error);
    CHECK(decapsulate(kp, ct, kAllowClassicalOnly) == ss_sender);
}

TEST_CASE("shared secrets compare in constant time semantics") {
    std::array<std::uint8_t, 32> a{};
    std::array<std::uint8_t, 32> b{};
    b[31] = 1;
    CHECK(SharedSecret(a) == SharedSecret(a));
    CHECK(SharedSecret(a) != SharedSecret(b));
}

TEST_CASE("concurrent encapsulate/decapsulate on a shared keypair") {
    HybridKeyPair kp = generate_keypair();
    std::vector<std::thread> threads;
    std::atomic<int> failures{0};
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 50; ++i) {
                auto [ct, ss] = encapsulate(kp.public_key());
                if (!(decapsulate(kp, ct) == ss)) {
                    failures.fetch_add(1);
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    CHECK(failures.load() == 0);
}
