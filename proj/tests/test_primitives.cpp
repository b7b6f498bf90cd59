// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <set>
#include <thread>

#include "hybridseal/aead.hpp"
#include "hybridseal/backend.hpp"
#include "hybridseal/kdf.hpp"
#include "test_support.hpp"

using namespace hybridseal;
using testsupport::read_file;

namespace {

Bytes hx(std::string_view s) { return from_hex(s); }

}  // namespace

TEST_CASE("hkdf matches the RFC 5869 SHA-256 vectors") {
    // Test Case 1
    {
        KdfSpec spec;
        spec.output_len = 42;
        spec.salt = hx("000102030405060708090a0b0c");
        spec.info = hx("f0f1f2f3f4f5f6f7f8f9");
        const Bytes okm = hkdf_sha256(Bytes(22, 0x0b), spec);
        CHECK(to_hex(okm) ==
              "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf"
              "34007208d5b887185865");
    }
    // Test Case 2: longer inputs
    {
        Bytes ikm(80), salt(80), info(80);
        for (int i = 0; i < 80; ++i) {
            ikm[i] = static_cast<std::uint8_t>(i);
            salt[i] = static_cast<std::uint8_t>(0x60 + i);
            info[i] = static_cast<std::uint8_t>(0xb0 + i);
        }
        KdfSpec spec{82, salt, info};
        CHECK(to_hex(hkdf_sha256(ikm, spec)) ==
              "b11e398dc80327a1c8e7f78c596a49344f012eda2d4efad8a050cc4c19afa97c"
              "59045a99cac7827271cb41c65e590e09da3275600c2f09b8367793a9aca3db71"
              "cc30c58179ec3e87c14c01d5c1f3434f1d87");
    }
    // Test Case 3: zero-length salt and info
    {
        KdfSpec spec{42, {}, {}};
        CHECK(to_hex(hkdf_sha256(Bytes(22, 0x0b), spec)) ==
              "8da4e775a563c18f715f802a063c5a31b8a11f5c5ee1879ec3454e5f3c738d2d"
              "9d201395faa4b61a96c8");
    }
}

TEST_CASE("hkdf agrees with the independent RFC oracle on random inputs") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const Bytes ikm = testsupport::seeded_bytes(rng, 1 + rng() % 64);
        const Bytes salt = testsupport::seeded_bytes(rng, rng() % 32);
        const Bytes info = testsupport::seeded_bytes(rng, rng() % 48);
        const std::size_t len = 16 + rng() % 64;
        CHECK(hkdf_sha256(ikm, {len, salt, info}) ==
              testsupport::oracle_hkdf_sha256(ikm, salt, info, len));
    }
}

TEST_CASE("hkdf is deterministic and validates its parameters") {
    KdfSpec spec{32, {}, {}};
    const Bytes zeros(32, 0);
    CHECK(hkdf_sha256(zeros, spec) == hkdf_sha256(zeros, spec));

    CHECK_THROWS_AS(hkdf_sha256(Bytes{}, spec), Error);
    CHECK_THROWS_AS(hkdf_sha256(zeros, {0x10000, {}, {}}), Error);
    CHECK_THROWS_AS(hkdf_sha256(zeros, {8, {}, {}}), Error);
    try {
        hkdf_sha256(zeros, {0x10000, {}, {}});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_parameter);
    }
}

TEST_CASE("aead seal/open roundtrip and integrity") {
    const Bytes key = random_bytes(kAeadKeyLen);
    const Bytes nonce = random_bytes(kAeadNonceLen);
    const Bytes aad = hx("0011223344");
    const Bytes pt = random_bytes(333);

    Bytes ct = aead_seal(key, nonce, aad, pt);
    CHECK(ct.size() == pt.size() + kAeadTagLen);
    CHECK(aead_open(key, nonce, aad, ct) == pt);

    Bytes tampered = ct;
    tampered[7] ^= 0x01;
    CHECK_THROWS_AS(aead_open(key, nonce, aad, tampered), Error);
    try {
        aead_open(key, nonce, aad, tampered);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::authentication_failure);
    }

    CHECK_THROWS_AS(aead_seal(Bytes(16, 0), nonce, aad, pt), Error);
    CHECK_THROWS_AS(aead_seal(key, Bytes(16, 0), aad, pt), Error);
}

TEST_CASE("aead reproduces published AES-256-GCM known-answer vectors") {
    // GCM spec test case 16 (256-bit key, AAD present).
    {
        const Bytes key = hx(
            "feffe9928665731c6d6a8f9467308308feffe9928665731c6d6a8f9467308308");
        const Bytes iv = hx("cafebabefacedbaddecaf888");
        const Bytes pt = hx(
            "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a72"
            "1c3c0c95956809532fcf0e2449a6b525b16aedf5aa0de657ba637b39");
        const Bytes aad = hx("feedfacedeadbeeffeedfacedeadbeefabaddad2");
        const Bytes expect_ct = hx(
            "522dc1f099567d07f47f37a32a84427d643a8cdcbfe5c0c97598a2bd2555d1aa"
            "8cb08e48590dbb3da7b08b1056828838c5f61e6393ba7a0abcc9f662");
        const Bytes expect_tag = hx("76fc6ece0f4e1768cddf8853bb2d551b");

        Bytes sealed = aead_seal(key, iv, aad, pt);
        Bytes expected = expect_ct;
        expected.insert(expected.end(), expect_tag.begin(), expect_tag.end());
        CHECK(sealed == expected);
        CHECK(aead_open(key, iv, aad, sealed) == pt);
    }
    // GCM spec test case 13: zero key, empty plaintext, tag only.
    {
        const Bytes key(32, 0);
        const Bytes iv(12, 0);
        Bytes sealed = aead_seal(key, iv, {}, {});
        CHECK(to_hex(sealed) == "530f8afbc74536b9a963b4f1c4cb738b");
    }
}

TEST_CASE("backend registry resolves hybrid suites and rejects unknown ids") {
    const KemSuite& suite = kem_suite("X25519+ML-KEM-768");
    CHECK(suite.id.kind == AlgKind::kem);
    CHECK(suite.id.security_level == 3);
    CHECK(suite.classical->public_key_len() == 32);
    CHECK(suite.pqc->public_key_len() == 1184);

    CHECK_THROWS_AS(kem_suite("ML-KEM-9999"), Error);
    try {
        kem_suite("ML-KEM-9999");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_algorithm);
        // The error names the registered ids.
        CHECK(std::string(e.what()).find("X25519+ML-KEM-768") != std::string::npos);
        CHECK(std::string(e.what()).find("Ed25519+ML-DSA-65") != std::string::npos);
    }

    // Two lookups return the same backend with the same metadata.
    const KemSuite& again = kem_suite("X25519+ML-KEM-768");
    CHECK(&again == &suite);
    CHECK(again.pqc->public_key_len() == suite.pqc->public_key_len());

    CHECK(algorithm(kClassicalOnlyKemAlg).kind == AlgKind::kem);
    CHECK(registered_algorithms().size() == 3);
}

TEST_CASE("byte-length metadata matches the FIPS 203/204 published sizes") {
    const KemBackend& mlkem = kem_backend("ML-KEM-768");
    CHECK(mlkem.public_key_len() == 1184);
    CHECK(mlkem.secret_key_len() == 2400);
    CHECK(mlkem.ciphertext_len() == 1088);
    CHECK(mlkem.shared_secret_len() == 32);

    const SigBackend& mldsa = sig_backend("ML-DSA-65");
    CHECK(mldsa.public_key_len() == 1952);
    CHECK(mldsa.secret_key_len() == 4032);
    CHECK(mldsa.signature_len() == 3309);

    const KemBackend& x = kem_backend("X25519");
    CHECK(x.public_key_len() == 32);
    CHECK(x.secret_key_len() == 32);
    CHECK(x.ciphertext_len() == 32);

    const SigBackend& ed = sig_backend("Ed25519");
    CHECK(ed.public_key_len() == 32);
    CHECK(ed.secret_key_len() == 64);
    CHECK(ed.signature_len() == 64);
}

TEST_CASE("every KEM backend roundtrips 1000 random keypairs exactly") {
    for (const char* name : {"X25519", "ML-KEM-768"}) {
        const KemBackend& kem = kem_backend(name);
        for (int i = 0; i < 1000; ++i) {
            KemKeyPair kp = kem.keygen();
            KemEncapsulation enc = kem.encapsulate(kp.public_key);
            CHECK(enc.shared_secret.size() == kem.shared_secret_len());
            Bytes recovered = kem.decapsulate(kp.secret_key.bytes(), enc.ciphertext);
            REQUIRE(recovered == enc.shared_secret);
        }
    }
}

TEST_CASE("KEM decapsulation never errors on well-sized garbage") {
    std::mt19937_64 rng(7);
    for (const char* name : {"X25519", "ML-KEM-768"}) {
        const KemBackend& kem = kem_backend(name);
        KemKeyPair kp = kem.keygen();
        KemEncapsulation enc = kem.encapsulate(kp.public_key);

        Bytes tampered = enc.ciphertext;
        tampered[rng() % tampered.size()] ^= static_cast<std::uint8_t>(1 << (rng() % 8));
        Bytes ss = kem.decapsulate(kp.secret_key.bytes(), tampered);
        CHECK(ss.size() == kem.shared_secret_len());

        Bytes garbage = testsupport::seeded_bytes(rng, kem.ciphertext_len());
        CHECK_NOTHROW((void)kem.decapsulate(kp.secret_key.bytes(), garbage));
    }
    // ML-KEM implicit rejection: a flipped ciphertext bit changes the secret.
    const KemBackend& mlkem = kem_backend("ML-KEM-768");
    KemKeyPair kp = mlkem.keygen();
    KemEncapsulation enc = mlkem.encapsulate(kp.public_key);
    Bytes flipped = enc.ciphertext;
    flipped[100] ^= 0x40;
    CHECK(mlkem.decapsulate(kp.secret_key.bytes(), flipped) != enc.shared_secret);
}

TEST_CASE("every signature backend verifies 1000 messages and rejects bit flips") {
    std::mt19937_64 rng(13);
    for (const char* name : {"Ed25519", "ML-DSA-65"}) {
        const SigBackend& backend = sig_backend(name);
        SigKeyPair kp = backend.keygen();
        for (int i = 0; i < 1000; ++i) {
            const Bytes msg = testsupport::seeded_bytes(rng, rng() % 256);
            Bytes sig = backend.sign(kp.secret_key.bytes(), msg);
            REQUIRE(backend.verify(kp.public_key, msg, sig));

            Bytes corrupted = sig;
            corrupted[rng() % corrupted.size()] ^= static_cast<std::uint8_t>(1 << (rng() % 8));
            REQUIRE_FALSE(backend.verify(kp.public_key, msg, corrupted));
        }
    }
}

TEST_CASE("verification never traps on wrong keys or malformed lengths") {
    const SigBackend& backend = sig_backend("ML-DSA-65");
    SigKeyPair kp = backend.keygen();
    const Bytes msg = random_bytes(32);
    Bytes sig = backend.sign(kp.secret_key.bytes(), msg);

    SigKeyPair other = backend.keygen();
    CHECK_FALSE(backend.verify(other.public_key, msg, sig));

    Bytes wrong_msg = msg;
    wrong_msg[0] ^= 0xff;
    CHECK_FALSE(backend.verify(kp.public_key, wrong_msg, sig));

    CHECK_FALSE(backend.verify(kp.public_key, msg, Bytes(10, 0)));
    CHECK_FALSE(backend.verify(Bytes(5, 0), msg, sig));
}

TEST_CASE("backends are safe to share across threads") {
    const KemBackend& mlkem = kem_backend("ML-KEM-768");
    const SigBackend& mldsa = sig_backend("ML-DSA-65");
    std::atomic<int> failures{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 25; ++i) {
                KemKeyPair kp = mlkem.keygen();
                KemEncapsulation enc = mlkem.encapsulate(kp.public_key);
                if (mlkem.decapsulate(kp.secret_key.bytes(), enc.ciphertext) !=
                    enc.shared_secret) {
                    failures.fetch_add(1);
                }
            }
            SigKeyPair kp = mldsa.keygen();
            const Bytes msg = random_bytes(32);
            for (int i = 0; i < 10; ++i) {
                if (!mldsa.verify(kp.public_key, msg, mldsa.sign(kp.secret_key.bytes(), msg))) {
                    failures.fetch_add(1);
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    CHECK(failures.load() == 0);
}

TEST_CASE("random_bytes draws fresh values") {
    std::set<Bytes> seen;
    for (int i = 0; i < 64; ++i) {
        CHECK(seen.insert(random_bytes(32)).second);
    }
    CHECK(random_bytes(0).empty());
}
