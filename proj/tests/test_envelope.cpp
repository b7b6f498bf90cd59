// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "hybridseal/envelope.hpp"
#include "hybridseal/keyformat.hpp"
#include "test_support.hpp"

using namespace hybridseal;
using testsupport::golden_dir;
using testsupport::read_file;

TEST_CASE("seal/open roundtrip across payload sizes") {
    HybridKeyPair kp = generate_keypair();
    for (std::size_t size : {std::size_t{0}, std::size_t{1}, std::size_t{1024},
                             std::size_t{1024 * 1024}}) {
        const Bytes payload = random_bytes(size);
        Envelope env = seal(kp.public_key(), payload, {});
        CHECK(env.alg == "X25519+ML-KEM-768+AES-256-GCM");
        CHECK(env.nonce.size() == 12);
        CHECK(env.ct.size() == payload.size() + 16);
        CHECK(open(kp, env) == payload);
    }
}

TEST_CASE("aad is authenticated") {
    HybridKeyPair kp = generate_keypair();
    const Bytes payload = random_bytes(256);
    const Bytes aad = from_hex("636f6e74657874");
    Envelope env = seal(kp.public_key(), payload, aad);
    CHECK(open(kp, env) == payload);

    Envelope wrong_aad = env;
    wrong_aad.aad.push_back(0x00);
    CHECK_THROWS_AS((void)open(kp, wrong_aad), Error);
    try {
        (void)open(kp, wrong_aad);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::authentication_failure);
    }
}

TEST_CASE("a flipped ciphertext bit fails authentication") {
    HybridKeyPair kp = generate_keypair();
    Envelope env = seal(kp.public_key(), random_bytes(512), {});
    env.ct[100] ^= 0x01;
    CHECK_THROWS_AS((void)open(kp, env), Error);
    try {
        (void)open(kp, env);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::authentication_failure);
    }
}

TEST_CASE("opening with the wrong keypair fails at the AEAD layer") {
    HybridKeyPair alice = generate_keypair();
    HybridKeyPair mallory = generate_keypair();
    Envelope env = seal(alice.public_key(), random_bytes(64), {});
    try {
        (void)open(mallory, env);
        FAIL("expected authentication_failure");
    } catch (const Error& e) {
        // Implicit rejection upstream: indistinguishable from tampering.
        CHECK(e.kind() == ErrorKind::authentication_failure);
    }
}

TEST_CASE("envelope encode/decode roundtrip identity") {
    HybridKeyPair kp = generate_keypair();
    Envelope env = seal(kp.public_key(), random_bytes(100), from_hex("aabb"));
    const Bytes wire = encode_envelope(env);
    Envelope back = decode_envelope(wire);
    CHECK(back.version == env.version);
    CHECK(back.alg == env.alg);
    CHECK(back.kem_ct == env.kem_ct);
    CHECK(back.nonce == env.nonce);
    CHECK(back.aad == env.aad);
    CHECK(back.ct == env.ct);
    CHECK(encode_envelope(back) == wire);
    CHECK(open(kp, back) == open(kp, env));
}

TEST_CASE("truncated or garbled envelope bytes raise malformed_encoding") {
    HybridKeyPair kp = generate_keypair();
    Envelope env = seal(kp.public_key(), random_bytes(64), {});
    Bytes wire = encode_envelope(env);

    Bytes truncated(wire.begin(), wire.begin() + static_cast<std::ptrdiff_t>(wire.size() / 2));
    CHECK_THROWS_AS((void)decode_envelope(truncated), Error);
    try {
        (void)decode_envelope(truncated);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::malformed_encoding);
    }

    Bytes trailing = wire;
    trailing.push_back(0);
    CHECK_THROWS_AS((void)decode_envelope(trailing), Error);
}

TEST_CASE("envelope version gate rejects v=2") {
    HybridKeyPair kp = generate_keypair();
    Envelope env = seal(kp.public_key(), random_bytes(16), {});
    env.version = 2;
    const Bytes wire = encode_envelope(env);
    try {
        (void)decode_envelope(wire);
        FAIL("expected unsupported_version");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_version);
    }
}

TEST_CASE("algorithm mismatch between envelope and keypair is rejected") {
    HybridKeyPair kp = generate_keypair();
    HybridKeyPair classical = classical_only_keypair(kAllowClassicalOnly);
    Envelope env = seal(kp.public_key(), random_bytes(16), {});
    CHECK_THROWS_AS((void)open(classical, env, kAllowClassicalOnly), Error);
}

TEST_CASE("classical-only envelopes carry the downgrade policy end to end") {
    HybridKeyPair kp = classical_only_keypair(kAllowClassicalOnly);
    const Bytes payload = random_bytes(64);
    CHECK_THROWS_AS((void)seal(kp.public_key(), payload, {}), Error);

    Envelope env = seal(kp.public_key(), payload, {}, kAllowClassicalOnly);
    CHECK(env.alg == "X25519-only+AES-256-GCM");
    CHECK_THROWS_AS((void)open(kp, env), Error);
    CHECK(open(kp, env, kAllowClassicalOnly) == payload);
}

TEST_CASE("nonces are unique across 10000 seals") {
    HybridKeyPair kp = generate_keypair();
    const HybridPublicKey pub = kp.public_key();
    const Bytes payload = random_bytes(16);
    std::set<Bytes> nonces;
    for (int i = 0; i < 10000; ++i) {
        Envelope env = seal(pub, payload, {});
        REQUIRE(nonces.insert(env.nonce).second);
    }
}

TEST_CASE("fuzz: decoding random envelope bytes yields typed errors, never crashes") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 2000; ++i) {
        const Bytes junk = testsupport::seeded_bytes(rng, rng() % 128);
        try {
            (void)decode_envelope(junk);
        } catch (const Error&) {
            // typed error: expected
        }
    }
}

TEST_CASE("golden envelope opens with the golden keypair byte-for-byte") {
    const Bytes env_bytes = read_file(golden_dir() + "/envelope.env");
    Envelope env = decode_envelope(env_bytes);
    CHECK(encode_envelope(env) == env_bytes);
    CHECK(env.aad == read_file(golden_dir() + "/envelope_aad.bin"));

    HybridKeyPair kp = decode_keypair(read_file(golden_dir() + "/kem_keypair.chk"));
    CHECK(open(kp, env) == read_file(golden_dir() + "/envelope_plaintext.bin"));
}
