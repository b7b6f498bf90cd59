// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "hybridseal/backend.hpp"
#include "hybridseal/keyformat.hpp"
#include "test_support.hpp"

using namespace hybridseal;
using testsupport::golden_dir;
using testsupport::read_file;

namespace {

bool same_keypair(const HybridKeyPair& a, const HybridKeyPair& b) {
    return a.alg == b.alg && a.version == b.version && a.cls_pub == b.cls_pub &&
           a.pqc_pub == b.pqc_pub &&
           Bytes(a.cls_sec.bytes().begin(), a.cls_sec.bytes().end()) ==
               Bytes(b.cls_sec.bytes().begin(), b.cls_sec.bytes().end()) &&
           Bytes(a.pqc_sec.bytes().begin(), a.pqc_sec.bytes().end()) ==
               Bytes(b.pqc_sec.bytes().begin(), b.pqc_sec.bytes().end());
}

}  // namespace

TEST_CASE("roundtrip identity, 500 random instances per serializable type") {
    std::mt19937_64 rng(401);
    for (int i = 0; i < 500; ++i) {
        HybridKeyPair kp = generate_keypair();
        REQUIRE(same_keypair(decode_keypair(encode_cbor(kp)), kp));

        HybridPublicKey pub = kp.public_key();
        HybridPublicKey pub2 = decode_public_key(encode_cbor(pub));
        REQUIRE(pub2.alg == pub.alg);
        REQUIRE(pub2.cls_pub == pub.cls_pub);
        REQUIRE(pub2.pqc_pub == pub.pqc_pub);

        auto [ct, ss] = encapsulate(pub);
        HybridCiphertext ct2 = decode_ciphertext(encode_cbor(ct));
        REQUIRE(ct2.alg == ct.alg);
        REQUIRE(ct2.cls_eph_pub == ct.cls_eph_pub);
        REQUIRE(ct2.pqc_ct == ct.pqc_ct);
    }
    for (int i = 0; i < 500; ++i) {
        HybridSigKeyPair kp = generate_signing_keypair();
        HybridSigKeyPair kp2 = decode_sig_keypair(encode_cbor(kp));
        REQUIRE(kp2.alg == kp.alg);
        REQUIRE(kp2.cls_pub == kp.cls_pub);
        REQUIRE(kp2.pqc_pub == kp.pqc_pub);

        HybridSigPublicKey pub2 = decode_sig_public_key(encode_cbor(kp.public_key()));
        REQUIRE(pub2.pqc_pub == kp.pqc_pub);

        const Bytes msg = testsupport::seeded_bytes(rng, 32);
        HybridSignature sig = sign(kp, msg);
        HybridSignature sig2 = decode_signature(encode_cbor(sig));
        REQUIRE(sig2.cls_sig == sig.cls_sig);
        REQUIRE(sig2.pqc_sig == sig.pqc_sig);
        REQUIRE(verify(kp2.public_key(), msg, sig2));
    }
}

TEST_CASE("encoding is canonical: equal objects produce identical bytes") {
    HybridKeyPair kp = generate_keypair();
    CHECK(encode_cbor(kp) == encode_cbor(kp));
    CHECK(encode_cbor(kp.public_key()) == encode_cbor(kp.public_key()));

    // decode/encode is byte-identical.
    const Bytes once = encode_cbor(kp.public_key());
    CHECK(encode_cbor(decode_public_key(once)) == once);
}

TEST_CASE("golden public key encoding is pinned byte-for-byte") {
    const Bytes golden = read_file(golden_dir() + "/kem_public.chk");

    HybridPublicKey pub = decode_public_key(golden);
    CHECK(pub.alg == "X25519+ML-KEM-768");
    CHECK(pub.cls_pub.size() == 32);
    CHECK(pub.pqc_pub.size() == 1184);
    CHECK(encode_cbor(pub) == golden);

    // Canonical framing overhead over the 1216 payload bytes is fixed.
    CHECK(golden.size() == 1255);
    CHECK(golden.size() < 1300);
}

TEST_CASE("golden keypair, ciphertext and signature encodings are pinned") {
    const Bytes kp_bytes = read_file(golden_dir() + "/kem_keypair.chk");
    HybridKeyPair kp = decode_keypair(kp_bytes);
    CHECK(encode_cbor(kp) == kp_bytes);

    const Bytes ct_bytes = read_file(golden_dir() + "/kem_ciphertext.bin");
    HybridCiphertext ct = decode_ciphertext(ct_bytes);
    CHECK(encode_cbor(ct) == ct_bytes);

    // The pinned ciphertext decapsulates to the pinned shared secret.
    const Bytes ss = read_file(golden_dir() + "/shared_secret.bin");
    SharedSecret recovered = decapsulate(kp, ct);
    CHECK(Bytes(recovered.bytes().begin(), recovered.bytes().end()) == ss);

    const Bytes sig_bytes = read_file(golden_dir() + "/signature.bin");
    HybridSignature sig = decode_signature(sig_bytes);
    CHECK(encode_cbor(sig) == sig_bytes);

    const Bytes sig_pub = read_file(golden_dir() + "/sig_public.chk");
    const Bytes msg = read_file(golden_dir() + "/signed_message.bin");
    CHECK(verify(decode_sig_public_key(sig_pub), msg, sig));
}

TEST_CASE("version gate: v=2 is rejected naming the version") {
    const Bytes golden = read_file(golden_dir() + "/kem_public.chk");
    CborRecord record = decode_record(golden);
    record.version = 2;
    const Bytes v2 = encode_record(record);

    CHECK_THROWS_AS((void)decode_record(v2), Error);
    try {
        (void)decode_record(v2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_version);
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("schema violations raise malformed_encoding") {
    using ojson = nlohmann::ordered_json;

    // Missing "pqc".
    ojson missing;
    missing["v"] = 1u;
    missing["alg"] = "X25519+ML-KEM-768";
    missing["cls"] = ojson::binary(Bytes(32, 1));
    auto check_malformed = [](const std::vector<std::uint8_t>& cbor) {
        try {
            (void)decode_record(ByteSpan(cbor.data(), cbor.size()));
            FAIL("expected malformed_encoding");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::malformed_encoding);
        }
    };
    check_malformed(ojson::to_cbor(missing));

    // Wrong CBOR type for "cls".
    ojson wrong_type = missing;
    wrong_type["cls"] = "text not bytes";
    wrong_type["pqc"] = ojson::binary(Bytes(1184, 2));
    check_malformed(ojson::to_cbor(wrong_type));

    // Unknown extra field.
    ojson extra;
    extra["v"] = 1u;
    extra["alg"] = "X25519+ML-KEM-768";
    extra["cls"] = ojson::binary(Bytes(32, 1));
    extra["pqc"] = ojson::binary(Bytes(1184, 2));
    extra["evil"] = 7;
    check_malformed(ojson::to_cbor(extra));

    // Trailing bytes.
    const Bytes golden = read_file(golden_dir() + "/kem_public.chk");
    Bytes trailing = golden;
    trailing.push_back(0x00);
    check_malformed(trailing);

    // Unknown algorithm is its own error kind.
    ojson unknown = extra;
    unknown.erase("evil");
    unknown["alg"] = "ML-KEM-9999";
    try {
        auto cbor = ojson::to_cbor(unknown);
        (void)decode_record(ByteSpan(cbor.data(), cbor.size()));
        FAIL("expected unsupported_algorithm");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_algorithm);
    }
}

TEST_CASE("params map is accepted and preserved through a record roundtrip") {
    using ojson = nlohmann::ordered_json;
    const Bytes golden = read_file(golden_dir() + "/kem_public.chk");
    CborRecord record = decode_record(golden);
    CHECK(record.params_cbor.empty());

    ojson params;
    params["rotation"] = 90u;
    record.params_cbor = ojson::to_cbor(params);
    const Bytes with_params = encode_record(record);

    CborRecord back = decode_record(with_params);
    CHECK(back.params_cbor == record.params_cbor);
    CHECK(encode_record(back) == with_params);

    // The typed decoder still accepts the record (params unused in v1).
    HybridPublicKey pub = decode_public_key(with_params);
    CHECK(pub.alg == "X25519+ML-KEM-768");
}

TEST_CASE("fuzz: decoding 10000 random byte strings yields typed errors, never crashes") {
    std::mt19937_64 rng(402);
    int decoded = 0;
    for (int i = 0; i < 10000; ++i) {
        const Bytes junk = testsupport::seeded_bytes(rng, rng() % 96);
        try {
            (void)decode_record(junk);
            ++decoded;  // astronomically unlikely
        } catch (const Error&) {
            // typed error: expected
        }
    }
    CHECK(decoded == 0);
}

TEST_CASE("secret bytes never appear in public encodings") {
    HybridKeyPair kp = generate_keypair();
    const Bytes pub_cbor = encode_cbor(kp.public_key());
    auto [ct_obj, ss] = encapsulate(kp.public_key());
    const Bytes ct_cbor = encode_cbor(ct_obj);
    const std::string pem = pem_encode(PemLabel::hybrid_public_key, pub_cbor);
    const ByteSpan pem_bytes(reinterpret_cast<const std::uint8_t*>(pem.data()), pem.size());

    auto scan = [&](ByteSpan secret) {
        for (std::size_t off = 0; off + 16 <= secret.size(); off += 8) {
            const ByteSpan window = secret.subspan(off, 16);
            CHECK_FALSE(testsupport::contains_window(pub_cbor, window));
            CHECK_FALSE(testsupport::contains_window(ct_cbor, window));
            CHECK_FALSE(testsupport::contains_window(pem_bytes, window));
        }
    };
    scan(kp.cls_sec.bytes());
    // The FIPS 203 secret key embeds the public key (sk = s || ek || H(ek) || z),
    // so scan only the genuinely secret subranges: the s-vector encoding and
    // the implicit-rejection seed z.
    const ByteSpan pqc_sec = kp.pqc_sec.bytes();
    scan(pqc_sec.subspan(0, 1152));
    scan(pqc_sec.subspan(pqc_sec.size() - 32));
}

TEST_CASE("pem armor roundtrips and rejects unknown labels") {
    const Bytes golden = read_file(golden_dir() + "/kem_public.chk");
    const std::string pem = pem_encode(PemLabel::hybrid_public_key, golden);
    CHECK(pem.rfind("-----BEGIN HYBRID PUBLIC KEY-----\n", 0) == 0);

    auto [label, decoded] = pem_decode(pem);
    CHECK(label == PemLabel::hybrid_public_key);
    CHECK(decoded == golden);

    const Bytes pem_file = read_file(golden_dir() + "/kem_public.pem");
    const std::string pem_text(pem_file.begin(), pem_file.end());
    CHECK(pem_decode(pem_text).second == golden);

    std::string forged = pem;
    const std::string from = "HYBRID PUBLIC KEY";
    for (std::size_t pos = forged.find(from); pos != std::string::npos;
         pos = forged.find(from, pos)) {
        forged.replace(pos, from.size(), "TOTALLY VALID KEY");
    }
    CHECK_THROWS_AS((void)pem_decode(forged), Error);

    CHECK_THROWS_AS((void)pem_decode("no pem here"), Error);
}

TEST_CASE("upgrade_classical_kem reuses the classical half verbatim") {
    const KemBackend& x25519 = kem_backend("X25519");
    KemKeyPair classical = x25519.keygen();

    HybridKeyPair upgraded = upgrade_classical_kem(classical.secret_key.bytes());
    CHECK(upgraded.alg == "X25519+ML-KEM-768");
    CHECK(upgraded.cls_pub == classical.public_key);
    CHECK(upgraded.version == 1);

    auto [ct, ss_sender] = encapsulate(upgraded.public_key());
    CHECK(decapsulate(upgraded, ct) == ss_sender);

    // Serializes as a v1 hybrid record.
    CborRecord record = decode_record(encode_cbor(upgraded));
    CHECK(record.version == 1);
    CHECK(record.alg == "X25519+ML-KEM-768");

    CHECK_THROWS_AS((void)upgrade_classical_kem(random_bytes(31)), Error);
    try {
        (void)upgrade_classical_kem(random_bytes(31));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::malformed_key);
    }
}

TEST_CASE("upgrade_classical_sig reuses the Ed25519 half verbatim") {
    const SigBackend& ed = sig_backend("Ed25519");
    SigKeyPair classical = ed.keygen();

    HybridSigKeyPair upgraded = upgrade_classical_sig(classical.secret_key.bytes());
    CHECK(upgraded.cls_pub == classical.public_key);

    const Bytes msg = random_bytes(32);
    CHECK(verify(upgraded.public_key(), msg, sign(upgraded, msg)));

    CHECK_THROWS_AS((void)upgrade_classical_sig(random_bytes(63)), Error);
}
