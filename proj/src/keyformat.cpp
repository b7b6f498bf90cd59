// SPDX-License-Identifier: Apache-2.0
//
// Versioned CBOR serialization (one record shape for keys, ciphertexts and
// signatures), PEM armor, and the classical-to-hybrid upgrade path.

#include "hybridseal/keyformat.hpp"

#include <sodium.h>

#include <cstring>

#include <json.hpp>

#include "hybridseal/backend.hpp"

namespace hybridseal {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse_cbor(ByteSpan data) {
    try {
        return ojson::from_cbor(data.begin(), data.end());
    } catch (const ojson::exception& e) {
        raise(ErrorKind::malformed_encoding, e.what());
    }
}

Bytes concat(ByteSpan a, ByteSpan b) {
    Bytes out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

struct ComponentLens {
    std::size_t cls;
    std::size_t pqc;
};

// Expected "cls"/"pqc" byte lengths per record flavor.
ComponentLens public_key_lens(const KemSuite& s) {
    return {s.classical->public_key_len(), s.pqc ? s.pqc->public_key_len() : 0};
}
ComponentLens keypair_lens(const KemSuite& s) {
    return {s.classical->secret_key_len() + s.classical->public_key_len(),
            s.pqc ? s.pqc->secret_key_len() + s.pqc->public_key_len() : 0};
}
ComponentLens ciphertext_lens(const KemSuite& s) {
    return {s.classical->ciphertext_len(), s.pqc ? s.pqc->ciphertext_len() : 0};
}
ComponentLens sig_public_key_lens(const SigSuite& s) {
    return {s.classical->public_key_len(), s.pqc->public_key_len()};
}
ComponentLens sig_keypair_lens(const SigSuite& s) {
    return {s.classical->secret_key_len() + s.classical->public_key_len(),
            s.pqc->secret_key_len() + s.pqc->public_key_len()};
}
ComponentLens signature_lens(const SigSuite& s) {
    return {s.classical->signature_len(), s.pqc->signature_len()};
}

void check_lens(const CborRecord& r, ComponentLens expect, const char* what) {
    if (r.cls.size() != expect.cls || r.pqc.size() != expect.pqc) {
        raise(ErrorKind::malformed_encoding,
              std::string("component lengths do not match a ") + what + " for " + r.alg);
    }
}

const AlgorithmId& expect_kind(const CborRecord& r, AlgKind kind, const char* what) {
    const AlgorithmId& id = algorithm(r.alg);
    if (id.kind != kind) {
        raise(ErrorKind::malformed_encoding,
              "\"" + r.alg + "\" is not a valid algorithm for a " + what);
    }
    return id;
}

}  // namespace

Bytes encode_record(const CborRecord& record) {
    ojson j;
    j["v"] = record.version;
    j["alg"] = record.alg;
    j["cls"] = ojson::binary(record.cls);
    j["pqc"] = ojson::binary(record.pqc);
    if (!record.params_cbor.empty()) {
        ojson params = parse_cbor(record.params_cbor);
        if (!params.is_object()) {
            raise(ErrorKind::invalid_parameter, "params must encode a CBOR map");
        }
        j["params"] = std::move(params);
    }
    return ojson::to_cbor(j);
}

CborRecord decode_record(ByteSpan data) {
    ojson j = parse_cbor(data);
    if (!j.is_object()) {
        raise(ErrorKind::malformed_encoding, "top-level CBOR item is not a map");
    }

    // Version gate before anything else.
    auto v_it = j.find("v");
    if (v_it == j.end()) {
        raise(ErrorKind::malformed_encoding, "missing \"v\" field");
    }
    if (!v_it->is_number_unsigned()) {
        raise(ErrorKind::malformed_encoding, "\"v\" is not an unsigned integer");
    }
    const auto version = v_it->get<std::uint64_t>();
    if (version != kFormatVersion) {
        raise(ErrorKind::unsupported_version,
              "format version " + std::to_string(version) + " is not supported (expected " +
                  std::to_string(kFormatVersion) + ")");
    }

    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "v" && key != "alg" && key != "cls" && key != "pqc" && key != "params") {
            raise(ErrorKind::malformed_encoding, "unexpected field \"" + key + "\"");
        }
    }

    auto alg_it = j.find("alg");
    if (alg_it == j.end() || !alg_it->is_string()) {
        raise(ErrorKind::malformed_encoding, "missing or non-text \"alg\" field");
    }
    CborRecord record;
    record.version = static_cast<std::uint32_t>(version);
    record.alg = alg_it->get<std::string>();
    (void)algorithm(record.alg);  // unsupported_algorithm for unknown names

    auto cls_it = j.find("cls");
    auto pqc_it = j.find("pqc");
    if (cls_it == j.end() || !cls_it->is_binary() || pqc_it == j.end() || !pqc_it->is_binary()) {
        raise(ErrorKind::malformed_encoding, "missing or non-bstr \"cls\"/\"pqc\" field");
    }
    record.cls = cls_it->get_binary();
    record.pqc = pqc_it->get_binary();

    if (auto params_it = j.find("params"); params_it != j.end()) {
        if (!params_it->is_object()) {
            raise(ErrorKind::malformed_encoding, "\"params\" is not a map");
        }
        record.params_cbor = ojson::to_cbor(*params_it);
    }
    return record;
}

Bytes encode_cbor(const HybridPublicKey& key) {
    check_lens({key.version, key.alg, key.cls_pub, key.pqc_pub, {}},
               public_key_lens(kem_suite(key.alg)), "public key");
    return encode_record({key.version, key.alg, key.cls_pub, key.pqc_pub, {}});
}

Bytes encode_cbor(const HybridKeyPair& key) {
    CborRecord r{key.version, key.alg, concat(key.cls_sec.bytes(), key.cls_pub),
                 concat(key.pqc_sec.bytes(), key.pqc_pub), {}};
    check_lens(r, keypair_lens(kem_suite(key.alg)), "private key");
    Bytes out = encode_record(r);
    secure_wipe(r.cls.data(), r.cls.size());
    secure_wipe(r.pqc.data(), r.pqc.size());
    return out;
}

Bytes encode_cbor(const HybridCiphertext& ct) {
    CborRecord r{ct.version, ct.alg, ct.cls_eph_pub, ct.pqc_ct, {}};
    check_lens(r, ciphertext_lens(kem_suite(ct.alg)), "ciphertext");
    return encode_record(r);
}

Bytes encode_cbor(const HybridSigPublicKey& key) {
    CborRecord r{key.version, key.alg, key.cls_pub, key.pqc_pub, {}};
    check_lens(r, sig_public_key_lens(sig_suite(key.alg)), "signing public key");
    return encode_record(r);
}

Bytes encode_cbor(const HybridSigKeyPair& key) {
    CborRecord r{key.version, key.alg, concat(key.cls_sec.bytes(), key.cls_pub),
                 concat(key.pqc_sec.bytes(), key.pqc_pub), {}};
    check_lens(r, sig_keypair_lens(sig_suite(key.alg)), "signing private key");
    Bytes out = encode_record(r);
    secure_wipe(r.cls.data(), r.cls.size());
    secure_wipe(r.pqc.data(), r.pqc.size());
    return out;
}

Bytes encode_cbor(const HybridSignature& sig) {
    CborRecord r{sig.version, sig.alg, sig.cls_sig, sig.pqc_sig, {}};
    check_lens(r, signature_lens(sig_suite(sig.alg)), "signature");
    return encode_record(r);
}

HybridPublicKey decode_public_key(ByteSpan data) {
    CborRecord r = decode_record(data);
    expect_kind(r, AlgKind::kem, "public key");
    check_lens(r, public_key_lens(kem_suite(r.alg)), "public key");
    return {r.alg, std::move(r.cls), std::move(r.pqc), r.version};
}

HybridKeyPair decode_keypair(ByteSpan data) {
    CborRecord r = decode_record(data);
    expect_kind(r, AlgKind::kem, "private key");
    const KemSuite& suite = kem_suite(r.alg);
    check_lens(r, keypair_lens(suite), "private key");

    HybridKeyPair kp;
    kp.alg = r.alg;
    kp.version = r.version;
    const std::size_t cls_sk = suite.classical->secret_key_len();
    kp.cls_sec = SecretBytes(Bytes(r.cls.begin(), r.cls.begin() + cls_sk));
    kp.cls_pub = Bytes(r.cls.begin() + cls_sk, r.cls.end());
    if (suite.pqc != nullptr) {
        const std::size_t pqc_sk = suite.pqc->secret_key_len();
        kp.pqc_sec = SecretBytes(Bytes(r.pqc.begin(), r.pqc.begin() + pqc_sk));
        kp.pqc_pub = Bytes(r.pqc.begin() + pqc_sk, r.pqc.end());
    }
    secure_wipe(r.cls.data(), r.cls.size());
    secure_wipe(r.pqc.data(), r.pqc.size());
    return kp;
}

HybridCiphertext decode_ciphertext(ByteSpan data) {
    CborRecord r = decode_record(data);
    expect_kind(r, AlgKind::kem, "ciphertext");
    check_lens(r, ciphertext_lens(kem_suite(r.alg)), "ciphertext");
    return {r.alg, std::move(r.cls), std::move(r.pqc), r.version};
}

HybridSigPublicKey decode_sig_public_key(ByteSpan data) {
    CborRecord r = decode_record(data);
    expect_kind(r, AlgKind::sig, "signing public key");
    check_lens(r, sig_public_key_lens(sig_suite(r.alg)), "signing public key");
    return {r.alg, std::move(r.cls), std::move(r.pqc), r.version};
}

HybridSigKeyPair decode_sig_keypair(ByteSpan data) {
    CborRecord r = decode_record(data);
    expect_kind(r, AlgKind::sig, "signing private key");
    const SigSuite& suite = sig_suite(r.alg);
    check_lens(r, sig_keypair_lens(suite), "signing private key");

    HybridSigKeyPair kp;
    kp.alg = r.alg;
    kp.version = r.version;
    const std::size_t cls_sk = suite.classical->secret_key_len();
    kp.cls_sec = SecretBytes(Bytes(r.cls.begin(), r.cls.begin() + cls_sk));
    kp.cls_pub = Bytes(r.cls.begin() + cls_sk, r.cls.end());
    const std::size_t pqc_sk = suite.pqc->secret_key_len();
    kp.pqc_sec = SecretBytes(Bytes(r.pqc.begin(), r.pqc.begin() + pqc_sk));
    kp.pqc_pub = Bytes(r.pqc.begin() + pqc_sk, r.pqc.end());
    secure_wipe(r.cls.data(), r.cls.size());
    secure_wipe(r.pqc.data(), r.pqc.size());
    return kp;
}

HybridSignature decode_signature(ByteSpan data) {
    CborRecord r = decode_record(data);
    expect_kind(r, AlgKind::sig, "signature");
    check_lens(r, signature_lens(sig_suite(r.alg)), "signature");
    return {r.alg, std::move(r.cls), std::move(r.pqc), r.version};
}

namespace {

const char* pem_label_text(PemLabel label) {
    switch (label) {
        case PemLabel::hybrid_public_key: return "HYBRID PUBLIC KEY";
        case PemLabel::hybrid_private_key: return "HYBRID PRIVATE KEY";
    }
    return "";
}

}  // namespace

std::string pem_encode(PemLabel label, ByteSpan cbor) {
    ensure_crypto_init();
    // sodium_base64_encoded_len includes the terminating NUL.
    std::string b64(sodium_base64_encoded_len(cbor.size(), sodium_base64_VARIANT_ORIGINAL), 0);
    sodium_bin2base64(b64.data(), b64.size(), cbor.data(), cbor.size(),
                      sodium_base64_VARIANT_ORIGINAL);
    b64.resize(std::strlen(b64.c_str()));

    std::string out;
    out += "-----BEGIN ";
    out += pem_label_text(label);
    out += "-----\n";
    for (std::size_t i = 0; i < b64.size(); i += 64) {
        out += b64.substr(i, 64);
        out += '\n';
    }
    out += "-----END ";
    out += pem_label_text(label);
    out += "-----\n";
    return out;
}

std::pair<PemLabel, Bytes> pem_decode(std::string_view text) {
    ensure_crypto_init();
    const auto begin_pos = text.find("-----BEGIN ");
    if (begin_pos == std::string_view::npos) {
        raise(ErrorKind::malformed_encoding, "missing PEM BEGIN line");
    }
    const auto label_start = begin_pos + 11;
    const auto label_end = text.find("-----", label_start);
    if (label_end == std::string_view::npos) {
        raise(ErrorKind::malformed_encoding, "unterminated PEM BEGIN line");
    }
    const std::string label(text.substr(label_start, label_end - label_start));

    PemLabel parsed;
    if (label == "HYBRID PUBLIC KEY") {
        parsed = PemLabel::hybrid_public_key;
    } else if (label == "HYBRID PRIVATE KEY") {
        parsed = PemLabel::hybrid_private_key;
    } else {
        raise(ErrorKind::malformed_encoding, "unknown PEM label \"" + label + "\"");
    }

    const std::string end_marker = "-----END " + label + "-----";
    const auto body_start = label_end + 5;
    const auto end_pos = text.find(end_marker, body_start);
    if (end_pos == std::string_view::npos) {
        raise(ErrorKind::malformed_encoding, "missing PEM END line for \"" + label + "\"");
    }
    const std::string body(text.substr(body_start, end_pos - body_start));

    Bytes bin(body.size());
    std::size_t bin_len = 0;
    if (sodium_base642bin(bin.data(), bin.size(), body.data(), body.size(), " \t\r\n", &bin_len,
                          nullptr, sodium_base64_VARIANT_ORIGINAL) != 0) {
        raise(ErrorKind::malformed_encoding, "invalid base64 in PEM body");
    }
    bin.resize(bin_len);
    return {parsed, std::move(bin)};
}

HybridKeyPair upgrade_classical_kem(ByteSpan x25519_secret_key) {
    const KemSuite& suite = kem_suite(kDefaultKemAlg);
    if (x25519_secret_key.size() != suite.classical->secret_key_len()) {
        raise(ErrorKind::malformed_key,
              "expected a " + std::to_string(suite.classical->secret_key_len()) +
                  "-byte X25519 secret key, got " + std::to_string(x25519_secret_key.size()));
    }

    HybridKeyPair kp;
    kp.alg = std::string(kDefaultKemAlg);
    kp.cls_sec = SecretBytes(Bytes(x25519_secret_key.begin(), x25519_secret_key.end()));
    kp.cls_pub.resize(suite.classical->public_key_len());
    ensure_crypto_init();
    crypto_scalarmult_base(kp.cls_pub.data(), x25519_secret_key.data());

    KemKeyPair pqc = suite.pqc->keygen();
    kp.pqc_pub = std::move(pqc.public_key);
    kp.pqc_sec = std::move(pqc.secret_key);

    // Reused classical half and fresh PQC half both get the same pairwise
    // consistency check a fresh keypair would.
    KemEncapsulation probe = suite.classical->encapsulate(kp.cls_pub);
    Bytes recovered = suite.classical->decapsulate(kp.cls_sec.bytes(), probe.ciphertext);
    if (!constant_time_equal(recovered, probe.shared_secret)) {
        raise(ErrorKind::malformed_key, "X25519 key failed its consistency check");
    }
    return kp;
}

HybridSigKeyPair upgrade_classical_sig(ByteSpan ed25519_secret_key) {
    const SigSuite& suite = sig_suite(kDefaultSigAlg);
    if (ed25519_secret_key.size() != suite.classical->secret_key_len()) {
        raise(ErrorKind::malformed_key,
              "expected a " + std::to_string(suite.classical->secret_key_len()) +
                  "-byte Ed25519 secret key, got " + std::to_string(ed25519_secret_key.size()));
    }

    HybridSigKeyPair kp;
    kp.alg = std::string(kDefaultSigAlg);
    kp.cls_sec = SecretBytes(Bytes(ed25519_secret_key.begin(), ed25519_secret_key.end()));
    // libsodium Ed25519 secret keys embed the public key in the upper half.
    kp.cls_pub = Bytes(ed25519_secret_key.begin() + 32, ed25519_secret_key.end());

    const std::uint8_t probe[4] = {'u', 'p', 'g', 'r'};
    Bytes sig = suite.classical->sign(kp.cls_sec.bytes(), probe);
    if (!suite.classical->verify(kp.cls_pub, probe, sig)) {
        raise(ErrorKind::malformed_key, "Ed25519 key failed its consistency check");
    }

    SigKeyPair pqc = suite.pqc->keygen();
    kp.pqc_pub = std::move(pqc.public_key);
    kp.pqc_sec = std::move(pqc.secret_key);
    return kp;
}

}  // namespace hybridseal
