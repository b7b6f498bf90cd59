// SPDX-License-Identifier: Apache-2.0
#include "hybridseal/envelope.hpp"

#include <json.hpp>

#include "hybridseal/aead.hpp"
#include "hybridseal/keyformat.hpp"

namespace hybridseal {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kAeadSuffix = "+AES-256-GCM";

std::string envelope_alg(std::string_view kem_alg) {
    return std::string(kem_alg) + std::string(kAeadSuffix);
}

std::string kem_alg_of(const Envelope& env) {
    if (env.alg.size() <= kAeadSuffix.size() ||
        env.alg.compare(env.alg.size() - kAeadSuffix.size(), kAeadSuffix.size(), kAeadSuffix) !=
            0) {
        raise(ErrorKind::malformed_encoding,
              "envelope algorithm \"" + env.alg + "\" does not name an AES-256-GCM suite");
    }
    return env.alg.substr(0, env.alg.size() - kAeadSuffix.size());
}

}  // namespace

Envelope seal(const HybridPublicKey& recipient, ByteSpan plaintext, ByteSpan aad,
              DowngradePolicy policy) {
    auto [kem_ct, ss] = encapsulate(recipient, policy);

    Envelope env;
    env.alg = envelope_alg(recipient.alg);
    env.kem_ct = encode_cbor(kem_ct);
    env.nonce = random_bytes(kAeadNonceLen);
    env.aad.assign(aad.begin(), aad.end());
    env.ct = aead_seal(ss.bytes(), env.nonce, env.aad, plaintext);
    return env;
}

Bytes open(const HybridKeyPair& kp, const Envelope& env, DowngradePolicy policy) {
    const std::string kem_alg = kem_alg_of(env);
    if (kem_alg != kp.alg) {
        raise(ErrorKind::malformed_encoding,
              "envelope KEM algorithm \"" + kem_alg + "\" does not match keypair \"" + kp.alg +
                  "\"");
    }
    if (env.nonce.size() != kAeadNonceLen) {
        raise(ErrorKind::malformed_encoding, "envelope nonce must be 12 bytes");
    }
    HybridCiphertext kem_ct = decode_ciphertext(env.kem_ct);
    SharedSecret ss = decapsulate(kp, kem_ct, policy);
    return aead_open(ss.bytes(), env.nonce, env.aad, env.ct);
}

Bytes encode_envelope(const Envelope& env) {
    ojson j;
    j["v"] = env.version;
    j["alg"] = env.alg;
    j["kem_ct"] = ojson::binary(env.kem_ct);
    j["nonce"] = ojson::binary(env.nonce);
    j["aad"] = ojson::binary(env.aad);
    j["ct"] = ojson::binary(env.ct);
    return ojson::to_cbor(j);
}

Envelope decode_envelope(ByteSpan data) {
    ojson j;
    try {
        j = ojson::from_cbor(data.begin(), data.end());
    } catch (const ojson::exception& e) {
        raise(ErrorKind::malformed_encoding, e.what());
    }
    if (!j.is_object()) {
        raise(ErrorKind::malformed_encoding, "top-level CBOR item is not a map");
    }

    auto v_it = j.find("v");
    if (v_it == j.end() || !v_it->is_number_unsigned()) {
        raise(ErrorKind::malformed_encoding, "missing or non-uint \"v\" field");
    }
    const auto version = v_it->get<std::uint64_t>();
    if (version != kFormatVersion) {
        raise(ErrorKind::unsupported_version,
              "envelope version " + std::to_string(version) + " is not supported (expected " +
                  std::to_string(kFormatVersion) + ")");
    }

    static constexpr const char* kFields[] = {"v", "alg", "kem_ct", "nonce", "aad", "ct"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* f : kFields) {
            known = known || key == f;
        }
        if (!known) {
            raise(ErrorKind::malformed_encoding, "unexpected field \"" + key + "\"");
        }
    }

    Envelope env;
    env.version = static_cast<std::uint32_t>(version);
    auto alg_it = j.find("alg");
    if (alg_it == j.end() || !alg_it->is_string()) {
        raise(ErrorKind::malformed_encoding, "missing or non-text \"alg\" field");
    }
    env.alg = alg_it->get<std::string>();

    for (const char* f : {"kem_ct", "nonce", "aad", "ct"}) {
        auto it = j.find(f);
        if (it == j.end() || !it->is_binary()) {
            raise(ErrorKind::malformed_encoding,
                  std::string("missing or non-bstr \"") + f + "\" field");
        }
    }
    env.kem_ct = j["kem_ct"].get_binary();
    env.nonce = j["nonce"].get_binary();
    env.aad = j["aad"].get_binary();
    env.ct = j["ct"].get_binary();
    return env;
}

}  // namespace hybridseal
