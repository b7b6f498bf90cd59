// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers and independent reference oracles. The oracles here
// deliberately avoid the library's own code paths: HKDF is re-derived from
// RFC 5869 over libsodium's HMAC-SHA256, and the Welch/Cohen reference runs
// in extended precision with its own accumulation.
#pragma once

#include <sodium.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hybridseal/common.hpp"

namespace testsupport {

using hybridseal::Bytes;
using hybridseal::ByteSpan;

inline std::string golden_dir() {
    if (const char* dir = std::getenv("HS_GOLDEN_DIR")) {
        return dir;
    }
    for (const char* candidate : {"tests/golden", "../tests/golden", "../../tests/golden"}) {
        if (std::ifstream(std::string(candidate) + "/kem_public.chk").good()) {
            return candidate;
        }
    }
    return "tests/golden";
}

inline Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// RFC 5869 HKDF-SHA256, written directly from the RFC over libsodium HMAC.
inline Bytes oracle_hmac_sha256(ByteSpan key, ByteSpan data) {
    crypto_auth_hmacsha256_state state;
    crypto_auth_hmacsha256_init(&state, key.data(), key.size());
    crypto_auth_hmacsha256_update(&state, data.data(), data.size());
    Bytes mac(crypto_auth_hmacsha256_BYTES);
    crypto_auth_hmacsha256_final(&state, mac.data());
    return mac;
}

inline Bytes oracle_hkdf_sha256(ByteSpan ikm, ByteSpan salt, ByteSpan info, std::size_t len) {
    // Extract: PRK = HMAC(salt, IKM); an absent salt is a hash-length zero block.
    Bytes effective_salt(salt.begin(), salt.end());
    if (effective_salt.empty()) {
        effective_salt.assign(32, 0);
    }
    const Bytes prk = oracle_hmac_sha256(effective_salt, ikm);

    // Expand: T(i) = HMAC(PRK, T(i-1) || info || i).
    Bytes okm;
    Bytes block;
    std::uint8_t counter = 1;
    while (okm.size() < len) {
        Bytes input = block;
        input.insert(input.end(), info.begin(), info.end());
        input.push_back(counter++);
        block = oracle_hmac_sha256(prk, input);
        okm.insert(okm.end(), block.begin(), block.end());
    }
    okm.resize(len);
    return okm;
}

// The combiner transcript exactly as documented for the wire format.
inline Bytes combiner_info(std::string_view alg, ByteSpan cls_eph_pub, ByteSpan pqc_ct) {
    const std::string_view prefix = "hybridseal/v1/";
    Bytes info(prefix.begin(), prefix.end());
    info.insert(info.end(), alg.begin(), alg.end());
    info.push_back(0x00);
    info.insert(info.end(), cls_eph_pub.begin(), cls_eph_pub.end());
    info.insert(info.end(), pqc_ct.begin(), pqc_ct.end());
    return info;
}

struct WelchReference {
    double t;
    double nu;
    double d;
};

// Extended-precision Welch/Satterthwaite/Cohen reference.
inline WelchReference oracle_welch(const std::vector<double>& a, const std::vector<double>& b) {
    auto mean_of = [](const std::vector<double>& xs) {
        long double sum = 0.0L;
        for (double x : xs) sum += x;
        return sum / static_cast<long double>(xs.size());
    };
    auto var_of = [](const std::vector<double>& xs, long double mean) {
        long double ss = 0.0L;
        for (double x : xs) ss += (static_cast<long double>(x) - mean) * (x - mean);
        return ss / static_cast<long double>(xs.size() - 1);
    };
    const long double ma = mean_of(a), mb = mean_of(b);
    const long double va = var_of(a, ma), vb = var_of(b, mb);
    const long double na = static_cast<long double>(a.size());
    const long double nb = static_cast<long double>(b.size());

    const long double sa = va / na, sb = vb / nb;
    const long double t = (mb - ma) / sqrtl(sa + sb);
    const long double nu =
        (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0L) + sb * sb / (nb - 1.0L));
    const long double sp = sqrtl(((na - 1.0L) * va + (nb - 1.0L) * vb) / (na + nb - 2.0L));
    const long double d = (mb - ma) / sp;
    return {static_cast<double>(t), static_cast<double>(nu), static_cast<double>(d)};
}

// Deterministic pseudo-random bytes for fixed test tuples.
inline Bytes seeded_bytes(std::mt19937_64& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) {
        b = static_cast<std::uint8_t>(rng() & 0xff);
    }
    return out;
}

// True when `needle` occurs as a contiguous window anywhere in `haystack`.
inline bool contains_window(ByteSpan haystack, ByteSpan needle) {
    if (needle.empty() || haystack.size() < needle.size()) {
        return false;
    }
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) {
            return true;
        }
    }
    return false;
}

}  // namespace testsupport
