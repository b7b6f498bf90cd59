// SPDX-License-Identifier: Apache-2.0
#include "hybridseal/kdf.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <memory>

namespace hybridseal {

Bytes hkdf_sha256(ByteSpan ikm, const KdfSpec& spec) {
    if (ikm.empty()) {
        raise(ErrorKind::invalid_parameter, "HKDF ikm must be non-empty");
    }
    if (spec.output_len < kHkdfMinOutput || spec.output_len > kHkdfSha256MaxOutput) {
        raise(ErrorKind::invalid_parameter,
              "HKDF output length " + std::to_string(spec.output_len) + " outside [" +
                  std::to_string(kHkdfMinOutput) + ", " + std::to_string(kHkdfSha256MaxOutput) +
                  "]");
    }

    struct KdfFree {
        void operator()(EVP_KDF* p) const { EVP_KDF_free(p); }
    };
    struct CtxFree {
        void operator()(EVP_KDF_CTX* p) const { EVP_KDF_CTX_free(p); }
    };
    std::unique_ptr<EVP_KDF, KdfFree> kdf(EVP_KDF_fetch(nullptr, "HKDF", nullptr));
    if (!kdf) {
        throw std::runtime_error("OpenSSL HKDF unavailable");
    }
    std::unique_ptr<EVP_KDF_CTX, CtxFree> ctx(EVP_KDF_CTX_new(kdf.get()));
    if (!ctx) {
        throw std::runtime_error("EVP_KDF_CTX allocation failed");
    }

    char digest[] = "SHA256";
    OSSL_PARAM params[5];
    std::size_t p = 0;
    params[p++] = OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest, 0);
    params[p++] = OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY,
                                                    const_cast<std::uint8_t*>(ikm.data()),
                                                    ikm.size());
    if (!spec.salt.empty()) {
        params[p++] = OSSL_PARAM_construct_octet_string(
            OSSL_KDF_PARAM_SALT, const_cast<std::uint8_t*>(spec.salt.data()), spec.salt.size());
    }
    if (!spec.info.empty()) {
        params[p++] = OSSL_PARAM_construct_octet_string(
            OSSL_KDF_PARAM_INFO, const_cast<std::uint8_t*>(spec.info.data()), spec.info.size());
    }
    params[p] = OSSL_PARAM_construct_end();

    Bytes out(spec.output_len);
    if (EVP_KDF_derive(ctx.get(), out.data(), out.size(), params) != 1) {
        throw std::runtime_error("HKDF derivation failed");
    }
    return out;
}

}  // namespace hybridseal
