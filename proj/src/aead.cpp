// SPDX-License-Identifier: Apache-2.0
#include "hybridseal/aead.hpp"

#include <openssl/evp.h>

#include <memory>

namespace hybridseal {

namespace {

struct CipherCtxFree {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

void check_key_nonce(ByteSpan key, ByteSpan nonce) {
    if (key.size() != kAeadKeyLen) {
        raise(ErrorKind::invalid_parameter, "AEAD key must be 32 bytes");
    }
    if (nonce.size() != kAeadNonceLen) {
        raise(ErrorKind::invalid_parameter, "AEAD nonce must be 12 bytes");
    }
}

}  // namespace

Bytes aead_seal(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan plaintext) {
    check_key_nonce(key, nonce);
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                                   nonce.data()) != 1) {
        throw std::runtime_error("AES-256-GCM init failed");
    }
    int outl = 0;
    if (!aad.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &outl, aad.data(), static_cast<int>(aad.size())) !=
            1) {
        throw std::runtime_error("AES-256-GCM aad failed");
    }
    Bytes out(plaintext.size() + kAeadTagLen);
    int ct_len = 0;
    if (!plaintext.empty()) {
        if (EVP_EncryptUpdate(ctx.get(), out.data(), &outl, plaintext.data(),
                              static_cast<int>(plaintext.size())) != 1) {
            throw std::runtime_error("AES-256-GCM encrypt failed");
        }
        ct_len = outl;
    }
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + ct_len, &outl) != 1) {
        throw std::runtime_error("AES-256-GCM finalize failed");
    }
    ct_len += outl;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagLen,
                            out.data() + ct_len) != 1) {
        throw std::runtime_error("AES-256-GCM tag extraction failed");
    }
    out.resize(static_cast<std::size_t>(ct_len) + kAeadTagLen);
    return out;
}

Bytes aead_open(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan ciphertext) {
    check_key_nonce(key, nonce);
    if (ciphertext.size() < kAeadTagLen) {
        raise(ErrorKind::authentication_failure, "ciphertext shorter than the tag");
    }
    const std::size_t ct_len = ciphertext.size() - kAeadTagLen;
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                                   nonce.data()) != 1) {
        throw std::runtime_error("AES-256-GCM init failed");
    }
    int outl = 0;
    if (!aad.empty() &&
        EVP_DecryptUpdate(ctx.get(), nullptr, &outl, aad.data(), static_cast<int>(aad.size())) !=
            1) {
        throw std::runtime_error("AES-256-GCM aad failed");
    }
    Bytes out(ct_len);
    int pt_len = 0;
    if (ct_len > 0) {
        if (EVP_DecryptUpdate(ctx.get(), out.data(), &outl, ciphertext.data(),
                              static_cast<int>(ct_len)) != 1) {
            raise(ErrorKind::authentication_failure, "AEAD decryption failed");
        }
        pt_len = outl;
    }
    Bytes tag(ciphertext.begin() + static_cast<std::ptrdiff_t>(ct_len), ciphertext.end());
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagLen, tag.data()) != 1) {
        throw std::runtime_error("AES-256-GCM tag set failed");
    }
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + pt_len, &outl) != 1) {
        raise(ErrorKind::authentication_failure, "AEAD tag verification failed");
    }
    out.resize(static_cast<std::size_t>(pt_len) + static_cast<std::size_t>(outl));
    return out;
}

}  // namespace hybridseal
