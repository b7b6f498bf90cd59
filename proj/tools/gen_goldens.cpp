// SPDX-License-Identifier: Apache-2.0
//
// Regenerates the serialization fixtures under tests/golden/. The fixtures
// pin the wire format: tests construct objects from these files and require
// byte-identical re-encodings, so regenerate only on a deliberate format
// change.

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hybridseal/envelope.hpp"
#include "hybridseal/kem_hybrid.hpp"
#include "hybridseal/keyformat.hpp"
#include "hybridseal/sign_hybrid.hpp"

using namespace hybridseal;

namespace {

void write_file(const std::filesystem::path& path, ByteSpan data) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw std::runtime_error("failed to write " + path.string());
    }
    std::printf("wrote %s (%zu bytes)\n", path.string().c_str(), data.size());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    write_file(path, ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "tests/golden";
    std::filesystem::create_directories(dir);

    HybridKeyPair kp = generate_keypair();
    auto [ct, ss] = encapsulate(kp.public_key());

    write_file(dir / "kem_keypair.chk", encode_cbor(kp));
    write_file(dir / "kem_public.chk", encode_cbor(kp.public_key()));
    write_file(dir / "kem_ciphertext.bin", encode_cbor(ct));
    write_file(dir / "shared_secret.bin", ss.bytes());
    write_file(dir / "kem_public.pem",
               pem_encode(PemLabel::hybrid_public_key, encode_cbor(kp.public_key())));
    write_file(dir / "kem_keypair.pem",
               pem_encode(PemLabel::hybrid_private_key, encode_cbor(kp)));

    HybridSigKeyPair skp = generate_signing_keypair();
    const Bytes message = from_hex("00112233445566778899aabbccddeeff");
    HybridSignature sig = sign(skp, message);

    write_file(dir / "sig_keypair.chk", encode_cbor(skp));
    write_file(dir / "sig_public.chk", encode_cbor(skp.public_key()));
    write_file(dir / "signature.bin", encode_cbor(sig));
    write_file(dir / "signed_message.bin", message);

    const Bytes payload = from_hex("5468652071756965747573206f66207468652068697665206d696e64");
    const Bytes aad = from_hex("6865616465722d7631");
    Envelope env = seal(kp.public_key(), payload, aad);
    write_file(dir / "envelope.env", encode_envelope(env));
    write_file(dir / "envelope_plaintext.bin", payload);
    write_file(dir / "envelope_aad.bin", aad);

    return 0;
}
