#include "billchain/crypto/envelope.hpp"

#include <array>

#include <sodium.h>

#include "billchain/crypto/hash.hpp"

namespace billchain {

namespace {

constexpr size_t kKeyBytes = crypto_aead_xchacha20poly1305_ietf_KEYBYTES;
constexpr size_t kTagBytes = crypto_aead_xchacha20poly1305_ietf_ABYTES;
constexpr char kKdfTag[] = "billchain/envelope/v1";

static_assert(EncPublicKey::kSize == crypto_scalarmult_BYTES);
static_assert(EncSecretKey::kSize == crypto_scalarmult_SCALARBYTES);

// A fresh ephemeral key per envelope means each derived key is used once, so
// a fixed nonce is safe.
std::array<uint8_t, kKeyBytes> derive_key(const uint8_t* shared, const EncPublicKey& ephemeral,
                                          const EncPublicKey& recipient) {
  std::array<uint8_t, kKeyBytes> key{};
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, key.size());
  crypto_generichash_update(&st, reinterpret_cast<const uint8_t*>(kKdfTag), sizeof(kKdfTag) - 1);
  crypto_generichash_update(&st, shared, crypto_scalarmult_BYTES);
  crypto_generichash_update(&st, ephemeral.bytes.data(), ephemeral.bytes.size());
  crypto_generichash_update(&st, recipient.bytes.data(), recipient.bytes.size());
  crypto_generichash_final(&st, key.data(), key.size());
  return key;
}

}  // namespace

EncKeyPair EncKeyPair::from_seed(const Seed& seed) {
  ensure_sodium();
  EncKeyPair kp;
  crypto_box_seed_keypair(kp.pub.bytes.data(), kp.sec.bytes.data(), seed.bytes.data());
  return kp;
}

EncKeyPair EncKeyPair::generate(RandomSource& rng) { return from_seed(rng.fixed<Seed>()); }

Envelope seal_for(const EncPublicKey& recipient, ByteView plaintext, RandomSource& rng) {
  const EncKeyPair ephemeral = EncKeyPair::generate(rng);
  std::array<uint8_t, crypto_scalarmult_BYTES> shared{};
  if (crypto_scalarmult(shared.data(), ephemeral.sec.bytes.data(), recipient.bytes.data()) != 0) {
    throw EnvelopeError("recipient key is a low-order point");
  }
  const auto key = derive_key(shared.data(), ephemeral.pub, recipient);
  sodium_memzero(shared.data(), shared.size());

  const std::array<uint8_t, crypto_aead_xchacha20poly1305_ietf_NPUBBYTES> nonce{};
  Envelope env;
  env.data.resize(EncPublicKey::kSize + plaintext.size() + kTagBytes);
  std::copy(ephemeral.pub.bytes.begin(), ephemeral.pub.bytes.end(), env.data.begin());
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(env.data.data() + EncPublicKey::kSize, &written,
                                             plaintext.data(), plaintext.size(),
                                             recipient.bytes.data(), recipient.bytes.size(),
                                             nullptr, nonce.data(), key.data());
  env.data.resize(EncPublicKey::kSize + written);
  return env;
}

Bytes open_envelope(const EncKeyPair& recipient, const Envelope& envelope) {
  ensure_sodium();
  if (envelope.data.size() < EncPublicKey::kSize + kTagBytes) {
    throw EnvelopeError("envelope truncated");
  }
  const EncPublicKey ephemeral =
      EncPublicKey::from_view(ByteView(envelope.data.data(), EncPublicKey::kSize));
  std::array<uint8_t, crypto_scalarmult_BYTES> shared{};
  if (crypto_scalarmult(shared.data(), recipient.sec.bytes.data(), ephemeral.bytes.data()) != 0) {
    throw EnvelopeError("envelope carries a low-order ephemeral key");
  }
  const auto key = derive_key(shared.data(), ephemeral, recipient.pub);
  sodium_memzero(shared.data(), shared.size());

  const std::array<uint8_t, crypto_aead_xchacha20poly1305_ietf_NPUBBYTES> nonce{};
  const size_t body = envelope.data.size() - EncPublicKey::kSize;
  Bytes out(body - kTagBytes);
  unsigned long long written = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          out.data(), &written, nullptr, envelope.data.data() + EncPublicKey::kSize, body,
          recipient.pub.bytes.data(), recipient.pub.bytes.size(), nonce.data(), key.data()) != 0) {
    throw EnvelopeError("envelope failed authentication");
  }
  out.resize(written);
  return out;
}

}  // namespace billchain
