#include "billchain/crypto/signature.hpp"

#include <sodium.h>

#include "billchain/crypto/hash.hpp"

namespace billchain {

static_assert(SigPublicKey::kSize == crypto_sign_PUBLICKEYBYTES);
static_assert(SigSecretKey::kSize == crypto_sign_SECRETKEYBYTES);
static_assert(Signature::kSize == crypto_sign_BYTES);
static_assert(Seed::kSize == crypto_sign_SEEDBYTES);

SigKeyPair SigKeyPair::from_seed(const Seed& seed) {
  ensure_sodium();
  SigKeyPair kp;
  crypto_sign_seed_keypair(kp.pub.bytes.data(), kp.sec.bytes.data(), seed.bytes.data());
  return kp;
}

SigKeyPair SigKeyPair::generate(RandomSource& rng) { return from_seed(rng.fixed<Seed>()); }

Signature sign(const SigSecretKey& sk, ByteView message) {
  ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                       sk.bytes.data());
  return sig;
}

bool verify_sig(const SigPublicKey& pk, ByteView message, const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                     pk.bytes.data()) == 0;
}

}  // namespace billchain
