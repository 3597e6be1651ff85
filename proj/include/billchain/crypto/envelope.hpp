#pragma once

// Sealed envelopes: ephemeral X25519 key agreement, a key derived from the
// shared secret and both public keys, then XChaCha20-Poly1305.
//
// Layout: ephemeral public key (32) || AEAD ciphertext || tag (16).

#include <stdexcept>

#include "billchain/crypto/bytes.hpp"
#include "billchain/crypto/random.hpp"
#include "billchain/crypto/signature.hpp"

namespace billchain {

struct EncPublicKeyTag {};
struct EncSecretKeyTag {};
using EncPublicKey = FixedBytes<32, EncPublicKeyTag>;
using EncSecretKey = FixedBytes<32, EncSecretKeyTag>;

struct EncKeyPair {
  EncPublicKey pub;
  EncSecretKey sec;

  static EncKeyPair from_seed(const Seed& seed);
  static EncKeyPair generate(RandomSource& rng);
};

struct Envelope {
  Bytes data;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Envelope seal_for(const EncPublicKey& recipient, ByteView plaintext, RandomSource& rng);

// Throws EnvelopeError when the envelope is truncated, tampered with, or
// addressed to someone else.
Bytes open_envelope(const EncKeyPair& recipient, const Envelope& envelope);

}  // namespace billchain
