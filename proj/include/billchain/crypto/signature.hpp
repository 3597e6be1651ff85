#pragma once

// Ed25519 signatures (deterministic signing, so fixtures are reproducible).

#include "billchain/crypto/bytes.hpp"
#include "billchain/crypto/random.hpp"

namespace billchain {

struct SigPublicKeyTag {};
struct SigSecretKeyTag {};
struct SignatureTag {};
struct SeedTag {};

using SigPublicKey = FixedBytes<32, SigPublicKeyTag>;
using SigSecretKey = FixedBytes<64, SigSecretKeyTag>;
using Signature = FixedBytes<64, SignatureTag>;
using Seed = FixedBytes<32, SeedTag>;

struct SigKeyPair {
  SigPublicKey pub;
  SigSecretKey sec;

  static SigKeyPair from_seed(const Seed& seed);
  static SigKeyPair generate(RandomSource& rng);
};

Signature sign(const SigSecretKey& sk, ByteView message);

// Never throws: malformed keys or signatures simply fail to verify.
bool verify_sig(const SigPublicKey& pk, ByteView message, const Signature& sig);

}  // namespace billchain
