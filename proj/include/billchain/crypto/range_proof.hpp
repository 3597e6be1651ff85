#pragma once

// Non-interactive range proofs for Paillier ciphertexts.
//
// The prover encrypts each bit b_j of the amount as c_j and shows
//   * every c_j encrypts 0 or 1: a disjunctive proof that either c_j or
//     c_j * g^{-1} is an n-th residue mod n^2;
//   * c / prod c_j^(2^j) is an n-th residue, i.e. encrypts zero, which ties
//     the bits to the target.
// Challenges come from SHA-256 over the canonical encoding of the key, the
// target, every bit ciphertext and every first-round commitment.
//
// Soundness needs 2^L < n and a challenge space smaller than the smallest
// prime factor of n; challenges are therefore min(128, k_bits/2 - 2) bits.

#include <cstdint>
#include <vector>

#include "billchain/crypto/paillier.hpp"

namespace billchain {

struct BitProof {
  mpz_class a0, a1;  // commitments for the "encrypts 0" / "encrypts 1" branches
  mpz_class e0, e1;  // branch challenges, e0 + e1 = e (mod 2^t)
  mpz_class z0, z1;  // responses in Z*_n

  friend bool operator==(const BitProof&, const BitProof&) = default;
};

struct LinkProof {
  mpz_class a;
  mpz_class z;

  friend bool operator==(const LinkProof&, const LinkProof&) = default;
};

struct RangeProof {
  uint32_t bits = 0;
  std::vector<Ciphertext> bit_ciphertexts;
  std::vector<BitProof> bit_proofs;
  LinkProof link;

  friend bool operator==(const RangeProof&, const RangeProof&) = default;
};

void encode(Encoder& enc, const RangeProof& proof);
RangeProof decode_range_proof(Decoder& dec);

uint32_t range_challenge_bits(const PaillierPublicKey& pk);

// Whether an L-bit range proof is meaningful under this key (2^L < n).
bool range_bits_supported(const PaillierPublicKey& pk, uint32_t bits);

// Proves that c encrypts a value in [0, 2^bits). Throws
// std::invalid_argument if the opening does not reproduce c or the amount is
// out of range; no proof is ever produced for an out-of-range amount.
RangeProof prove_range(const PaillierPublicKey& pk, const Ciphertext& c, const Opening& opening,
                       uint32_t bits, RandomSource& rng);

// Deterministic; malformed proofs are rejected, never thrown.
bool verify_range(const PaillierPublicKey& pk, const Ciphertext& c, const RangeProof& proof,
                  uint32_t bits);

// Positivity: range proof over c * g^{-1}, so accepted amounts lie in
// [1, 2^bits].
RangeProof prove_positive(const PaillierPublicKey& pk, const Ciphertext& c,
                          const Opening& opening, uint32_t bits, RandomSource& rng);
bool verify_positive(const PaillierPublicKey& pk, const Ciphertext& c, const RangeProof& proof,
                     uint32_t bits);

}  // namespace billchain
