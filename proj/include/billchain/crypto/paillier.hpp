#pragma once

// Paillier encryption with g = n + 1 and randomness drawn from Z*_n.
//
// Balance checking relies on one identity: x^n mod n^2 depends only on
// x mod n. Splitting a bill therefore constrains the output randomness so
// that prod(r_i) = r_in (mod n), which makes
//     E(in, r_in) = prod E(out_i, r_i)  (mod n^2)
// hold as exact ciphertext equality whenever sum(out_i) = in.

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "billchain/crypto/bytes.hpp"
#include "billchain/crypto/encoding.hpp"
#include "billchain/crypto/random.hpp"

namespace billchain {

enum class KeyMode {
  kProduction,  // n must be 1024, 2048 or 4096 bits
  kTest,        // any n of at least 6 bits, for oracle-checked fixtures
};

struct PaillierPublicKey {
  mpz_class n;
  mpz_class n_squared;
  mpz_class g;  // always n + 1
  uint32_t k_bits = 0;

  void encode(Encoder& enc) const;
  static PaillierPublicKey decode(Decoder& dec);
  friend bool operator==(const PaillierPublicKey&, const PaillierPublicKey&) = default;
};

struct PaillierSecretKey {
  mpz_class lambda;
  mpz_class mu;
  mpz_class n;
  mpz_class n_squared;
  // Factors kept for CRT acceleration of the witness's own encryptions.
  mpz_class p;
  mpz_class q;
};

struct PaillierKeyPair {
  PaillierPublicKey pub;
  PaillierSecretKey sec;
};

struct Ciphertext {
  mpz_class value;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

void encode(Encoder& enc, const Ciphertext& c);
Ciphertext decode_ciphertext(Decoder& dec);

// (amount, randomness) reproducing a ciphertext.
struct Opening {
  mpz_class amount;
  mpz_class randomness;

  friend bool operator==(const Opening&, const Opening&) = default;
};

void encode(Encoder& enc, const Opening& o);
Opening decode_opening(Decoder& dec);

bool is_supported_key_bits(uint32_t k_bits, KeyMode mode);

// Throws std::invalid_argument for unsupported bit lengths.
PaillierKeyPair keygen_paillier(uint32_t k_bits, RandomSource& rng,
                                KeyMode mode = KeyMode::kProduction);

// Deterministic construction from known distinct primes (test fixtures and
// persisted keys).
PaillierKeyPair paillier_from_primes(const mpz_class& p, const mpz_class& q);

bool is_valid_ciphertext(const PaillierPublicKey& pk, const Ciphertext& c);

// g^m * r^n mod n^2. Requires 0 <= m < n and r in Z*_n.
Ciphertext encrypt(const PaillierPublicKey& pk, const mpz_class& m, const mpz_class& r);

// Same ciphertext as encrypt(), computed mod p^2 and q^2 separately.
Ciphertext encrypt_with_secret(const PaillierKeyPair& keys, const mpz_class& m,
                               const mpz_class& r);

mpz_class decrypt(const PaillierSecretKey& sk, const Ciphertext& c);

// Homomorphic helpers.
Ciphertext ct_add(const PaillierPublicKey& pk, const Ciphertext& a, const Ciphertext& b);
Ciphertext ct_sub_plain(const PaillierPublicKey& pk, const Ciphertext& c, const mpz_class& m);
// g^m mod n^2, computed as 1 + m*n.
mpz_class g_pow(const PaillierPublicKey& pk, const mpz_class& m);

struct EncryptedSplit {
  Ciphertext input;
  std::vector<Opening> out_openings;
  std::vector<Ciphertext> outputs;
};

// Encrypts the outputs of a split so that the input ciphertext equals the
// product of the output ciphertexts. Throws std::invalid_argument when the
// amounts do not sum to the input or an output is outside [0, 2^range_bits].
EncryptedSplit encrypt_outputs(const PaillierPublicKey& pk, const Opening& in_opening,
                               std::span<const mpz_class> outs, uint32_t range_bits,
                               RandomSource& rng);

// 1 iff c_in equals the product of the outputs mod n^2. Throws on an empty
// output list.
bool verify_balance(const PaillierPublicKey& pk, const Ciphertext& c_in,
                    std::span<const Ciphertext> outputs);

// Blinded equality check run between a receiver and the witness.
struct EqualityQuery {
  Ciphertext w1;
  Ciphertext w2;
};

struct EqualityAnswer {
  mpz_class r1;
  mpz_class r2;
};

void encode(Encoder& enc, const EqualityQuery& q);
EqualityQuery decode_equality_query(Decoder& dec);
void encode(Encoder& enc, const EqualityAnswer& a);
EqualityAnswer decode_equality_answer(Decoder& dec);

// w1 = c_out * g^{-expected} * E(r1), w2 = E(r2). r1 and r2 must lie in
// [0, n); expected must lie in [0, n).
EqualityQuery make_equality_query(const PaillierPublicKey& pk, const Ciphertext& c_out,
                                  const mpz_class& expected, const mpz_class& r1,
                                  const mpz_class& r2, RandomSource& rng);

// Witness side: plain decryptions of both blinded values.
EqualityAnswer answer_equality_query(const PaillierSecretKey& sk, const EqualityQuery& query);

bool check_equality_response(const mpz_class& r1, const mpz_class& r2,
                             const EqualityAnswer& answer);

// Largest split fan-out allowed for a given range width: outputs * 2^L must
// stay below n / 2^16 so sums never wrap.
bool range_params_fit(const PaillierPublicKey& pk, uint32_t range_bits, size_t outputs);

}  // namespace billchain
