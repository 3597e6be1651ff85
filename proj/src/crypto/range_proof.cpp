#include "billchain/crypto/range_proof.hpp"

#include <algorithm>
#include <stdexcept>

#include "billchain/crypto/bigint.hpp"
#include "billchain/crypto/hash.hpp"

namespace billchain {

namespace {

constexpr char kTranscriptTag[] = "billchain/range-proof/v1";
constexpr uint32_t kMaxRangeBits = 256;

struct Challenges {
  std::vector<mpz_class> bits;
  mpz_class link;
};

mpz_class digest_to_challenge(const Digest& d, uint32_t t) {
  return mpz_from_bytes(d.view()) % (mpz_class(1) << t);
}

Challenges derive_challenges(const PaillierPublicKey& pk, const Ciphertext& c, uint32_t bits,
                             const std::vector<Ciphertext>& bit_cts,
                             const std::vector<BitProof>& bit_proofs, const mpz_class& link_a) {
  Encoder enc;
  enc.put_string(kTranscriptTag);
  pk.encode(enc);
  enc.put_uint(bits);
  encode(enc, c);
  enc.put_count(bit_cts.size());
  for (const Ciphertext& bc : bit_cts) encode(enc, bc);
  enc.put_count(bit_proofs.size());
  for (const BitProof& bp : bit_proofs) enc.put_int(bp.a0).put_int(bp.a1);
  enc.put_int(link_a);
  const Digest root = hash256(enc.bytes());

  const uint32_t t = range_challenge_bits(pk);
  Challenges out;
  out.bits.reserve(bits);
  for (uint32_t j = 0; j < bits; ++j) {
    Encoder sub;
    sub.put_fixed(root).put_string("bit").put_uint(j);
    out.bits.push_back(digest_to_challenge(hash256(sub.bytes()), t));
  }
  Encoder sub;
  sub.put_fixed(root).put_string("link");
  out.link = digest_to_challenge(hash256(sub.bytes()), t);
  return out;
}

// prod c_j^(2^j) mod n^2, Horner from the top bit.
mpz_class weighted_product(const PaillierPublicKey& pk, const std::vector<Ciphertext>& bit_cts) {
  mpz_class acc = 1;
  for (auto it = bit_cts.rbegin(); it != bit_cts.rend(); ++it) {
    acc = mod_floor(acc * acc, pk.n_squared);
    acc = mod_floor(acc * it->value, pk.n_squared);
  }
  return acc;
}

bool is_unit_below(const mpz_class& x, const mpz_class& bound, const mpz_class& n) {
  return x > 0 && x < bound && coprime(x, n);
}

Ciphertext shift_down_one(const PaillierPublicKey& pk, const Ciphertext& c) {
  return ct_sub_plain(pk, c, 1);
}

}  // namespace

void encode(Encoder& enc, const RangeProof& proof) {
  enc.put_uint(proof.bits);
  enc.put_count(proof.bit_ciphertexts.size());
  for (const Ciphertext& c : proof.bit_ciphertexts) encode(enc, c);
  enc.put_count(proof.bit_proofs.size());
  for (const BitProof& bp : proof.bit_proofs) {
    enc.put_int(bp.a0).put_int(bp.a1).put_int(bp.e0).put_int(bp.e1).put_int(bp.z0).put_int(bp.z1);
  }
  enc.put_int(proof.link.a).put_int(proof.link.z);
}

RangeProof decode_range_proof(Decoder& dec) {
  RangeProof proof;
  const uint64_t bits = dec.get_uint();
  if (bits > kMaxRangeBits) throw DecodeError("range proof width too large");
  proof.bits = static_cast<uint32_t>(bits);
  const size_t n_cts = dec.get_count(kMaxRangeBits);
  proof.bit_ciphertexts.reserve(n_cts);
  for (size_t i = 0; i < n_cts; ++i) proof.bit_ciphertexts.push_back(decode_ciphertext(dec));
  const size_t n_proofs = dec.get_count(kMaxRangeBits);
  proof.bit_proofs.reserve(n_proofs);
  for (size_t i = 0; i < n_proofs; ++i) {
    BitProof bp;
    bp.a0 = dec.get_int();
    bp.a1 = dec.get_int();
    bp.e0 = dec.get_int();
    bp.e1 = dec.get_int();
    bp.z0 = dec.get_int();
    bp.z1 = dec.get_int();
    proof.bit_proofs.push_back(std::move(bp));
  }
  proof.link.a = dec.get_int();
  proof.link.z = dec.get_int();
  return proof;
}

uint32_t range_challenge_bits(const PaillierPublicKey& pk) {
  const int64_t half = static_cast<int64_t>(pk.k_bits / 2) - 2;
  return static_cast<uint32_t>(std::clamp<int64_t>(half, 1, 128));
}

bool range_bits_supported(const PaillierPublicKey& pk, uint32_t bits) {
  return bits >= 1 && bits <= kMaxRangeBits && (mpz_class(1) << bits) < pk.n;
}

RangeProof prove_range(const PaillierPublicKey& pk, const Ciphertext& c, const Opening& opening,
                       uint32_t bits, RandomSource& rng) {
  if (!range_bits_supported(pk, bits)) {
    throw std::invalid_argument("range width unsupported for this modulus");
  }
  const mpz_class& m = opening.amount;
  if (m < 0 || m >= (mpz_class(1) << bits)) {
    throw std::invalid_argument("amount outside the provable range");
  }
  if (encrypt(pk, m, opening.randomness) != c) {
    throw std::invalid_argument("opening does not reproduce the ciphertext");
  }

  const uint32_t t = range_challenge_bits(pk);
  const mpz_class challenge_mod = mpz_class(1) << t;
  const mpz_class g_inv = g_pow(pk, -1);

  RangeProof proof;
  proof.bits = bits;
  std::vector<mpz_class> bit_randomness(bits);
  std::vector<int> bit_values(bits);
  std::vector<mpz_class> nonces(bits);
  proof.bit_ciphertexts.reserve(bits);
  proof.bit_proofs.resize(bits);

  for (uint32_t j = 0; j < bits; ++j) {
    const int b = mpz_tstbit(m.get_mpz_t(), j);
    bit_values[j] = b;
    bit_randomness[j] = random_unit(rng, pk.n);
    const Ciphertext cj = encrypt(pk, b, bit_randomness[j]);
    proof.bit_ciphertexts.push_back(cj);

    // u_0 = c_j, u_1 = c_j * g^{-1}; only u_b is an n-th residue.
    const mpz_class u_fake = b == 0 ? mod_floor(cj.value * g_inv, pk.n_squared) : cj.value;
    nonces[j] = random_unit(rng, pk.n);
    const mpz_class a_true = mod_pow(nonces[j], pk.n, pk.n_squared);
    const mpz_class e_fake = random_below(rng, challenge_mod);
    const mpz_class z_fake = random_unit(rng, pk.n);
    const mpz_class a_fake =
        mod_floor(mod_pow(z_fake, pk.n, pk.n_squared) *
                      mod_inverse(mod_pow(u_fake, e_fake, pk.n_squared), pk.n_squared),
                  pk.n_squared);
    BitProof& bp = proof.bit_proofs[j];
    if (b == 0) {
      bp.a0 = a_true;
      bp.a1 = a_fake;
      bp.e1 = e_fake;
      bp.z1 = z_fake;
    } else {
      bp.a1 = a_true;
      bp.a0 = a_fake;
      bp.e0 = e_fake;
      bp.z0 = z_fake;
    }
  }

  // c / prod c_j^(2^j) = (r * prod s_j^(-2^j))^n.
  mpz_class link_witness = opening.randomness;
  {
    mpz_class weighted = 1;
    for (uint32_t j = bits; j-- > 0;) {
      weighted = mod_floor(weighted * weighted, pk.n);
      weighted = mod_floor(weighted * bit_randomness[j], pk.n);
    }
    link_witness = mod_floor(link_witness * mod_inverse(weighted, pk.n), pk.n);
  }
  const mpz_class link_nonce = random_unit(rng, pk.n);
  proof.link.a = mod_pow(link_nonce, pk.n, pk.n_squared);

  const Challenges ch =
      derive_challenges(pk, c, bits, proof.bit_ciphertexts, proof.bit_proofs, proof.link.a);

  for (uint32_t j = 0; j < bits; ++j) {
    BitProof& bp = proof.bit_proofs[j];
    if (bit_values[j] == 0) {
      bp.e0 = mod_floor(ch.bits[j] - bp.e1, challenge_mod);
      bp.z0 = mod_floor(nonces[j] * mod_pow(bit_randomness[j], bp.e0, pk.n), pk.n);
    } else {
      bp.e1 = mod_floor(ch.bits[j] - bp.e0, challenge_mod);
      bp.z1 = mod_floor(nonces[j] * mod_pow(bit_randomness[j], bp.e1, pk.n), pk.n);
    }
  }
  proof.link.z = mod_floor(link_nonce * mod_pow(link_witness, ch.link, pk.n), pk.n);
  return proof;
}

bool verify_range(const PaillierPublicKey& pk, const Ciphertext& c, const RangeProof& proof,
                  uint32_t bits) {
  if (proof.bits != bits || !range_bits_supported(pk, bits)) return false;
  if (proof.bit_ciphertexts.size() != bits || proof.bit_proofs.size() != bits) return false;
  if (!is_valid_ciphertext(pk, c)) return false;

  const uint32_t t = range_challenge_bits(pk);
  const mpz_class challenge_mod = mpz_class(1) << t;
  const mpz_class& n = pk.n;
  const mpz_class& n2 = pk.n_squared;

  for (uint32_t j = 0; j < bits; ++j) {
    if (!is_valid_ciphertext(pk, proof.bit_ciphertexts[j])) return false;
    const BitProof& bp = proof.bit_proofs[j];
    if (!is_unit_below(bp.a0, n2, n) || !is_unit_below(bp.a1, n2, n)) return false;
    if (!is_unit_below(bp.z0, n, n) || !is_unit_below(bp.z1, n, n)) return false;
    if (bp.e0 < 0 || bp.e0 >= challenge_mod || bp.e1 < 0 || bp.e1 >= challenge_mod) return false;
  }
  if (!is_unit_below(proof.link.a, n2, n) || !is_unit_below(proof.link.z, n, n)) return false;

  const Challenges ch =
      derive_challenges(pk, c, bits, proof.bit_ciphertexts, proof.bit_proofs, proof.link.a);
  const mpz_class g_inv = g_pow(pk, -1);

  for (uint32_t j = 0; j < bits; ++j) {
    const BitProof& bp = proof.bit_proofs[j];
    if (mod_floor(bp.e0 + bp.e1, challenge_mod) != ch.bits[j]) return false;
    const mpz_class& u0 = proof.bit_ciphertexts[j].value;
    const mpz_class u1 = mod_floor(u0 * g_inv, n2);
    if (mod_pow(bp.z0, n, n2) != mod_floor(bp.a0 * mod_pow(u0, bp.e0, n2), n2)) return false;
    if (mod_pow(bp.z1, n, n2) != mod_floor(bp.a1 * mod_pow(u1, bp.e1, n2), n2)) return false;
  }

  const mpz_class quotient =
      mod_floor(c.value * mod_inverse(weighted_product(pk, proof.bit_ciphertexts), n2), n2);
  return mod_pow(proof.link.z, n, n2) ==
         mod_floor(proof.link.a * mod_pow(quotient, ch.link, n2), n2);
}

RangeProof prove_positive(const PaillierPublicKey& pk, const Ciphertext& c,
                          const Opening& opening, uint32_t bits, RandomSource& rng) {
  if (opening.amount < 1) throw std::invalid_argument("amount must be positive");
  const Opening shifted{opening.amount - 1, opening.randomness};
  return prove_range(pk, shift_down_one(pk, c), shifted, bits, rng);
}

bool verify_positive(const PaillierPublicKey& pk, const Ciphertext& c, const RangeProof& proof,
                     uint32_t bits) {
  if (!is_valid_ciphertext(pk, c)) return false;
  return verify_range(pk, shift_down_one(pk, c), proof, bits);
}

}  // namespace billchain
