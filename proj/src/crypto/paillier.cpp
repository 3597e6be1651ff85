#include "billchain/crypto/paillier.hpp"

#include <numeric>
#include <stdexcept>

#include "billchain/crypto/bigint.hpp"

namespace billchain {

namespace {

mpz_class random_prime_with_bits(RandomSource& rng, size_t bits) {
  const mpz_class low = mpz_class(1) << (bits - 1);
  const mpz_class high = mpz_class(1) << bits;
  for (;;) {
    mpz_class candidate = random_bits(rng, bits);
    // Top two bits set keeps the product at full width for large keys.
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    if (bits >= 8) mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_class prime;
    mpz_nextprime(prime.get_mpz_t(), candidate.get_mpz_t());
    if (prime >= low && prime < high) return prime;
  }
}

void require_unit(const mpz_class& r, const mpz_class& n) {
  if (r <= 0 || r >= n || !coprime(r, n)) {
    throw std::invalid_argument("randomness must be an element of Z*_n");
  }
}

void require_plaintext(const PaillierPublicKey& pk, const mpz_class& m) {
  if (m < 0 || m >= pk.n) throw std::invalid_argument("plaintext outside [0, n)");
}

}  // namespace

void PaillierPublicKey::encode(Encoder& enc) const {
  enc.put_int(n).put_uint(k_bits);
}

PaillierPublicKey PaillierPublicKey::decode(Decoder& dec) {
  PaillierPublicKey pk;
  pk.n = dec.get_int();
  pk.k_bits = static_cast<uint32_t>(dec.get_uint());
  if (pk.n < 3 || mpz_even_p(pk.n.get_mpz_t()) || bit_length(pk.n) != pk.k_bits) {
    throw DecodeError("malformed Paillier public key");
  }
  pk.n_squared = pk.n * pk.n;
  pk.g = pk.n + 1;
  return pk;
}

void encode(Encoder& enc, const Ciphertext& c) { enc.put_int(c.value); }

Ciphertext decode_ciphertext(Decoder& dec) { return Ciphertext{dec.get_int()}; }

void encode(Encoder& enc, const Opening& o) { enc.put_int(o.amount).put_int(o.randomness); }

Opening decode_opening(Decoder& dec) {
  Opening o;
  o.amount = dec.get_int();
  o.randomness = dec.get_int();
  return o;
}

void encode(Encoder& enc, const EqualityQuery& q) {
  encode(enc, q.w1);
  encode(enc, q.w2);
}

EqualityQuery decode_equality_query(Decoder& dec) {
  EqualityQuery q;
  q.w1 = decode_ciphertext(dec);
  q.w2 = decode_ciphertext(dec);
  return q;
}

void encode(Encoder& enc, const EqualityAnswer& a) { enc.put_int(a.r1).put_int(a.r2); }

EqualityAnswer decode_equality_answer(Decoder& dec) {
  EqualityAnswer a;
  a.r1 = dec.get_int();
  a.r2 = dec.get_int();
  return a;
}

bool is_supported_key_bits(uint32_t k_bits, KeyMode mode) {
  if (mode == KeyMode::kTest) return k_bits >= 6;
  return k_bits == 1024 || k_bits == 2048 || k_bits == 4096;
}

PaillierKeyPair keygen_paillier(uint32_t k_bits, RandomSource& rng, KeyMode mode) {
  if (!is_supported_key_bits(k_bits, mode)) {
    throw std::invalid_argument("unsupported Paillier key length: " + std::to_string(k_bits));
  }
  const size_t p_bits = k_bits / 2;
  const size_t q_bits = k_bits - p_bits;
  for (;;) {
    const mpz_class p = random_prime_with_bits(rng, p_bits);
    const mpz_class q = random_prime_with_bits(rng, q_bits);
    if (p == q) continue;
    const mpz_class n = p * q;
    if (bit_length(n) != k_bits) continue;
    if (!coprime(n, (p - 1) * (q - 1))) continue;
    return paillier_from_primes(p, q);
  }
}

PaillierKeyPair paillier_from_primes(const mpz_class& p, const mpz_class& q) {
  if (p == q || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0 ||
      mpz_probab_prime_p(q.get_mpz_t(), 30) == 0) {
    throw std::invalid_argument("Paillier needs two distinct primes");
  }
  const mpz_class n = p * q;
  if (!coprime(n, (p - 1) * (q - 1))) {
    throw std::invalid_argument("gcd(n, phi(n)) must be 1");
  }
  PaillierKeyPair keys;
  keys.pub.n = n;
  keys.pub.n_squared = n * n;
  keys.pub.g = n + 1;
  keys.pub.k_bits = static_cast<uint32_t>(bit_length(n));

  mpz_class lambda;
  mpz_lcm(lambda.get_mpz_t(), mpz_class(p - 1).get_mpz_t(), mpz_class(q - 1).get_mpz_t());
  keys.sec.lambda = lambda;
  // With g = n + 1, L(g^lambda mod n^2) = lambda mod n.
  keys.sec.mu = mod_inverse(mod_floor(lambda, n), n);
  keys.sec.n = n;
  keys.sec.n_squared = keys.pub.n_squared;
  keys.sec.p = p;
  keys.sec.q = q;
  return keys;
}

bool is_valid_ciphertext(const PaillierPublicKey& pk, const Ciphertext& c) {
  return c.value > 0 && c.value < pk.n_squared && coprime(c.value, pk.n);
}

mpz_class g_pow(const PaillierPublicKey& pk, const mpz_class& m) {
  return mod_floor(1 + mod_floor(m, pk.n) * pk.n, pk.n_squared);
}

Ciphertext encrypt(const PaillierPublicKey& pk, const mpz_class& m, const mpz_class& r) {
  require_plaintext(pk, m);
  require_unit(r, pk.n);
  const mpz_class rn = mod_pow(r, pk.n, pk.n_squared);
  return Ciphertext{mod_floor(g_pow(pk, m) * rn, pk.n_squared)};
}

Ciphertext encrypt_with_secret(const PaillierKeyPair& keys, const mpz_class& m,
                               const mpz_class& r) {
  const PaillierPublicKey& pk = keys.pub;
  const PaillierSecretKey& sk = keys.sec;
  require_plaintext(pk, m);
  require_unit(r, pk.n);
  const mpz_class p2 = sk.p * sk.p;
  const mpz_class q2 = sk.q * sk.q;
  // |Z*_{p^2}| = p(p-1), so the exponent reduces modulo it.
  const mpz_class rp = mod_pow(r, mod_floor(pk.n, sk.p * (sk.p - 1)), p2);
  const mpz_class rq = mod_pow(r, mod_floor(pk.n, sk.q * (sk.q - 1)), q2);
  const mpz_class h = mod_floor((rq - rp) * mod_inverse(p2, q2), q2);
  const mpz_class rn = rp + p2 * h;
  return Ciphertext{mod_floor(g_pow(pk, m) * rn, pk.n_squared)};
}

mpz_class decrypt(const PaillierSecretKey& sk, const Ciphertext& c) {
  if (c.value <= 0 || c.value >= sk.n_squared || !coprime(c.value, sk.n)) {
    throw std::invalid_argument("ciphertext is not an element of Z*_{n^2}");
  }
  const mpz_class u = mod_pow(c.value, sk.lambda, sk.n_squared);
  const mpz_class l = (u - 1) / sk.n;
  return mod_floor(l * sk.mu, sk.n);
}

Ciphertext ct_add(const PaillierPublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  return Ciphertext{mod_floor(a.value * b.value, pk.n_squared)};
}

Ciphertext ct_sub_plain(const PaillierPublicKey& pk, const Ciphertext& c, const mpz_class& m) {
  return Ciphertext{mod_floor(c.value * g_pow(pk, -m), pk.n_squared)};
}

EncryptedSplit encrypt_outputs(const PaillierPublicKey& pk, const Opening& in_opening,
                               std::span<const mpz_class> outs, uint32_t range_bits,
                               RandomSource& rng) {
  if (outs.empty()) throw std::invalid_argument("a split needs at least one output");
  const mpz_class bound = mpz_class(1) << range_bits;
  mpz_class sum = 0;
  for (const mpz_class& out : outs) {
    if (out < 0 || out > bound) throw std::invalid_argument("output amount outside [0, 2^L]");
    sum += out;
  }
  if (sum != in_opening.amount) throw std::invalid_argument("outputs do not sum to the input");
  require_unit(in_opening.randomness, pk.n);

  EncryptedSplit split;
  split.input = encrypt(pk, in_opening.amount, in_opening.randomness);
  split.out_openings.reserve(outs.size());
  split.outputs.reserve(outs.size());

  mpz_class prefix = 1;
  for (size_t i = 0; i + 1 < outs.size(); ++i) {
    const mpz_class r = random_unit(rng, pk.n);
    prefix = mod_floor(prefix * r, pk.n);
    split.out_openings.push_back(Opening{outs[i], r});
  }
  // Last randomness closes the product: prod r_i = r_in (mod n).
  const mpz_class last = mod_floor(in_opening.randomness * mod_inverse(prefix, pk.n), pk.n);
  split.out_openings.push_back(Opening{outs.back(), last});

  for (const Opening& o : split.out_openings) {
    split.outputs.push_back(encrypt(pk, o.amount, o.randomness));
  }
  return split;
}

bool verify_balance(const PaillierPublicKey& pk, const Ciphertext& c_in,
                    std::span<const Ciphertext> outputs) {
  if (outputs.empty()) throw std::invalid_argument("balance check needs at least one output");
  mpz_class product = 1;
  for (const Ciphertext& c : outputs) product = mod_floor(product * c.value, pk.n_squared);
  return product == c_in.value;
}

EqualityQuery make_equality_query(const PaillierPublicKey& pk, const Ciphertext& c_out,
                                  const mpz_class& expected, const mpz_class& r1,
                                  const mpz_class& r2, RandomSource& rng) {
  if (expected < 0 || expected >= pk.n) throw std::invalid_argument("expected amount outside [0, n)");
  require_plaintext(pk, r1);
  require_plaintext(pk, r2);
  const Ciphertext blind1 = encrypt(pk, r1, random_unit(rng, pk.n));
  const Ciphertext shifted = ct_sub_plain(pk, c_out, expected);
  EqualityQuery q;
  q.w1 = ct_add(pk, shifted, blind1);
  q.w2 = encrypt(pk, r2, random_unit(rng, pk.n));
  return q;
}

EqualityAnswer answer_equality_query(const PaillierSecretKey& sk, const EqualityQuery& query) {
  return EqualityAnswer{decrypt(sk, query.w1), decrypt(sk, query.w2)};
}

bool check_equality_response(const mpz_class& r1, const mpz_class& r2,
                             const EqualityAnswer& answer) {
  return r1 == answer.r1 && r2 == answer.r2;
}

bool range_params_fit(const PaillierPublicKey& pk, uint32_t range_bits, size_t outputs) {
  if (outputs == 0) return false;
  const mpz_class lhs = mpz_class(static_cast<unsigned long>(outputs)) << range_bits;
  const mpz_class rhs = pk.n >> 16;
  return lhs < rhs;
}

}  // namespace billchain
