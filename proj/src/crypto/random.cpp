#include "billchain/crypto/random.hpp"

#include <stdexcept>

#include <sodium.h>

#include "billchain/crypto/bigint.hpp"
#include "billchain/crypto/hash.hpp"

namespace billchain {

void SystemRandom::fill(std::span<uint8_t> out) {
  ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

DeterministicRandom::DeterministicRandom(uint64_t seed) {
  uint8_t raw[8];
  for (int i = 0; i < 8; ++i) raw[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
  key_ = hash256(ByteView(raw, 8)).bytes;
}

DeterministicRandom::DeterministicRandom(ByteView seed32) {
  if (seed32.size() != key_.size()) throw_size_mismatch(key_.size(), seed32.size());
  std::copy(seed32.begin(), seed32.end(), key_.begin());
}

void DeterministicRandom::fill(std::span<uint8_t> out) {
  ensure_sodium();
  // Each call consumes a fresh 96-bit nonce, so output never repeats.
  std::array<uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  for (int i = 0; i < 8; ++i) nonce[4 + i] = static_cast<uint8_t>(block_counter_ >> (56 - 8 * i));
  ++block_counter_;
  crypto_stream_chacha20_ietf(out.data(), out.size(), nonce.data(), key_.data());
}

DeterministicRandom DeterministicRandom::fork(uint64_t label) const {
  Bytes material(key_.begin(), key_.end());
  for (int i = 0; i < 8; ++i) material.push_back(static_cast<uint8_t>(label >> (56 - 8 * i)));
  const Digest child = hash256(material);
  return DeterministicRandom(child.view());
}

mpz_class random_bits(RandomSource& rng, size_t bits) {
  if (bits == 0) return 0;
  Bytes buf = rng.bytes((bits + 7) / 8);
  const size_t excess = buf.size() * 8 - bits;
  buf[0] &= static_cast<uint8_t>(0xFF >> excess);
  return mpz_from_bytes(buf);
}

mpz_class random_below(RandomSource& rng, const mpz_class& bound) {
  if (bound <= 0) throw std::invalid_argument("random_below requires a positive bound");
  const size_t bits = bit_length(bound - 1);
  for (;;) {
    mpz_class candidate = random_bits(rng, bits);
    if (candidate < bound) return candidate;
  }
}

mpz_class random_unit(RandomSource& rng, const mpz_class& n) {
  if (n < 2) throw std::invalid_argument("Z*_n needs n >= 2");
  for (;;) {
    mpz_class r = random_below(rng, n);
    if (r != 0 && coprime(r, n)) return r;
  }
}

}  // namespace billchain
