#pragma once

#include <array>
#include <cstdint>

#include <gmpxx.h>

#include "billchain/crypto/bytes.hpp"

namespace billchain {

// Injectable randomness. Implementations are not required to be
// thread-safe; give each thread its own source.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<uint8_t> out) = 0;

  Bytes bytes(size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  template <typename Fixed>
  Fixed fixed() {
    Fixed out;
    fill(out.bytes);
    return out;
  }
};

// OS entropy via libsodium.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<uint8_t> out) override;
};

// ChaCha20 keystream keyed by a seed. Same seed, same stream.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(uint64_t seed);
  explicit DeterministicRandom(ByteView seed32);

  void fill(std::span<uint8_t> out) override;

  // Independent child stream; useful for handing one stream per worker.
  DeterministicRandom fork(uint64_t label) const;

 private:
  std::array<uint8_t, 32> key_{};
  uint64_t block_counter_ = 0;
};

// Uniform in [0, bound). bound must be positive.
mpz_class random_below(RandomSource& rng, const mpz_class& bound);

// Uniform over Z*_n.
mpz_class random_unit(RandomSource& rng, const mpz_class& n);

// Uniform in [0, 2^bits).
mpz_class random_bits(RandomSource& rng, size_t bits);

}  // namespace billchain
