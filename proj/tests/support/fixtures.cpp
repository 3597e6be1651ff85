#include "fixtures.hpp"

#include <map>
#include <mutex>

namespace billchain::testing {

const PaillierKeyPair& toy_key() {
  static const PaillierKeyPair key = paillier_from_primes(5, 7);
  return key;
}

const PaillierKeyPair& key_1024() {
  static const PaillierKeyPair key = [] {
    DeterministicRandom rng(1024);
    return keygen_paillier(1024, rng);
  }();
  return key;
}

const PaillierKeyPair& test_key(uint32_t bits) {
  static std::mutex mu;
  static std::map<uint32_t, PaillierKeyPair> keys;
  std::lock_guard lock(mu);
  auto it = keys.find(bits);
  if (it == keys.end()) {
    DeterministicRandom rng(0x7e57'0000ull + bits);
    it = keys.emplace(bits, keygen_paillier(bits, rng, KeyMode::kTest)).first;
  }
  return it->second;
}

protocol::WitnessKeys witness_keys(uint32_t bits) {
  Seed s;
  s.bytes.fill(0x5a);
  return protocol::WitnessKeys::from_parts(bits == 1024 ? key_1024() : test_key(bits), s);
}

mpz_class mpz_u64(uint64_t v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

}  // namespace billchain::testing
