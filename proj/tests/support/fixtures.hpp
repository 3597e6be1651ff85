#pragma once

#include <cstdint>

#include "billchain/crypto/paillier.hpp"
#include "billchain/protocol/roles.hpp"

namespace billchain::testing {

// p = 5, q = 7.
const PaillierKeyPair& toy_key();

// Deterministic production-size key, generated once per process.
const PaillierKeyPair& key_1024();

// Deterministic test-mode key of the given size, cached per size.
const PaillierKeyPair& test_key(uint32_t bits);

// Witness keys over test_key(bits) or key_1024(), with a fixed seed.
protocol::WitnessKeys witness_keys(uint32_t bits);

mpz_class mpz_u64(uint64_t v);

}  // namespace billchain::testing
