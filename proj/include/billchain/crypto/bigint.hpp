#pragma once

#include <gmpxx.h>

#include "billchain/crypto/bytes.hpp"

namespace billchain {

// Minimal big-endian magnitude; zero encodes as the empty string.
Bytes mpz_to_bytes(const mpz_class& value);
mpz_class mpz_from_bytes(ByteView bytes);

mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);

// Throws std::domain_error when the inverse does not exist.
mpz_class mod_inverse(const mpz_class& value, const mpz_class& mod);

// Non-negative residue.
mpz_class mod_floor(const mpz_class& value, const mpz_class& mod);

bool coprime(const mpz_class& a, const mpz_class& b);

size_t bit_length(const mpz_class& value);

}  // namespace billchain
