#include "billchain/crypto/bigint.hpp"

#include <stdexcept>
#include <string>

namespace billchain {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

void throw_size_mismatch(size_t expected, size_t got) {
  throw std::invalid_argument("expected " + std::to_string(expected) + " bytes, got " +
                              std::to_string(got));
}

Bytes mpz_to_bytes(const mpz_class& value) {
  if (value < 0) throw std::invalid_argument("negative integers have no canonical encoding");
  if (value == 0) return {};
  const size_t size = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  Bytes out(size);
  size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
  out.resize(written);
  return out;
}

mpz_class mpz_from_bytes(ByteView bytes) {
  mpz_class out;
  if (!bytes.empty()) mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

mpz_class mod_inverse(const mpz_class& value, const mpz_class& mod) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), value.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw std::domain_error("value is not invertible");
  }
  return out;
}

mpz_class mod_floor(const mpz_class& value, const mpz_class& mod) {
  mpz_class out;
  mpz_mod(out.get_mpz_t(), value.get_mpz_t(), mod.get_mpz_t());
  return out;
}

bool coprime(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g == 1;
}

size_t bit_length(const mpz_class& value) {
  if (value == 0) return 0;
  return mpz_sizeinbase(value.get_mpz_t(), 2);
}

}  // namespace billchain
