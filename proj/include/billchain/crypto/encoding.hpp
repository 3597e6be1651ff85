#pragma once

// Canonical byte encodings shared by hashing, signing, Fiat-Shamir and
// persistence.
//
//   integer   4-byte big-endian length, then minimal big-endian magnitude
//             (zero is the empty string)
//   bytes     4-byte big-endian length, then the raw bytes
//   list      4-byte big-endian count, then each element
//   composite concatenation of its fields in declaration order
//
// Decoding is strict: non-minimal integers, short reads and trailing bytes
// are errors, so every value has exactly one encoding.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "billchain/crypto/bytes.hpp"

namespace billchain {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Encoder {
 public:
  Encoder& put_int(const mpz_class& value);
  Encoder& put_uint(uint64_t value);
  Encoder& put_bytes(ByteView bytes);
  Encoder& put_string(std::string_view s) { return put_bytes(as_bytes(s)); }
  Encoder& put_count(size_t count);

  template <size_t N, typename Tag>
  Encoder& put_fixed(const FixedBytes<N, Tag>& b) {
    return put_bytes(b.view());
  }

  // Splices an already-canonical encoding.
  Encoder& put_raw(ByteView bytes);

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  void put_u32(uint32_t value);
  Bytes out_;
};

class Decoder {
 public:
  explicit Decoder(ByteView input) : input_(input) {}
  // The decoder only borrows its input.
  explicit Decoder(Bytes&&) = delete;

  mpz_class get_int(size_t max_len = kDefaultMaxField);
  uint64_t get_uint();
  Bytes get_bytes(size_t max_len = kDefaultMaxField);
  std::string get_string(size_t max_len = kDefaultMaxField);
  size_t get_count(size_t max_count = kDefaultMaxCount);

  template <typename Fixed>
  Fixed get_fixed() {
    const Bytes b = get_bytes(Fixed::kSize);
    if (b.size() != Fixed::kSize) throw DecodeError("fixed-width field has wrong length");
    return Fixed::from_view(b);
  }

  bool at_end() const { return offset_ == input_.size(); }
  size_t offset() const { return offset_; }
  void expect_end() const;

  static constexpr size_t kDefaultMaxField = 1u << 20;
  static constexpr size_t kDefaultMaxCount = 1u << 20;

 private:
  uint32_t get_u32();
  ByteView take(size_t len);

  ByteView input_;
  size_t offset_ = 0;
};

}  // namespace billchain
