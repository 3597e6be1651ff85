#include "billchain/crypto/encoding.hpp"

#include <limits>

#include "billchain/crypto/bigint.hpp"

namespace billchain {

void Encoder::put_u32(uint32_t value) {
  out_.push_back(static_cast<uint8_t>(value >> 24));
  out_.push_back(static_cast<uint8_t>(value >> 16));
  out_.push_back(static_cast<uint8_t>(value >> 8));
  out_.push_back(static_cast<uint8_t>(value));
}

Encoder& Encoder::put_int(const mpz_class& value) {
  return put_bytes(mpz_to_bytes(value));
}

Encoder& Encoder::put_uint(uint64_t value) {
  uint8_t buf[8];
  size_t len = 0;
  for (int shift = 56; shift >= 0; shift -= 8) {
    const auto byte = static_cast<uint8_t>(value >> shift);
    if (len == 0 && byte == 0) continue;
    buf[len++] = byte;
  }
  return put_bytes(ByteView(buf, len));
}

Encoder& Encoder::put_bytes(ByteView bytes) {
  if (bytes.size() > std::numeric_limits<uint32_t>::max()) {
    throw std::length_error("field exceeds 32-bit length prefix");
  }
  put_u32(static_cast<uint32_t>(bytes.size()));
  append(out_, bytes);
  return *this;
}

Encoder& Encoder::put_count(size_t count) {
  if (count > std::numeric_limits<uint32_t>::max()) {
    throw std::length_error("list exceeds 32-bit count");
  }
  put_u32(static_cast<uint32_t>(count));
  return *this;
}

Encoder& Encoder::put_raw(ByteView bytes) {
  append(out_, bytes);
  return *this;
}

uint32_t Decoder::get_u32() {
  const ByteView b = take(4);
  return (static_cast<uint32_t>(b[0]) << 24) | (static_cast<uint32_t>(b[1]) << 16) |
         (static_cast<uint32_t>(b[2]) << 8) | static_cast<uint32_t>(b[3]);
}

ByteView Decoder::take(size_t len) {
  if (len > input_.size() - offset_) throw DecodeError("truncated input");
  const ByteView out = input_.subspan(offset_, len);
  offset_ += len;
  return out;
}

Bytes Decoder::get_bytes(size_t max_len) {
  const uint32_t len = get_u32();
  if (len > max_len) throw DecodeError("field exceeds maximum length");
  const ByteView b = take(len);
  return Bytes(b.begin(), b.end());
}

std::string Decoder::get_string(size_t max_len) {
  const Bytes b = get_bytes(max_len);
  return std::string(b.begin(), b.end());
}

mpz_class Decoder::get_int(size_t max_len) {
  const Bytes b = get_bytes(max_len);
  if (!b.empty() && b.front() == 0) throw DecodeError("non-minimal integer encoding");
  return mpz_from_bytes(b);
}

uint64_t Decoder::get_uint() {
  const Bytes b = get_bytes(8);
  if (!b.empty() && b.front() == 0) throw DecodeError("non-minimal integer encoding");
  uint64_t v = 0;
  for (uint8_t x : b) v = (v << 8) | x;
  return v;
}

size_t Decoder::get_count(size_t max_count) {
  const uint32_t count = get_u32();
  if (count > max_count) throw DecodeError("list count exceeds maximum");
  return count;
}

void Decoder::expect_end() const {
  if (!at_end()) throw DecodeError("trailing bytes after encoded value");
}

}  // namespace billchain
