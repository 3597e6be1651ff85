#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace billchain {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

std::string to_hex(ByteView bytes);

// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline void append(Bytes& out, ByteView more) {
  out.insert(out.end(), more.begin(), more.end());
}

// Fixed-width byte string with value semantics. Used for digests, ids and
// scheme keys whose length is part of the type.
template <size_t N, typename Tag>
struct FixedBytes {
  static constexpr size_t kSize = N;
  std::array<uint8_t, N> bytes{};

  ByteView view() const { return {bytes.data(), bytes.size()}; }
  std::string hex() const { return to_hex(view()); }

  static FixedBytes from_view(ByteView v);
  static FixedBytes from_hex_string(std::string_view s) { return from_view(from_hex(s)); }

  friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
  friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

void throw_size_mismatch(size_t expected, size_t got);

template <size_t N, typename Tag>
FixedBytes<N, Tag> FixedBytes<N, Tag>::from_view(ByteView v) {
  if (v.size() != N) throw_size_mismatch(N, v.size());
  FixedBytes out;
  std::copy(v.begin(), v.end(), out.bytes.begin());
  return out;
}

struct FixedBytesHash {
  template <size_t N, typename Tag>
  size_t operator()(const FixedBytes<N, Tag>& b) const noexcept {
    static_assert(N >= sizeof(size_t));
    size_t h = 0;
    for (size_t i = 0; i < sizeof(size_t); ++i) h = (h << 8) | b.bytes[i];
    return h;
  }
};

}  // namespace billchain
