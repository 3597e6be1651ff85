#include "billchain/crypto/hash.hpp"

#include <stdexcept>

#include <sodium.h>

namespace billchain {

void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    return true;
  }();
  (void)ready;
}

Digest hash256(ByteView data) {
  ensure_sodium();
  Digest out;
  crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
  return out;
}

}  // namespace billchain
