#pragma once

#include "billchain/crypto/bytes.hpp"

namespace billchain {

struct DigestTag {};
using Digest = FixedBytes<32, DigestTag>;

// SHA-256.
Digest hash256(ByteView data);

// Idempotent; every module that touches libsodium calls it first.
void ensure_sodium();

}  // namespace billchain
