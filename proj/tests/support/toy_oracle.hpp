#pragma once

// Independent reference arithmetic on machine integers for tiny moduli.
// Nothing here calls into the library.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace billchain::testing {

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b != 0) {
    const uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  __extension__ using u128 = unsigned __int128;
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Brute force; only meant for moduli in the thousands.
inline uint64_t invmod(uint64_t a, uint64_t m) {
  for (uint64_t x = 1; x < m; ++x) {
    if (mulmod(a % m, x, m) == 1) return x;
  }
  throw std::domain_error("not invertible");
}

// Textbook Paillier with g = n + 1.
struct ToyPaillier {
  uint64_t p, q, n, n2, lambda, mu;

  ToyPaillier(uint64_t p_, uint64_t q_) : p(p_), q(q_), n(p_ * q_), n2(p_ * q_ * p_ * q_) {
    lambda = (p - 1) / gcd_u64(p - 1, q - 1) * (q - 1);
    // L(g^lambda mod n^2) = lambda mod n for g = n + 1.
    mu = invmod(lambda % n, n);
  }

  uint64_t enc(uint64_t m, uint64_t r) const {
    const uint64_t gm = powmod(n + 1, m, n2);
    return mulmod(gm, powmod(r, n, n2), n2);
  }

  uint64_t dec(uint64_t c) const {
    const uint64_t u = powmod(c, lambda, n2);
    return mulmod((u - 1) / n, mu, n);
  }

  std::vector<uint64_t> units() const {
    std::vector<uint64_t> out;
    for (uint64_t r = 1; r < n; ++r) {
      if (gcd_u64(r, n) == 1) out.push_back(r);
    }
    return out;
  }
};

}  // namespace billchain::testing
