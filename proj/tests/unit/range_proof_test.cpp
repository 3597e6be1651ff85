#include <gtest/gtest.h>

#include <vector>

#include "billchain/crypto/bigint.hpp"
#include "billchain/crypto/range_proof.hpp"
#include "fixtures.hpp"

namespace billchain {
namespace {

using testing::key_1024;
using testing::test_key;

constexpr uint32_t kBits = 12;

struct Fixture {
  const PaillierKeyPair& k = test_key(256);
  DeterministicRandom rng{21};

  std::pair<Ciphertext, Opening> enc(const mpz_class& m) {
    const Opening o{m, random_unit(rng, k.pub.n)};
    return {encrypt(k.pub, m, o.randomness), o};
  }
};

TEST(RangeProof, ChallengeWidthFollowsKeySize) {
  EXPECT_EQ(range_challenge_bits(key_1024().pub), 128u);
  EXPECT_EQ(range_challenge_bits(test_key(256).pub), 126u);
  EXPECT_EQ(range_challenge_bits(test_key(64).pub), 30u);
}

TEST(RangeProof, CompleteOnBoundaries) {
  Fixture f;
  const mpz_class top = (mpz_class(1) << kBits) - 1;
  for (const mpz_class& m : std::vector<mpz_class>{0, 1, 1000, top}) {
    auto [c, o] = f.enc(m);
    const RangeProof p = prove_range(f.k.pub, c, o, kBits, f.rng);
    EXPECT_EQ(p.bit_ciphertexts.size(), kBits);
    EXPECT_TRUE(verify_range(f.k.pub, c, p, kBits)) << m;
    EXPECT_FALSE(verify_range(f.k.pub, c, p, kBits + 1));
  }
}

TEST(RangeProof, ProverRefusesOutOfRangeOrWrongOpening) {
  Fixture f;
  auto [c, o] = f.enc(mpz_class(1) << kBits);
  EXPECT_THROW(prove_range(f.k.pub, c, o, kBits, f.rng), std::invalid_argument);
  auto [c2, o2] = f.enc(5);
  EXPECT_THROW(prove_range(f.k.pub, c2, Opening{6, o2.randomness}, kBits, f.rng),
               std::invalid_argument);
  EXPECT_THROW(prove_range(f.k.pub, c2, Opening{-1, o2.randomness}, kBits, f.rng),
               std::invalid_argument);
  EXPECT_THROW(prove_range(f.k.pub, c2, o2, 0, f.rng), std::invalid_argument);
  EXPECT_THROW(prove_range(f.k.pub, c2, o2, 300, f.rng), std::invalid_argument);
  EXPECT_FALSE(range_bits_supported(f.k.pub, 256));
  EXPECT_TRUE(range_bits_supported(f.k.pub, 64));
}

TEST(RangeProof, WiderProofDoesNotPassNarrowCheck) {
  Fixture f;
  auto [c, o] = f.enc(mpz_class(1) << kBits);
  const RangeProof wide = prove_range(f.k.pub, c, o, kBits + 1, f.rng);
  EXPECT_TRUE(verify_range(f.k.pub, c, wide, kBits + 1));
  RangeProof relabelled = wide;
  relabelled.bits = kBits;
  relabelled.bit_ciphertexts.pop_back();
  relabelled.bit_proofs.pop_back();
  EXPECT_FALSE(verify_range(f.k.pub, c, relabelled, kBits));
}

TEST(RangeProof, ProofIsBoundToItsCiphertext) {
  Fixture f;
  auto [c, o] = f.enc(77);
  const RangeProof p = prove_range(f.k.pub, c, o, kBits, f.rng);
  auto [c_other, o_other] = f.enc(77);
  EXPECT_FALSE(verify_range(f.k.pub, c_other, p, kBits));
  EXPECT_FALSE(verify_range(f.k.pub, ct_add(f.k.pub, c, c), p, kBits));
}

TEST(RangeProof, FieldMutationsAreRejected) {
  Fixture f;
  auto [c, o] = f.enc(1234);
  const RangeProof p = prove_range(f.k.pub, c, o, kBits, f.rng);
  auto bump = [](mpz_class& v) { v += 1; };
  for (uint32_t j = 0; j < kBits; j += 3) {
    for (int field = 0; field < 7; ++field) {
      RangeProof m = p;
      BitProof& bp = m.bit_proofs[j];
      switch (field) {
        case 0: bump(bp.a0); break;
        case 1: bump(bp.a1); break;
        case 2: bump(bp.e0); break;
        case 3: bump(bp.e1); break;
        case 4: bump(bp.z0); break;
        case 5: bump(bp.z1); break;
        default: bump(m.bit_ciphertexts[j].value); break;
      }
      EXPECT_FALSE(verify_range(f.k.pub, c, m, kBits)) << "bit " << j << " field " << field;
    }
  }
  RangeProof link_a = p, link_z = p;
  bump(link_a.link.a);
  bump(link_z.link.z);
  EXPECT_FALSE(verify_range(f.k.pub, c, link_a, kBits));
  EXPECT_FALSE(verify_range(f.k.pub, c, link_z, kBits));
  RangeProof zeroed = p;
  zeroed.bit_proofs[0].z0 = 0;
  EXPECT_FALSE(verify_range(f.k.pub, c, zeroed, kBits));
  EXPECT_FALSE(verify_range(f.k.pub, Ciphertext{0}, p, kBits));
}

TEST(RangeProof, EncodingRoundTrips) {
  Fixture f;
  auto [c, o] = f.enc(99);
  const RangeProof p = prove_range(f.k.pub, c, o, kBits, f.rng);
  Encoder enc;
  encode(enc, p);
  Decoder dec(enc.bytes());
  EXPECT_EQ(decode_range_proof(dec), p);
  EXPECT_TRUE(dec.at_end());
  Bytes truncated = enc.bytes();
  truncated.pop_back();
  Decoder bad(truncated);
  EXPECT_THROW(decode_range_proof(bad), DecodeError);
}

TEST(RangeProof, PositivityCoversOneThroughTwoToTheL) {
  Fixture f;
  auto [c0, o0] = f.enc(0);
  EXPECT_THROW(prove_positive(f.k.pub, c0, o0, kBits, f.rng), std::invalid_argument);
  const mpz_class top = mpz_class(1) << kBits;
  for (const mpz_class& m : std::vector<mpz_class>{1, top}) {
    auto [c, o] = f.enc(m);
    const RangeProof p = prove_positive(f.k.pub, c, o, kBits, f.rng);
    EXPECT_TRUE(verify_positive(f.k.pub, c, p, kBits)) << m;
    EXPECT_FALSE(verify_range(f.k.pub, c, p, kBits));
  }
  auto [c_over, o_over] = f.enc((mpz_class(1) << kBits) + 1);
  EXPECT_THROW(prove_positive(f.k.pub, c_over, o_over, kBits, f.rng), std::invalid_argument);

  // A plain range proof of zero does not pass as a positivity proof.
  const RangeProof zero_proof = prove_range(f.k.pub, c0, o0, kBits, f.rng);
  EXPECT_FALSE(verify_positive(f.k.pub, c0, zero_proof, kBits));
}

TEST(RangeProof, ProductionKeySmoke) {
  const PaillierKeyPair& k = key_1024();
  DeterministicRandom rng(5);
  const Opening o{123456, random_unit(rng, k.pub.n)};
  const Ciphertext c = encrypt(k.pub, o.amount, o.randomness);
  const RangeProof p = prove_range(k.pub, c, o, 32, rng);
  EXPECT_TRUE(verify_range(k.pub, c, p, 32));
}

TEST(RangeProof, SingleBitAndFullWidth) {
  Fixture f;
  for (int m = 0; m < 2; ++m) {
    auto [c, o] = f.enc(m);
    EXPECT_TRUE(verify_range(f.k.pub, c, prove_range(f.k.pub, c, o, 1, f.rng), 1));
  }
  auto [c2, o2] = f.enc(2);
  EXPECT_THROW(prove_range(f.k.pub, c2, o2, 1, f.rng), std::invalid_argument);

  const PaillierKeyPair& k = key_1024();
  const mpz_class top = mpz_class(1) << 32;
  const Opening o{top, 3};
  EXPECT_THROW(prove_range(k.pub, encrypt(k.pub, top, 3), o, 32, f.rng), std::invalid_argument);
}

}  // namespace
}  // namespace billchain
