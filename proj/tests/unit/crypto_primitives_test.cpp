#include <gtest/gtest.h>

#include <set>

#include "billchain/crypto/bigint.hpp"
#include "billchain/crypto/encoding.hpp"
#include "billchain/crypto/envelope.hpp"
#include "billchain/crypto/hash.hpp"
#include "billchain/crypto/random.hpp"
#include "billchain/crypto/signature.hpp"

namespace billchain {
namespace {

TEST(Hex, RoundTripAndRejects) {
  const Bytes b = {0x00, 0x01, 0xab, 0xff};
  EXPECT_EQ(to_hex(b), "0001abff");
  EXPECT_EQ(from_hex("0001ABff"), b);
  EXPECT_THROW(from_hex("abc"), std::invalid_argument);
  EXPECT_THROW(from_hex("zz"), std::invalid_argument);
}

TEST(Hash, KnownVectors) {
  EXPECT_EQ(hash256({}).hex(), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(hash256(as_bytes("abc")).hex(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Encoding, IntegersAreMinimalBigEndian) {
  Encoder enc;
  enc.put_int(0).put_int(1).put_int(0x1234).put_uint(0).put_uint(255);
  const Bytes expected = {0, 0, 0, 0,                 //
                          0, 0, 0, 1, 0x01,           //
                          0, 0, 0, 2, 0x12, 0x34,     //
                          0, 0, 0, 0,                 //
                          0, 0, 0, 1, 0xff};
  EXPECT_EQ(enc.bytes(), expected);

  Decoder dec(expected);
  EXPECT_EQ(dec.get_int(), 0);
  EXPECT_EQ(dec.get_int(), 1);
  EXPECT_EQ(dec.get_int(), 0x1234);
  EXPECT_EQ(dec.get_uint(), 0u);
  EXPECT_EQ(dec.get_uint(), 255u);
  EXPECT_NO_THROW(dec.expect_end());
}

TEST(Encoding, RoundTripsLargeValues) {
  DeterministicRandom rng(3);
  for (int i = 0; i < 50; ++i) {
    const mpz_class v = random_bits(rng, 1 + 37 * i);
    const Bytes raw = rng.bytes(8);
    uint64_t u = 0;
    for (uint8_t b : raw) u = (u << 8) | b;
    u >>= (i % 64);
    Encoder enc;
    enc.put_int(v).put_uint(u).put_string("label").put_count(7);
    Decoder dec(enc.bytes());
    EXPECT_EQ(dec.get_int(), v);
    EXPECT_EQ(dec.get_uint(), u);
    EXPECT_EQ(dec.get_string(), "label");
    EXPECT_EQ(dec.get_count(), 7u);
    EXPECT_TRUE(dec.at_end());
  }
  Encoder enc;
  enc.put_uint(UINT64_MAX);
  Decoder dec(enc.bytes());
  EXPECT_EQ(dec.get_uint(), UINT64_MAX);
}

TEST(Encoding, RejectsNonCanonicalInput) {
  const Bytes leading_zero = {0, 0, 0, 2, 0x00, 0x01};
  EXPECT_THROW(Decoder(leading_zero).get_int(), DecodeError);
  EXPECT_THROW(Decoder(leading_zero).get_uint(), DecodeError);

  const Bytes short_prefix = {0, 0, 1};
  EXPECT_THROW(Decoder(short_prefix).get_bytes(), DecodeError);

  const Bytes short_body = {0, 0, 0, 4, 1, 2};
  EXPECT_THROW(Decoder(short_body).get_bytes(), DecodeError);

  const Bytes too_wide = {0, 0, 0, 9, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_THROW(Decoder(too_wide).get_uint(), DecodeError);

  const Bytes over_limit = {0, 0, 0, 3, 1, 2, 3};
  EXPECT_THROW(Decoder(over_limit).get_bytes(2), DecodeError);

  const Bytes trailing = {0, 0, 0, 0, 0xee};
  Decoder dec(trailing);
  EXPECT_EQ(dec.get_int(), 0);
  EXPECT_THROW(dec.expect_end(), DecodeError);
}

TEST(Encoding, NegativeIntegersAreRefused) {
  Encoder enc;
  EXPECT_THROW(enc.put_int(-1), std::invalid_argument);
}

TEST(BigInt, HelpersAgreeWithDefinitions) {
  EXPECT_EQ(mpz_to_bytes(0), Bytes{});
  EXPECT_EQ(mpz_to_bytes(256), (Bytes{1, 0}));
  EXPECT_EQ(mpz_from_bytes(Bytes{0, 0, 7}), 7);
  EXPECT_EQ(mod_pow(3, 200, 1000), 1);  // 3^100 = 1 (mod 1000), so 3^200 too
  EXPECT_EQ(mod_inverse(3, 7), 5);
  EXPECT_THROW(mod_inverse(6, 9), std::domain_error);
  EXPECT_EQ(mod_floor(-3, 7), 4);
  EXPECT_TRUE(coprime(8, 15));
  EXPECT_FALSE(coprime(6, 15));
  EXPECT_EQ(bit_length(0), 0u);
  EXPECT_EQ(bit_length(255), 8u);
  EXPECT_EQ(bit_length(256), 9u);
}

TEST(Random, DeterministicStreamsRepeatAndDiverge) {
  DeterministicRandom a(42), b(42), c(43);
  const Bytes x = a.bytes(64);
  EXPECT_EQ(x, b.bytes(64));
  EXPECT_NE(x, c.bytes(64));
  EXPECT_NE(a.bytes(64), x);  // the stream moves on

  const DeterministicRandom root(9);
  DeterministicRandom f1 = root.fork(1), f1b = root.fork(1), f2 = root.fork(2);
  const Bytes y = f1.bytes(32);
  EXPECT_EQ(y, f1b.bytes(32));
  EXPECT_NE(y, f2.bytes(32));
}

TEST(Random, SamplersRespectBounds) {
  DeterministicRandom rng(5);
  std::set<long> seen;
  for (int i = 0; i < 2000; ++i) {
    const mpz_class v = random_below(rng, 10);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, 10);
    seen.insert(v.get_si());
    const mpz_class u = random_unit(rng, 35);
    ASSERT_GT(u, 0);
    ASSERT_LT(u, 35);
    ASSERT_TRUE(coprime(u, 35));
    ASSERT_LT(random_bits(rng, 13), 1 << 13);
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(Signature, SignVerifyAndRejectTampering) {
  Seed seed;
  seed.bytes.fill(1);
  const SigKeyPair kp = SigKeyPair::from_seed(seed);
  EXPECT_EQ(SigKeyPair::from_seed(seed).pub, kp.pub);

  const Bytes msg = {1, 2, 3};
  const Signature sig = sign(kp.sec, msg);
  EXPECT_EQ(sign(kp.sec, msg), sig);
  EXPECT_TRUE(verify_sig(kp.pub, msg, sig));

  Bytes other = msg;
  other[0] ^= 1;
  EXPECT_FALSE(verify_sig(kp.pub, other, sig));
  Signature bad = sig;
  bad.bytes[10] ^= 0x40;
  EXPECT_FALSE(verify_sig(kp.pub, msg, bad));

  DeterministicRandom rng(2);
  EXPECT_FALSE(verify_sig(SigKeyPair::generate(rng).pub, msg, sig));
  SigPublicKey garbage;
  garbage.bytes.fill(0xff);
  EXPECT_FALSE(verify_sig(garbage, msg, sig));
}

TEST(Envelope, OnlyTheRecipientOpens) {
  DeterministicRandom rng(11);
  const EncKeyPair alice = EncKeyPair::generate(rng);
  const EncKeyPair bob = EncKeyPair::generate(rng);
  const Bytes secret = {9, 8, 7, 6, 5};

  const Envelope env = seal_for(alice.pub, secret, rng);
  EXPECT_EQ(open_envelope(alice, env), secret);
  EXPECT_THROW(open_envelope(bob, env), EnvelopeError);

  for (size_t i = 0; i < env.data.size(); i += 7) {
    Envelope tampered = env;
    tampered.data[i] ^= 0x01;
    EXPECT_THROW(open_envelope(alice, tampered), EnvelopeError) << "byte " << i;
  }
  Envelope truncated = env;
  truncated.data.resize(40);
  EXPECT_THROW(open_envelope(alice, truncated), EnvelopeError);
  EXPECT_THROW(open_envelope(alice, Envelope{}), EnvelopeError);

  EXPECT_NE(seal_for(alice.pub, secret, rng), env);  // fresh ephemeral key each time
}

}  // namespace
}  // namespace billchain
