#pragma once

// Sender, receiver and witness roles of the split workflow.
//
//   sender   build_split_tx: encrypts outputs with constrained randomness,
//            attaches positivity proofs, signs, seals one parcel per receiver
//   receiver receiver_check: opens its parcel, checks the sender signature
//            and its opening, confirms the amount with the witness through a
//            blinded equality query, then countersigns
//   witness  sole issuer of root bills and the only holder of the Paillier
//            secret; answers authenticated equality queries

#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "billchain/protocol/messages.hpp"

namespace billchain::protocol {

enum class ProtocolErrc {
  kNotOwner,
  kNoRecipients,
  kSumMismatch,
  kAmountOutOfRange,
  kRangeParams,
  kOpeningMismatch,
};

class ProtocolError : public std::invalid_argument {
 public:
  ProtocolError(ProtocolErrc code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}
  ProtocolErrc code() const { return code_; }

 private:
  ProtocolErrc code_;
};

struct UserKeys {
  SigKeyPair sig;
  EncKeyPair enc;

  // Both key pairs derive from one 32-byte seed.
  static UserKeys from_seed(const Seed& seed);
  static UserKeys generate(RandomSource& rng) { return from_seed(rng.fixed<Seed>()); }
};

// The witness secret is (s, k = H(s)) next to the Paillier keys: s seeds the
// signing key, k seeds the envelope key.
struct WitnessKeys {
  PaillierKeyPair paillier;
  Seed s;
  SigKeyPair sig;
  EncKeyPair enc;

  static WitnessKeys from_parts(PaillierKeyPair paillier, const Seed& s);
};

// ---------------------------------------------------------------------------
// Sender

struct Recipient {
  SigPublicKey sig_pk;
  EncPublicKey enc_pk;
  mpz_class amount;
};

struct AddressedEnvelope {
  SigPublicKey receiver;
  uint32_t output_index = 0;
  Envelope envelope;
};

struct SplitProposal {
  SignedTx stx;  // sender-signed, no receiver signatures yet
  std::vector<AddressedEnvelope> envelopes;
};

// Throws ProtocolError before producing any ciphertext when the sender does
// not own the bill, amounts fall outside [1, 2^range_bits] or do not sum to
// the bill amount, or the opening does not reproduce the bill ciphertext.
SplitProposal build_split_tx(const UserKeys& sender, const rht::EBillId& bill_id,
                             const rht::BillInfo& bill_info, const Opening& bill_opening,
                             std::span<const Recipient> recipients, const PaillierPublicKey& pk_w,
                             uint32_t range_bits, RandomSource& rng);

// Adds a receiver countersignature; used by whoever collects them.
void attach_countersignature(SignedTx& stx, const SigPublicKey& receiver, const Signature& sig);

// ---------------------------------------------------------------------------
// Witness

struct IssueResult {
  IssueTx tx;
  rht::EBillId id;
  Opening opening;
  Envelope owner_envelope;  // sealed IssueParcel
};

struct AuditEntry {
  SigPublicKey requester;
  Digest query_hash;
  bool answered = false;
};

class WitnessService {
 public:
  WitnessService(WitnessKeys keys, uint32_t range_bits);

  const PaillierPublicKey& public_key() const { return keys_.paillier.pub; }
  const SigPublicKey& sig_public_key() const { return keys_.sig.pub; }
  const EncPublicKey& enc_public_key() const { return keys_.enc.pub; }
  uint32_t range_bits() const { return range_bits_; }

  void register_user(const SigPublicKey& user);
  bool is_registered(const SigPublicKey& user) const;

  // Throws ProtocolError(kAmountOutOfRange) unless amount is in [1, 2^L].
  IssueResult issue(const SigPublicKey& owner, const EncPublicKey& owner_enc,
                    const mpz_class& amount, RandomSource& rng) const;

  // Refuses (nullopt) unsigned queries and unregistered requesters. Every
  // call is recorded in the audit log.
  std::optional<EqualityAnswer> answer(const SignedEqualityQuery& query);

  std::vector<AuditEntry> audit_log() const;

 private:
  WitnessKeys keys_;
  uint32_t range_bits_;
  mutable std::mutex mu_;
  std::unordered_set<SigPublicKey, FixedBytesHash> registered_;
  std::vector<AuditEntry> audit_;
};

// Opens an IssueParcel and checks its opening reproduces the ciphertext.
// Throws EnvelopeError / DecodeError / ProtocolError(kOpeningMismatch).
IssueParcel open_issue_parcel(const UserKeys& owner, const PaillierPublicKey& pk_w,
                              const Envelope& envelope);

// ---------------------------------------------------------------------------
// Receiver

class WitnessChannel {
 public:
  virtual ~WitnessChannel() = default;
  // nullopt means the witness could not be reached or refused.
  virtual std::optional<EqualityAnswer> ask(const SignedEqualityQuery& query) = 0;
};

class LocalWitnessChannel final : public WitnessChannel {
 public:
  explicit LocalWitnessChannel(WitnessService& witness) : witness_(witness) {}
  std::optional<EqualityAnswer> ask(const SignedEqualityQuery& query) override {
    return witness_.answer(query);
  }

 private:
  WitnessService& witness_;
};

enum class ReceiverErrc {
  kAccepted,
  kEnvelope,
  kMalformedParcel,
  kWrongReceiver,
  kBadSenderSignature,
  kOpeningMismatch,
  kWitnessUnreachable,
  kEqualityFailed,
};

const char* to_string(ReceiverErrc code);

struct ReceiverDecision {
  ReceiverErrc status = ReceiverErrc::kEnvelope;
  std::optional<ReceiverParcel> parcel;
  std::optional<Signature> countersignature;

  bool accepted() const { return status == ReceiverErrc::kAccepted; }
};

SignedEqualityQuery sign_equality_query(const UserKeys& requester, const EqualityQuery& query);

ReceiverDecision receiver_check(const UserKeys& receiver, const Envelope& envelope,
                                const mpz_class& expected_amount, const PaillierPublicKey& pk_w,
                                WitnessChannel& witness, RandomSource& rng);

}  // namespace billchain::protocol
