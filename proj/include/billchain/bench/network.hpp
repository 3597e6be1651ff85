#pragma once

// In-process actors: one witness and named users, wired together so a split
// runs the full sender -> receivers -> witness round trip.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "billchain/protocol/miner.hpp"
#include "billchain/protocol/roles.hpp"

namespace billchain::bench {

// A bill as its owner knows it.
struct Holding {
  rht::EBillId id;
  rht::BillInfo info;
  Opening opening;
};

struct IssueOutcome {
  protocol::IssueTx tx;
  Holding holding;
};

struct SplitOutcome {
  protocol::SignedTx stx;  // countersigned by every receiver that accepted
  std::vector<protocol::ReceiverDecision> decisions;  // one per output
  std::vector<Holding> children;  // valid once stx is applied
  int64_t receiver_check_us = 0;  // time spent in receiver-witness checks

  bool all_accepted() const;
};

class LocalNetwork {
 public:
  LocalNetwork(protocol::WitnessKeys keys, uint32_t range_bits);

  // Deterministic witness keys: Paillier primes and s both come from `rng`.
  static protocol::WitnessKeys make_witness_keys(uint32_t key_bits, KeyMode mode,
                                                 RandomSource& rng);

  protocol::WitnessService& witness() { return *witness_; }
  const protocol::WitnessService& witness() const { return *witness_; }
  protocol::VerifyContext context() const;

  // Registers a user with the witness. Re-adding a name replaces nothing and
  // returns the existing keys.
  const protocol::UserKeys& add_user(const std::string& name, const Seed& seed);
  // Throws std::out_of_range for unknown names.
  const protocol::UserKeys& user(const std::string& name) const;
  std::vector<std::string> user_names() const;

  // Thread-safe once all users are added.
  IssueOutcome issue(const std::string& owner, const mpz_class& amount, RandomSource& rng) const;
  SplitOutcome split(const std::string& sender, const Holding& bill,
                     const std::vector<std::pair<std::string, mpz_class>>& outputs,
                     RandomSource& rng);

 private:
  std::unique_ptr<protocol::WitnessService> witness_;
  std::map<std::string, protocol::UserKeys> users_;
};

}  // namespace billchain::bench
