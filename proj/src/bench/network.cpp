#include "billchain/bench/network.hpp"

#include <chrono>
#include <stdexcept>

namespace billchain::bench {

bool SplitOutcome::all_accepted() const {
  for (const protocol::ReceiverDecision& d : decisions) {
    if (!d.accepted()) return false;
  }
  return !decisions.empty();
}

LocalNetwork::LocalNetwork(protocol::WitnessKeys keys, uint32_t range_bits)
    : witness_(std::make_unique<protocol::WitnessService>(std::move(keys), range_bits)) {}

protocol::WitnessKeys LocalNetwork::make_witness_keys(uint32_t key_bits, KeyMode mode,
                                                      RandomSource& rng) {
  PaillierKeyPair paillier = keygen_paillier(key_bits, rng, mode);
  const Seed s = rng.fixed<Seed>();
  return protocol::WitnessKeys::from_parts(std::move(paillier), s);
}

protocol::VerifyContext LocalNetwork::context() const {
  return protocol::VerifyContext{witness_->public_key(), witness_->sig_public_key(),
                                 witness_->range_bits()};
}

const protocol::UserKeys& LocalNetwork::add_user(const std::string& name, const Seed& seed) {
  auto [it, inserted] = users_.try_emplace(name, protocol::UserKeys::from_seed(seed));
  if (inserted) witness_->register_user(it->second.sig.pub);
  return it->second;
}

const protocol::UserKeys& LocalNetwork::user(const std::string& name) const {
  auto it = users_.find(name);
  if (it == users_.end()) throw std::out_of_range("unknown user " + name);
  return it->second;
}

std::vector<std::string> LocalNetwork::user_names() const {
  std::vector<std::string> out;
  for (const auto& [name, keys] : users_) out.push_back(name);
  return out;
}

IssueOutcome LocalNetwork::issue(const std::string& owner, const mpz_class& amount,
                                 RandomSource& rng) const {
  const protocol::UserKeys& keys = user(owner);
  protocol::IssueResult r = witness_->issue(keys.sig.pub, keys.enc.pub, amount, rng);
  const protocol::IssueParcel parcel =
      protocol::open_issue_parcel(keys, witness_->public_key(), r.owner_envelope);
  return IssueOutcome{std::move(r.tx), Holding{parcel.id, parcel.info, parcel.opening}};
}

SplitOutcome LocalNetwork::split(const std::string& sender, const Holding& bill,
                                 const std::vector<std::pair<std::string, mpz_class>>& outputs,
                                 RandomSource& rng) {
  std::vector<protocol::Recipient> recipients;
  for (const auto& [name, amount] : outputs) {
    const protocol::UserKeys& r = user(name);
    recipients.push_back(protocol::Recipient{r.sig.pub, r.enc.pub, amount});
  }
  const PaillierPublicKey& pk = witness_->public_key();
  protocol::SplitProposal proposal = protocol::build_split_tx(
      user(sender), bill.id, bill.info, bill.opening, recipients, pk, witness_->range_bits(), rng);

  SplitOutcome out;
  out.stx = std::move(proposal.stx);
  protocol::LocalWitnessChannel channel(*witness_);
  const auto t0 = std::chrono::steady_clock::now();
  for (const protocol::AddressedEnvelope& env : proposal.envelopes) {
    const auto& [name, amount] = outputs.at(env.output_index);
    protocol::ReceiverDecision d =
        protocol::receiver_check(user(name), env.envelope, amount, pk, channel, rng);
    if (d.accepted()) protocol::attach_countersignature(out.stx, env.receiver, *d.countersignature);
    out.decisions.push_back(std::move(d));
  }
  out.receiver_check_us = std::chrono::duration_cast<std::chrono::microseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();

  const std::vector<rht::BillInfo> infos = protocol::child_infos(out.stx.tx);
  for (size_t i = 0; i < infos.size(); ++i) {
    Holding h{rht::compute_child_id(bill.id, infos[i]), infos[i], Opening{}};
    for (const protocol::ReceiverDecision& d : out.decisions) {
      if (d.parcel && d.parcel->output_index == i) h.opening = d.parcel->opening;
    }
    out.children.push_back(std::move(h));
  }
  return out;
}

}  // namespace billchain::bench
