#pragma once

// On-disk state of a local network:
//   network.json        witness secret, key/range sizes, batching config
//   actors/<name>.json  user seed and public keys
//   wallets/<name>.json openings of the bills a user holds
//   blocks.dat          the block stream

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "billchain/bench/network.hpp"
#include "billchain/ledger/ledger.hpp"

namespace billchain::cli {

// Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NetworkFile {
  uint32_t key_bits = 0;
  uint32_t range_bits = 0;
  uint32_t max_message_count = 0;
  uint32_t batch_timeout_ms = 0;
  bool test_keys = false;
  mpz_class p;
  mpz_class q;
  Seed s;

  ledger::LedgerConfig ledger_config() const;
};

class DataDir {
 public:
  explicit DataDir(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path blocks_path() const { return root_ / "blocks.dat"; }

  bool has_network() const;
  void write_network(const NetworkFile& net) const;
  NetworkFile read_network() const;

  bool has_actor(const std::string& name) const;
  void write_actor(const std::string& name, const Seed& seed) const;
  Seed read_actor(const std::string& name) const;
  std::vector<std::string> actor_names() const;

  std::vector<bench::Holding> read_wallet(const std::string& name) const;
  void write_wallet(const std::string& name, const std::vector<bench::Holding>& bills) const;

 private:
  std::filesystem::path root_;
};

// Everything a command needs: keys, actors and the recovered ledger.
class Session {
 public:
  explicit Session(DataDir dir);

  bench::LocalNetwork& network() { return *net_; }
  ledger::Ledger& ledger() { return *ledger_; }
  const DataDir& dir() const { return dir_; }
  const ledger::LedgerConfig& config() const { return config_; }
  // Blocks dropped from a corrupt tail while opening, if any.
  const std::optional<ledger::ReplayError>& recovered_from() const { return dropped_; }

  // Throws UsageError for unknown names.
  const protocol::UserKeys& actor(const std::string& name) const;
  std::optional<std::string> name_of(const SigPublicKey& pk) const;

  // Submits and cuts a block right away.
  ledger::TxReceipt commit(protocol::LedgerTx tx);

 private:
  DataDir dir_;
  ledger::LedgerConfig config_;
  std::unique_ptr<bench::LocalNetwork> net_;
  std::map<SigPublicKey, std::string> names_;
  ledger::SystemClock clock_;
  std::unique_ptr<ledger::BlockStore> store_;
  std::unique_ptr<ledger::Ledger> ledger_;
  std::optional<ledger::ReplayError> dropped_;
};

}  // namespace billchain::cli
