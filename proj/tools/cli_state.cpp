#include "cli_state.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace billchain::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed " + path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j, bool secret = false) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out.flush()) throw UsageError("cannot write " + tmp.string());
  }
  if (secret) ::chmod(tmp.c_str(), 0600);
  fs::rename(tmp, path);
}

mpz_class hex_to_mpz(const std::string& s) {
  mpz_class v;
  if (s.empty() || v.set_str(s, 16) != 0) throw UsageError("malformed hex integer");
  return v;
}

bool valid_name(const std::string& name) {
  if (name.empty() || name.size() > 64) return false;
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
  }
  return true;
}

fs::path actor_path(const fs::path& root, const std::string& name) {
  if (!valid_name(name)) throw UsageError("invalid actor name '" + name + "'");
  return root / "actors" / (name + ".json");
}

fs::path wallet_path(const fs::path& root, const std::string& name) {
  if (!valid_name(name)) throw UsageError("invalid actor name '" + name + "'");
  return root / "wallets" / (name + ".json");
}

}  // namespace

ledger::LedgerConfig NetworkFile::ledger_config() const {
  ledger::LedgerConfig c;
  c.key_bits = key_bits;
  c.range_bits = range_bits;
  c.max_message_count = max_message_count;
  c.batch_timeout_ms = batch_timeout_ms;
  c.key_mode = test_keys ? KeyMode::kTest : KeyMode::kProduction;
  return c;
}

bool DataDir::has_network() const { return fs::exists(root_ / "network.json"); }

void DataDir::write_network(const NetworkFile& n) const {
  json j{{"key_bits", n.key_bits},
         {"range_bits", n.range_bits},
         {"max_message_count", n.max_message_count},
         {"batch_timeout_ms", n.batch_timeout_ms},
         {"test_keys", n.test_keys},
         {"p", n.p.get_str(16)},
         {"q", n.q.get_str(16)},
         {"s", n.s.hex()}};
  write_json(root_ / "network.json", j, /*secret=*/true);
}

NetworkFile DataDir::read_network() const {
  if (!has_network()) {
    throw UsageError("no network in " + root_.string() + "; run 'keygen --witness' first");
  }
  const json j = read_json(root_ / "network.json");
  try {
    NetworkFile n;
    n.key_bits = j.at("key_bits").get<uint32_t>();
    n.range_bits = j.at("range_bits").get<uint32_t>();
    n.max_message_count = j.at("max_message_count").get<uint32_t>();
    n.batch_timeout_ms = j.at("batch_timeout_ms").get<uint32_t>();
    n.test_keys = j.value("test_keys", false);
    n.p = hex_to_mpz(j.at("p").get<std::string>());
    n.q = hex_to_mpz(j.at("q").get<std::string>());
    n.s = Seed::from_hex_string(j.at("s").get<std::string>());
    return n;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed network.json: ") + e.what());
  }
}

bool DataDir::has_actor(const std::string& name) const {
  return fs::exists(actor_path(root_, name));
}

void DataDir::write_actor(const std::string& name, const Seed& seed) const {
  const protocol::UserKeys keys = protocol::UserKeys::from_seed(seed);
  json j{{"seed", seed.hex()}, {"sig_pk", keys.sig.pub.hex()}, {"enc_pk", keys.enc.pub.hex()}};
  write_json(actor_path(root_, name), j, /*secret=*/true);
}

Seed DataDir::read_actor(const std::string& name) const {
  const fs::path path = actor_path(root_, name);
  if (!fs::exists(path)) throw UsageError("unknown actor '" + name + "'");
  try {
    return Seed::from_hex_string(read_json(path).at("seed").get<std::string>());
  } catch (const json::exception& e) {
    throw UsageError("malformed actor file for " + name + ": " + e.what());
  }
}

std::vector<std::string> DataDir::actor_names() const {
  std::vector<std::string> names;
  const fs::path dir = root_ / "actors";
  if (!fs::exists(dir)) return names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<bench::Holding> DataDir::read_wallet(const std::string& name) const {
  const fs::path path = wallet_path(root_, name);
  std::vector<bench::Holding> out;
  if (!fs::exists(path)) return out;
  const json doc = read_json(path);
  try {
    for (const json& b : doc.at("bills")) {
      bench::Holding h;
      h.id = rht::EBillId::from_hex_string(b.at("id").get<std::string>());
      const Bytes info = from_hex(b.at("info").get<std::string>());
      Decoder dec(info);
      h.info = rht::decode_bill_info(dec);
      dec.expect_end();
      h.opening.amount = mpz_class(b.at("amount").get<std::string>(), 10);
      h.opening.randomness = hex_to_mpz(b.at("randomness").get<std::string>());
      out.push_back(std::move(h));
    }
  } catch (const std::exception& e) {
    throw UsageError("malformed wallet for " + name + ": " + e.what());
  }
  return out;
}

void DataDir::write_wallet(const std::string& name,
                           const std::vector<bench::Holding>& bills) const {
  json arr = json::array();
  for (const bench::Holding& h : bills) {
    arr.push_back({{"id", h.id.hex()},
                   {"info", to_hex(rht::canonical(h.info))},
                   {"amount", h.opening.amount.get_str(10)},
                   {"randomness", h.opening.randomness.get_str(16)}});
  }
  write_json(wallet_path(root_, name), json{{"bills", arr}}, /*secret=*/true);
}

Session::Session(DataDir dir) : dir_(std::move(dir)) {
  const NetworkFile n = dir_.read_network();
  config_ = n.ledger_config();
  try {
    config_.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("network.json: ") + e.what());
  }
  net_ = std::make_unique<bench::LocalNetwork>(
      protocol::WitnessKeys::from_parts(paillier_from_primes(n.p, n.q), n.s), n.range_bits);
  for (const std::string& name : dir_.actor_names()) {
    const protocol::UserKeys& keys = net_->add_user(name, dir_.read_actor(name));
    names_.emplace(keys.sig.pub, name);
  }

  ledger::RecoveryResult rec = ledger::recover_file(dir_.blocks_path(), net_->context(), config_);
  dropped_ = rec.dropped;
  store_ = std::make_unique<ledger::BlockStore>(dir_.blocks_path());
  ledger_ = std::make_unique<ledger::Ledger>(config_, net_->context(), clock_, store_.get(),
                                             std::move(rec.state));
}

const protocol::UserKeys& Session::actor(const std::string& name) const {
  try {
    return net_->user(name);
  } catch (const std::out_of_range&) {
    throw UsageError("unknown actor '" + name + "'");
  }
}

std::optional<std::string> Session::name_of(const SigPublicKey& pk) const {
  auto it = names_.find(pk);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

ledger::TxReceipt Session::commit(protocol::LedgerTx tx) {
  const ledger::TxReceipt submitted = ledger_->submit(std::move(tx));
  if (submitted.status == ledger::TxStatus::kRejectedDuplicate) return submitted;
  ledger_->drain();
  return *ledger_->receipt(submitted.tx_id);
}

}  // namespace billchain::cli
