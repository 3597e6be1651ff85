// billchain: local network front end and benchmark harness.
//
// Exit codes: 0 ok, 1 rejected by the protocol or a failed verification,
// 2 usage error or unmet precondition.
//
// Settings resolve as: command line, then BILLCHAIN_* environment variables,
// then the JSON config file (--config or BILLCHAIN_CONFIG), then defaults.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "billchain/bench/bench.hpp"
#include "cli_state.hpp"

namespace billchain::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

struct Settings {
  std::string data_dir = "billchain-data";
  bool data_dir_set = false;
  uint32_t key_bits = 1024;
  uint32_t range_bits = 32;
  uint32_t max_message_count = 16;
  uint32_t batch_timeout_ms = 2000;
  uint32_t tx_count = 2000;
  std::string workload = "issue";
  std::optional<uint64_t> seed;
  uint32_t workers = 4;
  uint32_t peers = 2;
};

std::optional<std::string> config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.starts_with("--config=")) return std::string(a.substr(9));
  }
  if (const char* env = std::getenv("BILLCHAIN_CONFIG")) return env;
  return std::nullopt;
}

void load_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "data-dir") {
        s.data_dir = value.get<std::string>();
        s.data_dir_set = true;
      } else if (key == "key-bits") {
        s.key_bits = value.get<uint32_t>();
      } else if (key == "range-bits") {
        s.range_bits = value.get<uint32_t>();
      } else if (key == "max-message-count") {
        s.max_message_count = value.get<uint32_t>();
      } else if (key == "batch-timeout-ms") {
        s.batch_timeout_ms = value.get<uint32_t>();
      } else if (key == "tx-count") {
        s.tx_count = value.get<uint32_t>();
      } else if (key == "workload") {
        s.workload = value.get<std::string>();
      } else if (key == "seed") {
        s.seed = value.get<uint64_t>();
      } else if (key == "workers") {
        s.workers = value.get<uint32_t>();
      } else if (key == "peers") {
        s.peers = value.get<uint32_t>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError("bad config value: " + std::string(e.what()));
  }
}

// Ordered key/value record printed as "key: value" lines or one JSON object.
class Record {
 public:
  template <typename T>
  void add(const std::string& key, T&& value) {
    fields_.emplace_back(key, json(std::forward<T>(value)));
  }

  void print(std::ostream& out, bool as_json) const {
    if (as_json) {
      json j = json::object();
      for (const auto& [k, v] : fields_) j[k] = v;
      out << j.dump() << '\n';
      return;
    }
    for (const auto& [k, v] : fields_) {
      if (v.is_array()) {
        for (size_t i = 0; i < v.size(); ++i) out << k << '[' << i << "]: " << text(v[i]) << '\n';
      } else {
        out << k << ": " << text(v) << '\n';
      }
    }
  }

 private:
  static std::string text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_object()) {
      std::string s;
      for (const auto& [k, x] : v.items()) {
        if (!s.empty()) s += ' ';
        s += k + '=' + text(x);
      }
      return s;
    }
    return v.dump();
  }

  std::vector<std::pair<std::string, json>> fields_;
};

std::unique_ptr<RandomSource> make_rng(const Settings& s, std::string_view label) {
  if (!s.seed) return std::make_unique<SystemRandom>();
  Encoder enc;
  enc.put_uint(*s.seed);
  enc.put_string(label);
  return std::make_unique<DeterministicRandom>(hash256(enc.bytes()).view());
}

mpz_class parse_amount(const std::string& text) {
  mpz_class v;
  if (text.empty() || v.set_str(text, 10) != 0) throw UsageError("invalid amount '" + text + "'");
  return v;
}

rht::EBillId parse_bill_id(const std::string& text) {
  try {
    return rht::EBillId::from_hex_string(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("invalid bill id '" + text + "'");
  }
}

std::string owner_label(const Session& session, const SigPublicKey& pk) {
  return session.name_of(pk).value_or(pk.hex());
}

void add_receipt(Record& rec, const ledger::TxReceipt& r) {
  rec.add("tx", r.tx_id.hex());
  rec.add("status", ledger::to_string(r.status));
  if (r.height) rec.add("height", *r.height);
  if (r.report && !r.report->accepted) {
    rec.add("failing_step", *r.report->failing_step);
    rec.add("reason", protocol::to_string(r.report->reason));
  }
}

int exit_for(const ledger::TxReceipt& r) {
  return r.status == ledger::TxStatus::kCommitted ? kExitOk : kExitRejected;
}

// ---------------------------------------------------------------------------

int cmd_keygen_witness(const Settings& s, bool force, bool test_keys, bool as_json) {
  DataDir dir(s.data_dir);
  if (dir.has_network() && !force) {
    throw UsageError("network already exists in " + s.data_dir + " (use --force to replace)");
  }
  const KeyMode mode = test_keys ? KeyMode::kTest : KeyMode::kProduction;
  NetworkFile net;
  net.key_bits = s.key_bits;
  net.range_bits = s.range_bits;
  net.max_message_count = s.max_message_count;
  net.batch_timeout_ms = s.batch_timeout_ms;
  net.test_keys = test_keys;
  try {
    net.ledger_config().validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto rng = make_rng(s, "witness");
  const protocol::WitnessKeys keys = bench::LocalNetwork::make_witness_keys(s.key_bits, mode, *rng);
  if (!range_bits_supported(keys.paillier.pub, s.range_bits) ||
      !range_params_fit(keys.paillier.pub, s.range_bits, 2)) {
    throw UsageError("range_bits too large for this key");
  }
  net.p = keys.paillier.sec.p;
  net.q = keys.paillier.sec.q;
  net.s = keys.s;
  if (force) {
    // Old blocks and wallets are meaningless under new keys.
    fs::remove(dir.blocks_path());
    fs::remove_all(dir.root() / "wallets");
  }
  dir.write_network(net);

  Record rec;
  rec.add("witness_sig_pk", keys.sig.pub.hex());
  rec.add("witness_enc_pk", keys.enc.pub.hex());
  rec.add("key_bits", s.key_bits);
  rec.add("range_bits", s.range_bits);
  rec.add("max_message_count", s.max_message_count);
  rec.add("batch_timeout_ms", s.batch_timeout_ms);
  rec.print(std::cout, as_json);
  return kExitOk;
}

int cmd_keygen_actor(const Settings& s, const std::string& name, bool force, bool as_json) {
  DataDir dir(s.data_dir);
  if (dir.has_actor(name) && !force) throw UsageError("actor '" + name + "' already exists");
  auto rng = make_rng(s, "actor/" + name);
  const Seed seed = rng->fixed<Seed>();
  dir.write_actor(name, seed);
  const protocol::UserKeys keys = protocol::UserKeys::from_seed(seed);
  Record rec;
  rec.add("actor", name);
  rec.add("sig_pk", keys.sig.pub.hex());
  rec.add("enc_pk", keys.enc.pub.hex());
  rec.print(std::cout, as_json);
  return kExitOk;
}

int cmd_issue(const Settings& s, const std::string& to, const std::string& amount_text,
              bool as_json) {
  Session session(DataDir(s.data_dir));
  session.actor(to);
  const mpz_class amount = parse_amount(amount_text);
  auto rng = make_rng(s, "issue");
  bench::IssueOutcome o = session.network().issue(to, amount, *rng);
  const ledger::TxReceipt r = session.commit(o.tx);
  if (r.status == ledger::TxStatus::kCommitted) {
    std::vector<bench::Holding> wallet = session.dir().read_wallet(to);
    wallet.push_back(o.holding);
    session.dir().write_wallet(to, wallet);
  }
  Record rec;
  add_receipt(rec, r);
  rec.add("bill", o.holding.id.hex());
  rec.add("owner", to);
  rec.add("amount", amount.get_str());
  rec.print(std::cout, as_json);
  return exit_for(r);
}

int run_split(const Settings& s, const std::string& from, const std::string& bill_text,
              const std::vector<std::pair<std::string, mpz_class>>& outputs, bool as_json) {
  Session session(DataDir(s.data_dir));
  session.actor(from);
  for (const auto& [name, amount] : outputs) session.actor(name);
  const rht::EBillId bill_id = parse_bill_id(bill_text);

  std::vector<bench::Holding> sender_wallet = session.dir().read_wallet(from);
  auto held = std::find_if(sender_wallet.begin(), sender_wallet.end(),
                           [&](const bench::Holding& h) { return h.id == bill_id; });
  if (held == sender_wallet.end()) throw UsageError(from + " holds no bill " + bill_text);

  auto rng = make_rng(s, "split/" + bill_text);
  bench::SplitOutcome o = session.network().split(from, *held, outputs, *rng);

  Record rec;
  if (!o.all_accepted()) {
    rec.add("status", "refused-by-receiver");
    for (size_t i = 0; i < o.decisions.size(); ++i) {
      if (!o.decisions[i].accepted()) {
        rec.add("receiver", outputs[i].first);
        rec.add("receiver_status", protocol::to_string(o.decisions[i].status));
        break;
      }
    }
    rec.print(std::cout, as_json);
    return kExitRejected;
  }

  const ledger::TxReceipt r = session.commit(o.stx);
  add_receipt(rec, r);
  rec.add("bill", bill_id.hex());
  if (r.status == ledger::TxStatus::kCommitted) {
    sender_wallet.erase(held);
    session.dir().write_wallet(from, sender_wallet);
    json children = json::array();
    for (size_t i = 0; i < o.children.size(); ++i) {
      const std::string& owner = outputs[i].first;
      std::vector<bench::Holding> wallet = session.dir().read_wallet(owner);
      wallet.push_back(o.children[i]);
      session.dir().write_wallet(owner, wallet);
      children.push_back(json{{"id", o.children[i].id.hex()},
                              {"owner", owner},
                              {"amount", o.children[i].opening.amount.get_str()}});
    }
    rec.add("outputs", children);
  }
  rec.print(std::cout, as_json);
  return exit_for(r);
}

int cmd_split(const Settings& s, const std::string& from, const std::string& bill,
              const std::vector<std::string>& to, bool as_json) {
  std::vector<std::pair<std::string, mpz_class>> outputs;
  for (const std::string& spec : to) {
    const size_t colon = spec.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw UsageError("--to expects name:amount, got '" + spec + "'");
    }
    outputs.emplace_back(spec.substr(0, colon), parse_amount(spec.substr(colon + 1)));
  }
  return run_split(s, from, bill, outputs, as_json);
}

int cmd_transfer(const Settings& s, const std::string& from, const std::string& bill,
                 const std::string& to, bool as_json) {
  const std::vector<bench::Holding> wallet = DataDir(s.data_dir).read_wallet(from);
  const rht::EBillId id = parse_bill_id(bill);
  auto held = std::find_if(wallet.begin(), wallet.end(),
                           [&](const bench::Holding& h) { return h.id == id; });
  if (held == wallet.end()) throw UsageError(from + " holds no bill " + bill);
  return run_split(s, from, bill, {{to, held->opening.amount}}, as_json);
}

int cmd_query(const Settings& s, const std::string& bill, const std::string& owner,
              std::optional<uint64_t> height, bool as_json) {
  const int chosen = !bill.empty() + !owner.empty() + height.has_value();
  if (chosen != 1) throw UsageError("query takes exactly one of --bill, --owner, --height");
  Session session(DataDir(s.data_dir));
  Record rec;
  if (!bill.empty()) {
    ledger::BillView v;
    try {
      v = session.ledger().query_bill(parse_bill_id(bill));
    } catch (const ledger::LedgerError& e) {
      throw UsageError(e.what());
    }
    const std::string owner_name = owner_label(session, v.info.owner);
    rec.add("bill", v.id.hex());
    rec.add("status", v.spent ? "spent" : "unspent");
    rec.add("owner", owner_name);
    rec.add("depth", v.info.path.size());
    if (session.name_of(v.info.owner)) {
      for (const bench::Holding& h : session.dir().read_wallet(owner_name)) {
        if (h.id == v.id) rec.add("amount", h.opening.amount.get_str());
      }
    }
    json children = json::array();
    for (const rht::EBillId& c : v.children) children.push_back(c.hex());
    if (!children.empty()) rec.add("children", children);
  } else if (!owner.empty()) {
    const SigPublicKey pk = session.actor(owner).sig.pub;
    const std::vector<bench::Holding> wallet = session.dir().read_wallet(owner);
    const rht::RhtForest forest = session.ledger().forest_snapshot();
    json bills = json::array();
    for (const rht::EBillId& id : forest.leaves()) {
      if (forest.owner_of(id) != pk) continue;
      json b{{"id", id.hex()}};
      for (const bench::Holding& h : wallet) {
        if (h.id == id) b["amount"] = h.opening.amount.get_str();
      }
      bills.push_back(b);
    }
    rec.add("owner", owner);
    rec.add("unspent", bills.size());
    rec.add("bills", bills);
  } else {
    ledger::Block b;
    try {
      b = session.ledger().query_chain(*height);
    } catch (const ledger::LedgerError& e) {
      throw UsageError(e.what());
    }
    rec.add("height", b.height);
    rec.add("block_hash", b.block_hash.hex());
    rec.add("prev_hash", b.prev_hash.hex());
    rec.add("timestamp_ms", b.timestamp_ms);
    json txs = json::array();
    for (const protocol::LedgerTx& tx : b.txs) txs.push_back(protocol::tx_hash(tx).hex());
    rec.add("txs", txs);
  }
  rec.print(std::cout, as_json);
  return kExitOk;
}

int cmd_verify_forest(const Settings& s, const std::string& path, bool as_json) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  rht::RhtForest forest;
  try {
    forest = rht::RhtForest::import_text(buf.str());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed forest export: ") + e.what());
  }
  json failing = json::array();
  for (const rht::EBillId& id : forest.depth_first()) {
    if (!forest.verify_path(forest.find(id)->info, id)) failing.push_back(id.hex());
  }
  Record rec;
  rec.add("nodes", forest.size());
  if (!failing.empty()) {
    rec.add("status", "failed");
    rec.add("failing_step", 3);
    rec.add("reason", protocol::to_string(protocol::VerifyCode::kPathMismatch));
    rec.add("failing_bills", failing);
    rec.print(std::cout, as_json);
    return kExitRejected;
  }
  // Lineage is intact; conservation is then the balance check.
  if (s.data_dir_set || DataDir(s.data_dir).has_network()) {
    const NetworkFile net = DataDir(s.data_dir).read_network();
    const PaillierKeyPair keys = paillier_from_primes(net.p, net.q);
    if (const auto bad = forest.find_conservation_violation(keys.pub)) {
      rec.add("status", "failed");
      rec.add("failing_step", 5);
      rec.add("reason", protocol::to_string(protocol::VerifyCode::kBalanceMismatch));
      rec.add("failing_bills", json::array({bad->hex()}));
      rec.print(std::cout, as_json);
      return kExitRejected;
    }
  }
  rec.add("status", "ok");
  rec.print(std::cout, as_json);
  return kExitOk;
}

int cmd_verify_chain(const Settings& s, bool as_json) {
  DataDir dir(s.data_dir);
  const NetworkFile net = dir.read_network();
  bench::LocalNetwork network(
      protocol::WitnessKeys::from_parts(paillier_from_primes(net.p, net.q), net.s),
      net.range_bits);
  const protocol::VerifyContext ctx = network.context();
  Record rec;
  try {
    const ledger::ChainState state =
        ledger::replay(ledger::BlockStore::read_stream(dir.blocks_path()), ctx, net.ledger_config());
    const bool links = ledger::verify_chain_links(state.chain, ctx);
    const auto violation = state.forest.find_conservation_violation(ctx.pk_w);
    rec.add("height", state.chain.size());
    rec.add("bills", state.forest.size());
    rec.add("chain_links", links ? "ok" : "broken");
    rec.add("conservation", violation ? "violated at " + violation->hex() : "ok");
    rec.add("status", links && !violation ? "ok" : "failed");
    rec.print(std::cout, as_json);
    return links && !violation ? kExitOk : kExitRejected;
  } catch (const ledger::ReplayError& e) {
    rec.add("status", "failed");
    rec.add("failing_height", e.height());
    rec.add("reason", e.what());
    rec.print(std::cout, as_json);
    return kExitRejected;
  }
}

int cmd_export(const Settings& s, const std::string& what, const std::string& out_path) {
  Session session(DataDir(s.data_dir));
  std::string text;
  if (what == "forest") {
    text = session.ledger().forest_snapshot().export_text();
  } else if (what == "receipts") {
    for (const ledger::TxReceipt& r : session.ledger().receipts()) {
      text += ledger::receipt_json_line(r) + '\n';
    }
  } else {
    throw UsageError("export --what must be forest or receipts");
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!(out << text)) throw UsageError("cannot write " + out_path);
  }
  return kExitOk;
}

int cmd_bench(const Settings& s, bool test_keys, const std::string& mix,
              const std::string& receipts_out, bool as_json) {
  bench::Scenario sc;
  const auto workload = bench::parse_workload(s.workload);
  if (!workload) throw UsageError("unknown workload '" + s.workload + "'");
  sc.workload = *workload;
  sc.tx_count = s.tx_count;
  sc.key_bits = s.key_bits;
  sc.range_bits = s.range_bits;
  sc.max_message_count = s.max_message_count;
  sc.batch_timeout_ms = s.batch_timeout_ms;
  sc.seed = s.seed.value_or(1);
  sc.workers = s.workers;
  sc.peers = s.peers;
  sc.key_mode = test_keys ? KeyMode::kTest : KeyMode::kProduction;
  if (s.data_dir_set) sc.data_dir = fs::path(s.data_dir);
  if (!mix.empty()) {
    unsigned a = 0, b = 0, c = 0;
    char x = 0, y = 0;
    std::istringstream in(mix);
    if (!(in >> a >> x >> b >> y >> c) || x != ':' || y != ':' || !in.eof()) {
      throw UsageError("--mix expects issue:split:query weights, e.g. 2:1:2");
    }
    sc.mix_issue = a;
    sc.mix_split = b;
    sc.mix_query = c;
  }
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::ofstream receipts;
  if (!receipts_out.empty()) {
    receipts.open(receipts_out, std::ios::trunc);
    if (!receipts) throw UsageError("cannot write " + receipts_out);
  }
  const bench::BenchResult r = bench::run_bench(sc, receipts_out.empty() ? nullptr : &receipts);
  std::cout << (as_json ? bench::to_json_line(sc, r) + "\n" : bench::to_text(sc, r));
  return r.integrity_ok ? kExitOk : kExitRejected;
}

int run(int argc, char** argv) {
  Settings s;
  if (const auto path = config_path(argc, argv)) load_config(*path, s);

  CLI::App app{"Splittable encrypted bills on a simulated permissioned ledger"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  bool as_json = false;
  app.add_option("--config", config_file, "JSON config file")->envname("BILLCHAIN_CONFIG");
  auto* data_dir_opt = app.add_option("--data-dir", s.data_dir, "State directory")
                           ->envname("BILLCHAIN_DATA_DIR");
  uint64_t seed_value = s.seed.value_or(0);
  auto* seed_opt =
      app.add_option("--seed", seed_value, "Fix all randomness")->envname("BILLCHAIN_SEED");
  app.add_flag("--json", as_json, "Machine-readable output");

  auto add_key_bits = [&](CLI::App* cmd) {
    cmd->add_option("--key-bits", s.key_bits, "Paillier modulus size")
        ->envname("BILLCHAIN_KEY_BITS");
    cmd->add_option("--range-bits", s.range_bits, "Range proof width L")
        ->envname("BILLCHAIN_RANGE_BITS");
    cmd->add_option("--max-message-count", s.max_message_count, "Transactions per block")
        ->envname("BILLCHAIN_MAX_MESSAGE_COUNT");
    cmd->add_option("--batch-timeout-ms", s.batch_timeout_ms, "Block cut timeout")
        ->envname("BILLCHAIN_BATCH_TIMEOUT_MS");
  };

  bool force = false;
  bool witness = false;
  bool test_keys = false;
  std::string actor;
  auto* keygen = app.add_subcommand("keygen", "Create the witness or a user");
  keygen->add_flag("--witness", witness, "Create the network and witness keys");
  keygen->add_option("--actor", actor, "Create a user with this name");
  keygen->add_flag("--force", force, "Replace existing keys");
  keygen->add_flag("--test-keys", test_keys, "Allow small moduli (testing only)");
  add_key_bits(keygen);

  std::string to, from, amount, bill, owner;
  std::vector<std::string> to_list;
  auto* issue = app.add_subcommand("issue", "Witness issues a root bill");
  issue->add_option("--to", to, "Owner")->required();
  issue->add_option("--amount", amount, "Amount")->required();

  auto* split = app.add_subcommand("split", "Split a bill among receivers");
  split->add_option("--from", from, "Sender")->required();
  split->add_option("--bill", bill, "Bill id")->required();
  split->add_option("--to", to_list, "name:amount, repeatable")->required();

  auto* transfer = app.add_subcommand("transfer", "Move a whole bill to another user");
  transfer->add_option("--from", from, "Sender")->required();
  transfer->add_option("--bill", bill, "Bill id")->required();
  transfer->add_option("--to", to, "Receiver")->required();

  std::optional<uint64_t> height;
  auto* query = app.add_subcommand("query", "Look up a bill, a user's bills or a block");
  query->add_option("--bill", bill, "Bill id");
  query->add_option("--owner", owner, "User name");
  query->add_option("--height", height, "Block height");

  std::string forest_file;
  auto* verify = app.add_subcommand("verify", "Re-verify the chain or a forest export");
  verify->add_option("--forest", forest_file, "Forest export to check instead of the chain");

  std::string what = "forest";
  std::string out_path;
  auto* exp = app.add_subcommand("export", "Write the forest or receipts");
  exp->add_option("--what", what, "forest | receipts");
  exp->add_option("--out", out_path, "Output file (default stdout)");

  std::string mix;
  std::string receipts_out;
  auto* bench_cmd = app.add_subcommand("bench", "Measure throughput and latency");
  add_key_bits(bench_cmd);
  bench_cmd->add_option("--tx-count", s.tx_count, "Operations to run")
      ->envname("BILLCHAIN_TX_COUNT");
  bench_cmd->add_option("--workload", s.workload, "issue | split | query | mix")
      ->envname("BILLCHAIN_WORKLOAD");
  bench_cmd->add_option("--workers", s.workers, "Concurrent submitters");
  bench_cmd->add_option("--peers", s.peers, "Committing peers");
  bench_cmd->add_option("--mix", mix, "issue:split:query weights for the mix workload");
  bench_cmd->add_option("--receipts-out", receipts_out, "Write one JSON receipt per line");
  bench_cmd->add_flag("--test-keys", test_keys, "Allow small moduli (testing only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (data_dir_opt->count() > 0) s.data_dir_set = true;
  if (seed_opt->count() > 0) s.seed = seed_value;

  if (keygen->parsed()) {
    if (witness == !actor.empty()) throw UsageError("keygen takes exactly one of --witness, --actor");
    return witness ? cmd_keygen_witness(s, force, test_keys, as_json)
                   : cmd_keygen_actor(s, actor, force, as_json);
  }
  if (issue->parsed()) return cmd_issue(s, to, amount, as_json);
  if (split->parsed()) return cmd_split(s, from, bill, to_list, as_json);
  if (transfer->parsed()) return cmd_transfer(s, from, bill, to, as_json);
  if (query->parsed()) return cmd_query(s, bill, owner, height, as_json);
  if (verify->parsed()) {
    return forest_file.empty() ? cmd_verify_chain(s, as_json)
                               : cmd_verify_forest(s, forest_file, as_json);
  }
  if (exp->parsed()) return cmd_export(s, what, out_path);
  return cmd_bench(s, test_keys, mix, receipts_out, as_json);
}

}  // namespace
}  // namespace billchain::cli

int main(int argc, char** argv) {
  using namespace billchain;
  try {
    return cli::run(argc, argv);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const protocol::ProtocolError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }
}
