#include "billchain/bench/bench.hpp"

#include <stdlib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "billchain/bench/network.hpp"
#include "billchain/ledger/ordering_service.hpp"
#include "billchain/ledger/peer.hpp"

namespace billchain::bench {

namespace {

constexpr uint32_t kUsers = 8;
constexpr uint32_t kQueryPool = 64;
constexpr uint32_t kAmountBits = 20;

enum class Op : uint8_t { kIssue, kSplit, kQuery };

int64_t now_us() { return ledger::SteadyClock().now_us(); }

double us_to_ms(int64_t us) { return static_cast<double>(us) / 1000.0; }

std::string user_name(uint32_t i) { return "user-" + std::to_string(i); }

// Per-operation randomness, independent of which worker runs it.
DeterministicRandom op_rng(uint64_t seed, uint64_t domain, uint64_t index) {
  Encoder enc;
  enc.put_string("billchain/bench/op");
  enc.put_uint(seed);
  enc.put_uint(domain);
  enc.put_uint(index);
  return DeterministicRandom(hash256(enc.bytes()).view());
}

uint64_t below(RandomSource& rng, uint64_t bound) {
  return random_below(rng, mpz_class(static_cast<unsigned long>(bound))).get_ui();
}

std::vector<Op> plan_ops(const Scenario& s) {
  std::vector<Op> ops(s.tx_count);
  DeterministicRandom rng = op_rng(s.seed, 1, 0);
  const uint32_t total = s.mix_issue + s.mix_split + s.mix_query;
  for (Op& op : ops) {
    switch (s.workload) {
      case Workload::kIssue: op = Op::kIssue; break;
      case Workload::kSplit: op = Op::kSplit; break;
      case Workload::kQuery: op = Op::kQuery; break;
      case Workload::kMix: {
        const uint64_t x = below(rng, total);
        op = x < s.mix_issue ? Op::kIssue : x < s.mix_issue + s.mix_split ? Op::kSplit : Op::kQuery;
        break;
      }
    }
  }
  return ops;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "billchain-bench-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("cannot create temporary directory");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct WorkerStats {
  int64_t client_crypto_us = 0;
  int64_t receiver_check_us = 0;
  int64_t query_us = 0;
  std::vector<double> query_latency_ms;
  std::vector<double> receiver_check_ms;
  int64_t last_query_end_us = 0;
  uint64_t queries = 0;
};

}  // namespace

const char* to_string(Workload w) {
  switch (w) {
    case Workload::kIssue: return "issue";
    case Workload::kSplit: return "split";
    case Workload::kQuery: return "query";
    case Workload::kMix: return "mix";
  }
  return "unknown";
}

std::optional<Workload> parse_workload(std::string_view s) {
  if (s == "issue") return Workload::kIssue;
  if (s == "split") return Workload::kSplit;
  if (s == "query") return Workload::kQuery;
  if (s == "mix") return Workload::kMix;
  return std::nullopt;
}

void Scenario::validate() const {
  if (tx_count == 0) throw std::invalid_argument("tx_count must be at least 1");
  if (workers == 0) throw std::invalid_argument("workers must be at least 1");
  if (max_message_count == 0) throw std::invalid_argument("max_message_count must be positive");
  if (batch_timeout_ms == 0) throw std::invalid_argument("batch_timeout_ms must be positive");
  if (!is_supported_key_bits(key_bits, key_mode)) {
    throw std::invalid_argument("unsupported key_bits " + std::to_string(key_bits));
  }
  if (range_bits <= kAmountBits || range_bits > 64) {
    throw std::invalid_argument("range_bits must be in (20, 64]");
  }
  if (workload == Workload::kMix && mix_issue + mix_split + mix_query == 0) {
    throw std::invalid_argument("mix weights are all zero");
  }
}

BenchResult run_bench(const Scenario& s, std::ostream* receipt_log) {
  s.validate();

  DeterministicRandom key_rng = op_rng(s.seed, 0, 0);
  LocalNetwork net(LocalNetwork::make_witness_keys(s.key_bits, s.key_mode, key_rng), s.range_bits);
  for (uint32_t u = 0; u < kUsers; ++u) {
    net.add_user(user_name(u), op_rng(s.seed, 2, u).fixed<Seed>());
  }
  const protocol::VerifyContext ctx = net.context();

  ledger::LedgerConfig config;
  config.max_message_count = s.max_message_count;
  config.batch_timeout_ms = s.batch_timeout_ms;
  config.key_bits = s.key_bits;
  config.range_bits = s.range_bits;
  config.key_mode = s.key_mode;

  std::optional<TempDir> temp;
  std::filesystem::path dir;
  if (s.data_dir) {
    dir = *s.data_dir / ("bench-" + std::to_string(s.seed));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  } else {
    temp.emplace();
    dir = temp->path();
  }

  ledger::FanoutSink fanout;
  ledger::BlockStore orderer_store(dir / "blocks.dat");
  fanout.add(orderer_store);
  std::vector<std::unique_ptr<ledger::PeerReplica>> peers;
  for (uint32_t p = 0; p < s.peers; ++p) {
    peers.push_back(std::make_unique<ledger::PeerReplica>(
        ctx, config,
        std::make_unique<ledger::BlockStore>(dir / ("peer-" + std::to_string(p) + ".dat"))));
    fanout.add(*peers.back());
  }
  ledger::SteadyClock clock;
  ledger::Ledger ledger(config, ctx, clock, &fanout);

  // Untimed setup: one bill per split, plus a pool of bills to query.
  const std::vector<Op> ops = plan_ops(s);
  std::vector<std::optional<std::pair<std::string, Holding>>> split_bills(ops.size());
  std::vector<rht::EBillId> query_pool;
  {
    const bool need_pool = std::find(ops.begin(), ops.end(), Op::kQuery) != ops.end();
    for (uint32_t i = 0; need_pool && i < kQueryPool; ++i) {
      DeterministicRandom rng = op_rng(s.seed, 3, i);
      IssueOutcome o = net.issue(user_name(i % kUsers), 1 + below(rng, 1u << kAmountBits), rng);
      query_pool.push_back(o.holding.id);
      ledger.submit(std::move(o.tx));
    }
    for (size_t i = 0; i < ops.size(); ++i) {
      if (ops[i] != Op::kSplit) continue;
      DeterministicRandom rng = op_rng(s.seed, 4, i);
      const std::string owner = user_name(static_cast<uint32_t>(below(rng, kUsers)));
      IssueOutcome o = net.issue(owner, 2 + below(rng, (1u << kAmountBits) - 1), rng);
      split_bills[i].emplace(owner, std::move(o.holding));
      ledger.submit(std::move(o.tx));
    }
    ledger.drain();
  }
  const ledger::LedgerTimings setup_timings = ledger.timings();
  const size_t setup_receipts = ledger.receipts().size();

  std::vector<WorkerStats> stats(s.workers);
  std::atomic<size_t> next{0};

  const int64_t start_us = now_us();
  {
    ledger::OrderingService orderer(ledger);
    auto worker = [&](WorkerStats& st) {
      for (size_t i = next++; i < ops.size(); i = next++) {
        switch (ops[i]) {
          case Op::kIssue: {
            DeterministicRandom rng = op_rng(s.seed, 5, i);
            const auto t0 = now_us();
            IssueOutcome o = net.issue(user_name(static_cast<uint32_t>(below(rng, kUsers))),
                                       1 + below(rng, 1u << kAmountBits), rng);
            st.client_crypto_us += now_us() - t0;
            orderer.submit(std::move(o.tx));
            break;
          }
          case Op::kSplit: {
            DeterministicRandom rng = op_rng(s.seed, 6, i);
            const auto& [owner, bill] = *split_bills[i];
            const uint64_t amount = bill.opening.amount.get_ui();
            const uint64_t first = 1 + below(rng, amount - 1);
            const std::vector<std::pair<std::string, mpz_class>> outs = {
                {user_name(static_cast<uint32_t>(below(rng, kUsers))), mpz_class(static_cast<unsigned long>(first))},
                {user_name(static_cast<uint32_t>(below(rng, kUsers))),
                 mpz_class(static_cast<unsigned long>(amount - first))}};
            const auto t0 = now_us();
            SplitOutcome o = net.split(owner, bill, outs, rng);
            st.client_crypto_us += now_us() - t0 - o.receiver_check_us;
            st.receiver_check_us += o.receiver_check_us;
            st.receiver_check_ms.push_back(us_to_ms(o.receiver_check_us));
            orderer.submit(std::move(o.stx));
            break;
          }
          case Op::kQuery: {
            DeterministicRandom rng = op_rng(s.seed, 7, i);
            const rht::EBillId& id = query_pool[below(rng, query_pool.size())];
            const auto t0 = now_us();
            (void)ledger.query_bill(id);
            const auto t1 = now_us();
            st.query_us += t1 - t0;
            st.query_latency_ms.push_back(us_to_ms(t1 - t0));
            st.last_query_end_us = std::max(st.last_query_end_us, t1);
            ++st.queries;
            break;
          }
        }
      }
    };
    std::vector<std::thread> threads;
    for (WorkerStats& st : stats) threads.emplace_back(worker, std::ref(st));
    for (std::thread& t : threads) t.join();
    orderer.stop();
  }

  BenchResult r;
  int64_t end_us = start_us;
  std::vector<double> latencies;
  std::vector<Digest> committed_ids;
  const std::vector<ledger::TxReceipt> receipts = ledger.receipts();
  for (size_t i = setup_receipts; i < receipts.size(); ++i) {
    const ledger::TxReceipt& rc = receipts[i];
    if (receipt_log) *receipt_log << ledger::receipt_json_line(rc) << '\n';
    if (rc.status == ledger::TxStatus::kCommitted) {
      ++r.committed;
      committed_ids.push_back(rc.tx_id);
      latencies.push_back(*rc.latency_ms());
      end_us = std::max(end_us, *rc.commit_us);
    } else if (rc.status == ledger::TxStatus::kRejected) {
      ++r.rejected;
      end_us = std::max(end_us, *rc.commit_us);
    }
  }
  std::vector<double> receiver_checks;
  for (const WorkerStats& st : stats) {
    r.queries += st.queries;
    end_us = std::max(end_us, st.last_query_end_us);
    latencies.insert(latencies.end(), st.query_latency_ms.begin(), st.query_latency_ms.end());
    receiver_checks.insert(receiver_checks.end(), st.receiver_check_ms.begin(),
                           st.receiver_check_ms.end());
    r.steps.client_crypto_ms += us_to_ms(st.client_crypto_us);
    r.steps.receiver_check_ms += us_to_ms(st.receiver_check_us);
    r.steps.query_ms += us_to_ms(st.query_us);
  }
  const ledger::LedgerTimings t = ledger.timings();
  r.steps.verify_ms = us_to_ms(t.verify_us - setup_timings.verify_us);
  r.steps.apply_ms = us_to_ms(t.apply_us - setup_timings.apply_us);
  r.steps.persist_ms = us_to_ms(t.persist_us - setup_timings.persist_us);
  r.blocks = t.blocks - setup_timings.blocks;
  r.wall_seconds = std::max(static_cast<double>(end_us - start_us) / 1e6, 1e-6);
  r.tps = static_cast<double>(r.committed + r.queries) / r.wall_seconds;
  r.latency_ms = summarize(latencies);
  r.receiver_check_ms = summarize(receiver_checks);

  std::sort(committed_ids.begin(), committed_ids.end());
  Encoder digest_input;
  for (const Digest& id : committed_ids) digest_input.put_fixed(id);
  r.content_digest = hash256(digest_input.bytes());

  const rht::RhtForest forest = ledger.forest_snapshot();
  const Bytes forest_bytes = forest.serialize();
  r.integrity_ok = ledger::verify_chain_links(ledger.chain(), ctx) &&
                   !forest.find_conservation_violation(ctx.pk_w).has_value();
  for (const auto& peer : peers) {
    r.integrity_ok = r.integrity_ok && peer->height() == ledger.height() &&
                     peer->forest().serialize() == forest_bytes;
  }
  return r;
}

std::string to_json_line(const Scenario& s, const BenchResult& r) {
  auto summary = [](const LatencySummary& l) {
    return nlohmann::json{{"count", l.count}, {"mean", l.mean}, {"p50", l.p50},
                          {"p95", l.p95},     {"p99", l.p99},   {"max", l.max}};
  };
  nlohmann::json j;
  j["workload"] = to_string(s.workload);
  j["tx_count"] = s.tx_count;
  j["key_bits"] = s.key_bits;
  j["max_message_count"] = s.max_message_count;
  j["batch_timeout_ms"] = s.batch_timeout_ms;
  j["seed"] = s.seed;
  j["workers"] = s.workers;
  j["committed"] = r.committed;
  j["rejected"] = r.rejected;
  j["queries"] = r.queries;
  j["blocks"] = r.blocks;
  j["wall_seconds"] = r.wall_seconds;
  j["tps"] = r.tps;
  j["latency_ms"] = summary(r.latency_ms);
  j["receiver_check_ms"] = summary(r.receiver_check_ms);
  j["steps_ms"] = {{"client_crypto", r.steps.client_crypto_ms},
                   {"receiver_check", r.steps.receiver_check_ms},
                   {"verify", r.steps.verify_ms},
                   {"apply", r.steps.apply_ms},
                   {"persist", r.steps.persist_ms},
                   {"query", r.steps.query_ms}};
  j["content_digest"] = r.content_digest.hex();
  j["integrity_ok"] = r.integrity_ok;
  return j.dump();
}

std::string to_text(const Scenario& s, const BenchResult& r) {
  std::ostringstream out;
  out << "workload " << to_string(s.workload) << ", " << s.tx_count << " tx, " << s.key_bits
      << "-bit key, max_message_count " << s.max_message_count << ", batch_timeout "
      << s.batch_timeout_ms << " ms, seed " << s.seed << "\n";
  out << "  committed " << r.committed << ", rejected " << r.rejected << ", queries " << r.queries
      << ", blocks " << r.blocks << "\n";
  out << "  tps " << r.tps << " over " << r.wall_seconds << " s\n";
  out << "  latency ms: mean " << r.latency_ms.mean << ", p50 " << r.latency_ms.p50 << ", p95 "
      << r.latency_ms.p95 << ", p99 " << r.latency_ms.p99 << ", max " << r.latency_ms.max << "\n";
  if (r.receiver_check_ms.count > 0) {
    out << "  receiver-witness check ms: mean " << r.receiver_check_ms.mean << ", p95 "
        << r.receiver_check_ms.p95 << "\n";
  }
  out << "  step totals ms: client crypto " << r.steps.client_crypto_ms << ", receiver check "
      << r.steps.receiver_check_ms << ", verify " << r.steps.verify_ms << ", apply "
      << r.steps.apply_ms << ", persist " << r.steps.persist_ms << ", query " << r.steps.query_ms
      << "\n";
  out << "  integrity " << (r.integrity_ok ? "ok" : "FAILED") << "\n";
  return out.str();
}

}  // namespace billchain::bench
