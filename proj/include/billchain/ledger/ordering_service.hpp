#pragma once

#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

#include "billchain/ledger/ledger.hpp"

namespace billchain::ledger {

// Background writer for a ledger driven by real time. It wakes on every
// submission and at the oldest pending transaction's batch deadline, and
// cuts blocks while one is due.
class OrderingService {
 public:
  explicit OrderingService(Ledger& ledger);
  ~OrderingService();
  OrderingService(const OrderingService&) = delete;
  OrderingService& operator=(const OrderingService&) = delete;

  TxReceipt submit(protocol::LedgerTx tx);

  // Stops accepting submissions, commits everything pending, joins the
  // writer. Rethrows a writer failure, if any.
  void stop();

 private:
  void run();

  Ledger& ledger_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::exception_ptr failure_;
  std::thread writer_;
};

}  // namespace billchain::ledger
