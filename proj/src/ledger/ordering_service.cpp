#include "billchain/ledger/ordering_service.hpp"

#include <algorithm>
#include <chrono>
#include <utility>

namespace billchain::ledger {

OrderingService::OrderingService(Ledger& ledger) : ledger_(ledger) {
  writer_ = std::thread([this] { run(); });
}

OrderingService::~OrderingService() {
  try {
    stop();
  } catch (...) {
  }
}

TxReceipt OrderingService::submit(protocol::LedgerTx tx) {
  TxReceipt r = ledger_.submit(std::move(tx));
  {
    std::lock_guard lock(mu_);
  }
  cv_.notify_one();
  return r;
}

void OrderingService::stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_ && !writer_.joinable()) return;
    stopping_ = true;
  }
  ledger_.shutdown();
  cv_.notify_one();
  if (writer_.joinable()) writer_.join();
  if (failure_) std::rethrow_exception(std::exchange(failure_, nullptr));
}

void OrderingService::run() {
  try {
    std::unique_lock lock(mu_);
    while (true) {
      if (stopping_) {
        lock.unlock();
        ledger_.drain();
        return;
      }
      if (ledger_.block_due()) {
        lock.unlock();
        ledger_.cut_block();
        lock.lock();
        continue;
      }
      // Submitters pass through mu_ before notifying, so a submission
      // between the check above and the wait below still wakes us.
      if (const auto deadline = ledger_.next_deadline_us()) {
        const auto wait = std::chrono::microseconds(
            std::max<int64_t>(*deadline - ledger_.clock().now_us(), 0) + 100);
        cv_.wait_for(lock, wait);
      } else {
        cv_.wait(lock);
      }
    }
  } catch (...) {
    failure_ = std::current_exception();
  }
}

}  // namespace billchain::ledger
