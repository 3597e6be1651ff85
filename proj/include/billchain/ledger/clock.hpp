#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace billchain::ledger {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t now_us() const = 0;
  int64_t now_ms() const { return now_us() / 1000; }
};

class SteadyClock final : public Clock {
 public:
  int64_t now_us() const override {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
};

// Wall-clock time; block timestamps stay meaningful across restarts.
class SystemClock final : public Clock {
 public:
  int64_t now_us() const override {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  }
};

// Manually driven time for deterministic batching tests and replays.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(int64_t start_us = 0) : now_(start_us) {}
  int64_t now_us() const override { return now_.load(); }
  void set_us(int64_t t) { now_.store(t); }
  void advance_ms(int64_t ms) { now_.fetch_add(ms * 1000); }

 private:
  std::atomic<int64_t> now_;
};

}  // namespace billchain::ledger
