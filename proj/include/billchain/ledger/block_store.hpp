#pragma once

// Append-only block stream. Each record is a 4-byte big-endian length
// followed by the canonical block encoding; an empty stream is the genesis
// state.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "billchain/ledger/block.hpp"

namespace billchain::ledger {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BlockSink {
 public:
  virtual ~BlockSink() = default;
  virtual void append(const Block& block) = 0;
};

// Collects the stream in memory; used by tests and the determinism check.
class MemoryBlockSink final : public BlockSink {
 public:
  void append(const Block& block) override;
  const Bytes& stream() const { return stream_; }

 private:
  Bytes stream_;
};

class BlockStore final : public BlockSink {
 public:
  // Opens (creating if absent) for appending. With `durable`, every append is
  // fsync'd before returning.
  explicit BlockStore(std::filesystem::path path, bool durable = true);
  ~BlockStore() override;
  BlockStore(const BlockStore&) = delete;
  BlockStore& operator=(const BlockStore&) = delete;

  void append(const Block& block) override;
  const std::filesystem::path& path() const { return path_; }

  static Bytes read_stream(const std::filesystem::path& path);
  // Cuts the file back to `length` bytes.
  static void truncate(const std::filesystem::path& path, uint64_t length);

 private:
  std::filesystem::path path_;
  bool durable_;
  std::FILE* file_ = nullptr;
};

void append_record(Bytes& stream, const Block& block);

// One record split off the front of a stream without any validation.
struct RawRecord {
  uint64_t offset = 0;
  ByteView body;
};

// Splits a stream into records. Stops at the first record whose length
// prefix or body runs past the end; `complete` reports whether it did.
struct RecordScan {
  std::vector<RawRecord> records;
  uint64_t valid_length = 0;
  bool complete = true;
};
RecordScan scan_records(ByteView stream);

}  // namespace billchain::ledger
