#include "billchain/ledger/block_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

namespace billchain::ledger {

namespace {

void put_u32(Bytes& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(v >> shift));
}

std::string errno_text(const char* what, const std::filesystem::path& path) {
  return std::string(what) + " " + path.string() + ": " + std::strerror(errno);
}

}  // namespace

void append_record(Bytes& stream, const Block& block) {
  const Bytes body = canonical(block);
  if (body.size() > UINT32_MAX) throw StoreError("block too large");
  put_u32(stream, static_cast<uint32_t>(body.size()));
  append(stream, body);
}

void MemoryBlockSink::append(const Block& block) { append_record(stream_, block); }

BlockStore::BlockStore(std::filesystem::path path, bool durable)
    : path_(std::move(path)), durable_(durable) {
  file_ = std::fopen(path_.c_str(), "ab");
  if (!file_) throw StoreError(errno_text("cannot open", path_));
}

BlockStore::~BlockStore() {
  if (file_) std::fclose(file_);
}

void BlockStore::append(const Block& block) {
  Bytes record;
  append_record(record, block);
  if (std::fwrite(record.data(), 1, record.size(), file_) != record.size() ||
      std::fflush(file_) != 0) {
    throw StoreError(errno_text("write failed", path_));
  }
  if (durable_ && ::fsync(::fileno(file_)) != 0) {
    throw StoreError(errno_text("fsync failed", path_));
  }
}

Bytes BlockStore::read_stream(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return {};
    throw StoreError("cannot read " + path.string());
  }
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void BlockStore::truncate(const std::filesystem::path& path, uint64_t length) {
  std::error_code ec;
  std::filesystem::resize_file(path, length, ec);
  if (ec) throw StoreError("cannot truncate " + path.string() + ": " + ec.message());
}

RecordScan scan_records(ByteView stream) {
  RecordScan scan;
  size_t pos = 0;
  while (pos < stream.size()) {
    if (stream.size() - pos < 4) {
      scan.complete = false;
      break;
    }
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = (len << 8) | stream[pos + i];
    if (stream.size() - pos - 4 < len) {
      scan.complete = false;
      break;
    }
    scan.records.push_back(RawRecord{pos, stream.subspan(pos + 4, len)});
    pos += 4 + len;
  }
  scan.valid_length = pos;
  return scan;
}

}  // namespace billchain::ledger
