#pragma once

#include "washgraph/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <vector>

namespace washgraph {

// Exact wire schema for record files.
inline constexpr std::string_view kCsvHeader =
    "block_number,timestamp,tx_hash,seller,buyer,collection,token_id,price_wei,market";

struct IngestOptions {
  bool strict = false; // abort on the first malformed row instead of skip-and-count
};

struct IngestStats {
  std::uint64_t rows_read = 0;
  std::uint64_t rows_accepted = 0;
  std::uint64_t rows_rejected = 0;
  std::map<std::string, std::uint64_t> reject_reasons;

  void merge(const IngestStats& o);
};

enum class IngestErrorKind {
  FileNotFound,
  SchemaMismatch,
  MalformedRow,      // strict mode only
  DuplicateConflict, // same (tx_hash, collection, token_id), different content
};

class IngestError : public std::runtime_error {
public:
  IngestError(IngestErrorKind kind, std::string message, std::uint64_t line = 0)
      : std::runtime_error(std::move(message)), kind_(kind), line_(line) {}
  IngestErrorKind kind() const { return kind_; }
  std::uint64_t line() const { return line_; }

private:
  IngestErrorKind kind_;
  std::uint64_t line_;
};

struct ParseResult {
  std::vector<TradeRecord> records; // file order
  IngestStats stats;
};

ParseResult parse_record_file(const std::filesystem::path& path, const IngestOptions& opts = {});
ParseResult parse_record_stream(std::istream& in, const IngestOptions& opts,
                                const std::string& source_name);

// raw wei -> exact ETH rendering (10^18 wei = 1 ETH)
inline Wei normalize_price(Wei raw_wei) { return raw_wei; }

// Merge per-file streams into one deterministic stream sorted by
// (block_number, tx_hash, collection, token_id). Cross-file duplicates are
// dropped; per-market block/timestamp monotonicity violations are rejected
// with reason "timestamp_order".
struct MergeResult {
  std::vector<TradeRecord> records;
  IngestStats stats; // rows_read = total input records
};

MergeResult merge_records(std::vector<std::vector<TradeRecord>> per_file);

// Canonical CSV (header + rows, LF line endings); parse(serialize(r)) == r.
std::string serialize_records(const std::vector<TradeRecord>& records);

} // namespace washgraph
