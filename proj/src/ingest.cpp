#include "washgraph/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace washgraph {

namespace {

// Dedup key: one sale event is one (tx_hash, collection, token_id) row.
// Bundle sales legitimately repeat a tx_hash across tokens.
struct RowKey {
  TxHash tx;
  Address collection;
  TokenId token;

  bool operator==(const RowKey&) const = default;
};

struct RowKeyHash {
  std::size_t operator()(const RowKey& k) const noexcept {
    std::size_t h = TxHashHash{}(k.tx);
    h ^= AddressHash{}(k.collection) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>{}(k.token.digits) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

bool same_content(const TradeRecord& a, const TradeRecord& b) {
  return a.block_number == b.block_number && a.timestamp == b.timestamp && a.seller == b.seller &&
         a.buyer == b.buyer && a.price.value == b.price.value && a.market == b.market;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty() || s.size() > 20) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    std::uint64_t d = std::uint64_t(c - '0');
    if (v > (UINT64_MAX - d) / 10) return false;
    v = v * 10 + d;
  }
  out = v;
  return true;
}

// returns reject reason, or nullptr on success
const char* parse_row(std::string_view line, TradeRecord& rec) {
  std::array<std::string_view, 9> f;
  std::size_t start = 0;
  for (int i = 0; i < 8; ++i) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) return "bad_field_count";
    f[std::size_t(i)] = line.substr(start, comma - start);
    start = comma + 1;
  }
  f[8] = line.substr(start);
  if (f[8].find(',') != std::string_view::npos) return "bad_field_count";

  if (!parse_u64(f[0], rec.block_number)) return "bad_block_number";
  std::uint64_t raw_ts = 0;
  if (!parse_u64(f[1], raw_ts)) return "bad_timestamp";
  auto ts = normalize_timestamp(raw_ts);
  if (!ts) return "timestamp_out_of_range";
  rec.timestamp = *ts;
  auto tx = TxHash::parse(f[2]);
  if (!tx) return "bad_tx_hash";
  rec.tx_hash = *tx;
  auto seller = Address::parse(f[3]);
  if (!seller) return "bad_seller";
  rec.seller = *seller;
  auto buyer = Address::parse(f[4]);
  if (!buyer) return "bad_buyer";
  rec.buyer = *buyer;
  auto coll = Address::parse(f[5]);
  if (!coll) return "bad_collection";
  rec.collection = *coll;
  auto token = TokenId::parse(f[6]);
  if (!token) return "bad_token_id";
  rec.token_id = *token;
  if (!f[7].empty() && f[7][0] == '-') return "negative_price";
  auto price = parse_wei(f[7]);
  if (!price) return "bad_price";
  rec.price = *price;
  auto market = MarketId::parse(f[8]);
  if (!market) return "bad_market";
  rec.market = *market;
  return nullptr;
}

} // namespace

void IngestStats::merge(const IngestStats& o) {
  rows_read += o.rows_read;
  rows_accepted += o.rows_accepted;
  rows_rejected += o.rows_rejected;
  for (const auto& [k, v] : o.reject_reasons) reject_reasons[k] += v;
}

ParseResult parse_record_stream(std::istream& in, const IngestOptions& opts,
                                const std::string& source_name) {
  ParseResult out;
  std::string line;
  if (!std::getline(in, line)) {
    throw IngestError(IngestErrorKind::SchemaMismatch, source_name + ": missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw IngestError(IngestErrorKind::SchemaMismatch,
                      source_name + ": header does not match record schema");
  }

  std::unordered_map<RowKey, std::size_t, RowKeyHash> seen;
  std::uint64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue; // trailing newline etc., not a data row
    ++out.stats.rows_read;
    TradeRecord rec;
    const char* reason = parse_row(line, rec);
    if (!reason) {
      RowKey key{rec.tx_hash, rec.collection, rec.token_id};
      auto [it, inserted] = seen.try_emplace(key, out.records.size());
      if (!inserted) {
        if (!same_content(out.records[it->second], rec)) {
          throw IngestError(IngestErrorKind::DuplicateConflict,
                            source_name + ":" + std::to_string(line_no) +
                                ": conflicting duplicate for tx " + rec.tx_hash.to_string(),
                            line_no);
        }
        reason = "duplicate_row";
      }
    }
    if (reason) {
      if (opts.strict && std::string_view(reason) != "duplicate_row") {
        throw IngestError(IngestErrorKind::MalformedRow,
                          source_name + ":" + std::to_string(line_no) + ": " + reason, line_no);
      }
      ++out.stats.rows_rejected;
      ++out.stats.reject_reasons[reason];
      continue;
    }
    out.records.push_back(std::move(rec));
    ++out.stats.rows_accepted;
  }
  return out;
}

ParseResult parse_record_file(const std::filesystem::path& path, const IngestOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IngestError(IngestErrorKind::FileNotFound, "cannot open " + path.string());
  }
  return parse_record_stream(in, opts, path.string());
}

MergeResult merge_records(std::vector<std::vector<TradeRecord>> per_file) {
  MergeResult out;
  std::size_t total = 0;
  for (const auto& v : per_file) total += v.size();
  out.records.reserve(total);
  for (auto& v : per_file) {
    out.records.insert(out.records.end(), std::make_move_iterator(v.begin()),
                       std::make_move_iterator(v.end()));
    v.clear();
  }
  out.stats.rows_read = total;
  std::stable_sort(out.records.begin(), out.records.end(), record_stream_less);

  // cross-file duplicates: identical rows collapse, conflicts abort
  std::vector<TradeRecord> kept;
  kept.reserve(out.records.size());
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    const TradeRecord& r = out.records[i];
    if (!kept.empty()) {
      const TradeRecord& p = kept.back();
      if (p.tx_hash == r.tx_hash && p.collection == r.collection && p.token_id == r.token_id) {
        if (!same_content(p, r)) {
          throw IngestError(IngestErrorKind::DuplicateConflict,
                            "conflicting duplicate across inputs for tx " + r.tx_hash.to_string());
        }
        ++out.stats.rows_rejected;
        ++out.stats.reject_reasons["duplicate_row"];
        continue;
      }
    }
    kept.push_back(r);
  }

  // per-market monotonicity: within a market, later blocks cannot move back in time
  std::map<MarketId, std::pair<std::uint64_t, UnixSeconds>> last; // market -> (block, max ts)
  std::vector<TradeRecord> accepted;
  accepted.reserve(kept.size());
  for (auto& r : kept) {
    auto it = last.find(r.market);
    if (it != last.end() && r.block_number > it->second.first &&
        r.timestamp < it->second.second) {
      ++out.stats.rows_rejected;
      ++out.stats.reject_reasons["timestamp_order"];
      continue;
    }
    if (it == last.end()) {
      last.emplace(r.market, std::make_pair(r.block_number, r.timestamp));
    } else {
      it->second.first = r.block_number;
      it->second.second = std::max(it->second.second, r.timestamp);
    }
    accepted.push_back(std::move(r));
  }
  out.records = std::move(accepted);
  out.stats.rows_accepted = out.records.size();
  return out;
}

std::string serialize_records(const std::vector<TradeRecord>& records) {
  std::string out;
  out.reserve(records.size() * 160 + 80);
  out.append(kCsvHeader);
  out.push_back('\n');
  for (const auto& r : records) {
    out += std::to_string(r.block_number);
    out.push_back(',');
    out += std::to_string(std::uint64_t(r.timestamp));
    out.push_back(',');
    out += r.tx_hash.to_string();
    out.push_back(',');
    out += r.seller.to_string();
    out.push_back(',');
    out += r.buyer.to_string();
    out.push_back(',');
    out += r.collection.to_string();
    out.push_back(',');
    out += r.token_id.to_string();
    out.push_back(',');
    out += wei_to_string(r.price);
    out.push_back(',');
    out += r.market.keyword();
    out.push_back('\n');
  }
  return out;
}

} // namespace washgraph
