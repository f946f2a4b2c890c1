#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace washgraph {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr u128 kWeiPerEth = u128(1000000000000000000ULL); // 10^18

std::string u128_to_string(u128 v);

// 160-bit account, 0x-prefixed lowercase hex on the wire.
struct Address {
  std::array<std::uint8_t, 20> bytes{};

  static std::optional<Address> parse(std::string_view s);
  std::string to_string() const;
  auto operator<=>(const Address&) const = default;
};

struct TxHash {
  std::array<std::uint8_t, 32> bytes{};

  static std::optional<TxHash> parse(std::string_view s);
  std::string to_string() const;
  auto operator<=>(const TxHash&) const = default;
};

struct AddressHash {
  std::size_t operator()(const Address& a) const noexcept;
};
struct TxHashHash {
  std::size_t operator()(const TxHash& h) const noexcept;
};

enum class MarketKind : std::uint8_t { OpenSea, Blur, LooksRare, X2Y2, Other };

// Market identity; `name` is set only for Other.
struct MarketId {
  MarketKind kind = MarketKind::Other;
  std::string name;

  static std::optional<MarketId> parse(std::string_view keyword);
  std::string keyword() const;
  auto operator<=>(const MarketId&) const = default;
};

// Non-negative wei amount. All volume arithmetic stays in integer wei;
// ETH strings are derived exactly, never through binary floating point.
struct Wei {
  u128 value{};

  auto operator<=>(const Wei&) const = default;
  Wei& operator+=(Wei o) {
    value += o.value;
    return *this;
  }
};

std::optional<Wei> parse_wei(std::string_view decimal_digits);
std::optional<Wei> parse_eth(std::string_view decimal); // "1.2345" -> wei, exact
std::string wei_to_string(Wei w);
// Canonical ETH rendering: integer part, '.', fraction with trailing zeros
// trimmed but at least one digit ("0.0", "1.0", "1.2345").
std::string eth_to_string(Wei w);
// ETH rounded half-up to one decimal ("10126545.8").
std::string eth_1dp_string(Wei w);

// round_half_up(1000 * num / den); 0 when den == 0.
std::uint64_t pct_tenths(u128 num, u128 den);
std::string tenths_to_string(std::uint64_t tenths); // 945 -> "94.5"

// Exact rational in [0,1] for thresholds; den <= 10^9.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static std::optional<Ratio> parse(std::string_view decimal);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
};

// a/b >= r, exact.
bool ratio_ge(u128 a, u128 b, Ratio r);
// a/b <= r, exact; 0/0 counts as 0.
bool ratio_le(u128 a, u128 b, Ratio r);

using UnixSeconds = std::int64_t;

// 2015-07-30T00:00:00Z, first possible chain timestamp.
constexpr UnixSeconds kMinTimestamp = 1438214400;

std::optional<UnixSeconds> normalize_timestamp(std::uint64_t raw);

struct CivilDate {
  int year = 1970;
  unsigned month = 1; // 1..12
  unsigned day = 1;   // 1..31
};

CivilDate civil_from_unix(UnixSeconds t);
UnixSeconds unix_from_civil(const CivilDate& d);
std::string iso8601_utc(UnixSeconds t);                     // 2022-01-01T00:00:00Z
std::optional<UnixSeconds> parse_iso_date(std::string_view); // YYYY-MM-DD or full instant
// months since year 0 for contiguous series indexing
std::int64_t month_index(UnixSeconds t);
std::string month_label(std::int64_t month_idx); // "2022-01"

// Arbitrary-precision unsigned token id, canonical decimal digits.
struct TokenId {
  std::string digits = "0";

  static std::optional<TokenId> parse(std::string_view s);
  const std::string& to_string() const { return digits; }
  bool operator==(const TokenId& o) const = default;
  std::strong_ordering operator<=>(const TokenId& o) const {
    if (auto c = digits.size() <=> o.digits.size(); c != 0) return c;
    return digits.compare(o.digits) <=> 0;
  }
};

// One normalized marketplace sale.
struct TradeRecord {
  std::uint64_t block_number = 0;
  UnixSeconds timestamp = 0;
  TxHash tx_hash;
  Address seller;
  Address buyer;
  Address collection;
  TokenId token_id;
  Wei price;
  MarketId market;

  bool is_self_trade() const { return seller == buyer; }
};

// Deterministic stream order: (block_number, tx_hash, collection, token_id).
// tx_hash alone can tie for bundle sales, so the key is extended.
bool record_stream_less(const TradeRecord& a, const TradeRecord& b);

} // namespace washgraph
