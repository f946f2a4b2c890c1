#include "washgraph/types.hpp"

#include <cstdio>
#include <cstring>

namespace washgraph {

namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1; // uppercase is rejected: wire format is lowercase
}

char nibble_hex(unsigned v) { return v < 10 ? char('0' + v) : char('a' + v - 10); }

template <std::size_t N>
bool parse_hex_bytes(std::string_view s, std::array<std::uint8_t, N>& out) {
  if (s.size() != 2 + 2 * N || s[0] != '0' || s[1] != 'x') return false;
  for (std::size_t i = 0; i < N; ++i) {
    int hi = hex_nibble(s[2 + 2 * i]);
    int lo = hex_nibble(s[3 + 2 * i]);
    if (hi < 0 || lo < 0) return false;
    out[i] = std::uint8_t(hi << 4 | lo);
  }
  return true;
}

template <std::size_t N>
std::string format_hex_bytes(const std::array<std::uint8_t, N>& b) {
  std::string s;
  s.resize(2 + 2 * N);
  s[0] = '0';
  s[1] = 'x';
  for (std::size_t i = 0; i < N; ++i) {
    s[2 + 2 * i] = nibble_hex(b[i] >> 4);
    s[3 + 2 * i] = nibble_hex(b[i] & 0xf);
  }
  return s;
}

std::size_t fnv1a(const std::uint8_t* p, std::size_t n) {
  std::size_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

constexpr u128 kU128Max = ~u128(0);

} // namespace

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  char buf[40];
  int i = 40;
  while (v > 0) {
    buf[--i] = char('0' + int(v % 10));
    v /= 10;
  }
  return std::string(buf + i, buf + 40);
}

std::optional<Address> Address::parse(std::string_view s) {
  Address a;
  if (!parse_hex_bytes(s, a.bytes)) return std::nullopt;
  return a;
}

std::string Address::to_string() const { return format_hex_bytes(bytes); }

std::optional<TxHash> TxHash::parse(std::string_view s) {
  TxHash h;
  if (!parse_hex_bytes(s, h.bytes)) return std::nullopt;
  return h;
}

std::string TxHash::to_string() const { return format_hex_bytes(bytes); }

std::size_t AddressHash::operator()(const Address& a) const noexcept {
  return fnv1a(a.bytes.data(), a.bytes.size());
}

std::size_t TxHashHash::operator()(const TxHash& h) const noexcept {
  return fnv1a(h.bytes.data(), h.bytes.size());
}

std::optional<MarketId> MarketId::parse(std::string_view keyword) {
  if (keyword == "opensea") return MarketId{MarketKind::OpenSea, {}};
  if (keyword == "blur") return MarketId{MarketKind::Blur, {}};
  if (keyword == "looksrare") return MarketId{MarketKind::LooksRare, {}};
  if (keyword == "x2y2") return MarketId{MarketKind::X2Y2, {}};
  if (keyword.empty()) return std::nullopt;
  for (char c : keyword)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-'))
      return std::nullopt;
  return MarketId{MarketKind::Other, std::string(keyword)};
}

std::string MarketId::keyword() const {
  switch (kind) {
    case MarketKind::OpenSea: return "opensea";
    case MarketKind::Blur: return "blur";
    case MarketKind::LooksRare: return "looksrare";
    case MarketKind::X2Y2: return "x2y2";
    case MarketKind::Other: return name;
  }
  return name;
}

std::optional<Wei> parse_wei(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  u128 v = 0;
  for (char c : s) {
    unsigned d = unsigned(c - '0');
    if (v > (kU128Max - d) / 10) return std::nullopt;
    v = v * 10 + d;
  }
  return Wei{v};
}

std::optional<Wei> parse_eth(std::string_view s) {
  auto dot = s.find('.');
  std::string_view int_part = dot == std::string_view::npos ? s : s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? "" : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (int_part.empty()) int_part = "0";
  if (!all_digits(int_part)) return std::nullopt;
  if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;
  if (frac_part.size() > 18) {
    // exactness contract: refuse sub-wei precision
    return std::nullopt;
  }
  auto whole = parse_wei(int_part);
  if (!whole) return std::nullopt;
  if (whole->value > kU128Max / kWeiPerEth) return std::nullopt;
  u128 v = whole->value * kWeiPerEth;
  u128 frac = 0;
  for (char c : frac_part) frac = frac * 10 + unsigned(c - '0');
  for (std::size_t i = frac_part.size(); i < 18; ++i) frac *= 10;
  if (v > kU128Max - frac) return std::nullopt;
  return Wei{v + frac};
}

std::string wei_to_string(Wei w) { return u128_to_string(w.value); }

std::string eth_to_string(Wei w) {
  u128 whole = w.value / kWeiPerEth;
  u128 frac = w.value % kWeiPerEth;
  std::string f(18, '0');
  for (int i = 17; i >= 0; --i) {
    f[std::size_t(i)] = char('0' + int(frac % 10));
    frac /= 10;
  }
  std::size_t last = f.find_last_not_of('0');
  f.resize(last == std::string::npos ? 1 : last + 1);
  return u128_to_string(whole) + "." + f;
}

std::string eth_1dp_string(Wei w) {
  constexpr u128 tenth = kWeiPerEth / 10;
  u128 tenths = (w.value + tenth / 2) / tenth;
  return u128_to_string(tenths / 10) + "." + u128_to_string(tenths % 10);
}

std::uint64_t pct_tenths(u128 num, u128 den) {
  if (den == 0) return 0;
  u128 t = (u128(2000) * num + den) / (2 * den);
  return std::uint64_t(t);
}

std::string tenths_to_string(std::uint64_t tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::optional<Ratio> Ratio::parse(std::string_view s) {
  auto dot = s.find('.');
  std::string_view int_part = dot == std::string_view::npos ? s : s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? "" : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
  if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;
  if (frac_part.size() > 9) return std::nullopt;
  std::uint64_t whole = 0;
  for (char c : int_part) whole = whole * 10 + unsigned(c - '0');
  std::uint64_t den = 1;
  std::uint64_t frac = 0;
  for (char c : frac_part) {
    frac = frac * 10 + unsigned(c - '0');
    den *= 10;
  }
  std::uint64_t num = whole * den + frac;
  if (num > den) return std::nullopt; // thresholds live in [0,1]
  return Ratio{num, den};
}

std::string Ratio::to_string() const {
  std::uint64_t whole = num / den;
  std::uint64_t rem = num % den;
  if (rem == 0) return std::to_string(whole);
  std::string frac;
  std::uint64_t scale = den / 10; // den is a power of ten by construction
  while (scale > 0) {
    frac.push_back(char('0' + (rem / scale) % 10));
    scale /= 10;
  }
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return std::to_string(whole) + "." + frac;
}

bool ratio_ge(u128 a, u128 b, Ratio r) {
  // a/b >= num/den  <=>  a*den >= num*b
  return a * r.den >= u128(r.num) * b;
}

bool ratio_le(u128 a, u128 b, Ratio r) {
  if (b == 0) return true; // 0/0 treated as 0
  return a * r.den <= u128(r.num) * b;
}

std::optional<UnixSeconds> normalize_timestamp(std::uint64_t raw) {
  if (raw < std::uint64_t(kMinTimestamp)) return std::nullopt;
  if (raw >= (std::uint64_t(1) << 63)) return std::nullopt;
  return UnixSeconds(raw);
}

// Howard Hinnant's civil calendar algorithms.
CivilDate civil_from_unix(UnixSeconds t) {
  std::int64_t days = t / 86400;
  if (t % 86400 < 0) --days;
  days += 719468;
  std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  std::uint64_t doe = std::uint64_t(days - era * 146097);
  std::uint64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t y = std::int64_t(yoe) + era * 400;
  std::uint64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  std::uint64_t mp = (5 * doy + 2) / 153;
  std::uint64_t d = doy - (153 * mp + 2) / 5 + 1;
  std::uint64_t m = mp < 10 ? mp + 3 : mp - 9;
  return CivilDate{int(y + (m <= 2)), unsigned(m), unsigned(d)};
}

UnixSeconds unix_from_civil(const CivilDate& c) {
  std::int64_t y = c.year - (c.month <= 2);
  std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  std::uint64_t yoe = std::uint64_t(y - era * 400);
  std::uint64_t doy = (153 * (c.month > 2 ? c.month - 3 : c.month + 9) + 2) / 5 + c.day - 1;
  std::uint64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  std::int64_t days = era * 146097 + std::int64_t(doe) - 719468;
  return days * 86400;
}

std::string iso8601_utc(UnixSeconds t) {
  CivilDate d = civil_from_unix(t);
  std::int64_t secs = t % 86400;
  if (secs < 0) secs += 86400;
  char buf[21];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", d.year, d.month, d.day,
                int(secs / 3600), int(secs / 60 % 60), int(secs % 60));
  return std::string(buf);
}

std::optional<UnixSeconds> parse_iso_date(std::string_view s) {
  // YYYY-MM-DD with optional Thh:mm:ss[Z]
  auto num = [&](std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      char c = s[pos + i];
      if (c < '0' || c > '9') return false;
      v = v * 10 + (c - '0');
    }
    out = v;
    return true;
  };
  int y, mo, d;
  if (!num(0, 4, y) || s.size() < 10 || s[4] != '-' || !num(5, 2, mo) || s[7] != '-' ||
      !num(8, 2, d))
    return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (s.size() > 10) {
    if (s[10] != 'T' || !num(11, 2, hh) || s.size() < 19 || s[13] != ':' || !num(14, 2, mm) ||
        s[16] != ':' || !num(17, 2, ss))
      return std::nullopt;
    if (s.size() == 20 && s[19] != 'Z') return std::nullopt;
    if (s.size() > 20) return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  }
  return unix_from_civil(CivilDate{y, unsigned(mo), unsigned(d)}) + hh * 3600 + mm * 60 + ss;
}

std::int64_t month_index(UnixSeconds t) {
  CivilDate d = civil_from_unix(t);
  return std::int64_t(d.year) * 12 + std::int64_t(d.month) - 1;
}

std::string month_label(std::int64_t midx) {
  std::int64_t y = midx / 12;
  std::int64_t m = midx % 12;
  if (m < 0) {
    m += 12;
    --y;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04lld-%02lld", (long long)y, (long long)(m + 1));
  return std::string(buf);
}

std::optional<TokenId> TokenId::parse(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  std::size_t i = 0;
  while (i + 1 < s.size() && s[i] == '0') ++i;
  return TokenId{std::string(s.substr(i))};
}

bool record_stream_less(const TradeRecord& a, const TradeRecord& b) {
  if (a.block_number != b.block_number) return a.block_number < b.block_number;
  if (auto c = a.tx_hash <=> b.tx_hash; c != 0) return c < 0;
  if (auto c = a.collection <=> b.collection; c != 0) return c < 0;
  return (a.token_id <=> b.token_id) < 0;
}

} // namespace washgraph
