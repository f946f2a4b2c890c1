#include "washgraph/report.hpp"

#include <algorithm>
#include <map>

namespace washgraph {

MarketStats market_stats_from_totals(MarketId market, std::uint64_t total_tx,
                                     std::uint64_t wash_tx, Wei total_volume, Wei wash_volume) {
  MarketStats s;
  s.market = std::move(market);
  s.total_tx = total_tx;
  s.wash_tx = wash_tx;
  s.total_volume = total_volume;
  s.wash_volume = wash_volume;
  s.wash_tx_pct_tenths = pct_tenths(wash_tx, total_tx);
  s.wash_volume_pct_tenths = pct_tenths(wash_volume.value, total_volume.value);
  return s;
}

std::vector<MarketStats> aggregate_market_stats(std::span<const TradeRecord> records,
                                                const WashFinding& finding) {
  for (const auto& f : finding.flags) {
    if (f.edge >= records.size()) {
      throw MismatchedInputs("finding references trade " + std::to_string(f.edge) +
                             " beyond the record stream (" + std::to_string(records.size()) +
                             " records)");
    }
  }
  struct Acc {
    std::uint64_t total_tx = 0, wash_tx = 0;
    u128 total_volume = 0, wash_volume = 0;
  };
  std::map<MarketId, Acc> acc;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TradeRecord& r = records[i];
    Acc& a = acc[r.market];
    ++a.total_tx;
    a.total_volume += r.price.value;
    if (finding.is_flagged(EdgeIdx(i))) {
      ++a.wash_tx;
      a.wash_volume += r.price.value;
    }
  }
  std::vector<MarketStats> out;
  out.reserve(acc.size());
  for (const auto& [market, a] : acc) {
    out.push_back(market_stats_from_totals(market, a.total_tx, a.wash_tx, Wei{a.total_volume},
                                           Wei{a.wash_volume}));
  }
  std::sort(out.begin(), out.end(), [](const MarketStats& a, const MarketStats& b) {
    return a.market.keyword() < b.market.keyword();
  });
  return out;
}

std::uint64_t grand_total_tx(const std::vector<MarketStats>& stats) {
  std::uint64_t t = 0;
  for (const auto& s : stats) t += s.total_tx;
  return t;
}

Wei grand_total_volume(const std::vector<MarketStats>& stats) {
  Wei t;
  for (const auto& s : stats) t += s.total_volume;
  return t;
}

std::vector<MonthPoint> monthly_series(std::span<const TradeRecord> records,
                                       const WashFinding& finding,
                                       const std::optional<MarketId>& market) {
  struct Acc {
    u128 total = 0, wash = 0;
  };
  std::map<std::int64_t, Acc> by_month;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TradeRecord& r = records[i];
    if (market && r.market != *market) continue;
    Acc& a = by_month[month_index(r.timestamp)];
    a.total += r.price.value;
    if (finding.is_flagged(EdgeIdx(i))) a.wash += r.price.value;
  }
  std::vector<MonthPoint> out;
  if (by_month.empty()) return out;
  std::int64_t first = by_month.begin()->first;
  std::int64_t last = by_month.rbegin()->first;
  out.reserve(std::size_t(last - first + 1));
  for (std::int64_t m = first; m <= last; ++m) {
    MonthPoint p;
    p.month_idx = m;
    auto it = by_month.find(m);
    if (it != by_month.end()) {
      p.total_volume = Wei{it->second.total};
      p.wash_volume = Wei{it->second.wash};
      p.wash_pct_tenths = pct_tenths(it->second.wash, it->second.total);
    }
    out.push_back(p);
  }
  return out;
}

std::string_view to_string(CreditMode m) {
  switch (m) {
    case CreditMode::Both: return "both";
    case CreditMode::BuyerOnly: return "buyer";
    case CreditMode::SellerOnly: return "seller";
  }
  return "both";
}

std::optional<CreditMode> parse_credit_mode(std::string_view s) {
  if (s == "both") return CreditMode::Both;
  if (s == "buyer") return CreditMode::BuyerOnly;
  if (s == "seller") return CreditMode::SellerOnly;
  return std::nullopt;
}

std::vector<RewardEstimate> estimate_rewards(std::span<const TradeRecord> day_trades,
                                             double daily_tokens, CreditMode mode) {
  if (day_trades.empty()) return {};
  const MarketId& market = day_trades.front().market;
  std::int64_t day = day_trades.front().timestamp / 86400;
  std::map<Address, u128> credited;
  u128 market_volume = 0;
  for (const TradeRecord& r : day_trades) {
    if (r.market != market) {
      throw MismatchedInputs("reward estimation spans more than one market");
    }
    if (r.timestamp / 86400 != day) {
      throw MismatchedInputs("reward estimation spans more than one UTC day");
    }
    if (mode != CreditMode::BuyerOnly) {
      credited[r.seller] += r.price.value;
      market_volume += r.price.value;
    }
    if (mode != CreditMode::SellerOnly) {
      credited[r.buyer] += r.price.value;
      market_volume += r.price.value;
    }
  }
  if (market_volume == 0) {
    throw ZeroMarketVolume("market volume is zero for the day");
  }
  std::vector<RewardEstimate> out;
  out.reserve(credited.size());
  for (const auto& [user, vol] : credited) {
    RewardEstimate e;
    e.user = user;
    e.user_volume = Wei{vol};
    e.market_volume = Wei{market_volume};
    e.reward_tokens = double((long double)daily_tokens * (long double)vol /
                             (long double)market_volume);
    out.push_back(e);
  }
  return out;
}

} // namespace washgraph
