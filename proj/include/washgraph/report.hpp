#pragma once

#include "washgraph/detector.hpp"
#include "washgraph/types.hpp"

#include <span>
#include <vector>

namespace washgraph {

struct MarketStats {
  MarketId market;
  std::uint64_t total_tx = 0;
  std::uint64_t wash_tx = 0;
  std::uint64_t wash_tx_pct_tenths = 0; // percent * 10, rounded half-up
  Wei total_volume;
  Wei wash_volume;
  std::uint64_t wash_volume_pct_tenths = 0;

  std::string wash_tx_pct_string() const { return tenths_to_string(wash_tx_pct_tenths); }
  std::string wash_volume_pct_string() const { return tenths_to_string(wash_volume_pct_tenths); }
};

class MismatchedInputs : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ZeroMarketVolume : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

MarketStats market_stats_from_totals(MarketId market, std::uint64_t total_tx,
                                     std::uint64_t wash_tx, Wei total_volume, Wei wash_volume);

// One MarketStats per market present in the stream, market-keyword order.
// flags index into `records`; each flagged trade counts its full price once.
std::vector<MarketStats> aggregate_market_stats(std::span<const TradeRecord> records,
                                                const WashFinding& finding);

std::uint64_t grand_total_tx(const std::vector<MarketStats>& stats);
Wei grand_total_volume(const std::vector<MarketStats>& stats);

struct MonthPoint {
  std::int64_t month_idx = 0; // months since year 0
  Wei total_volume;
  Wei wash_volume;
  std::uint64_t wash_pct_tenths = 0;

  std::string label() const { return month_label(month_idx); }
};

// Contiguous UTC-month series (gap months emitted as zeros); optionally
// restricted to one market.
std::vector<MonthPoint> monthly_series(std::span<const TradeRecord> records,
                                       const WashFinding& finding,
                                       const std::optional<MarketId>& market);

enum class CreditMode : std::uint8_t { Both, BuyerOnly, SellerOnly };
std::string_view to_string(CreditMode m);
std::optional<CreditMode> parse_credit_mode(std::string_view s);

struct RewardEstimate {
  Address user;
  Wei user_volume;   // credited volume
  Wei market_volume; // sum of credited volume over all users
  double reward_tokens = 0.0;
};

// Pro-rata daily rewards: reward = daily_tokens * user_volume / market_volume.
// All trades must share one UTC day and one market.
std::vector<RewardEstimate> estimate_rewards(std::span<const TradeRecord> day_trades,
                                             double daily_tokens,
                                             CreditMode mode = CreditMode::Both);

} // namespace washgraph
