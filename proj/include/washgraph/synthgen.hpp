#pragma once

#include "washgraph/detector.hpp"
#include "washgraph/types.hpp"

#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace washgraph {

class InvalidSpec : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class PlantedPattern : std::uint8_t { SelfLoop, Dyad, Triad, Cycle, VPair, Hub };

struct PlantedSpec {
  PlantedPattern pattern = PlantedPattern::Dyad;
  std::uint32_t count = 1;   // pattern instances
  std::uint32_t k = 4;       // cycle length (cycle only)
  std::uint32_t trades = 0;  // legs per instance (dyad/v_pair) or hub size; 0 = default
  Wei price{kWeiPerEth};     // base leg price
  Wei price_jitter{};        // +- uniform jitter, wei (hard mode)
  Ratio motif_fraction{1, 2}; // hub: share of trades that are mutual-dyad legs
  std::optional<UnixSeconds> window_from, window_to;
};

struct OrganicSpec {
  std::uint32_t n_traders = 0;
  std::uint32_t n_tokens = 0;
  std::uint32_t n_trades = 0;
  Wei price_min{kWeiPerEth / 20}; // 0.05
  Wei price_max{5 * kWeiPerEth};
  bool reuse_counterparties = false; // hard mode: buyers drawn from the pool
  std::optional<UnixSeconds> window_from, window_to;
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  MarketId market{MarketKind::LooksRare, {}};
  UnixSeconds start_time = 0; // default 2022-01-01
  UnixSeconds end_time = 0;   // default start + 30 days
  std::uint64_t block_start = 14000000;
  std::vector<OrganicSpec> organic;
  std::vector<PlantedSpec> planted;

  static ScenarioSpec from_json(const std::string& text); // throws InvalidSpec
};

struct GroundTruth {
  // generated record order matches the corpus vector
  std::vector<bool> trade_is_wash;
  std::unordered_map<TxHash, bool, TxHashHash> wash_by_tx;
  std::vector<std::pair<Address, NodeLabel>> intended_labels; // non-clean only, sorted
};

struct Corpus {
  std::vector<TradeRecord> records; // stream order
  GroundTruth truth;
};

// Pure function of the spec: same spec, byte-identical corpus.
Corpus generate(const ScenarioSpec& spec);

std::string truth_sidecar_csv(const Corpus& c);  // trade_id,label
std::string nodes_sidecar_csv(const Corpus& c);  // address,label

// Mixed corpus covering every planted pattern next to motif-free organic
// flow; sized so detection runs near the given trade budget.
ScenarioSpec standard_suite_spec(std::uint64_t seed, std::uint32_t organic_trades = 70000);

} // namespace washgraph
