#pragma once

#include "washgraph/types.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace washgraph {

using NodeIdx = std::uint32_t;
using EdgeIdx = std::uint32_t;

enum class EdgeMode : std::uint8_t { Multigraph, Collapsed };

struct GraphParams {
  std::optional<MarketId> market_filter;
  std::optional<UnixSeconds> window_start; // [start, end)
  std::optional<UnixSeconds> window_end;
  Wei min_price{};
  bool include_self_trades = true;
  EdgeMode edge_mode = EdgeMode::Multigraph;
};

struct CreateStats {
  std::uint64_t records_in = 0;
  std::uint64_t edges_created = 0;
  std::uint64_t excluded_market = 0;
  std::uint64_t excluded_window = 0;
  std::uint64_t excluded_min_price = 0;
  std::uint64_t excluded_self_trade = 0;
  std::uint64_t collapsed_merged = 0;
  bool empty_after_filter = false;
};

class UnknownNode : public std::runtime_error {
public:
  explicit UnknownNode(const Address& a) : std::runtime_error("unknown node " + a.to_string()) {}
};

struct TokenKey {
  Address collection;
  TokenId token;

  bool operator==(const TokenKey&) const = default;
  auto operator<=>(const TokenKey&) const = default;
};

struct TokenKeyHash {
  std::size_t operator()(const TokenKey& k) const noexcept {
    std::size_t h = AddressHash{}(k.collection);
    h ^= std::hash<std::string>{}(k.token.digits) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Directed trade multigraph. Nodes are addresses, edges are individual
// trades in deterministic (block, tx_hash, collection, token_id) order.
// Removal keeps index identity: removed nodes/edges stay allocated but dead,
// and orphaned endpoints are pruned with them. Structural caches held by
// callers key off version().
class TradeGraph {
public:
  static TradeGraph create(std::span<const TradeRecord> sorted_records, const GraphParams& params,
                           CreateStats* stats = nullptr);

  std::size_t node_count() const { return alive_nodes_; }
  std::size_t edge_count() const { return alive_edges_; }
  std::size_t node_capacity() const { return addresses_.size(); } // including dead
  std::size_t edge_capacity() const { return records_.size(); }

  bool node_alive(NodeIdx n) const { return node_alive_[n]; }
  bool edge_alive(EdgeIdx e) const { return edge_alive_[e]; }
  const Address& node_address(NodeIdx n) const { return addresses_[n]; }
  std::optional<NodeIdx> find_node(const Address& a) const;

  const TradeRecord& record(EdgeIdx e) const { return records_[e]; }
  NodeIdx edge_seller(EdgeIdx e) const { return sellers_[e]; }
  NodeIdx edge_buyer(EdgeIdx e) const { return buyers_[e]; }
  std::uint32_t edge_weight(EdgeIdx e) const { return weights_[e]; } // >1 only when collapsed
  const std::vector<TradeRecord>& records() const { return records_; }

  // alive nodes ascending by address
  std::vector<NodeIdx> nodes_sorted() const;

  // every alive in/out edge of the node, (block, tx_hash) order; self-loops once
  std::vector<EdgeIdx> transactions_of(NodeIdx n) const;
  std::vector<EdgeIdx> transactions_of(const Address& a) const;

  // in + out alive edge count (self-loops once)
  std::uint64_t transaction_count(NodeIdx n) const;

  // neighbors (alive, deduplicated, ascending); self excluded
  std::vector<NodeIdx> neighbors_of(NodeIdx n) const;

  void remove_node(NodeIdx n); // prunes endpoints left without edges
  void remove_node(const Address& a);
  const std::vector<Address>& pruned_addresses() const { return pruned_; }

  std::uint64_t version() const { return version_; }

  // per-token transfer sequences in stream order (all edges, alive or dead)
  const std::vector<std::pair<TokenKey, std::vector<EdgeIdx>>>& token_chains() const {
    return token_chains_;
  }

  // edge-list dump: "seller buyer trade_id price_eth timestamp" per line
  std::string dump_edge_list() const;

  EdgeMode edge_mode() const { return edge_mode_; }

private:
  std::vector<TradeRecord> records_; // edge id -> trade
  std::vector<NodeIdx> sellers_;
  std::vector<NodeIdx> buyers_;
  std::vector<std::uint32_t> weights_;
  std::vector<Address> addresses_;
  std::unordered_map<Address, NodeIdx, AddressHash> node_index_;
  std::vector<std::vector<EdgeIdx>> incident_; // per node, ascending edge id
  std::vector<bool> node_alive_;
  std::vector<bool> edge_alive_;
  std::vector<std::pair<TokenKey, std::vector<EdgeIdx>>> token_chains_;
  std::vector<Address> pruned_;
  std::size_t alive_nodes_ = 0;
  std::size_t alive_edges_ = 0;
  std::uint64_t version_ = 0;
  EdgeMode edge_mode_ = EdgeMode::Multigraph;
};

struct SCComponent {
  std::vector<NodeIdx> members; // ascending address order
  std::uint64_t internal_edges = 0;
  bool cyclic = false; // size >= 2, or size 1 with a self-loop
  double avg_internal_tx = 0.0;
};

// Components of the alive subgraph, sorted by smallest member address.
std::vector<SCComponent> tarjan_scc(const TradeGraph& g);

struct NodeMotifs {
  std::uint64_t out_degree = 0;
  std::uint64_t in_degree = 0;
  std::uint64_t distinct_counterparties = 0;
  std::uint64_t repeat_counterparty_trade_count = 0;
  std::uint64_t self_loop_count = 0;
  std::uint64_t dyad_mutual_count = 0; // mutual A<->B pairs this node is in
  std::uint64_t triad_cycle_count = 0; // directed 3-cycles through this node
};

struct MotifCensus {
  std::vector<NodeMotifs> per_node; // indexed by NodeIdx; dead nodes zeroed
  NodeMotifs global;                // field-wise sums
};

MotifCensus motif_census(const TradeGraph& g);

// Census plus the pair-level indexes the detector needs. Rebuilt per graph
// version by the caller.
class CensusIndex {
public:
  explicit CensusIndex(const TradeGraph& g);

  const MotifCensus& census() const { return census_; }
  bool mutual(NodeIdx u, NodeIdx v) const;
  // trades between u and v in either direction, any token
  std::uint64_t pair_trade_count(NodeIdx u, NodeIdx v) const;
  // does directed edge (u,v) sit on a directed 3-cycle
  bool edge_on_triangle(NodeIdx u, NodeIdx v) const;
  std::uint64_t built_for_version() const { return version_; }

private:
  const TradeGraph* g_;
  MotifCensus census_;
  std::vector<std::vector<NodeIdx>> out_; // distinct alive out-neighbors, sorted
  std::vector<std::vector<NodeIdx>> in_;
  std::unordered_map<std::uint64_t, std::uint64_t> pair_count_; // packed (min,max) -> trades
  std::uint64_t version_;
};

} // namespace washgraph
