#pragma once

#include "washgraph/graph.hpp"

#include <set>

namespace washgraph {

struct DetectionParams {
  Ratio beta{1, 2};  // suspicion sensitivity
  Ratio psi{1, 20};  // balance-drift tolerance / volume dominance
  std::uint64_t omega = 10000; // service-hub transaction-count threshold
};

enum class NodeLabel : std::uint8_t { Clean, InNode, WashNode, SccWashNode, VWashNode, ServiceN };
enum class FlagReason : std::uint8_t { SccCycle, VPattern, SuspiciousNode };

std::string_view to_string(NodeLabel l);
std::string_view to_string(FlagReason r);
std::optional<NodeLabel> parse_node_label(std::string_view s);
std::optional<FlagReason> parse_flag_reason(std::string_view s);

// Trades flagged by the balance-drift rule, with per-component drift.
struct SccFlagResult {
  std::vector<EdgeIdx> flagged; // sorted, unique
  struct ComponentDrift {
    std::size_t component;      // index into the SCC list used for the run
    Address smallest_member;
    std::size_t member_count = 0;
    double min_drift = 0.0;     // over evaluated token-returning loops
    std::uint64_t loops_evaluated = 0;
  };
  std::vector<ComponentDrift> drifts; // ordered by component index
};

// Token-returning loops: trades of one token that bring it back to a prior
// owner are flagged when |sum of member net positions| / (2 * loop volume)
// stays within psi. A zero-volume loop counts as zero drift.
SccFlagResult get_trans_scc(const TradeGraph& g, const std::vector<SCComponent>& sccs, Ratio psi);

// Same-token back-and-forth between one pair of addresses, flagged when that
// token's two-way volume is at least (1 - psi) of the pair's total volume.
std::vector<EdgeIdx> get_trans_V(const TradeGraph& g, Ratio psi);

// At least a beta fraction of the node's trades are repurchases or closed-
// motif trades (self-loops, mutual dyads, directed-triangle edges).
bool is_suspicious(const TradeGraph& g, const CensusIndex& census, NodeIdx node,
                   std::span<const EdgeIdx> node_trans, Ratio beta);

// Trades participating in self-loops, mutual dyads, directed triangles, or
// same-token repurchase sequences. Subset of the input, input order.
std::vector<EdgeIdx> filter_trans(const TradeGraph& g, const CensusIndex& census, NodeIdx node,
                                  std::span<const EdgeIdx> node_trans);

// All alive nodes is_suspicious accepts at this beta (no removals applied).
std::vector<NodeIdx> suspicious_nodes(const TradeGraph& g, Ratio beta);

struct WashFinding {
  DetectionParams params;

  struct Flag {
    EdgeIdx edge;
    FlagReason reason;
  };
  std::vector<Flag> flags; // ascending edge

  std::vector<std::pair<Address, NodeLabel>> labels; // ascending address
  std::vector<Address> pruned;                       // dropped with their hub, unlabeled
  std::vector<SccFlagResult::ComponentDrift> component_drift;
  std::vector<std::pair<Address, Address>> unmarked_neighbor_audit; // (node, n_xt)

  bool is_flagged(EdgeIdx e) const;
  std::optional<NodeLabel> label_of(const Address& a) const;
  std::map<NodeLabel, std::uint64_t> label_counts() const;
};

// Full node-classification pass: suspicion branch with hub removal, then one
// stabilization pass on the settled graph for cycle/volume labels and flags.
WashFinding classify(TradeGraph& g, const DetectionParams& params,
                     const std::vector<Address>& known_contracts = {});

} // namespace washgraph
