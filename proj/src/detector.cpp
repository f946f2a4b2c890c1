#include "washgraph/detector.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>
#include <unordered_set>

namespace washgraph {

std::string_view to_string(NodeLabel l) {
  switch (l) {
    case NodeLabel::Clean: return "clean";
    case NodeLabel::InNode: return "in_node";
    case NodeLabel::WashNode: return "wash_node";
    case NodeLabel::SccWashNode: return "scc_wash_node";
    case NodeLabel::VWashNode: return "V_wash_node";
    case NodeLabel::ServiceN: return "service_n";
  }
  return "clean";
}

std::string_view to_string(FlagReason r) {
  switch (r) {
    case FlagReason::SccCycle: return "scc_cycle";
    case FlagReason::VPattern: return "v_pattern";
    case FlagReason::SuspiciousNode: return "suspicious_node";
  }
  return "suspicious_node";
}

std::optional<NodeLabel> parse_node_label(std::string_view s) {
  for (NodeLabel l : {NodeLabel::Clean, NodeLabel::InNode, NodeLabel::WashNode,
                      NodeLabel::SccWashNode, NodeLabel::VWashNode, NodeLabel::ServiceN})
    if (to_string(l) == s) return l;
  return std::nullopt;
}

std::optional<FlagReason> parse_flag_reason(std::string_view s) {
  for (FlagReason r : {FlagReason::SccCycle, FlagReason::VPattern, FlagReason::SuspiciousNode})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

SccFlagResult get_trans_scc(const TradeGraph& g, const std::vector<SCComponent>& sccs, Ratio psi) {
  SccFlagResult out;
  std::vector<std::size_t> comp_of(g.node_capacity(), SIZE_MAX);
  for (std::size_t c = 0; c < sccs.size(); ++c)
    for (NodeIdx n : sccs[c].members) comp_of[n] = c;

  struct DriftAcc {
    double min_drift = 0.0;
    std::uint64_t loops = 0;
  };
  std::map<std::size_t, DriftAcc> drift_acc;
  std::vector<EdgeIdx> flagged;

  struct Step {
    EdgeIdx e;
    NodeIdx seller, buyer;
    u128 price;
  };
  std::vector<Step> segment;
  std::unordered_map<NodeIdx, std::size_t> last_sold_at; // seller -> segment position

  auto flush_segment = [&] {
    segment.clear();
    last_sold_at.clear();
  };

  std::unordered_map<NodeIdx, i128> net;
  auto evaluate_loop = [&](std::size_t j, std::size_t k) {
    net.clear();
    u128 volume = 0;
    for (std::size_t i = j; i <= k; ++i) {
      const Step& s = segment[i];
      net[s.seller] += i128(s.price);
      net[s.buyer] -= i128(s.price);
      volume += s.price;
    }
    u128 imbalance = 0;
    for (const auto& [node, v] : net) imbalance += u128(v < 0 ? -v : v);
    std::size_t comp = comp_of[segment[j].seller];
    double drift = volume == 0 ? 0.0 : double(imbalance) / (2.0 * double(volume));
    auto [it, inserted] = drift_acc.try_emplace(comp, DriftAcc{drift, 1});
    if (!inserted) {
      it->second.min_drift = std::min(it->second.min_drift, drift);
      ++it->second.loops;
    }
    if (ratio_le(imbalance, 2 * volume, psi)) {
      for (std::size_t i = j; i <= k; ++i) flagged.push_back(segment[i].e);
    }
  };

  for (const auto& [token, chain] : g.token_chains()) {
    flush_segment();
    for (EdgeIdx e : chain) {
      if (!g.edge_alive(e)) {
        // custody unknown past a removed trade
        flush_segment();
        continue;
      }
      NodeIdx s = g.edge_seller(e), b = g.edge_buyer(e);
      if (!segment.empty() && segment.back().buyer != s) flush_segment(); // provenance break
      segment.push_back(Step{e, s, b, g.record(e).price.value});
      std::size_t k = segment.size() - 1;
      last_sold_at[s] = k;
      auto it = last_sold_at.find(b);
      if (it != last_sold_at.end()) evaluate_loop(it->second, k);
    }
  }

  std::sort(flagged.begin(), flagged.end());
  flagged.erase(std::unique(flagged.begin(), flagged.end()), flagged.end());
  out.flagged = std::move(flagged);
  for (const auto& [comp, acc] : drift_acc) {
    out.drifts.push_back(SccFlagResult::ComponentDrift{
        comp, g.node_address(sccs[comp].members.front()), sccs[comp].members.size(),
        acc.min_drift, acc.loops});
  }
  return out;
}

std::vector<EdgeIdx> get_trans_V(const TradeGraph& g, Ratio psi) {
  // order edges by (unordered pair, token) so both groupings are contiguous
  std::vector<EdgeIdx> order;
  order.reserve(g.edge_count());
  for (EdgeIdx e = 0; e < g.edge_capacity(); ++e) {
    if (!g.edge_alive(e)) continue;
    if (g.edge_seller(e) == g.edge_buyer(e)) continue; // self-trades are not pair traffic
    order.push_back(e);
  }
  auto pair_key = [&g](EdgeIdx e) {
    NodeIdx a = g.edge_seller(e), b = g.edge_buyer(e);
    if (a > b) std::swap(a, b);
    return std::pair<NodeIdx, NodeIdx>(a, b);
  };
  std::sort(order.begin(), order.end(), [&](EdgeIdx x, EdgeIdx y) {
    auto px = pair_key(x), py = pair_key(y);
    if (px != py) return px < py;
    const TradeRecord& rx = g.record(x);
    const TradeRecord& ry = g.record(y);
    if (rx.collection != ry.collection) return rx.collection < ry.collection;
    if (rx.token_id != ry.token_id) return rx.token_id < ry.token_id;
    return x < y;
  });

  std::vector<EdgeIdx> flagged;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t pair_end = i + 1;
    while (pair_end < order.size() && pair_key(order[pair_end]) == pair_key(order[i])) ++pair_end;
    u128 pair_volume = 0;
    for (std::size_t k = i; k < pair_end; ++k) pair_volume += g.record(order[k]).price.value;

    std::size_t t = i;
    while (t < pair_end) {
      const TradeRecord& first = g.record(order[t]);
      std::size_t tok_end = t + 1;
      u128 tok_volume = first.price.value;
      bool fwd = true, bwd = false;
      NodeIdx dir_seller = g.edge_seller(order[t]);
      while (tok_end < pair_end) {
        const TradeRecord& r = g.record(order[tok_end]);
        if (r.collection != first.collection || r.token_id != first.token_id) break;
        tok_volume += r.price.value;
        (g.edge_seller(order[tok_end]) == dir_seller ? fwd : bwd) = true;
        ++tok_end;
      }
      if (fwd && bwd) {
        // tok_volume / pair_volume >= 1 - psi, exact
        if (tok_volume * psi.den >= pair_volume * (psi.den - psi.num)) {
          for (std::size_t k = t; k < tok_end; ++k) flagged.push_back(order[k]);
        }
      }
      t = tok_end;
    }
    i = pair_end;
  }
  std::sort(flagged.begin(), flagged.end());
  return flagged;
}

namespace {

bool qualifying_motif_edge(const TradeGraph& g, const CensusIndex& census, EdgeIdx e) {
  NodeIdx s = g.edge_seller(e), b = g.edge_buyer(e);
  if (s == b) return true;
  if (census.mutual(s, b)) return true;
  return census.edge_on_triangle(s, b);
}

} // namespace

bool is_suspicious(const TradeGraph& g, const CensusIndex& census, NodeIdx node,
                   std::span<const EdgeIdx> node_trans, Ratio beta) {
  std::uint64_t total = node_trans.size();
  if (total == 0) return false;
  std::uint64_t qualifying = 0;
  for (EdgeIdx e : node_trans) {
    NodeIdx s = g.edge_seller(e), b = g.edge_buyer(e);
    NodeIdx other = s == node ? b : s;
    if (qualifying_motif_edge(g, census, e) || census.pair_trade_count(node, other) >= 2) {
      ++qualifying;
    }
  }
  return ratio_ge(qualifying, total, beta);
}

std::vector<EdgeIdx> filter_trans(const TradeGraph& g, const CensusIndex& census, NodeIdx node,
                                  std::span<const EdgeIdx> node_trans) {
  // same-token repurchase sequences: tokens this node trades more than once
  std::map<TokenKey, std::uint32_t> token_count;
  for (EdgeIdx e : node_trans) {
    const TradeRecord& r = g.record(e);
    ++token_count[TokenKey{r.collection, r.token_id}];
  }
  std::vector<EdgeIdx> kept;
  for (EdgeIdx e : node_trans) {
    const TradeRecord& r = g.record(e);
    if (qualifying_motif_edge(g, census, e) ||
        token_count[TokenKey{r.collection, r.token_id}] >= 2) {
      kept.push_back(e);
    }
  }
  return kept;
}

std::vector<NodeIdx> suspicious_nodes(const TradeGraph& g, Ratio beta) {
  CensusIndex census(g);
  std::vector<NodeIdx> out;
  for (NodeIdx n : g.nodes_sorted()) {
    auto trans = g.transactions_of(n);
    if (is_suspicious(g, census, n, trans, beta)) out.push_back(n);
  }
  return out;
}

bool WashFinding::is_flagged(EdgeIdx e) const {
  auto it = std::lower_bound(flags.begin(), flags.end(), e,
                             [](const Flag& f, EdgeIdx x) { return f.edge < x; });
  return it != flags.end() && it->edge == e;
}

std::optional<NodeLabel> WashFinding::label_of(const Address& a) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), a,
                             [](const auto& p, const Address& x) { return p.first < x; });
  if (it != labels.end() && it->first == a) return it->second;
  return std::nullopt;
}

std::map<NodeLabel, std::uint64_t> WashFinding::label_counts() const {
  std::map<NodeLabel, std::uint64_t> out;
  for (const auto& [a, l] : labels) ++out[l];
  return out;
}

WashFinding classify(TradeGraph& g, const DetectionParams& params,
                     const std::vector<Address>& known_contracts) {
  if (g.edge_mode() != EdgeMode::Multigraph) {
    throw std::logic_error("classify requires a multigraph (collapsed mode is census-only)");
  }
  WashFinding finding;
  finding.params = params;

  std::set<Address> known(known_contracts.begin(), known_contracts.end());
  std::unordered_map<NodeIdx, NodeLabel> assigned;
  std::unordered_set<NodeIdx> harvested;
  std::vector<EdgeIdx> suspicious_flags;

  std::optional<CensusIndex> census;
  auto current_census = [&]() -> const CensusIndex& {
    if (!census || census->built_for_version() != g.version()) census.emplace(g);
    return *census;
  };

  // suspicion branch over a snapshot order; structural queries see removals
  const std::vector<NodeIdx> snapshot = g.nodes_sorted();
  for (NodeIdx n : snapshot) {
    if (!g.node_alive(n)) continue;
    const CensusIndex& cx = current_census();
    std::vector<EdgeIdx> trans = g.transactions_of(n);
    if (!is_suspicious(g, cx, n, trans, params.beta)) continue;
    if (trans.size() > params.omega) {
      assigned[n] = NodeLabel::InNode;
      g.remove_node(n);
      continue;
    }
    std::vector<EdgeIdx> filtered = filter_trans(g, cx, n, trans);
    assigned[n] = NodeLabel::WashNode;
    for (EdgeIdx e : filtered) {
      suspicious_flags.push_back(e);
      NodeIdx other = g.edge_seller(e) == n ? g.edge_buyer(e) : g.edge_seller(e);
      if (other != n) harvested.insert(other);
    }
    // n_xt bookkeeping: first still-unlabeled neighbor by address; audit only
    std::vector<NodeIdx> nbrs = g.neighbors_of(n);
    std::sort(nbrs.begin(), nbrs.end(),
              [&g](NodeIdx a, NodeIdx b) { return g.node_address(a) < g.node_address(b); });
    for (NodeIdx nb : nbrs) {
      if (!assigned.contains(nb)) {
        finding.unmarked_neighbor_audit.emplace_back(g.node_address(n), g.node_address(nb));
        break;
      }
    }
  }

  // stabilization on the settled graph: cycle and volume rules
  std::vector<SCComponent> sccs = tarjan_scc(g);
  SccFlagResult scc_result = get_trans_scc(g, sccs, params.psi);
  std::vector<EdgeIdx> v_flags = get_trans_V(g, params.psi);

  std::vector<bool> in_scc_set(g.edge_capacity(), false);
  for (EdgeIdx e : scc_result.flagged) in_scc_set[e] = true;
  std::vector<bool> in_v_set(g.edge_capacity(), false);
  for (EdgeIdx e : v_flags) in_v_set[e] = true;

  for (NodeIdx n = 0; n < g.node_capacity(); ++n) {
    if (!g.node_alive(n) || assigned.contains(n)) continue;
    NodeLabel l = NodeLabel::Clean;
    for (EdgeIdx e : g.transactions_of(n)) {
      if (in_scc_set[e]) {
        l = NodeLabel::SccWashNode;
        break;
      }
      if (in_v_set[e]) l = NodeLabel::VWashNode;
    }
    assigned[n] = l;
  }

  // flag merge; branch order decides the primary reason
  std::sort(suspicious_flags.begin(), suspicious_flags.end());
  suspicious_flags.erase(std::unique(suspicious_flags.begin(), suspicious_flags.end()),
                         suspicious_flags.end());
  std::map<EdgeIdx, FlagReason> flag_map;
  for (EdgeIdx e : suspicious_flags) flag_map.emplace(e, FlagReason::SuspiciousNode);
  for (EdgeIdx e : scc_result.flagged) flag_map.emplace(e, FlagReason::SccCycle);
  for (EdgeIdx e : v_flags) flag_map.emplace(e, FlagReason::VPattern);

  // flagged trades never touch a clean endpoint
  for (const auto& [e, reason] : flag_map) {
    if (reason != FlagReason::SuspiciousNode) continue;
    for (NodeIdx end : {g.edge_seller(e), g.edge_buyer(e)}) {
      auto it = assigned.find(end);
      if (it != assigned.end() && it->second == NodeLabel::Clean) it->second = NodeLabel::WashNode;
    }
  }

  // service addresses: counterparties of wash trades that are infrastructure
  for (NodeIdx n : harvested) {
    auto it = assigned.find(n);
    NodeLabel current = it == assigned.end() ? NodeLabel::Clean : it->second;
    if (current == NodeLabel::WashNode) continue;
    if (current == NodeLabel::InNode || known.contains(g.node_address(n))) {
      assigned[n] = NodeLabel::ServiceN;
    }
  }

  finding.flags.reserve(flag_map.size());
  for (const auto& [e, r] : flag_map) finding.flags.push_back(WashFinding::Flag{e, r});

  finding.labels.reserve(assigned.size());
  for (const auto& [n, l] : assigned) finding.labels.emplace_back(g.node_address(n), l);
  std::sort(finding.labels.begin(), finding.labels.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  finding.pruned = g.pruned_addresses();
  std::sort(finding.pruned.begin(), finding.pruned.end());
  finding.component_drift = std::move(scc_result.drifts);
  return finding;
}

} // namespace washgraph
