#include "washgraph/graph.hpp"

#include <algorithm>
#include <cassert>

namespace washgraph {

namespace {

std::uint64_t pack_pair(NodeIdx a, NodeIdx b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t(a) << 32) | b;
}

bool contains_sorted(const std::vector<NodeIdx>& v, NodeIdx x) {
  return std::binary_search(v.begin(), v.end(), x);
}

} // namespace

TradeGraph TradeGraph::create(std::span<const TradeRecord> sorted_records,
                              const GraphParams& params, CreateStats* stats) {
  TradeGraph g;
  g.edge_mode_ = params.edge_mode;
  CreateStats local;
  local.records_in = sorted_records.size();

  g.node_index_.reserve(sorted_records.size() * 2);
  auto intern = [&g](const Address& a) -> NodeIdx {
    auto [it, inserted] = g.node_index_.try_emplace(a, NodeIdx(g.addresses_.size()));
    if (inserted) {
      g.addresses_.push_back(a);
      g.incident_.emplace_back();
      g.node_alive_.push_back(true);
      ++g.alive_nodes_;
    }
    return it->second;
  };

  std::unordered_map<std::uint64_t, EdgeIdx> collapsed; // (seller,buyer) -> edge
  for (const TradeRecord& r : sorted_records) {
    if (params.market_filter && r.market != *params.market_filter) {
      ++local.excluded_market;
      continue;
    }
    if ((params.window_start && r.timestamp < *params.window_start) ||
        (params.window_end && r.timestamp >= *params.window_end)) {
      ++local.excluded_window;
      continue;
    }
    if (r.price < params.min_price) {
      ++local.excluded_min_price;
      continue;
    }
    if (!params.include_self_trades && r.is_self_trade()) {
      ++local.excluded_self_trade;
      continue;
    }
    NodeIdx s = intern(r.seller);
    NodeIdx b = intern(r.buyer);
    if (params.edge_mode == EdgeMode::Collapsed) {
      std::uint64_t key = (std::uint64_t(s) << 32) | b;
      auto it = collapsed.find(key);
      if (it != collapsed.end()) {
        ++g.weights_[it->second];
        g.records_[it->second].price += r.price;
        ++local.collapsed_merged;
        continue;
      }
      collapsed.emplace(key, EdgeIdx(g.records_.size()));
    }
    EdgeIdx e = EdgeIdx(g.records_.size());
    g.records_.push_back(r);
    g.sellers_.push_back(s);
    g.buyers_.push_back(b);
    g.weights_.push_back(1);
    g.edge_alive_.push_back(true);
    g.incident_[s].push_back(e);
    if (b != s) g.incident_[b].push_back(e);
    ++g.alive_edges_;
    ++local.edges_created;
  }

  if (params.edge_mode == EdgeMode::Multigraph) {
    std::unordered_map<TokenKey, std::vector<EdgeIdx>, TokenKeyHash> chains;
    chains.reserve(g.records_.size());
    for (EdgeIdx e = 0; e < g.records_.size(); ++e) {
      chains[TokenKey{g.records_[e].collection, g.records_[e].token_id}].push_back(e);
    }
    g.token_chains_.reserve(chains.size());
    for (auto& [k, v] : chains) g.token_chains_.emplace_back(k, std::move(v));
    std::sort(g.token_chains_.begin(), g.token_chains_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  local.empty_after_filter = local.records_in > 0 && local.edges_created == 0;
  if (stats) *stats = local;
  return g;
}

std::optional<NodeIdx> TradeGraph::find_node(const Address& a) const {
  auto it = node_index_.find(a);
  if (it == node_index_.end() || !node_alive_[it->second]) return std::nullopt;
  return it->second;
}

std::vector<NodeIdx> TradeGraph::nodes_sorted() const {
  std::vector<NodeIdx> out;
  out.reserve(alive_nodes_);
  for (NodeIdx n = 0; n < addresses_.size(); ++n)
    if (node_alive_[n]) out.push_back(n);
  std::sort(out.begin(), out.end(),
            [this](NodeIdx a, NodeIdx b) { return addresses_[a] < addresses_[b]; });
  return out;
}

std::vector<EdgeIdx> TradeGraph::transactions_of(NodeIdx n) const {
  if (n >= addresses_.size() || !node_alive_[n]) {
    throw UnknownNode(n < addresses_.size() ? addresses_[n] : Address{});
  }
  std::vector<EdgeIdx> out;
  out.reserve(incident_[n].size());
  for (EdgeIdx e : incident_[n])
    if (edge_alive_[e]) out.push_back(e);
  return out; // incident lists are built ascending; stream order is edge order
}

std::vector<EdgeIdx> TradeGraph::transactions_of(const Address& a) const {
  auto n = find_node(a);
  if (!n) throw UnknownNode(a);
  return transactions_of(*n);
}

std::uint64_t TradeGraph::transaction_count(NodeIdx n) const {
  std::uint64_t c = 0;
  for (EdgeIdx e : incident_[n])
    if (edge_alive_[e]) ++c;
  return c;
}

std::vector<NodeIdx> TradeGraph::neighbors_of(NodeIdx n) const {
  std::vector<NodeIdx> out;
  for (EdgeIdx e : incident_[n]) {
    if (!edge_alive_[e]) continue;
    NodeIdx other = sellers_[e] == n ? buyers_[e] : sellers_[e];
    if (other != n) out.push_back(other);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void TradeGraph::remove_node(NodeIdx n) {
  if (n >= addresses_.size() || !node_alive_[n]) {
    throw UnknownNode(n < addresses_.size() ? addresses_[n] : Address{});
  }
  node_alive_[n] = false;
  --alive_nodes_;
  std::vector<NodeIdx> touched;
  for (EdgeIdx e : incident_[n]) {
    if (!edge_alive_[e]) continue;
    edge_alive_[e] = false;
    --alive_edges_;
    NodeIdx other = sellers_[e] == n ? buyers_[e] : sellers_[e];
    if (other != n) touched.push_back(other);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  // no orphan nodes: endpoints left with no alive edges leave the node set
  for (NodeIdx t : touched) {
    if (!node_alive_[t]) continue;
    if (transaction_count(t) == 0) {
      node_alive_[t] = false;
      --alive_nodes_;
      pruned_.push_back(addresses_[t]);
    }
  }
  ++version_;
}

void TradeGraph::remove_node(const Address& a) {
  auto n = find_node(a);
  if (!n) throw UnknownNode(a);
  remove_node(*n);
}

std::string TradeGraph::dump_edge_list() const {
  std::string out;
  for (EdgeIdx e = 0; e < records_.size(); ++e) {
    if (!edge_alive_[e]) continue;
    const TradeRecord& r = records_[e];
    out += r.seller.to_string();
    out.push_back(' ');
    out += r.buyer.to_string();
    out.push_back(' ');
    out += std::to_string(e);
    out.push_back(' ');
    out += eth_to_string(r.price);
    out.push_back(' ');
    out += std::to_string(std::uint64_t(r.timestamp));
    out.push_back('\n');
  }
  return out;
}

std::vector<SCComponent> tarjan_scc(const TradeGraph& g) {
  const std::size_t n = g.node_capacity();
  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnvisited);
  std::vector<std::uint32_t> lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeIdx> stack;
  std::vector<std::uint32_t> comp_of(n, kUnvisited);
  std::uint32_t next_index = 0;
  std::uint32_t comp_count = 0;

  // distinct alive out-neighbors per node
  std::vector<std::vector<NodeIdx>> succ(n);
  for (EdgeIdx e = 0; e < g.edge_capacity(); ++e) {
    if (!g.edge_alive(e)) continue;
    succ[g.edge_seller(e)].push_back(g.edge_buyer(e));
  }
  for (auto& v : succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  struct Frame {
    NodeIdx node;
    std::size_t next_succ;
  };
  std::vector<Frame> frames;

  for (NodeIdx root = 0; root < n; ++root) {
    if (!g.node_alive(root) || index[root] != kUnvisited) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      NodeIdx v = f.node;
      if (f.next_succ < succ[v].size()) {
        NodeIdx w = succ[v][f.next_succ++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        if (lowlink[v] == index[v]) {
          while (true) {
            NodeIdx w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp_of[w] = comp_count;
            if (w == v) break;
          }
          ++comp_count;
        }
        frames.pop_back();
        if (!frames.empty()) {
          NodeIdx parent = frames.back().node;
          lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
        }
      }
    }
  }

  std::vector<SCComponent> comps(comp_count);
  for (NodeIdx v = 0; v < n; ++v) {
    if (!g.node_alive(v)) continue;
    comps[comp_of[v]].members.push_back(v);
  }
  std::vector<bool> has_self_loop(comp_count, false);
  for (EdgeIdx e = 0; e < g.edge_capacity(); ++e) {
    if (!g.edge_alive(e)) continue;
    NodeIdx s = g.edge_seller(e), b = g.edge_buyer(e);
    if (comp_of[s] == comp_of[b]) {
      comps[comp_of[s]].internal_edges += g.edge_weight(e);
      if (s == b) has_self_loop[comp_of[s]] = true;
    }
  }
  for (std::uint32_t c = 0; c < comp_count; ++c) {
    auto& comp = comps[c];
    std::sort(comp.members.begin(), comp.members.end(),
              [&g](NodeIdx a, NodeIdx b) { return g.node_address(a) < g.node_address(b); });
    comp.cyclic = comp.members.size() >= 2 || has_self_loop[c];
    if (!comp.members.empty())
      comp.avg_internal_tx = double(comp.internal_edges) / double(comp.members.size());
  }
  std::sort(comps.begin(), comps.end(), [&g](const SCComponent& a, const SCComponent& b) {
    return g.node_address(a.members.front()) < g.node_address(b.members.front());
  });
  return comps;
}

CensusIndex::CensusIndex(const TradeGraph& g) : g_(&g), version_(g.version()) {
  const std::size_t n = g.node_capacity();
  out_.assign(n, {});
  in_.assign(n, {});
  census_.per_node.assign(n, NodeMotifs{});
  pair_count_.reserve(g.edge_count());

  for (EdgeIdx e = 0; e < g.edge_capacity(); ++e) {
    if (!g.edge_alive(e)) continue;
    NodeIdx s = g.edge_seller(e), b = g.edge_buyer(e);
    std::uint64_t w = g.edge_weight(e);
    census_.per_node[s].out_degree += w;
    census_.per_node[b].in_degree += w;
    if (s == b) {
      census_.per_node[s].self_loop_count += w;
      continue;
    }
    out_[s].push_back(b);
    in_[b].push_back(s);
    pair_count_[pack_pair(s, b)] += w;
  }
  for (auto& v : out_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (auto& v : in_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  for (NodeIdx u = 0; u < n; ++u) {
    if (!g.node_alive(u)) continue;
    auto& m = census_.per_node[u];
    std::vector<NodeIdx> parties;
    parties.reserve(out_[u].size() + in_[u].size());
    parties.insert(parties.end(), out_[u].begin(), out_[u].end());
    parties.insert(parties.end(), in_[u].begin(), in_[u].end());
    std::sort(parties.begin(), parties.end());
    parties.erase(std::unique(parties.begin(), parties.end()), parties.end());
    m.distinct_counterparties = parties.size();
    for (NodeIdx c : parties) {
      std::uint64_t cnt = pair_count_.at(pack_pair(u, c));
      if (cnt >= 2) m.repeat_counterparty_trade_count += cnt;
      if (contains_sorted(out_[u], c) && contains_sorted(out_[c], u)) ++m.dyad_mutual_count;
    }
  }

  // directed 3-cycles, each counted once at its smallest member index
  for (NodeIdx u = 0; u < n; ++u) {
    if (!g.node_alive(u)) continue;
    for (NodeIdx v : out_[u]) {
      if (v <= u) continue;
      // w with v->w and w->u
      const auto& a = out_[v];
      const auto& b = in_[u];
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
          ++i;
        } else if (b[j] < a[i]) {
          ++j;
        } else {
          NodeIdx w = a[i];
          if (w > u && w != v) {
            ++census_.per_node[u].triad_cycle_count;
            ++census_.per_node[v].triad_cycle_count;
            ++census_.per_node[w].triad_cycle_count;
          }
          ++i;
          ++j;
        }
      }
    }
  }

  for (const auto& m : census_.per_node) {
    census_.global.out_degree += m.out_degree;
    census_.global.in_degree += m.in_degree;
    census_.global.distinct_counterparties += m.distinct_counterparties;
    census_.global.repeat_counterparty_trade_count += m.repeat_counterparty_trade_count;
    census_.global.self_loop_count += m.self_loop_count;
    census_.global.dyad_mutual_count += m.dyad_mutual_count;
    census_.global.triad_cycle_count += m.triad_cycle_count;
  }
}

bool CensusIndex::mutual(NodeIdx u, NodeIdx v) const {
  if (u == v) return false;
  return contains_sorted(out_[u], v) && contains_sorted(out_[v], u);
}

std::uint64_t CensusIndex::pair_trade_count(NodeIdx u, NodeIdx v) const {
  if (u == v) return 0;
  auto it = pair_count_.find(pack_pair(u, v));
  return it == pair_count_.end() ? 0 : it->second;
}

bool CensusIndex::edge_on_triangle(NodeIdx u, NodeIdx v) const {
  if (u == v) return false;
  // w != u,v with v->w and w->u
  const auto& a = out_[v];
  const auto& b = in_[u];
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (NodeIdx w : small) {
    if (w == u || w == v) continue;
    if (contains_sorted(large, w)) return true;
  }
  return false;
}

MotifCensus motif_census(const TradeGraph& g) { return CensusIndex(g).census(); }

} // namespace washgraph
