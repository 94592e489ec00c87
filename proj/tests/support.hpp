#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iflow/network.hpp"

namespace testsup {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing test file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline iflow::Network load_fixture(const std::string& name) {
  return iflow::parse_network(slurp("data/" + name));
}

// Assembles a Network directly from a predecessor array (pred[0] must be -1).
// Arc i-1 is (pred[i], i); switched[i-1] marks it. Bypasses the parser so
// million-node instances build fast.
inline iflow::Network assemble(const std::vector<iflow::NodeId>& pred,
                               const std::vector<double>& load,
                               const std::vector<double>& lambda,
                               const std::vector<double>& restore,
                               const std::vector<char>& switched) {
  using namespace iflow;
  const std::size_t n = pred.size();
  Network net;
  net.nodes.resize(n);
  net.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    net.nodes[i] = Node{static_cast<NodeId>(i), load[i], lambda[i], restore[i],
                        i == 0 ? 0 : 1};
    net.labels[i] = static_cast<long long>(i);
  }
  net.pred = pred;
  net.in_arc.assign(n, kNoArc);
  net.arcs.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    net.arcs.push_back({pred[i], static_cast<NodeId>(i), switched[i - 1] != 0});
    net.in_arc[i] = static_cast<std::int32_t>(i - 1);
  }
  net.child_start.assign(n + 1, 0);
  for (const auto& a : net.arcs) ++net.child_start[a.from + 1];
  for (std::size_t i = 1; i <= n; ++i) net.child_start[i] += net.child_start[i - 1];
  net.child_arcs.resize(net.arcs.size());
  std::vector<std::int32_t> cursor(net.child_start.begin(), net.child_start.end() - 1);
  for (std::size_t a = 0; a < net.arcs.size(); ++a)
    net.child_arcs[cursor[net.arcs[a].from]++] = static_cast<std::int32_t>(a);
  return net;
}

// Random tree on n nodes: each node attaches to a uniformly random earlier
// node, parameters uniform in [0, param_hi], switches with the given odds.
inline iflow::Network random_network(std::mt19937_64& rng, int n, double param_hi = 10.0,
                                     double switch_prob = 0.4) {
  std::uniform_real_distribution<double> par(0.0, param_hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<iflow::NodeId> pred(n, -1);
  std::vector<double> load(n, 0.0), lambda(n, 0.0), restore(n, 0.0);
  std::vector<char> switched(std::max(0, n - 1), 0);
  for (int i = 1; i < n; ++i) {
    pred[i] = static_cast<iflow::NodeId>(rng() % static_cast<std::uint64_t>(i));
    load[i] = par(rng);
    lambda[i] = par(rng);
    restore[i] = par(rng);
    switched[i - 1] = coin(rng) < switch_prob;
  }
  return assemble(pred, load, lambda, restore, switched);
}

// Random path graph (worst case for anything recursive).
inline iflow::Network random_path(std::mt19937_64& rng, int n, double param_hi = 10.0) {
  std::uniform_real_distribution<double> par(0.0, param_hi);
  std::vector<iflow::NodeId> pred(n, -1);
  std::vector<double> load(n, 0.0), lambda(n, 0.0), restore(n, 0.0);
  std::vector<char> switched(std::max(0, n - 1), 0);
  for (int i = 1; i < n; ++i) {
    pred[i] = i - 1;
    load[i] = par(rng);
    lambda[i] = par(rng);
    restore[i] = par(rng);
  }
  return assemble(pred, load, lambda, restore, switched);
}

// Grows a random connected region rooted at a random unclaimed non-root
// node, marks its members claimed, switches every boundary arc, and sets an
// adequate DG capacity. Returns nothing when no seed node is available.
inline std::optional<iflow::RestorationZone> plant_random_zone(std::mt19937_64& rng,
                                                               iflow::Network& net,
                                                               std::vector<char>& claimed,
                                                               const std::string& name) {
  using namespace iflow;
  const auto n = static_cast<int>(net.node_count());
  std::vector<NodeId> seeds;
  for (NodeId v = 1; v < n; ++v)
    if (!claimed[v]) seeds.push_back(v);
  if (seeds.empty()) return std::nullopt;

  NodeId top = seeds[rng() % seeds.size()];
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  RestorationZone zone;
  zone.name = name;
  std::vector<NodeId> frontier{top};
  while (!frontier.empty()) {
    NodeId v = frontier.back();
    frontier.pop_back();
    zone.members.push_back(v);
    claimed[v] = 1;
    for (auto a : net.child_arc_ids(v)) {
      NodeId c = net.arcs[a].to;
      if (!claimed[c] && coin(rng) < 0.5) frontier.push_back(c);
    }
  }

  std::vector<char> member(n, 0);
  double zone_load = 0.0;
  for (NodeId v : zone.members) {
    member[v] = 1;
    zone_load += net.nodes[v].load;
  }
  for (auto& arc : net.arcs)
    if (member[arc.from] != member[arc.to]) arc.has_switch = true;
  zone.dg_capacity = zone_load + 1.0;
  return zone;
}

}  // namespace testsup
