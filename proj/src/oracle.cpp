#include "iflow/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace iflow {

namespace {

// Fault propagation for one fault origin: walk ancestors to the nearest
// switched arc (or the root), then visit everything below that region root.
// `zone_of[i]` is -1 outside zones; members escape faults from other zones
// or from unzoned nodes, while nodes hanging below an escaped zone are still
// interrupted (their boundary switch opens with the island).
void apply_fault(const Network& net, const std::vector<char>& switched,
                 const std::vector<int>& zone_of, NodeId fault, double hours, double rate,
                 std::vector<double>& u, std::vector<double>& nu) {
  NodeId region = fault;
  while (net.in_arc[region] != kNoArc && !switched[net.in_arc[region]])
    region = net.pred[region];

  std::vector<NodeId> stack{region};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    bool escapes = zone_of[v] >= 0 && zone_of[v] != zone_of[fault];
    if (!escapes) {
      u[v] += hours;
      nu[v] += rate;
    }
    for (auto a : net.child_arc_ids(v)) stack.push_back(net.arcs[a].to);
  }
}

double simulate_ens(const Network& net, const std::vector<char>& switched,
                    const std::vector<int>& zone_of, std::vector<double>& u,
                    std::vector<double>& nu) {
  const auto n = net.node_count();
  u.assign(n, 0.0);
  nu.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const Node& node = net.nodes[k];
    double hours = node.failure_rate * node.restore_time;
    if (hours == 0.0 && node.failure_rate == 0.0) continue;
    apply_fault(net, switched, zone_of, static_cast<NodeId>(k), hours, node.failure_rate, u, nu);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += net.nodes[i].load * u[i];
  return total;
}

std::vector<char> switch_mask(const Network& net) {
  std::vector<char> mask(net.arc_count());
  for (std::size_t a = 0; a < net.arc_count(); ++a) mask[a] = net.arcs[a].has_switch;
  return mask;
}

double placement_ens(const Network& net, const std::vector<char>& switched) {
  static thread_local std::vector<double> u, nu;
  std::vector<int> no_zones(net.node_count(), -1);
  return simulate_ens(net, switched, no_zones, u, nu);
}

bool lex_less(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void check_selection(const Network& net, int n_switches,
                     std::span<const std::int32_t> fixed,
                     std::span<const std::int32_t> forbidden) {
  for (auto a : fixed)
    if (a < 0 || static_cast<std::size_t>(a) >= net.arc_count())
      throw ValidationError("fixed arc index out of range");
  for (auto a : forbidden) {
    if (a < 0 || static_cast<std::size_t>(a) >= net.arc_count())
      throw ValidationError("forbidden arc index out of range");
    if (std::find(fixed.begin(), fixed.end(), a) != fixed.end())
      throw ValidationError("arc both fixed and forbidden");
  }
  if (n_switches < static_cast<int>(fixed.size()))
    throw ValidationError("switch budget below the number of fixed switches");
}

}  // namespace

ReliabilityReport oracle_indices(const Network& net, std::span<const RestorationZone> zones) {
  const auto n = net.node_count();
  std::vector<int> zone_of(n, -1);
  for (std::size_t z = 0; z < zones.size(); ++z)
    for (NodeId v : zones[z].members) zone_of[v] = static_cast<int>(z);

  ReliabilityReport rep;
  std::vector<double> u, nu;
  rep.ens = simulate_ens(net, switch_mask(net), zone_of, u, nu);
  rep.node_interruption_hours = u;
  rep.node_interruption_freq = nu;
  for (const auto& z : zones) rep.active_zones.push_back(z.name);

  // Bounds by simulation of the two extreme placements, zone-free.
  {
    std::vector<int> no_zones(n, -1);
    std::vector<double> tu, tnu;
    std::vector<char> all(net.arc_count(), 1), none(net.arc_count(), 0);
    rep.e_lb = simulate_ens(net, all, no_zones, tu, tnu);
    rep.e_ub = simulate_ens(net, none, no_zones, tu, tnu);
  }

  if (net.customers_specified) {
    long long total = 0;
    for (const auto& node : net.nodes) total += node.customers;
    if (total > 0) {
      double saidi = 0.0, saifi = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        saidi += static_cast<double>(net.nodes[i].customers) * u[i];
        saifi += static_cast<double>(net.nodes[i].customers) * nu[i];
      }
      rep.saidi = saidi / static_cast<double>(total);
      rep.saifi = saifi / static_cast<double>(total);
    }
  }
  return rep;
}

SapSolution oracle_sap(const Network& net, int n_switches,
                       std::span<const std::int32_t> fixed,
                       std::span<const std::int32_t> forbidden) {
  const auto start = std::chrono::steady_clock::now();
  check_selection(net, n_switches, fixed, forbidden);

  std::vector<std::int32_t> free_arcs;
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    auto ai = static_cast<std::int32_t>(a);
    bool is_fixed = std::find(fixed.begin(), fixed.end(), ai) != fixed.end();
    bool is_forbidden = std::find(forbidden.begin(), forbidden.end(), ai) != forbidden.end();
    if (!is_fixed && !is_forbidden) free_arcs.push_back(ai);
  }
  const int max_extra =
      std::min<int>(n_switches - static_cast<int>(fixed.size()), static_cast<int>(free_arcs.size()));

  double combos = 0.0;
  {
    double c = 1.0;
    for (int m = 0; m <= max_extra; ++m) {
      combos += c;
      c = c * static_cast<double>(free_arcs.size() - m) / static_cast<double>(m + 1);
    }
  }
  if (combos > 1e7)
    throw BudgetError("oracle_sap enumeration too large (" + std::to_string(combos) +
                      " placements > 1e7)");

  std::vector<char> mask(net.arc_count(), 0);
  for (auto a : fixed) mask[a] = 1;

  SapSolution best;
  best.ens = std::numeric_limits<double>::infinity();
  best.status = SapStatus::ProvenOptimal;

  std::vector<std::int32_t> placement(fixed.begin(), fixed.end());
  std::sort(placement.begin(), placement.end());

  auto consider = [&](const std::vector<std::int32_t>& combo) {
    for (auto a : combo) mask[a] = 1;
    double value = placement_ens(net, mask);
    std::vector<std::int32_t> arcs(fixed.begin(), fixed.end());
    arcs.insert(arcs.end(), combo.begin(), combo.end());
    std::sort(arcs.begin(), arcs.end());
    if (value < best.ens || (value == best.ens && lex_less(arcs, best.switch_arcs))) {
      best.ens = value;
      best.switch_arcs = std::move(arcs);
    }
    for (auto a : combo) mask[a] = 0;
  };

  for (int m = 0; m <= max_extra; ++m) {
    std::vector<std::int32_t> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    while (true) {
      std::vector<std::int32_t> combo(m);
      for (int i = 0; i < m; ++i) combo[i] = free_arcs[idx[i]];
      consider(combo);
      // next combination in lexicographic order
      int i = m - 1;
      while (i >= 0 && idx[i] == static_cast<std::int32_t>(free_arcs.size()) - m + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  best.solve_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

std::vector<SapSolution> oracle_sap_sweep(const Network& net,
                                          std::span<const std::int32_t> fixed,
                                          std::span<const std::int32_t> forbidden) {
  const auto start = std::chrono::steady_clock::now();
  check_selection(net, static_cast<int>(net.arc_count()), fixed, forbidden);

  std::vector<std::int32_t> free_arcs;
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    auto ai = static_cast<std::int32_t>(a);
    bool is_fixed = std::find(fixed.begin(), fixed.end(), ai) != fixed.end();
    bool is_forbidden = std::find(forbidden.begin(), forbidden.end(), ai) != forbidden.end();
    if (!is_fixed && !is_forbidden) free_arcs.push_back(ai);
  }
  if (free_arcs.size() > 23)
    throw BudgetError("oracle_sap_sweep too large (2^" + std::to_string(free_arcs.size()) +
                      " placements)");

  const int total_sizes = static_cast<int>(net.arc_count()) + 1;
  std::vector<SapSolution> best_by_size(total_sizes);
  for (auto& s : best_by_size) s.ens = std::numeric_limits<double>::infinity();

  std::vector<char> mask(net.arc_count(), 0);
  for (std::uint64_t bits = 0; bits < (1ull << free_arcs.size()); ++bits) {
    std::vector<std::int32_t> arcs(fixed.begin(), fixed.end());
    std::fill(mask.begin(), mask.end(), 0);
    for (auto a : fixed) mask[a] = 1;
    for (std::size_t b = 0; b < free_arcs.size(); ++b)
      if (bits >> b & 1) {
        mask[free_arcs[b]] = 1;
        arcs.push_back(free_arcs[b]);
      }
    std::sort(arcs.begin(), arcs.end());
    double value = placement_ens(net, mask);
    auto& slot = best_by_size[arcs.size()];
    if (value < slot.ens || (value == slot.ens && lex_less(arcs, slot.switch_arcs))) {
      slot.ens = value;
      slot.switch_arcs = std::move(arcs);
    }
  }

  // Budget n admits every placement of size <= n.
  std::vector<SapSolution> out(total_sizes);
  SapSolution running = best_by_size[static_cast<int>(fixed.size())];
  for (int n = 0; n < total_sizes; ++n) {
    if (n >= static_cast<int>(fixed.size())) {
      const auto& cand = best_by_size[n];
      if (cand.ens < running.ens ||
          (cand.ens == running.ens && lex_less(cand.switch_arcs, running.switch_arcs)))
        running = cand;
    }
    out[n] = running;
    out[n].status = SapStatus::ProvenOptimal;
    out[n].solve_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

}  // namespace iflow
