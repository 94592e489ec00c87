#include "iflow/sap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "detail_format.hpp"
#include "iflow/evaluate.hpp"

namespace iflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> theta_vector(const Network& net) {
  std::vector<double> theta(net.node_count());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = net.theta(static_cast<NodeId>(i));
  return theta;
}

double evaluate_placement(const Network& net, const StructuralSummary& summary,
                          std::span<const double> theta, const std::vector<char>& mask) {
  auto state = evaluate_flows(net, theta, mask);
  return ens(net, summary, state);
}

double relative_gap(double value, double lb) {
  if (value <= 0.0) return 0.0;
  return std::max(0.0, (value - lb) / value);
}

}  // namespace

SapInstance make_instance(const Network& net, int n_switches,
                          std::span<const std::int32_t> fixed,
                          std::span<const std::int32_t> forbidden) {
  SapInstance inst;
  inst.net = &net;
  inst.n_switches = n_switches;
  inst.fixed_arcs.assign(fixed.begin(), fixed.end());
  inst.forbidden_arcs.assign(forbidden.begin(), forbidden.end());
  for (auto* set : {&inst.fixed_arcs, &inst.forbidden_arcs}) {
    std::sort(set->begin(), set->end());
    set->erase(std::unique(set->begin(), set->end()), set->end());
    for (auto a : *set)
      if (a < 0 || static_cast<std::size_t>(a) >= net.arc_count())
        throw ValidationError("arc index " + std::to_string(a) + " out of range");
  }
  for (auto a : inst.fixed_arcs)
    if (std::binary_search(inst.forbidden_arcs.begin(), inst.forbidden_arcs.end(), a))
      throw ValidationError("arc " + std::to_string(a) + " both fixed and forbidden");
  if (n_switches < 0) throw ValidationError("negative switch budget");
  if (n_switches < static_cast<int>(inst.fixed_arcs.size()))
    throw ValidationError("switch budget " + std::to_string(n_switches) +
                          " below the " + std::to_string(inst.fixed_arcs.size()) +
                          " fixed switches");
  return inst;
}

std::vector<double> big_m(const Network& net) {
  const auto summary = structural_summary(net);
  std::vector<double> m(net.node_count(), 0.0);
  for (auto it = summary.preorder.rbegin(); it != summary.preorder.rend(); ++it) {
    NodeId v = *it;
    double acc = net.theta(v);
    for (auto a : net.child_arc_ids(v)) acc += m[net.arcs[a].to];
    m[v] = acc;
  }
  return m;
}

SapSolution solve_exact_dp(const SapInstance& inst, const SapOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Network& net = *inst.net;
  const auto n = net.node_count();
  const int budget = inst.n_switches;

  const auto summary = structural_summary(net);
  const auto theta = theta_vector(net);

  std::vector<char> fixed(net.arc_count(), 0), forbidden(net.arc_count(), 0);
  for (auto a : inst.fixed_arcs) fixed[a] = 1;
  for (auto a : inst.forbidden_arcs) forbidden[a] = 1;

  // Subtree sizes and depths; caps[v] bounds the switches placeable on arcs
  // strictly inside subtree(v).
  std::vector<std::int32_t> size(n), depth(n, 0), caps(n);
  for (std::size_t i = 0; i < n; ++i) {
    size[i] = summary.tout[i] - summary.tin[i];
    caps[i] = std::min(budget, size[i] - 1);
  }
  double estimate = 0.0;
  for (NodeId v : summary.preorder) {
    if (v != Network::root()) depth[v] = depth[net.pred[v]] + 1;
    estimate += static_cast<double>(depth[v] + 1) * (caps[v] + 1);
  }
  if (estimate > opts.dp_cell_budget)
    throw BudgetError("exact DP budget exceeded (estimated " + detail::fmt(estimate) +
                      " table cells > " + detail::fmt(opts.dp_cell_budget) +
                      "); use the heuristic or the LP export");

  // Region-root contexts: the deduplicated downstream loads of a node's
  // ancestors (plus its own, used when its incoming arc is switched).
  std::vector<std::vector<double>> contexts(n);
  contexts[0] = {summary.downstream_load[0]};
  for (NodeId v : summary.preorder) {
    if (v == Network::root()) continue;
    auto ctx = contexts[net.pred[v]];
    double own = summary.downstream_load[v];
    auto pos = std::lower_bound(ctx.begin(), ctx.end(), own);
    if (pos == ctx.end() || *pos != own) ctx.insert(pos, own);
    contexts[v] = std::move(ctx);
  }
  auto ctx_index = [&](NodeId v, double value) {
    const auto& ctx = contexts[v];
    auto it = std::lower_bound(ctx.begin(), ctx.end(), value);
    return static_cast<std::size_t>(it - ctx.begin());
  };

  // dp[v][ci * (caps[v]+1) + s]: minimal cost of subtree(v) using at most s
  // switches inside it, when v's region root carries downstream load
  // contexts[v][ci]. Tables are monotone non-increasing in s.
  std::vector<std::vector<double>> dp(n);

  auto merge_children = [&](NodeId v, double L, std::vector<std::vector<double>>* snapshots) {
    std::vector<double> acc{theta[v] * L};
    int acc_cap = 0;
    if (snapshots) snapshots->push_back(acc);
    for (auto a : net.child_arc_ids(v)) {
      NodeId c = net.arcs[a].to;
      const int ccap = caps[c];
      const int climit = ccap + 1;  // option B spends one switch on the arc
      const int new_cap = std::min(caps[v], acc_cap + climit);
      const auto& table = dp[c];
      const std::size_t a_row = ctx_index(c, L) * climit;
      const std::size_t b_row = ctx_index(c, summary.downstream_load[c]) * climit;
      std::vector<double> next(new_cap + 1, kInf);
      for (int s_prev = 0; s_prev <= acc_cap; ++s_prev) {
        if (acc[s_prev] == kInf) continue;
        const int room = new_cap - s_prev;
        for (int s_c = 0; s_c <= std::min(climit, room); ++s_c) {
          // Budgets are "at most": either option may leave switches unused.
          double g = kInf;
          if (!fixed[a]) g = table[a_row + std::min(s_c, ccap)];
          if (!forbidden[a] && s_c >= 1) g = std::min(g, table[b_row + (s_c - 1)]);
          if (g == kInf) continue;
          double total = acc[s_prev] + g;
          if (total < next[s_prev + s_c]) next[s_prev + s_c] = total;
        }
      }
      acc = std::move(next);
      acc_cap = new_cap;
      if (snapshots) snapshots->push_back(acc);
    }
    return acc;
  };

  for (auto it = summary.preorder.rbegin(); it != summary.preorder.rend(); ++it) {
    NodeId v = *it;
    auto& table = dp[v];
    table.assign(contexts[v].size() * (caps[v] + 1), kInf);
    for (std::size_t ci = 0; ci < contexts[v].size(); ++ci) {
      auto row = merge_children(v, contexts[v][ci], nullptr);
      std::copy(row.begin(), row.end(), table.begin() + ci * (caps[v] + 1));
    }
  }

  const double optimum = dp[0][caps[0]];
  if (!(optimum < kInf)) throw std::logic_error("internal: DP produced no feasible placement");

  // Reconstruction: re-run each chosen node's merge keeping the per-child
  // accumulator snapshots, then walk the splits back. Recomputing with the
  // identical operations makes the equality tests exact.
  std::vector<std::int32_t> chosen;
  struct Frame {
    NodeId v;
    double context;
    int s;
  };
  std::vector<Frame> stack{{0, summary.downstream_load[0], caps[0]}};
  while (!stack.empty()) {
    auto [v, L, s] = stack.back();
    stack.pop_back();
    auto kids = net.child_arc_ids(v);
    if (kids.empty()) continue;
    std::vector<std::vector<double>> snapshots;
    merge_children(v, L, &snapshots);

    // snapshots[i] is the accumulator after the first i children.
    int t = s;
    for (std::size_t i = kids.size(); i-- > 0;) {
      auto a = kids[i];
      NodeId c = net.arcs[a].to;
      const int ccap = caps[c];
      const int climit = ccap + 1;
      const auto& table = dp[c];
      const std::size_t a_row = ctx_index(c, L) * climit;
      const std::size_t b_row = ctx_index(c, summary.downstream_load[c]) * climit;
      const auto& prev = snapshots[i];
      const double target = snapshots[i + 1][t];

      bool found = false;
      for (int s_c = 0; s_c <= std::min(climit, t) && !found; ++s_c) {
        int s_prev = t - s_c;
        if (s_prev >= static_cast<int>(prev.size()) || prev[s_prev] == kInf) continue;
        double g = kInf;
        if (!fixed[a]) g = table[a_row + std::min(s_c, ccap)];
        if (!forbidden[a] && s_c >= 1) g = std::min(g, table[b_row + (s_c - 1)]);
        if (g == kInf || prev[s_prev] + g != target) continue;
        // Prefer leaving the arc unswitched on ties.
        if (!fixed[a] && table[a_row + std::min(s_c, ccap)] == g) {
          stack.push_back({c, L, std::min(s_c, ccap)});
        } else {
          chosen.push_back(a);
          stack.push_back({c, summary.downstream_load[c], s_c - 1});
        }
        t = s_prev;
        found = true;
      }
      if (!found) throw std::logic_error("internal: DP reconstruction lost the optimum");
    }
  }

  std::sort(chosen.begin(), chosen.end());
  std::vector<char> mask(net.arc_count(), 0);
  for (auto a : chosen) mask[a] = 1;
  const double verified = evaluate_placement(net, summary, theta, mask);
  if (std::abs(verified - optimum) > 1e-9 * std::max(1.0, std::abs(verified)))
    throw std::logic_error("internal: DP cost " + detail::fmt(optimum) +
                           " disagrees with flow evaluation " + detail::fmt(verified));

  SapSolution sol;
  sol.switch_arcs = std::move(chosen);
  sol.ens = verified;
  sol.status = SapStatus::ProvenOptimal;
  sol.gap_vs_lb = 0.0;
  sol.solve_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

SapSolution solve_heuristic(const SapInstance& inst, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const Network& net = *inst.net;
  const auto summary = structural_summary(net);
  const auto theta = theta_vector(net);

  std::vector<char> mask(net.arc_count(), 0);
  for (auto a : inst.fixed_arcs) mask[a] = 1;

  std::vector<std::int32_t> candidates;
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    auto ai = static_cast<std::int32_t>(a);
    if (!std::binary_search(inst.fixed_arcs.begin(), inst.fixed_arcs.end(), ai) &&
        !std::binary_search(inst.forbidden_arcs.begin(), inst.forbidden_arcs.end(), ai))
      candidates.push_back(ai);
  }

  double current = evaluate_placement(net, summary, theta, mask);
  std::vector<std::int32_t> placed;
  const int extra = inst.n_switches - static_cast<int>(inst.fixed_arcs.size());

  // Greedy construction: repeatedly place the switch with the largest ENS
  // reduction. A zero best marginal implies no set of further additions can
  // help (the region root of any fault is decided by the deepest switch).
  for (int step = 0; step < extra; ++step) {
    std::int32_t best_arc = kNoArc;
    double best_value = current;
    for (auto a : candidates) {
      if (mask[a]) continue;
      mask[a] = 1;
      double value = evaluate_placement(net, summary, theta, mask);
      mask[a] = 0;
      if (value < best_value) {
        best_value = value;
        best_arc = a;
      }
    }
    if (best_arc == kNoArc) break;
    mask[best_arc] = 1;
    placed.push_back(best_arc);
    current = best_value;
  }

  // Swap local search in seeded order, first improvement.
  std::mt19937_64 rng(seed);
  bool improved = true;
  int pass = 0;
  while (improved && pass < 200) {
    improved = false;
    ++pass;
    std::vector<std::size_t> pidx(placed.size());
    for (std::size_t i = 0; i < pidx.size(); ++i) pidx[i] = i;
    std::shuffle(pidx.begin(), pidx.end(), rng);
    std::vector<std::int32_t> qarcs = candidates;
    std::shuffle(qarcs.begin(), qarcs.end(), rng);
    for (auto pi : pidx) {
      std::int32_t p = placed[pi];
      for (auto q : qarcs) {
        if (mask[q]) continue;
        mask[p] = 0;
        mask[q] = 1;
        double value = evaluate_placement(net, summary, theta, mask);
        if (value < current) {
          current = value;
          placed[pi] = q;
          improved = true;
          break;
        }
        mask[q] = 0;
        mask[p] = 1;
      }
      if (improved) break;
    }
  }

  SapSolution sol;
  sol.switch_arcs.assign(inst.fixed_arcs.begin(), inst.fixed_arcs.end());
  sol.switch_arcs.insert(sol.switch_arcs.end(), placed.begin(), placed.end());
  std::sort(sol.switch_arcs.begin(), sol.switch_arcs.end());
  sol.ens = evaluate_placement(net, summary, theta, mask);
  sol.status = SapStatus::Heuristic;
  sol.gap_vs_lb = relative_gap(sol.ens, ens_bounds(net, summary).first);
  sol.solve_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

std::string export_milp(const SapInstance& inst) {
  const Network& net = *inst.net;
  const auto summary = structural_summary(net);
  const auto m_const = big_m(net);
  const auto [e_lb, e_ub] = ens_bounds(net, summary);
  (void)e_ub;

  auto xname = [&](const Arc& a) {
    return "x_" + std::to_string(net.labels[a.from]) + "_" + std::to_string(net.labels[a.to]);
  };
  auto fname = [&](const Arc& a) {
    return "f_" + std::to_string(net.labels[a.from]) + "_" + std::to_string(net.labels[a.to]);
  };
  auto bigf = [&](NodeId j) { return "F_" + std::to_string(net.labels[j]); };

  std::string lp;
  lp += "\\ switch allocation problem: minimize ENS over placements of at most " +
        std::to_string(inst.n_switches) + " switches\n";
  lp += "\\ objective includes the constant E_lb = " + detail::fmt(e_lb) + "\n";
  lp += "Minimize\n obj:";
  bool first = true;
  for (const auto& a : net.arcs) {
    double coeff = summary.downstream_load[a.from] - summary.downstream_load[a.to];
    if (coeff == 0.0) continue;
    lp += (first ? " " : " + ") + detail::fmt(coeff) + " " + fname(a);
    first = false;
  }
  lp += (first ? " " : " + ") + detail::fmt(e_lb) + "\n";

  lp += "Subject To\n";
  lp += " switches:";
  for (std::size_t a = 0; a < net.arc_count(); ++a)
    lp += std::string(a == 0 ? " " : " + ") + xname(net.arcs[a]);
  lp += " <= " + std::to_string(inst.n_switches) + "\n";

  for (const auto& a : net.arcs) {
    NodeId j = a.to;
    lp += " bal_" + std::to_string(net.labels[j]) + ": " + fname(a) + " + " + bigf(j);
    for (auto out : net.child_arc_ids(j)) lp += " - " + fname(net.arcs[out]);
    lp += " = " + detail::fmt(net.theta(j)) + "\n";
  }
  for (const auto& a : net.arcs) {
    NodeId j = a.to;
    lp += " cap_" + std::to_string(net.labels[j]) + ": " + bigf(j) + " - " +
          detail::fmt(m_const[j]) + " " + xname(a) + " <= 0\n";
  }

  std::string bounds;
  for (auto a : inst.fixed_arcs) bounds += " " + xname(net.arcs[a]) + " = 1\n";
  for (auto a : inst.forbidden_arcs) bounds += " " + xname(net.arcs[a]) + " = 0\n";
  if (!bounds.empty()) lp += "Bounds\n" + bounds;

  lp += "Binaries\n";
  for (const auto& a : net.arcs) lp += " " + xname(a);
  lp += "\nEnd\n";
  return lp;
}

std::unordered_map<std::string, double> parse_solution(std::string_view text) {
  std::unordered_map<std::string, double> vars;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    if (b == line.size() || line[b] == '#' || line[b] == '\\') continue;
    std::size_t e = b;
    while (e < line.size() && !std::isspace(static_cast<unsigned char>(line[e]))) ++e;
    std::string name(line.substr(b, e - b));
    while (e < line.size() && std::isspace(static_cast<unsigned char>(line[e]))) ++e;
    if (e == line.size()) continue;
    vars[name] = std::strtod(std::string(line.substr(e)).c_str(), nullptr);
  }
  return vars;
}

std::vector<std::int32_t> switch_arcs_from_solution(
    const Network& net, const std::unordered_map<std::string, double>& vars) {
  std::vector<std::int32_t> arcs;
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arcs[a];
    auto name = "x_" + std::to_string(net.labels[arc.from]) + "_" +
                std::to_string(net.labels[arc.to]);
    auto it = vars.find(name);
    if (it != vars.end() && it->second > 0.5) arcs.push_back(static_cast<std::int32_t>(a));
  }
  return arcs;
}

}  // namespace iflow
