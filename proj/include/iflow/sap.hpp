#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iflow/network.hpp"

namespace iflow {

/// Raised when an exact method would exceed its configured work budget.
class BudgetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Switch allocation instance: place at most `n_switches` switches (the
/// fixed ones count against the budget) to minimize ENS.
struct SapInstance {
  const Network* net = nullptr;
  int n_switches = 0;
  std::vector<std::int32_t> fixed_arcs;      // always switched, sorted
  std::vector<std::int32_t> forbidden_arcs;  // never switched, sorted
};

enum class SapStatus { ProvenOptimal, Heuristic };

struct SapSolution {
  std::vector<std::int32_t> switch_arcs;  // arc indices, sorted
  double ens = 0.0;                       // re-verified by a flow evaluation
  SapStatus status = SapStatus::Heuristic;
  double gap_vs_lb = 0.0;  // (ens - E_lb) / ens, 0 for proven optima
  double solve_time_s = 0.0;
};

/// Validates budget/fixed/forbidden consistency and normalizes the sets.
SapInstance make_instance(const Network& net, int n_switches,
                          std::span<const std::int32_t> fixed = {},
                          std::span<const std::int32_t> forbidden = {});

struct SapOptions {
  // Cap on the dynamic-programming table size, roughly
  // sum_v (depth(v)+1) * (min(N, |subtree arcs|)+1) entries.
  double dp_cell_budget = 3e7;
};

/// Exact tree dynamic program. Every fault k costs theta_k times the
/// downstream load of its region root (the nearest ancestor cut off by a
/// switch), which decomposes over subtrees and merges knapsack-style over
/// children. Throws BudgetError when the estimated table size exceeds the
/// budget; callers then fall back to the heuristic or the LP export.
SapSolution solve_exact_dp(const SapInstance& inst, const SapOptions& opts = {});

/// Greedy marginal-reduction construction followed by swap local search.
/// Deterministic for a given seed and never worse than the construction.
SapSolution solve_heuristic(const SapInstance& inst, std::uint64_t seed);

/// Per-node big-M constants M_i = sum of self-interruptions over V_i (the
/// maximum iflow that can enter node i's incoming arc).
std::vector<double> big_m(const Network& net);

/// Emits the switch allocation MILP in CPLEX LP format: flow-balance rows
/// per arc, islack/switch coupling with the big-M above, the cardinality
/// row, binary x variables, and the constant E_lb folded into the
/// objective so the optimum reads directly as ENS.
std::string export_milp(const SapInstance& inst);

/// Parses `name value` lines (solver .sol style; '#' and '\' comments
/// ignored) into a variable map.
std::unordered_map<std::string, double> parse_solution(std::string_view text);

/// Arc indices whose x variable is set (> 0.5) in a parsed solution.
std::vector<std::int32_t> switch_arcs_from_solution(
    const Network& net, const std::unordered_map<std::string, double>& vars);

}  // namespace iflow
