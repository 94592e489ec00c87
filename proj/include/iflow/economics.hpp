#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iflow/network.hpp"
#include "iflow/sap.hpp"

namespace iflow {

/// Planner economics. Costs are per year; the currency is opaque.
struct EconomicParams {
  double switch_cost = 0.0;  // C_s, per installed switch
  double energy_cost = 0.0;  // C_e, per kWh not supplied
};

struct SweepPoint {
  int n = 0;                 // paid switches at this point
  double ens_kwh_yr = 0.0;   // optimized ENS, converted to kWh/year
  double savings = 0.0;      // C_e * (E_ub - ENS_N)
  double investment = 0.0;   // C_s * N
  double net_return = 0.0;   // savings - investment
  std::string status;        // "exact" | "heuristic" | "failed"
  std::vector<std::int32_t> switch_arcs;
  bool ok = true;
};

struct EconomicSweep {
  std::vector<SweepPoint> points;  // sorted by n
  int best_n = 0;                  // argmax of net_return (smallest on ties)
  double best_return = 0.0;
  int break_even_n = -1;  // largest n with net_return >= 0
};

/// One switch-allocation solve per N in 0..n_max on top of the fixed set
/// (fixed switches are free infrastructure; N counts paid additions). Exact
/// DP per point with heuristic fallback when the budget is exceeded; a
/// failing point is recorded and the sweep continues. Points solve
/// concurrently; results are deterministic for a given seed.
EconomicSweep sweep(const Network& net, const EconomicParams& params, int n_max,
                    std::span<const std::int32_t> fixed = {},
                    std::span<const std::int32_t> forbidden = {}, std::uint64_t seed = 0,
                    const SapOptions& opts = {}, unsigned threads = 0);

/// CSV with columns N,ens_kwh_yr,savings,investment,return,status.
std::string economics_csv(const EconomicSweep& sweep);

}  // namespace iflow
