#include "iflow/economics.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "detail_format.hpp"
#include "iflow/evaluate.hpp"

namespace iflow {

EconomicSweep sweep(const Network& net, const EconomicParams& params, int n_max,
                    std::span<const std::int32_t> fixed,
                    std::span<const std::int32_t> forbidden, std::uint64_t seed,
                    const SapOptions& opts, unsigned threads) {
  if (params.switch_cost < 0 || params.energy_cost < 0)
    throw ValidationError("economic parameters must be non-negative");
  if (n_max < 0) throw ValidationError("n_max must be non-negative");

  const double e_ub_kwh = ens_bounds(net).second * net.unit_to_kw;

  EconomicSweep out;
  out.points.resize(n_max + 1);

  auto solve_point = [&](int n) {
    SweepPoint pt;
    pt.n = n;
    pt.investment = params.switch_cost * n;
    try {
      auto inst = make_instance(net, static_cast<int>(fixed.size()) + n, fixed, forbidden);
      SapSolution sol;
      try {
        sol = solve_exact_dp(inst, opts);
        pt.status = "exact";
      } catch (const BudgetError&) {
        sol = solve_heuristic(inst, seed + static_cast<std::uint64_t>(n));
        pt.status = "heuristic";
      }
      pt.ens_kwh_yr = sol.ens * net.unit_to_kw;
      pt.savings = params.energy_cost * (e_ub_kwh - pt.ens_kwh_yr);
      pt.net_return = pt.savings - pt.investment;
      pt.switch_arcs = std::move(sol.switch_arcs);
    } catch (const std::exception&) {
      pt.ok = false;
      pt.status = "failed";
    }
    return pt;
  };

  unsigned worker_count = threads ? threads : std::thread::hardware_concurrency();
  worker_count = std::clamp<unsigned>(worker_count, 1, static_cast<unsigned>(n_max + 1));
  if (worker_count == 1) {
    for (int n = 0; n <= n_max; ++n) out.points[n] = solve_point(n);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w)
      workers.emplace_back([&] {
        for (int n = next.fetch_add(1); n <= n_max; n = next.fetch_add(1))
          out.points[n] = solve_point(n);
      });
    for (auto& t : workers) t.join();
  }

  out.best_n = 0;
  out.best_return = -std::numeric_limits<double>::infinity();
  out.break_even_n = -1;
  for (const auto& pt : out.points) {
    if (!pt.ok) continue;
    if (pt.net_return > out.best_return) {
      out.best_return = pt.net_return;
      out.best_n = pt.n;
    }
    if (pt.net_return >= 0.0) out.break_even_n = std::max(out.break_even_n, pt.n);
  }
  return out;
}

std::string economics_csv(const EconomicSweep& sweep) {
  std::string out = "N,ens_kwh_yr,savings,investment,return,status\n";
  for (const auto& pt : sweep.points) {
    out += std::to_string(pt.n) + "," + detail::fmt(pt.ens_kwh_yr) + "," +
           detail::fmt(pt.savings) + "," + detail::fmt(pt.investment) + "," +
           detail::fmt(pt.net_return) + "," + pt.status + "\n";
  }
  return out;
}

}  // namespace iflow
