#pragma once

#include <span>
#include <vector>

#include "iflow/evaluate.hpp"
#include "iflow/network.hpp"
#include "iflow/sap.hpp"

namespace iflow {

/// Reference implementations that deliberately share nothing with the flow
/// machinery beyond the Network type: every fault is propagated upstream to
/// the nearest switch and the interrupted subtree is walked explicitly.
/// Quadratic and proud of it; intended for cross-checking, not production.

ReliabilityReport oracle_indices(const Network& net,
                                 std::span<const RestorationZone> zones = {});

/// Exhaustive switch placement search: every subset of allowed arcs of size
/// at most n_switches (including the fixed ones), evaluated with
/// oracle_indices. Ties broken by the lexicographically smallest sorted arc
/// list. Throws BudgetError beyond ~1e7 candidate placements.
SapSolution oracle_sap(const Network& net, int n_switches,
                       std::span<const std::int32_t> fixed = {},
                       std::span<const std::int32_t> forbidden = {});

/// One pass over all 2^|A| placements, returning the optimum for every
/// budget 0..|A| at once (element [n] allows at most n switches). Same
/// tie-breaking as oracle_sap. Guarded like oracle_sap.
std::vector<SapSolution> oracle_sap_sweep(const Network& net,
                                          std::span<const std::int32_t> fixed = {},
                                          std::span<const std::int32_t> forbidden = {});

}  // namespace iflow
