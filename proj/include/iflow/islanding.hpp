#pragma once

#include <span>
#include <vector>

#include "iflow/evaluate.hpp"
#include "iflow/network.hpp"

namespace iflow {

/// Load coefficients for the generalized flow-based ENS sum
///   ENS = sum_a arc_coefficient[a] * f_a + sum_i node_coefficient[i] * theta_i.
/// Without zones these default to (l~_i - l~_j) and l~_i; each restoration
/// zone subtracts its member load from every term whose faults originate
/// entirely outside the zone while the affected subtree covers it.
struct ZoneCoefficients {
  std::vector<double> arc_coefficient;   // per arc
  std::vector<double> node_coefficient;  // per node
};

/// Checks the zone contract against a concrete network and switch set:
/// members exist and are distinct, form a connected region, every boundary
/// arc carries a switch, DG capacity covers the member load, and zones are
/// pairwise disjoint. Throws ValidationError with the reason.
void validate_zones(const Network& net, const StructuralSummary& summary,
                    std::span<const RestorationZone> zones);

ZoneCoefficients effective_coefficients(const Network& net,
                                        std::span<const RestorationZone> zones);
ZoneCoefficients effective_coefficients(const Network& net, const StructuralSummary& summary,
                                        std::span<const RestorationZone> zones);

/// Flow evaluation with zone escapes applied: faults originating outside a
/// zone never interrupt its members, faults inside propagate normally. The
/// same escape rule is applied to the frequency flows behind SAIFI. With an
/// empty zone list this reduces exactly to reliability_report.
ReliabilityReport evaluate_with_zones(const Network& net,
                                      std::span<const RestorationZone> zones);

}  // namespace iflow
