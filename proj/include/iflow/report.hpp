#pragma once

#include <string>

#include "iflow/evaluate.hpp"
#include "iflow/network.hpp"

namespace iflow {

/// Two-section CSV: per-node interruption duration/frequency, then the
/// per-arc iflows with their switch state.
std::string report_csv(const Network& net, const IflowState& state,
                       const ReliabilityReport& report);

/// GraphViz rendering of the iflow diagram: nodes labelled (theta_i, l_i),
/// arcs labelled with the iflow and colored blue-to-red by f/f_max,
/// switched arcs dashed.
std::string to_dot(const Network& net, const IflowState& state);

}  // namespace iflow
