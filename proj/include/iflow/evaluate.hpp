#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "iflow/network.hpp"

namespace iflow {

/// Interruption-flow state of one switch configuration.
///
/// Per arc a = (i,j):   iflow[a] = 0 on switched arcs, else the downstream
/// interruption of j. Per node j: islack[j] absorbs whatever a switch on the
/// incoming arc blocks, so iflow + islack always satisfies the node balance
///   f_ij + F_j = theta_j + sum_k f_jk.
struct IflowState {
  std::vector<double> iflow;                    // hours/year, per arc
  std::vector<double> islack;                   // F_j, per node (root included)
  std::vector<double> downstream_interruption;  // theta~_j, per node
  std::vector<double> full_interruption;        // u_j, per node
  std::vector<char> switched;                   // snapshot of A_s, per arc
};

struct ReliabilityReport {
  double ens = 0.0;  // load-unit * hours / year
  std::optional<double> saidi;  // hours/customer/year
  std::optional<double> saifi;  // interruptions/customer/year
  double e_lb = 0.0;
  double e_ub = 0.0;
  std::vector<double> node_interruption_hours;  // u_i
  std::vector<double> node_interruption_freq;   // nu_i, interruptions/year
  std::vector<std::string> active_zones;
};

/// Linear-time iflow evaluation: one bottom-up sweep accumulates downstream
/// interruptions and per-arc flows, one top-down sweep recovers islacks and
/// full interruptions. Iterative throughout, so path graphs of 10^6 nodes
/// evaluate without touching the call stack.
IflowState evaluate_iflows(const Network& net);

/// Same machinery over an arbitrary per-node intensity. Passing failure
/// rates instead of self-interruptions turns every duration quantity into a
/// frequency (the time-to-frequency translation used for SAIFI).
IflowState evaluate_flows(const Network& net, std::span<const double> intensity);

/// As above but with the switch set overridden per arc; used by solvers that
/// probe many placements on one shared network.
IflowState evaluate_flows(const Network& net, std::span<const double> intensity,
                          std::span<const char> switch_override);

/// ENS through the flow identity: sum (l~_i - l~_j) f_ij + sum l~_i theta_i.
double ens(const Network& net, const IflowState& state);
double ens(const Network& net, const StructuralSummary& summary, const IflowState& state);

/// ENS through the defining sum over nodes (sum l_i u_i); an algebraically
/// equal route kept separate so the two can be checked against each other.
double ens_nodewise(const Network& net, const IflowState& state);

/// (E_lb, E_ub): sum l~_i theta_i and l~_0 sum theta_i. Switch placement
/// does not enter; every configuration lands inside this interval.
std::pair<double, double> ens_bounds(const Network& net);
std::pair<double, double> ens_bounds(const Network& net, const StructuralSummary& summary);

/// Full report: ENS, bounds, per-node interruption duration and frequency,
/// SAIDI/SAIFI when customer data was given in the input file.
ReliabilityReport reliability_report(const Network& net, const IflowState& state);

}  // namespace iflow
