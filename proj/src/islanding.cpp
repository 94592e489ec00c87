#include "iflow/islanding.hpp"

#include <algorithm>
#include <unordered_set>

#include "detail_format.hpp"

namespace iflow {

namespace {

// Top member of a connected zone: the unique member whose predecessor is
// outside the zone (or the network root).
NodeId zone_top(const Network& net, const std::vector<char>& member, const RestorationZone& z) {
  NodeId top = kNoNode;
  for (NodeId v : z.members) {
    NodeId p = net.pred[v];
    if (p == kNoNode || !member[p]) {
      if (top != kNoNode)
        throw ValidationError("zone '" + z.name + "' is not a connected region");
      top = v;
    }
  }
  // Members exist and every node has at most one predecessor chain, so a
  // nonempty member list always yields at least one top.
  return top;
}

std::vector<char> member_mask(const Network& net, const RestorationZone& z) {
  std::vector<char> member(net.node_count(), 0);
  for (NodeId v : z.members) {
    if (v < 0 || static_cast<std::size_t>(v) >= net.node_count())
      throw ValidationError("zone '" + z.name + "' references node out of range");
    if (member[v]) throw ValidationError("zone '" + z.name + "' lists node " +
                                         std::to_string(net.labels[v]) + " twice");
    member[v] = 1;
  }
  return member;
}

}  // namespace

void validate_zones(const Network& net, const StructuralSummary& summary,
                    std::span<const RestorationZone> zones) {
  std::vector<char> claimed(net.node_count(), 0);
  for (const auto& z : zones) {
    if (z.members.empty()) throw ValidationError("zone '" + z.name + "' has no members");
    auto member = member_mask(net, z);

    for (NodeId v : z.members) {
      if (claimed[v])
        throw ValidationError("zones overlap at node " + std::to_string(net.labels[v]));
      claimed[v] = 1;
    }

    zone_top(net, member, z);

    double zone_load = 0.0;
    for (NodeId v : z.members) zone_load += net.nodes[v].load;
    if (z.dg_capacity < zone_load)
      throw ValidationError("zone '" + z.name + "' DG capacity " + detail::fmt(z.dg_capacity) +
                            " below member load " + detail::fmt(zone_load));

    for (std::size_t a = 0; a < net.arc_count(); ++a) {
      const Arc& arc = net.arcs[a];
      if ((member[arc.from] != member[arc.to]) && !arc.has_switch)
        throw ValidationError("zone '" + z.name + "' boundary arc (" +
                              std::to_string(net.labels[arc.from]) + "," +
                              std::to_string(net.labels[arc.to]) + ") lacks a switch");
    }
  }
  (void)summary;
}

ZoneCoefficients effective_coefficients(const Network& net, const StructuralSummary& summary,
                                        std::span<const RestorationZone> zones) {
  validate_zones(net, summary, zones);

  ZoneCoefficients c;
  c.arc_coefficient.resize(net.arc_count());
  c.node_coefficient.resize(net.node_count());
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arcs[a];
    c.arc_coefficient[a] =
        summary.downstream_load[arc.from] - summary.downstream_load[arc.to];
  }
  for (std::size_t i = 0; i < net.node_count(); ++i)
    c.node_coefficient[i] = summary.downstream_load[i];

  for (const auto& z : zones) {
    auto member = member_mask(net, z);
    NodeId top = zone_top(net, member, z);
    double zone_load = 0.0;
    for (NodeId v : z.members) zone_load += net.nodes[v].load;

    // theta_k term: fault at k, affected subtree V_k. Subtract when the
    // zone hangs inside V_k and the fault is external to it.
    for (std::size_t k = 0; k < net.node_count(); ++k) {
      if (!member[k] && summary.in_subtree(static_cast<NodeId>(k), top))
        c.node_coefficient[k] -= zone_load;
    }
    // f_ij term: faults strictly below j (all outside the zone exactly when
    // j is, thanks to the boundary switches), incremental load V_i \ V_j.
    for (std::size_t a = 0; a < net.arc_count(); ++a) {
      const Arc& arc = net.arcs[a];
      if (!member[arc.to] && summary.in_subtree(arc.from, top) &&
          !summary.in_subtree(arc.to, top))
        c.arc_coefficient[a] -= zone_load;
    }
  }
  return c;
}

ZoneCoefficients effective_coefficients(const Network& net,
                                        std::span<const RestorationZone> zones) {
  return effective_coefficients(net, structural_summary(net), zones);
}

ReliabilityReport evaluate_with_zones(const Network& net,
                                      std::span<const RestorationZone> zones) {
  const auto summary = structural_summary(net);
  const auto coeff = effective_coefficients(net, summary, zones);
  const auto state = evaluate_iflows(net);

  ReliabilityReport rep;
  std::tie(rep.e_lb, rep.e_ub) = ens_bounds(net, summary);

  rep.ens = 0.0;
  for (std::size_t a = 0; a < net.arc_count(); ++a)
    rep.ens += coeff.arc_coefficient[a] * state.iflow[a];
  for (std::size_t i = 0; i < net.node_count(); ++i)
    rep.ens += coeff.node_coefficient[i] * net.theta(static_cast<NodeId>(i));

  std::vector<double> lambda(net.node_count());
  for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = net.nodes[i].failure_rate;
  const auto freq = evaluate_flows(net, lambda, state.switched);

  // Per-node durations with escapes: inside a zone only the islacks from the
  // zone top downward contribute (the path above was blocked by the boundary
  // switch on faults' way in and escapes cancel the rest).
  rep.node_interruption_hours = state.full_interruption;
  rep.node_interruption_freq = freq.full_interruption;
  for (const auto& z : zones) {
    auto member = member_mask(net, z);
    NodeId top = zone_top(net, member, z);
    double above_h = state.full_interruption[top] - state.islack[top];
    double above_f = freq.full_interruption[top] - freq.islack[top];
    for (NodeId v : z.members) {
      rep.node_interruption_hours[v] -= above_h;
      rep.node_interruption_freq[v] -= above_f;
    }
    rep.active_zones.push_back(z.name);
  }

  if (net.customers_specified) {
    long long total = 0;
    for (const auto& n : net.nodes) total += n.customers;
    if (total > 0) {
      double saidi = 0.0, saifi = 0.0;
      for (std::size_t i = 0; i < net.node_count(); ++i) {
        saidi += static_cast<double>(net.nodes[i].customers) * rep.node_interruption_hours[i];
        saifi += static_cast<double>(net.nodes[i].customers) * rep.node_interruption_freq[i];
      }
      rep.saidi = saidi / static_cast<double>(total);
      rep.saifi = saifi / static_cast<double>(total);
    }
  }
  return rep;
}

}  // namespace iflow
