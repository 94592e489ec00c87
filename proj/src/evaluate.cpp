#include "iflow/evaluate.hpp"

#include <algorithm>

namespace iflow {

namespace {

// Root-first DFS order with an explicit stack. Children are pushed in
// reverse so they pop in child-list order.
std::vector<NodeId> preorder_of(const Network& net) {
  std::vector<NodeId> order;
  order.reserve(net.node_count());
  std::vector<NodeId> stack{Network::root()};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    auto kids = net.child_arc_ids(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it)
      stack.push_back(net.arcs[*it].to);
  }
  return order;
}

}  // namespace

IflowState evaluate_flows(const Network& net, std::span<const double> intensity,
                          std::span<const char> switch_override) {
  const auto n = net.node_count();
  const auto m = net.arc_count();

  IflowState st;
  st.iflow.assign(m, 0.0);
  st.islack.assign(n, 0.0);
  st.downstream_interruption.assign(n, 0.0);
  st.full_interruption.assign(n, 0.0);
  st.switched.assign(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    st.switched[a] = switch_override.empty() ? static_cast<char>(net.arcs[a].has_switch)
                                             : switch_override[a];

  // The sweeps run in preorder-rank space, where every subtree is a
  // contiguous block and both passes become sequential scans. Children are
  // pushed in child-list order so the reverse-rank accumulation below adds
  // them to their parent in that same order.
  std::vector<NodeId> order(n);
  std::vector<std::int32_t> rpred(n), rin(n);
  std::vector<char> rsw(n);
  std::vector<double> value(n);
  {
    struct Item {
      NodeId node;
      std::int32_t parent_rank;
    };
    std::vector<Item> stack{{Network::root(), -1}};
    std::size_t r = 0;
    while (!stack.empty()) {
      auto [v, pr] = stack.back();
      stack.pop_back();
      order[r] = v;
      rpred[r] = pr;
      auto in = net.in_arc[v];
      rin[r] = in;
      rsw[r] = in == kNoArc ? 0 : st.switched[in];
      value[r] = intensity[v];
      for (auto a : net.child_arc_ids(v))
        stack.push_back({net.arcs[a].to, static_cast<std::int32_t>(r)});
      ++r;
    }
  }

  // Bottom-up: value[r] finishes as the downstream interruption of order[r]
  // once every higher rank has flushed into its parent.
  for (std::size_t r = n; r-- > 1;)
    if (!rsw[r]) value[rpred[r]] += value[r];

  // Per-node balance collapses to: the islack equals the downstream
  // interruption behind a switch (and at the root) and is zero elsewhere.
  std::vector<double> full(n);
  full[0] = value[0];
  for (std::size_t r = 1; r < n; ++r) full[r] = full[rpred[r]] + (rsw[r] ? value[r] : 0.0);

  for (std::size_t r = 0; r < n; ++r) {
    NodeId v = order[r];
    st.downstream_interruption[v] = value[r];
    st.full_interruption[v] = full[r];
    st.islack[v] = (r == 0 || rsw[r]) ? value[r] : 0.0;
    if (rin[r] != kNoArc) st.iflow[rin[r]] = rsw[r] ? 0.0 : value[r];
  }
  return st;
}

IflowState evaluate_flows(const Network& net, std::span<const double> intensity) {
  return evaluate_flows(net, intensity, {});
}

IflowState evaluate_iflows(const Network& net) {
  std::vector<double> theta(net.node_count());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = net.theta(static_cast<NodeId>(i));
  return evaluate_flows(net, theta);
}

double ens(const Network& net, const StructuralSummary& summary, const IflowState& state) {
  double total = 0.0;
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arcs[a];
    total += (summary.downstream_load[arc.from] - summary.downstream_load[arc.to]) * state.iflow[a];
  }
  for (std::size_t i = 0; i < net.node_count(); ++i)
    total += summary.downstream_load[i] * net.theta(static_cast<NodeId>(i));
  return total;
}

double ens(const Network& net, const IflowState& state) {
  return ens(net, structural_summary(net), state);
}

double ens_nodewise(const Network& net, const IflowState& state) {
  double total = 0.0;
  for (std::size_t i = 0; i < net.node_count(); ++i)
    total += net.nodes[i].load * state.full_interruption[i];
  return total;
}

std::pair<double, double> ens_bounds(const Network& net, const StructuralSummary& summary) {
  double lb = 0.0;
  double theta_sum = 0.0;
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    double th = net.theta(static_cast<NodeId>(i));
    lb += summary.downstream_load[i] * th;
    theta_sum += th;
  }
  return {lb, summary.total_load * theta_sum};
}

std::pair<double, double> ens_bounds(const Network& net) {
  return ens_bounds(net, structural_summary(net));
}

ReliabilityReport reliability_report(const Network& net, const IflowState& state) {
  const auto summary = structural_summary(net);

  ReliabilityReport rep;
  rep.ens = ens(net, summary, state);
  std::tie(rep.e_lb, rep.e_ub) = ens_bounds(net, summary);
  rep.node_interruption_hours = state.full_interruption;

  std::vector<double> lambda(net.node_count());
  for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = net.nodes[i].failure_rate;
  const auto freq = evaluate_flows(net, lambda, state.switched);
  rep.node_interruption_freq = freq.full_interruption;

  if (net.customers_specified && summary.total_customers > 0) {
    double saidi = 0.0, saifi = 0.0;
    for (std::size_t i = 0; i < net.node_count(); ++i) {
      saidi += static_cast<double>(net.nodes[i].customers) * state.full_interruption[i];
      saifi += static_cast<double>(net.nodes[i].customers) * freq.full_interruption[i];
    }
    rep.saidi = saidi / static_cast<double>(summary.total_customers);
    rep.saifi = saifi / static_cast<double>(summary.total_customers);
  }
  return rep;
}

}  // namespace iflow
