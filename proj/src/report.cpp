#include "iflow/report.hpp"

#include <algorithm>
#include <cstdio>

#include "detail_format.hpp"

namespace iflow {

std::string report_csv(const Network& net, const IflowState& state,
                       const ReliabilityReport& report) {
  std::string out = "node,u_hours,freq_per_year\n";
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    out += std::to_string(net.labels[i]) + "," +
           detail::fmt(report.node_interruption_hours[i]) + "," +
           detail::fmt(report.node_interruption_freq[i]) + "\n";
  }
  out += "\narc,from,to,iflow,switched\n";
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arcs[a];
    out += std::to_string(a) + "," + std::to_string(net.labels[arc.from]) + "," +
           std::to_string(net.labels[arc.to]) + "," + detail::fmt(state.iflow[a]) + "," +
           (state.switched[a] ? "1" : "0") + "\n";
  }
  return out;
}

std::string to_dot(const Network& net, const IflowState& state) {
  double f_max = 0.0;
  for (double f : state.iflow) f_max = std::max(f_max, f);

  auto blend = [&](double f) {
    double x = f_max > 0.0 ? f / f_max : 0.0;
    int r = static_cast<int>(x * 255.0 + 0.5);
    int b = 255 - r;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x00%02x", r, b);
    return std::string(buf);
  };

  std::string dot = "digraph iflows {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    dot += "  n" + std::to_string(net.labels[i]) + " [label=\"" +
           std::to_string(net.labels[i]) + "\\n(" + detail::fmt(net.theta(static_cast<NodeId>(i))) +
           ", " + detail::fmt(net.nodes[i].load) + ")\"];\n";
  }
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arcs[a];
    dot += "  n" + std::to_string(net.labels[arc.from]) + " -> n" +
           std::to_string(net.labels[arc.to]) + " [label=\"" + detail::fmt(state.iflow[a]) +
           "\", color=\"" + blend(state.iflow[a]) + "\"";
    if (state.switched[a]) dot += ", style=dashed";
    dot += "];\n";
  }
  dot += "}\n";
  return dot;
}

}  // namespace iflow
