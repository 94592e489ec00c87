#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iflow {

/// Dense node identifier. Node 0 is always the root (substation); ids are
/// contiguous 0..|V|-1 in every validated Network.
using NodeId = std::int32_t;

constexpr NodeId kNoNode = -1;
constexpr std::int32_t kNoArc = -1;

/// Load point. `load` is stored in the unit declared by the network file
/// (see Network::unit_to_kw for the conversion to kW).
struct Node {
  NodeId id = 0;
  double load = 0.0;           // l_i, power
  double failure_rate = 0.0;   // lambda_i, failures/year
  double restore_time = 0.0;   // t_i, hours
  long long customers = 0;     // n_i

  bool operator==(const Node&) const = default;
};

/// Directed arc, oriented from the root towards the customers.
/// `has_switch` marks membership in the switched arc set A_s.
struct Arc {
  NodeId from = 0;
  NodeId to = 0;
  bool has_switch = false;

  bool operator==(const Arc&) const = default;
};

/// A DG-backed restoration zone: a connected set of nodes that keeps its
/// supply when a fault originates outside the zone. Capacity uses the same
/// unit as node loads.
struct RestorationZone {
  std::string name;
  std::vector<NodeId> members;
  double dg_capacity = 0.0;

  bool operator==(const RestorationZone&) const = default;
};

/// Radial network: a spanning arborescence rooted at node 0.
///
/// Immutable after construction; all operations over it are pure functions,
/// so a Network can be shared freely across threads.
struct Network {
  std::vector<Node> nodes;   // indexed by dense id
  std::vector<Arc> arcs;     // kept in input order

  // Structure derived at validation time.
  std::vector<NodeId> pred;               // pred[0] == kNoNode
  std::vector<std::int32_t> in_arc;       // arc entering each node; kNoArc at root
  std::vector<std::int32_t> child_start;  // CSR offsets over nodes, size |V|+1
  std::vector<std::int32_t> child_arcs;   // arc indices grouped by tail node

  std::vector<long long> labels;  // dense id -> external label
  std::string unit = "kW";        // declared load unit
  double unit_to_kw = 1.0;
  bool customers_specified = false;
  std::vector<RestorationZone> zones;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t arc_count() const { return arcs.size(); }
  static constexpr NodeId root() { return 0; }

  std::span<const std::int32_t> child_arc_ids(NodeId i) const {
    return {child_arcs.data() + child_start[i],
            child_arcs.data() + child_start[i + 1]};
  }

  double theta(NodeId i) const {  // self-interruption, hours/year
    return nodes[i].failure_rate * nodes[i].restore_time;
  }

  bool operator==(const Network&) const = default;
};

/// Downstream structure: per-node downstream load and subtree intervals over
/// a preorder walk, so V_i membership and enumeration are O(1)/O(|V_i|).
struct StructuralSummary {
  std::vector<double> downstream_load;  // l~_i, same unit as node loads
  double total_load = 0.0;              // l~_0
  long long total_customers = 0;

  std::vector<NodeId> preorder;       // root-first DFS order
  std::vector<std::int32_t> tin;      // subtree of i is preorder[tin[i]..tout[i])
  std::vector<std::int32_t> tout;

  bool in_subtree(NodeId ancestor, NodeId v) const {
    return tin[ancestor] <= tin[v] && tin[v] < tout[ancestor];
  }
  std::span<const NodeId> subtree(NodeId i) const {
    return {preorder.data() + tin[i], preorder.data() + tout[i]};
  }
};

/// Input problem in a network file or in arguments derived from one.
/// `line` is 1-based; 0 means the problem is not tied to a single line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& reason)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + reason
                                    : reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Violation of a semantic precondition (unknown arc, invalid zone, ...).
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the line-oriented network file format:
///
///   units <kW|MW>
///   node <id> load=<f> lambda=<f> t=<f> [customers=<int>]
///   arc <from> <to> [switch]
///   zone <name> nodes=<id,id,...> [dg=<f>]
///
/// `#` starts a comment; blank lines are ignored. External ids may be
/// arbitrary non-negative integers; they are renumbered densely with the
/// root mapped to 0 and the original labels preserved. A node referenced
/// only by arcs is accepted when it turns out to be the root (all
/// parameters default to zero); any other undefined endpoint is an error.
Network parse_network(std::string_view text);

/// Inverse of parse_network: emits a file that parses back to an identical
/// Network (same dense ids, labels, arc order, switches and zones).
std::string serialize_network(const Network& net);

/// Returns a copy of `net` with the switched arc set replaced. Pairs use
/// dense node ids; naming a non-existent arc raises ValidationError.
Network set_switches(const Network& net,
                     std::span<const std::pair<NodeId, NodeId>> switch_arcs);

/// One bottom-up sweep: downstream loads, totals and subtree intervals.
StructuralSummary structural_summary(const Network& net);

/// CSV with columns node,load,downstream_load,customers (external labels).
std::string summary_csv(const Network& net, const StructuralSummary& summary);

/// Arc index for a dense (from,to) pair, or kNoArc.
std::int32_t find_arc(const Network& net, NodeId from, NodeId to);

}  // namespace iflow
