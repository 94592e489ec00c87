#include "iflow/network.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "detail_format.hpp"

namespace iflow {

namespace {

struct RawNode {
  long long label;
  Node params;  // id filled in later
  int line;
};

struct RawArc {
  long long from, to;
  bool has_switch;
  int line;
};

struct RawZone {
  std::string name;
  std::vector<long long> member_labels;
  double dg = 0.0;
  int line;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view tok, int line, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "bad " + std::string(what) + " value '" + std::string(tok) + "'");
  return v;
}

long long parse_label(std::string_view tok, int line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 0)
    throw ParseError(line, "bad node id '" + std::string(tok) + "'");
  return v;
}

long long parse_count(std::string_view tok, int line, std::string_view what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "bad " + std::string(what) + " value '" + std::string(tok) + "'");
  return v;
}

// "key=value" -> (key, value); whole token as key when no '='.
std::pair<std::string_view, std::string_view> split_kv(std::string_view tok) {
  auto eq = tok.find('=');
  if (eq == std::string_view::npos) return {tok, {}};
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

}  // namespace

Network parse_network(std::string_view text) {
  std::vector<RawNode> raw_nodes;
  std::vector<RawArc> raw_arcs;
  std::vector<RawZone> raw_zones;
  std::string unit = "kW";
  double unit_to_kw = 1.0;
  bool customers_specified = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "units") {
      if (tok.size() != 2 || (tok[1] != "kW" && tok[1] != "MW"))
        throw ParseError(line_no, "units must be kW or MW");
      unit = std::string(tok[1]);
      unit_to_kw = unit == "MW" ? 1000.0 : 1.0;
    } else if (tok[0] == "node") {
      if (tok.size() < 2) throw ParseError(line_no, "node line needs an id");
      RawNode rn{parse_label(tok[1], line_no), {}, line_no};
      rn.params.customers = 1;  // load points default to one customer
      for (std::size_t k = 2; k < tok.size(); ++k) {
        auto [key, val] = split_kv(tok[k]);
        if (key == "load")
          rn.params.load = parse_double(val, line_no, "load");
        else if (key == "lambda")
          rn.params.failure_rate = parse_double(val, line_no, "lambda");
        else if (key == "t")
          rn.params.restore_time = parse_double(val, line_no, "t");
        else if (key == "customers") {
          rn.params.customers = parse_count(val, line_no, "customers");
          customers_specified = true;
        } else
          throw ParseError(line_no, "unknown node attribute '" + std::string(key) + "'");
      }
      if (rn.params.load < 0) throw ParseError(line_no, "negative parameter: load");
      if (rn.params.failure_rate < 0) throw ParseError(line_no, "negative parameter: lambda");
      if (rn.params.restore_time < 0) throw ParseError(line_no, "negative parameter: t");
      if (rn.params.customers < 0) throw ParseError(line_no, "negative parameter: customers");
      raw_nodes.push_back(std::move(rn));
    } else if (tok[0] == "arc") {
      if (tok.size() < 3 || tok.size() > 4)
        throw ParseError(line_no, "arc line needs '<from> <to> [switch]'");
      bool sw = false;
      if (tok.size() == 4) {
        if (tok[3] != "switch") throw ParseError(line_no, "unknown arc attribute '" + std::string(tok[3]) + "'");
        sw = true;
      }
      raw_arcs.push_back({parse_label(tok[1], line_no), parse_label(tok[2], line_no), sw, line_no});
    } else if (tok[0] == "zone") {
      if (tok.size() < 3) throw ParseError(line_no, "zone line needs a name and nodes=");
      RawZone rz;
      rz.name = std::string(tok[1]);
      rz.line = line_no;
      bool have_nodes = false;
      for (std::size_t k = 2; k < tok.size(); ++k) {
        auto [key, val] = split_kv(tok[k]);
        if (key == "nodes") {
          have_nodes = true;
          std::size_t i = 0;
          std::string vs(val);
          while (i < vs.size()) {
            auto comma = vs.find(',', i);
            auto piece = vs.substr(i, comma == std::string::npos ? vs.size() - i : comma - i);
            if (!piece.empty()) rz.member_labels.push_back(parse_label(piece, line_no));
            i = comma == std::string::npos ? vs.size() : comma + 1;
          }
        } else if (key == "dg") {
          rz.dg = parse_double(val, line_no, "dg");
          if (rz.dg < 0) throw ParseError(line_no, "negative parameter: dg");
        } else
          throw ParseError(line_no, "unknown zone attribute '" + std::string(key) + "'");
      }
      if (!have_nodes || rz.member_labels.empty())
        throw ParseError(line_no, "zone '" + rz.name + "' has no nodes");
      raw_zones.push_back(std::move(rz));
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
    }
  }

  // Resolve labels; node lines first, arc-only labels kept aside since only
  // the root may stay undefined.
  std::unordered_map<long long, std::size_t> defined;  // label -> raw_nodes index
  for (std::size_t i = 0; i < raw_nodes.size(); ++i) {
    auto [it, fresh] = defined.emplace(raw_nodes[i].label, i);
    if (!fresh)
      throw ParseError(raw_nodes[i].line,
                       "duplicate node id " + std::to_string(raw_nodes[i].label));
  }

  struct Undefined {
    int first_line;
    int in_degree;
  };
  std::unordered_map<long long, Undefined> undefined;
  std::unordered_map<long long, int> pred_line;  // to-label -> arc line
  std::unordered_map<long long, int> in_degree;
  for (const auto& ra : raw_arcs) {
    if (ra.from == ra.to)
      throw ParseError(ra.line, "cycle detected: arc (" + std::to_string(ra.from) + "," +
                                    std::to_string(ra.to) + ") is a self-loop");
    for (long long label : {ra.from, ra.to})
      if (!defined.count(label)) {
        auto [it, fresh] = undefined.try_emplace(label, Undefined{ra.line, 0});
        (void)it;
        (void)fresh;
      }
    auto [pit, fresh] = pred_line.try_emplace(ra.to, ra.line);
    if (!fresh)
      throw ParseError(ra.line, "node " + std::to_string(ra.to) + " has two predecessors");
    ++in_degree[ra.to];
    if (auto u = undefined.find(ra.to); u != undefined.end()) ++u->second.in_degree;
  }

  // An undefined endpoint is tolerated only when it is the (unique) root.
  for (const auto& [label, info] : undefined) {
    if (info.in_degree > 0)
      throw ParseError(info.first_line,
                       "arc endpoint undefined: node " + std::to_string(label));
  }
  if (undefined.size() > 1) {
    auto worst = std::max_element(undefined.begin(), undefined.end(),
                                  [](auto& a, auto& b) { return a.second.first_line < b.second.first_line; });
    throw ParseError(worst->second.first_line,
                     "arc endpoint undefined: node " + std::to_string(worst->first));
  }
  if (undefined.size() == 1) {
    RawNode implicit{undefined.begin()->first, {}, undefined.begin()->second.first_line};
    implicit.params.customers = 0;  // implicit root carries nothing
    defined.emplace(implicit.label, raw_nodes.size());
    raw_nodes.push_back(implicit);
  }

  if (raw_nodes.empty()) throw ParseError(0, "missing root: file defines no nodes");

  // Root: the unique label without a predecessor.
  std::vector<long long> root_candidates;
  for (const auto& rn : raw_nodes)
    if (!in_degree.count(rn.label)) root_candidates.push_back(rn.label);
  if (root_candidates.empty()) throw ParseError(0, "missing root: every node has a predecessor");
  if (root_candidates.size() > 1) {
    std::sort(root_candidates.begin(), root_candidates.end());
    throw ParseError(0, "disconnected node " + std::to_string(root_candidates[1]) +
                            " (two roots: " + std::to_string(root_candidates[0]) + " and " +
                            std::to_string(root_candidates[1]) + ")");
  }
  long long root_label = root_candidates[0];

  // Dense ids: root first, then node-line order.
  Network net;
  net.unit = unit;
  net.unit_to_kw = unit_to_kw;
  net.customers_specified = customers_specified;

  std::unordered_map<long long, NodeId> dense;
  dense.reserve(raw_nodes.size());
  dense[root_label] = 0;
  net.labels.push_back(root_label);
  for (const auto& rn : raw_nodes) {
    if (rn.label == root_label) continue;
    dense[rn.label] = static_cast<NodeId>(net.labels.size());
    net.labels.push_back(rn.label);
  }

  net.nodes.resize(raw_nodes.size());
  for (const auto& rn : raw_nodes) {
    NodeId id = dense[rn.label];
    net.nodes[id] = rn.params;
    net.nodes[id].id = id;
  }
  if (!customers_specified) {
    for (auto& n : net.nodes) n.customers = n.id == 0 ? 0 : 1;
  }

  net.arcs.reserve(raw_arcs.size());
  for (const auto& ra : raw_arcs)
    net.arcs.push_back({dense[ra.from], dense[ra.to], ra.has_switch});

  // pred / incoming-arc tables plus child lists grouped by tail node (CSR),
  // preserving file order within each tail.
  const auto n = net.nodes.size();
  net.pred.assign(n, kNoNode);
  net.in_arc.assign(n, kNoArc);
  net.child_start.assign(n + 1, 0);
  for (const auto& a : net.arcs) ++net.child_start[a.from + 1];
  for (std::size_t i = 1; i <= n; ++i) net.child_start[i] += net.child_start[i - 1];
  net.child_arcs.resize(net.arcs.size());
  {
    std::vector<std::int32_t> cursor(net.child_start.begin(), net.child_start.end() - 1);
    for (std::size_t a = 0; a < net.arcs.size(); ++a) {
      const Arc& arc = net.arcs[a];
      net.child_arcs[cursor[arc.from]++] = static_cast<std::int32_t>(a);
      net.pred[arc.to] = arc.from;
      net.in_arc[arc.to] = static_cast<std::int32_t>(a);
    }
  }

  // Reachability from the root. With unique predecessors any unreached node
  // sits on a pred-cycle.
  {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (auto a : net.child_arc_ids(v)) {
        NodeId c = net.arcs[a].to;
        if (!seen[c]) {
          seen[c] = 1;
          stack.push_back(c);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i]) {
        int line = pred_line.count(net.labels[i]) ? pred_line[net.labels[i]] : 0;
        throw ParseError(line, "cycle detected involving node " + std::to_string(net.labels[i]));
      }
  }

  net.zones.reserve(raw_zones.size());
  for (const auto& rz : raw_zones) {
    RestorationZone z;
    z.name = rz.name;
    z.dg_capacity = rz.dg;
    for (long long label : rz.member_labels) {
      auto it = dense.find(label);
      if (it == dense.end())
        throw ParseError(rz.line, "zone '" + rz.name + "' references undefined node " +
                                      std::to_string(label));
      z.members.push_back(it->second);
    }
    net.zones.push_back(std::move(z));
  }

  return net;
}

std::string serialize_network(const Network& net) {
  std::string out;
  out += "units " + net.unit + "\n";
  for (const auto& n : net.nodes) {
    out += "node " + std::to_string(net.labels[n.id]);
    out += " load=" + detail::fmt(n.load);
    out += " lambda=" + detail::fmt(n.failure_rate);
    out += " t=" + detail::fmt(n.restore_time);
    if (net.customers_specified) out += " customers=" + std::to_string(n.customers);
    out += "\n";
  }
  for (const auto& a : net.arcs) {
    out += "arc " + std::to_string(net.labels[a.from]) + " " + std::to_string(net.labels[a.to]);
    if (a.has_switch) out += " switch";
    out += "\n";
  }
  for (const auto& z : net.zones) {
    out += "zone " + z.name + " nodes=";
    for (std::size_t i = 0; i < z.members.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(net.labels[z.members[i]]);
    }
    out += " dg=" + detail::fmt(z.dg_capacity);
    out += "\n";
  }
  return out;
}

std::int32_t find_arc(const Network& net, NodeId from, NodeId to) {
  if (to < 0 || static_cast<std::size_t>(to) >= net.node_count()) return kNoArc;
  auto a = net.in_arc[to];
  if (a != kNoArc && net.arcs[a].from == from) return a;
  return kNoArc;
}

Network set_switches(const Network& net,
                     std::span<const std::pair<NodeId, NodeId>> switch_arcs) {
  Network out = net;
  for (auto& a : out.arcs) a.has_switch = false;
  for (const auto& [from, to] : switch_arcs) {
    auto a = find_arc(out, from, to);
    if (a == kNoArc)
      throw ValidationError("unknown arc (" + std::to_string(from) + "," + std::to_string(to) + ")");
    out.arcs[a].has_switch = true;
  }
  return out;
}

StructuralSummary structural_summary(const Network& net) {
  const auto n = net.node_count();
  StructuralSummary s;
  s.downstream_load.assign(n, 0.0);
  s.preorder.reserve(n);
  s.tin.assign(n, 0);
  s.tout.assign(n, 0);

  // Preorder with an explicit stack; children pushed in reverse so they pop
  // in child-list order.
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    s.tin[v] = static_cast<std::int32_t>(s.preorder.size());
    s.preorder.push_back(v);
    auto kids = net.child_arc_ids(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it)
      stack.push_back(net.arcs[*it].to);
  }

  for (auto it = s.preorder.rbegin(); it != s.preorder.rend(); ++it) {
    NodeId v = *it;
    double acc = net.nodes[v].load;
    std::int32_t end = s.tin[v] + 1;
    for (auto a : net.child_arc_ids(v)) {
      NodeId c = net.arcs[a].to;
      acc += s.downstream_load[c];
      end = std::max(end, s.tout[c]);
    }
    s.downstream_load[v] = acc;
    s.tout[v] = end;
  }
  s.total_load = s.downstream_load[0];
  s.total_customers = 0;
  for (const auto& node : net.nodes) s.total_customers += node.customers;
  return s;
}

std::string summary_csv(const Network& net, const StructuralSummary& summary) {
  std::string out = "node,load,downstream_load,customers\n";
  for (const auto& n : net.nodes) {
    out += std::to_string(net.labels[n.id]) + "," + detail::fmt(n.load) + "," +
           detail::fmt(summary.downstream_load[n.id]) + "," + std::to_string(n.customers) + "\n";
  }
  return out;
}

}  // namespace iflow
