#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "iflow/economics.hpp"
#include "iflow/evaluate.hpp"
#include "iflow/islanding.hpp"
#include "iflow/network.hpp"
#include "iflow/report.hpp"
#include "iflow/sap.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw iflow::ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw iflow::ValidationError("cannot write '" + path + "'");
  out << content;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Loads carry the file's unit, so energies are <unit>h/year.
std::string energy_unit(const iflow::Network& net) { return net.unit + "h/year"; }

std::vector<std::int32_t> breaker_arcs(const iflow::Network& net) {
  std::vector<std::int32_t> arcs;
  for (auto a : net.child_arc_ids(iflow::Network::root())) arcs.push_back(a);
  return arcs;
}

std::string arc_list(const iflow::Network& net, const std::vector<std::int32_t>& arcs) {
  std::string out;
  for (auto a : arcs) {
    if (!out.empty()) out += " ";
    out += "(" + std::to_string(net.labels[net.arcs[a].from]) + "," +
           std::to_string(net.labels[net.arcs[a].to]) + ")";
  }
  return out.empty() ? "(none)" : out;
}

int cmd_evaluate(const std::string& file, bool use_zones, const std::string& format,
                 const std::string& dot_path, const std::string& summary_path) {
  auto net = iflow::parse_network(read_file(file));
  auto state = iflow::evaluate_iflows(net);
  auto report = use_zones ? iflow::evaluate_with_zones(net, net.zones)
                          : iflow::reliability_report(net, state);

  if (format == "csv") {
    std::cout << iflow::report_csv(net, state, report);
  } else {
    std::cout << "network " << file << ": " << net.node_count() << " nodes, " << net.arc_count()
              << " arcs, unit " << net.unit << "\n";
    std::cout << "ENS " << fixed3(report.ens) << " " << energy_unit(net) << "\n";
    std::cout << "E_lb " << fixed3(report.e_lb) << " " << energy_unit(net) << "\n";
    std::cout << "E_ub " << fixed3(report.e_ub) << " " << energy_unit(net) << "\n";
    if (report.saidi)
      std::cout << "SAIDI " << fixed3(*report.saidi) << " h/customer/year\n";
    else
      std::cout << "SAIDI unavailable (no customer data)\n";
    if (report.saifi)
      std::cout << "SAIFI " << fixed3(*report.saifi) << " int/customer/year\n";
    else
      std::cout << "SAIFI unavailable (no customer data)\n";
    if (use_zones) {
      std::cout << "zones active:";
      if (report.active_zones.empty()) std::cout << " (none)";
      for (const auto& z : report.active_zones) std::cout << " " << z;
      std::cout << "\n";
    }
  }

  if (!dot_path.empty()) write_file(dot_path, iflow::to_dot(net, state));
  if (!summary_path.empty())
    write_file(summary_path, iflow::summary_csv(net, iflow::structural_summary(net)));
  return kExitOk;
}

int cmd_optimize(const std::string& file, int n, const std::string& method, bool fix_breaker,
                 std::uint64_t seed, std::string out_path) {
  auto net = iflow::parse_network(read_file(file));
  std::vector<std::int32_t> fixed;
  if (fix_breaker) fixed = breaker_arcs(net);
  // The substation breaker is infrastructure: it does not count against N.
  auto inst =
      iflow::make_instance(net, n + static_cast<int>(fixed.size()), fixed, {});

  if (method == "lp-export") {
    if (out_path.empty()) {
      out_path = file;
      if (auto dot = out_path.rfind('.'); dot != std::string::npos) out_path.resize(dot);
      out_path += ".lp";
    }
    write_file(out_path, iflow::export_milp(inst));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
  }

  iflow::SapSolution sol;
  if (method == "dp")
    sol = iflow::solve_exact_dp(inst);
  else
    sol = iflow::solve_heuristic(inst, seed);

  auto [e_lb, e_ub] = iflow::ens_bounds(net);
  std::cout << "instance: " << net.arc_count() << " arcs, N=" << n
            << (fix_breaker ? " plus fixed breaker" : "") << "\n";
  std::cout << "switches: " << arc_list(net, sol.switch_arcs) << "\n";
  std::cout << "ENS " << fixed3(sol.ens) << " " << energy_unit(net) << "\n";
  std::cout << "status "
            << (sol.status == iflow::SapStatus::ProvenOptimal ? "proven-optimal" : "heuristic")
            << "\n";
  std::cout << "E_lb " << fixed3(e_lb) << " E_ub " << fixed3(e_ub) << " " << energy_unit(net)
            << "\n";
  double gap = sol.ens > 0.0 ? (sol.ens - e_lb) / sol.ens * 100.0 : 0.0;
  std::cout << "gap_vs_lb " << fixed3(gap) << "%\n";
  return kExitOk;
}

int cmd_sweep(const std::string& file, double cs, double ce, int n_max, bool fix_breaker,
              std::uint64_t seed) {
  auto net = iflow::parse_network(read_file(file));
  std::vector<std::int32_t> fixed;
  if (fix_breaker) fixed = breaker_arcs(net);
  auto result = iflow::sweep(net, {cs, ce}, n_max, fixed, {}, seed);
  std::cout << iflow::economics_csv(result);
  std::cerr << "best N=" << result.best_n << " return=" << fixed3(result.best_return)
            << "; break-even N=" << result.break_even_n << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reliability evaluation and switch placement for radial distribution networks"};
  app.require_subcommand(1);

  std::string file, format = "text", dot_path, summary_path, method = "dp", out_path;
  bool use_zones = false, fix_breaker = false;
  int n = 0, n_max = 20;
  std::uint64_t seed = 0;
  double cs = 0.0, ce = 0.0;

  auto* eval = app.add_subcommand("evaluate", "Evaluate reliability indices of a network file");
  eval->add_option("file", file, "network file")->required();
  eval->add_flag("--zones", use_zones, "apply the file's restoration zones");
  eval->add_option("--report", format, "text|csv")->check(CLI::IsMember({"text", "csv"}));
  eval->add_option("--dot", dot_path, "write the iflow diagram to this DOT file");
  eval->add_option("--summary-csv", summary_path, "write the structural summary CSV here");

  auto* opt = app.add_subcommand("optimize", "Optimize switch placement");
  opt->add_option("file", file, "network file")->required();
  opt->add_option("--n", n, "number of switches to place")->required();
  opt->add_option("--method", method, "dp|heuristic|lp-export")
      ->check(CLI::IsMember({"dp", "heuristic", "lp-export"}));
  opt->add_flag("--fix-breaker", fix_breaker, "fix a switch on every substation arc (free)");
  opt->add_option("--seed", seed, "heuristic seed");
  opt->add_option("--out", out_path, "output path for lp-export");

  auto* sw = app.add_subcommand("sweep", "Economic sweep over switch counts");
  sw->add_option("file", file, "network file")->required();
  sw->add_option("--cs", cs, "annual cost per switch")->required();
  sw->add_option("--ce", ce, "cost per kWh not supplied")->required();
  sw->add_option("--n-max", n_max, "largest switch count to evaluate");
  sw->add_flag("--fix-breaker", fix_breaker, "fix a switch on every substation arc (free)");
  sw->add_option("--seed", seed, "heuristic seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInput;
  }

  try {
    if (eval->parsed()) return cmd_evaluate(file, use_zones, format, dot_path, summary_path);
    if (opt->parsed()) return cmd_optimize(file, n, method, fix_breaker, seed, out_path);
    if (sw->parsed()) return cmd_sweep(file, cs, ce, n_max, fix_breaker, seed);
  } catch (const iflow::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
