#include "iflow/oracle.hpp"

#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace iflow;

TEST_CASE("oracle reproduces the worked configurations") {
  auto c1 = testsup::load_fixture("config1.net");
  CHECK(oracle_indices(c1).ens == doctest::Approx(84.0).epsilon(1e-12));

  auto c2 = testsup::load_fixture("config2.net");
  CHECK(oracle_indices(c2).ens == doctest::Approx(54.8).epsilon(1e-12));

  auto c3 = testsup::load_fixture("config3.net");
  CHECK(oracle_indices(c3, c3.zones).ens == doctest::Approx(18.4).epsilon(1e-12));
}

TEST_CASE("zero failure rates give an all-zero report") {
  auto net = parse_network("node 1 load=5\nnode 2 load=3\narc 0 1\narc 1 2 switch\n");
  auto rep = oracle_indices(net);
  CHECK(rep.ens == 0.0);
  for (double u : rep.node_interruption_hours) CHECK(u == 0.0);
  for (double f : rep.node_interruption_freq) CHECK(f == 0.0);
  CHECK(rep.e_lb == 0.0);
  CHECK(rep.e_ub == 0.0);
}

TEST_CASE("oracle and flow evaluation agree everywhere") {
  std::mt19937_64 rng(717);
  for (int trial = 0; trial < 400; ++trial) {
    auto net = testsup::random_network(rng, 2 + static_cast<int>(rng() % 11));
    auto st = evaluate_iflows(net);
    auto flow_rep = reliability_report(net, st);
    auto ref = oracle_indices(net);

    CHECK(flow_rep.ens == doctest::Approx(ref.ens).epsilon(1e-9));
    CHECK(ens_nodewise(net, st) == doctest::Approx(ref.ens).epsilon(1e-9));
    CHECK(flow_rep.e_lb == doctest::Approx(ref.e_lb).epsilon(1e-9));
    CHECK(flow_rep.e_ub == doctest::Approx(ref.e_ub).epsilon(1e-9));
    for (std::size_t i = 0; i < net.node_count(); ++i) {
      CHECK(st.full_interruption[i] ==
            doctest::Approx(ref.node_interruption_hours[i]).epsilon(1e-9));
      CHECK(flow_rep.node_interruption_freq[i] ==
            doctest::Approx(ref.node_interruption_freq[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("exhaustive placement search on the example feeder") {
  auto net = testsup::load_fixture("table1.net");
  const std::int32_t breaker = find_arc(net, 0, 1);
  std::vector<std::int32_t> fixed{breaker};

  SUBCASE("breaker only equals configuration 1") {
    auto sol = oracle_sap(net, 1, fixed);
    CHECK(sol.ens == doctest::Approx(84.0).epsilon(1e-12));
    CHECK(sol.switch_arcs == fixed);
  }
  SUBCASE("a full set of switches reaches the lower bound") {
    auto sol = oracle_sap(net, static_cast<int>(net.arc_count()));
    CHECK(sol.ens == doctest::Approx(32.4).epsilon(1e-12));
  }
  SUBCASE("optimum never worsens as the budget grows") {
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= static_cast<int>(net.arc_count()); ++n) {
      auto sol = oracle_sap(net, n, fixed);
      CHECK(sol.ens <= prev + 1e-12);
      prev = sol.ens;
    }
  }
  SUBCASE("sweep matches per-budget runs") {
    auto sweep = oracle_sap_sweep(net, fixed);
    for (int n = 1; n <= static_cast<int>(net.arc_count()); ++n) {
      auto sol = oracle_sap(net, n, fixed);
      CHECK(sweep[n].ens == sol.ens);
      CHECK(sweep[n].switch_arcs == sol.switch_arcs);
    }
  }
}

TEST_CASE("ties break to the lexicographically smallest arc list") {
  // Perfectly symmetric star: every single-switch placement scores alike.
  auto net = parse_network(
      "node 1 load=1 lambda=1 t=1\nnode 2 load=1 lambda=1 t=1\n"
      "node 3 load=1 lambda=1 t=1\narc 0 1\narc 0 2\narc 0 3\n");
  auto sol = oracle_sap(net, 1);
  // The empty placement scores E_ub; one switch is strictly better and the
  // smallest arc index must win the tie among the three.
  CHECK(sol.switch_arcs == std::vector<std::int32_t>{0});
}

TEST_CASE("enumeration guard") {
  std::mt19937_64 rng(818);
  auto net = testsup::random_network(rng, 60, 10.0, 0.0);
  CHECK_THROWS_AS(oracle_sap(net, 30), BudgetError);
  CHECK_THROWS_AS(oracle_sap_sweep(net), BudgetError);
}
