#include "iflow/islanding.hpp"

#include <random>

#include "doctest.h"
#include "iflow/oracle.hpp"
#include "support.hpp"

using namespace iflow;

TEST_CASE("configuration 3 evaluates to the published ENS") {
  auto net = testsup::load_fixture("config3.net");
  REQUIRE(net.zones.size() == 2);

  auto rep = evaluate_with_zones(net, net.zones);
  CHECK(rep.ens == doctest::Approx(18.4).epsilon(1e-12));
  CHECK(rep.active_zones == std::vector<std::string>{"island26", "island37"});

  // The same value through the defining per-node sum.
  double by_nodes = 0.0;
  for (std::size_t i = 0; i < net.node_count(); ++i)
    by_nodes += net.nodes[i].load * rep.node_interruption_hours[i];
  CHECK(by_nodes == doctest::Approx(18.4).epsilon(1e-12));
}

TEST_CASE("configuration 3 coefficients carry the zone subtractions") {
  auto net = testsup::load_fixture("config3.net");
  auto s = structural_summary(net);
  auto c = effective_coefficients(net, s, net.zones);

  // Faults at node 1 no longer interrupt the islanded {2,6}.
  CHECK(c.node_coefficient[1] == doctest::Approx(s.downstream_load[1] - 4.0).epsilon(1e-12));
  // Terms whose faults live inside a zone are untouched.
  CHECK(c.node_coefficient[2] == doctest::Approx(s.downstream_load[2]).epsilon(1e-12));
  // The (1,5) flow's incremental load drops the islanded members too.
  auto a15 = find_arc(net, 1, 5);
  CHECK(c.arc_coefficient[a15] ==
        doctest::Approx(s.downstream_load[1] - s.downstream_load[5] - 4.0).epsilon(1e-12));
}

TEST_CASE("an empty zone list is the exact identity") {
  for (const char* name : {"config1.net", "config2.net", "table1_customers.net"}) {
    auto net = testsup::load_fixture(name);
    auto rep_plain = reliability_report(net, evaluate_iflows(net));
    auto rep_zoned = evaluate_with_zones(net, {});
    CHECK(rep_zoned.ens == rep_plain.ens);
    CHECK(rep_zoned.node_interruption_hours == rep_plain.node_interruption_hours);
    CHECK(rep_zoned.node_interruption_freq == rep_plain.node_interruption_freq);
    CHECK(rep_zoned.saidi == rep_plain.saidi);
    CHECK(rep_zoned.saifi == rep_plain.saifi);
  }
  auto config2 = testsup::load_fixture("config2.net");
  CHECK(evaluate_with_zones(config2, {}).ens == doctest::Approx(54.8).epsilon(1e-12));
}

TEST_CASE("invalid zones are rejected with a reason") {
  auto net = testsup::load_fixture("config2.net");
  auto s = structural_summary(net);

  SUBCASE("disconnected members") {
    RestorationZone z{"bad", {5, 6}, 100.0};  // cousins, not a region
    std::vector<RestorationZone> zs{z};
    CHECK_THROWS_WITH_AS(validate_zones(net, s, zs), doctest::Contains("connected"),
                         ValidationError);
  }
  SUBCASE("missing boundary switch") {
    RestorationZone z{"bad", {2, 3}, 100.0};  // (3,4) and (2,6)... (1,2) switchless
    std::vector<RestorationZone> zs{z};
    CHECK_THROWS_WITH_AS(validate_zones(net, s, zs), doctest::Contains("lacks a switch"),
                         ValidationError);
  }
  SUBCASE("insufficient capacity") {
    RestorationZone z{"bad", {5}, 1.0};  // load 5 > capacity 1
    std::vector<RestorationZone> zs{z};
    CHECK_THROWS_WITH_AS(validate_zones(net, s, zs), doctest::Contains("capacity"),
                         ValidationError);
  }
  SUBCASE("overlapping zones") {
    RestorationZone a{"a", {5}, 10.0}, b{"b", {5}, 10.0};
    std::vector<RestorationZone> zs{a, b};
    CHECK_THROWS_WITH_AS(validate_zones(net, s, zs), doctest::Contains("overlap"),
                         ValidationError);
  }
  SUBCASE("duplicate member") {
    RestorationZone z{"bad", {5, 5}, 10.0};
    std::vector<RestorationZone> zs{z};
    CHECK_THROWS_WITH_AS(validate_zones(net, s, zs), doctest::Contains("twice"),
                         ValidationError);
  }
}

TEST_CASE("zones agree with the fault-enumeration oracle") {
  std::mt19937_64 rng(515);
  for (int trial = 0; trial < 150; ++trial) {
    auto net = testsup::random_network(rng, 3 + static_cast<int>(rng() % 8), 10.0, 0.35);
    std::vector<char> claimed(net.node_count(), 0);
    claimed[0] = 1;  // keep the root out of zones
    std::vector<RestorationZone> zones;
    int want = 1 + static_cast<int>(rng() % 2);
    for (int z = 0; z < want; ++z)
      if (auto zone = testsup::plant_random_zone(rng, net, claimed, "z" + std::to_string(z)))
        zones.push_back(*zone);
    if (zones.empty()) continue;

    auto rep = evaluate_with_zones(net, zones);
    auto ref = oracle_indices(net, zones);
    CHECK(rep.ens == doctest::Approx(ref.ens).epsilon(1e-9));
    for (std::size_t i = 0; i < net.node_count(); ++i) {
      CHECK(rep.node_interruption_hours[i] ==
            doctest::Approx(ref.node_interruption_hours[i]).epsilon(1e-9));
      CHECK(rep.node_interruption_freq[i] ==
            doctest::Approx(ref.node_interruption_freq[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("zones never increase ENS and respect the vanishing-load floor") {
  std::mt19937_64 rng(616);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = testsup::random_network(rng, 3 + static_cast<int>(rng() % 8), 10.0, 0.35);
    std::vector<char> claimed(net.node_count(), 0);
    claimed[0] = 1;
    std::vector<RestorationZone> zones;
    if (auto zone = testsup::plant_random_zone(rng, net, claimed, "z")) zones.push_back(*zone);
    if (zones.empty()) continue;

    double with_zones = evaluate_with_zones(net, zones).ens;
    double without = ens(net, evaluate_iflows(net));
    CHECK(with_zones <= without * (1 + 1e-12) + 1e-12);

    Network gutted = net;
    for (NodeId v : zones[0].members) gutted.nodes[v].load = 0.0;
    double floor = ens(gutted, evaluate_iflows(gutted));
    CHECK(with_zones >= floor * (1 - 1e-12) - 1e-12);
  }
}

TEST_CASE("zone covering everything but the root leaves only internal terms") {
  // Path 0-1-2 with all load at the bottom; zone {1,2} escapes the root's
  // faults entirely.
  auto net = parse_network(
      "node 1 load=1 lambda=1 t=1\n"
      "node 2 load=3 lambda=2 t=1\n"
      "arc 0 1 switch\narc 1 2\n");
  net.nodes[0].failure_rate = 5.0;
  net.nodes[0].restore_time = 1.0;
  RestorationZone z{"all", {1, 2}, 10.0};
  std::vector<RestorationZone> zs{z};

  auto rep = evaluate_with_zones(net, zs);
  auto ref = oracle_indices(net, zs);
  CHECK(rep.ens == doctest::Approx(ref.ens).epsilon(1e-12));
  // Only the two internal faults remain; each interrupts the whole zone.
  CHECK(rep.ens == doctest::Approx(1.0 * (1 + 3) + 2.0 * (1 + 3)).epsilon(1e-12));
}

TEST_CASE("zone-adjusted SAIDI/SAIFI stay consistent with the oracle fixture") {
  auto net = testsup::load_fixture("config3.net");
  net.customers_specified = true;  // one customer per non-root node
  for (auto& node : net.nodes) node.customers = node.id == 0 ? 0 : 1;
  auto rep = evaluate_with_zones(net, net.zones);
  auto ref = oracle_indices(net, net.zones);
  REQUIRE(rep.saidi.has_value());
  REQUIRE(ref.saidi.has_value());
  CHECK(*rep.saidi == doctest::Approx(*ref.saidi).epsilon(1e-12));
  CHECK(*rep.saifi == doctest::Approx(*ref.saifi).epsilon(1e-12));
}
