#include <doctest.h>

#include <cmath>

#include "skylease/channel.hpp"
#include "skylease/rng.hpp"

using namespace skylease;

namespace {

// World with unit powers and noise so Eq-level arithmetic is easy to check
// by hand.
Scenario unit_scenario() {
    GridSpec g;
    g.length_l1 = 9;
    g.length_l2 = 9;
    g.region_r1 = 3;
    g.region_r2 = 3;
    NodeSet nodes;
    nodes.primary_tx = {0.0, 0.0, 0.0};
    nodes.primary_rx = {8.0, 0.0, 0.0};
    nodes.emergency_center = {4.0, 4.0, 2.0};
    nodes.uav_initial_cells = {0, 1};
    nodes.uav_initial_energy = {4500.0, 4500.0};
    PhysicalParams phys;
    phys.p_pt = 1.0;
    phys.p_uav = 1.0;
    phys.noise_power = 1.0;
    PriorityMap prio;
    prio.weights[1] = 0.5;
    prio.weights[2] = 0.5;
    return build_scenario(g, nodes, phys, prio);
}

}  // namespace

TEST_CASE("link gain follows the inverse power law") {
    CHECK(link_gain({0, 0, 0}, {1, 0, 0}).gain == doctest::Approx(1.0));
    CHECK(link_gain({0, 0, 0}, {10, 0, 0}).gain == doctest::Approx(0.01));
    CHECK(link_gain({0, 0, 0}, {3, 4, 0}, 3.0).gain == doctest::Approx(1.0 / 125.0));
    CHECK_THROWS_AS(link_gain({1, 2, 3}, {1, 2, 3}), SingularityError);
}

TEST_CASE("link gain is symmetric") {
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Position3D a{rng.next_double() * 20, rng.next_double() * 20,
                           rng.next_double() * 5};
        const Position3D b{rng.next_double() * 20, rng.next_double() * 20,
                           rng.next_double() * 5 + 6};
        CHECK(link_gain(a, b).gain == link_gain(b, a).gain);
    }
}

TEST_CASE("the direct primary link is unusable") {
    CHECK(primary_direct_gain(unit_scenario()) == 0.0);
}

TEST_CASE("relayed primary rate with unit terms") {
    // a = b = sigma^2 = 1 gives 0.5 log2(1 + 1/3).
    const Scenario sc = unit_scenario();
    // Place the relay at distance 1 from both endpoints: PT at (0,0,0),
    // PR at (8,0,0) cannot both be at distance 1, so check via a synthetic
    // scenario with PT and PR two cells apart.
    Scenario near = sc;
    near.nodes.primary_tx = {3.0, 0.0, 0.0};
    near.nodes.primary_rx = {5.0, 0.0, 0.0};
    const double r = primary_rate({4.0, 0.0, 0.0}, near);
    CHECK(r == doctest::Approx(0.5 * std::log2(1.0 + 1.0 / 3.0)).epsilon(1e-9));
    CHECK(r == doctest::Approx(0.20752).epsilon(1e-4));
}

TEST_CASE("primary rate decreases as the relay leaves both endpoints") {
    const Scenario sc = unit_scenario();
    double prev = primary_rate({4.0, 1.0, 1.0}, sc);
    for (int k = 2; k < 12; ++k) {
        const double r = primary_rate({4.0, static_cast<double>(k), 1.0}, sc);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("primary rate saturates as one hop becomes free") {
    // a -> infinity with b fixed: rate -> 0.5 log2(1 + b).
    Scenario sc = unit_scenario();
    sc.phys.p_pt = 1e9;
    sc.nodes.primary_tx = {4.0, 0.0, 1.0};
    sc.nodes.primary_rx = {4.0, 2.0, 1.0};
    const double b = 1.0;  // p_uav * 1/d^2 at distance 1
    const double r = primary_rate({4.0, 1.0, 1.0}, sc);
    CHECK(r == doctest::Approx(0.5 * std::log2(1.0 + b)).epsilon(1e-6));
}

TEST_CASE("sensing rate identities") {
    Scenario sc = unit_scenario();
    sc.nodes.emergency_center = {4.0, 4.0, 2.0};
    const Position3D uav{4.0, 4.0, 1.0};  // distance 1, gain 1, SNR 1
    CHECK(sensing_rate(uav, 1.0, sc) == doctest::Approx(0.5));
    CHECK(sensing_rate(uav, 0.5, sc) == doctest::Approx(0.25));
    CHECK_THROWS_AS(sensing_rate({4.0, 4.0, 2.0}, 1.0, sc), SingularityError);
    CHECK_THROWS_AS(sensing_rate(uav, 0.0, sc), ContractViolation);
    CHECK_THROWS_AS(sensing_rate(uav, 1.5, sc), ContractViolation);
}

TEST_CASE("sensing rate with the published power constants") {
    // P_U = 20 mW, sigma^2 = 1 nW, d = 10: SNR = 2e5.
    Scenario sc = unit_scenario();
    sc.phys.p_uav = 0.02;
    sc.phys.noise_power = 1e-9;
    sc.nodes.emergency_center = {0.0, 0.0, 0.0};
    const double r = sensing_rate({10.0, 0.0, 0.0}, 1.0, sc);
    CHECK(r == doctest::Approx(0.5 * std::log2(1.0 + 2e5)).epsilon(1e-12));
    CHECK(2.0 * r == doctest::Approx(17.61).epsilon(1e-3));
}

TEST_CASE("total sensing rate sums the allocated UAVs") {
    Scenario sc = unit_scenario();
    sc.nodes.emergency_center = {4.0, 4.0, 3.0};
    std::map<int, Position3D> pos;
    pos[0] = {4.0, 2.0, 1.0};
    pos[1] = {4.0, 6.0, 1.0};  // mirrored, equal distance
    TimeAllocation alloc;
    alloc.lambda[0] = 0.5;
    alloc.lambda[1] = 0.5;
    const double total = total_sensing_rate(pos, alloc, sc);
    CHECK(total == doctest::Approx(2.0 * sensing_rate(pos[0], 0.5, sc)).epsilon(1e-12));

    // Singleton set equals the one term.
    TimeAllocation solo;
    solo.lambda[0] = 1.0;
    CHECK(total_sensing_rate(pos, solo, sc) ==
          doctest::Approx(sensing_rate(pos[0], 1.0, sc)));

    // Four UAVs against an independently written summation.
    std::map<int, Position3D> four;
    TimeAllocation shares;
    const double w[4] = {0.4, 0.3, 0.2, 0.1};
    double by_hand = 0.0;
    for (int i = 0; i < 4; ++i) {
        four[i] = {1.0 + i, 2.0 * i, 1.0};
        shares.lambda[i] = w[i];
        const double d = euclidean(four[i], sc.nodes.emergency_center);
        by_hand += 0.5 * w[i] *
                   std::log2(1.0 + sc.phys.p_uav / (d * d) / sc.phys.noise_power);
    }
    CHECK(total_sensing_rate(four, shares, sc) == doctest::Approx(by_hand).epsilon(1e-12));
}

TEST_CASE("rates stay finite over a full grid sweep") {
    const Scenario sc = unit_scenario();
    for (int c = 0; c < sc.grid.num_cells(); ++c) {
        const Position3D p = cell_to_position(sc.grid, c);
        const double pr = primary_rate(p, sc);
        const double sr = sensing_rate(p, 1.0, sc);
        CHECK(std::isfinite(pr));
        CHECK(pr >= 0.0);
        CHECK(std::isfinite(sr));
        CHECK(sr >= 0.0);
    }
}

TEST_CASE("sensing rate is monotone in distance and share") {
    const Scenario sc = unit_scenario();
    double prev = sensing_rate({4.0, 4.0, 1.0}, 0.5, sc);
    for (int k = 1; k < 8; ++k) {
        const double r = sensing_rate({4.0 + k, 4.0, 1.0}, 0.5, sc);
        CHECK(r < prev);
        prev = r;
    }
    CHECK(sensing_rate({5.0, 4.0, 1.0}, 0.6, sc) > sensing_rate({5.0, 4.0, 1.0}, 0.5, sc));
}

TEST_CASE("time shares follow priority weights over the whole map") {
    Scenario sc = unit_scenario();
    sc.priorities.weights.clear();
    sc.priorities.weights[1] = 0.6;
    sc.priorities.weights[2] = 0.3;
    sc.priorities.weights[3] = 0.1;

    std::map<int, int> assignment{{0, 1}, {1, 2}, {2, 3}};
    TimeAllocation shares = time_shares(sc, assignment);
    CHECK(shares.share_of(0) == doctest::Approx(0.6));
    CHECK(shares.share_of(1) == doctest::Approx(0.3));
    CHECK(shares.share_of(2) == doctest::Approx(0.1));

    // A UAV in an unprioritized region gets only the minimal grant.
    std::map<int, int> off{{0, 1}, {1, 5}};
    shares = time_shares(sc, off);
    CHECK(shares.share_of(0) == doctest::Approx(0.6));
    CHECK(shares.share_of(1) == doctest::Approx(kMinSensingShare));
    double sum = 0.0;
    for (const auto& [u, l] : shares.lambda) sum += l;
    CHECK(sum <= 1.0 + 1e-12);
}
