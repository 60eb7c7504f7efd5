#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "stormgrid/errors.hpp"
#include "stormgrid/grid.hpp"
#include "stormgrid/powerflow.hpp"

using namespace stormgrid;

namespace {

std::string write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
    return path;
}

// Minimal in-memory case: every bus in its own substation at a fixed spot.
grid::GridCase bare_case(const std::vector<grid::Bus>& buses,
                         const std::vector<grid::Branch>& branches) {
    grid::GridCase c;
    c.buses = buses;
    c.branches = branches;
    for (const auto& b : buses) {
        c.substations.push_back(
            {"T" + std::to_string(b.id), {29.0, -95.0}, 3.0, {b.id}});
    }
    c.finalize();
    return c;
}

} // namespace

TEST_CASE("grid case serialization round-trips exactly") {
    const auto c = fixtures::coastal_case();
    const std::string dir = fixtures::temp_dir("grid-rt");
    const auto path = write_text(dir + "/case.json", grid::serialize_grid_case(c));
    WarningLog warnings;
    auto parsed = grid::parse_grid_case(path, warnings);
    CHECK(parsed == c);
    CHECK(warnings.empty());
    // Second generation is byte-stable.
    CHECK(grid::serialize_grid_case(parsed) == grid::serialize_grid_case(c));
}

TEST_CASE("grid validation reports every semantic problem in one pass") {
    auto c = fixtures::coastal_case();
    c.buses[1].id = 1;                                  // duplicate bus id
    c.branches.push_back({99, 1, 777, 0.01, 50.0, 115, {}}); // dangling endpoint
    c.county_map.push_back({"77550", "second_city", "48167", 1.0}); // zip in two cities
    const std::string dir = fixtures::temp_dir("grid-bad");
    const auto path = write_text(dir + "/bad.json", grid::serialize_grid_case(c));
    WarningLog warnings;
    try {
        grid::parse_grid_case(path, warnings);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("validation problem") != std::string::npos);
        CHECK(msg.find("duplicate bus id 1") != std::string::npos);
        CHECK(msg.find("references absent bus 777") != std::string::npos);
        CHECK(msg.find("77550") != std::string::npos);
    }
}

TEST_CASE("grid validation rejects broken population shares") {
    auto c = fixtures::coastal_case();
    c.county_map[2].population_share = 0.9; // bayline now sums to 1.3
    const std::string dir = fixtures::temp_dir("grid-share");
    const auto path = write_text(dir + "/share.json", grid::serialize_grid_case(c));
    WarningLog warnings;
    CHECK_THROWS_AS(grid::parse_grid_case(path, warnings), ValidationError);
}

TEST_CASE("disconnected case parses with a warning") {
    auto c = fixtures::coastal_case();
    c.branches.resize(10); // keep only the intra-substation links
    const std::string dir = fixtures::temp_dir("grid-split");
    const auto path = write_text(dir + "/split.json", grid::serialize_grid_case(c));
    WarningLog warnings;
    const auto parsed = grid::parse_grid_case(path, warnings);
    CHECK(parsed.branches.size() == 10);
    REQUIRE(!warnings.empty());
    CHECK(warnings.messages()[0].find("connect") != std::string::npos);
}

TEST_CASE("branch routes fall back to the substation segment") {
    auto c = fixtures::coastal_case();
    const auto tie = grid::branch_route(c, c.branches[18]); // id 19, bus 1 to bus 11
    REQUIRE(tie.size() == 2);
    CHECK(tie[0] == c.substations[0].location);
    CHECK(tie[1] == c.substations[5].location);

    const auto intra = grid::branch_route(c, c.branches[0]); // both ends in S01
    REQUIRE(intra.size() == 1);

    c.branches[18].geometry = {{29.30, -95.30}, {29.55, -95.40}, {29.80, -95.35}};
    const auto routed = grid::branch_route(c, c.branches[18]);
    CHECK(routed.size() == 3);

    const auto mine = grid::branches_of_substation(c, "S01");
    std::set<int> ids;
    for (const auto* br : mine) ids.insert(br->id);
    CHECK(ids == std::set<int>{1, 11, 19});
    CHECK_THROWS_AS(grid::branches_of_substation(c, "S99"), NotFoundError);
}

TEST_CASE("islands split on failed branches and order by lowest bus id") {
    const auto c = fixtures::coastal_case();
    const auto whole = powerflow::find_islands(c, {});
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].bus_ids.size() == 20);
    CHECK(whole[0].total_load_mw == doctest::Approx(500.0));
    CHECK(whole[0].total_capacity_mw == doctest::Approx(900.0));
    CHECK(whole[0].slack_bus == 2); // lowest bus with capacity

    // Cutting the five coast-inland ties splits coast from inland.
    const auto halves = powerflow::find_islands(c, {19, 20, 21, 22, 23});
    REQUIRE(halves.size() == 2);
    CHECK(halves[0].bus_ids.front() == 1);
    CHECK(halves[1].bus_ids.front() == 11);
    CHECK(halves[0].total_capacity_mw == doctest::Approx(150.0));
    CHECK(halves[1].slack_bus == 11);
}

TEST_CASE("islanding matches a brute-force component search") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> node(1, 30);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<grid::Bus> buses;
        for (int i = 1; i <= 30; ++i) buses.push_back({i, "", "", 1.0, 1.0, std::nullopt});
        std::vector<grid::Branch> branches;
        for (int e = 1; e <= 45; ++e) {
            int a = node(rng), b = node(rng);
            if (a == b) b = a == 30 ? 1 : a + 1;
            branches.push_back({e, a, b, 0.01, 100.0, 115, {}});
        }
        const auto c = bare_case(buses, branches);
        std::set<int> failed;
        std::uniform_int_distribution<int> edge(1, 45);
        for (int k = 0; k < 12; ++k) failed.insert(edge(rng));

        const auto islands = powerflow::find_islands(c, failed);

        // Reference: depth-first search over the surviving adjacency.
        std::map<int, std::vector<int>> adj;
        for (const auto& br : branches) {
            if (failed.count(br.id)) continue;
            adj[br.from_bus].push_back(br.to_bus);
            adj[br.to_bus].push_back(br.from_bus);
        }
        std::set<int> seen;
        std::vector<std::vector<int>> components;
        for (int i = 1; i <= 30; ++i) {
            if (seen.count(i)) continue;
            std::vector<int> comp, stack{i};
            seen.insert(i);
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                comp.push_back(v);
                for (int w : adj[v]) {
                    if (seen.insert(w).second) stack.push_back(w);
                }
            }
            std::sort(comp.begin(), comp.end());
            components.push_back(std::move(comp));
        }
        std::sort(components.begin(), components.end());

        REQUIRE(islands.size() == components.size());
        for (std::size_t k = 0; k < islands.size(); ++k) {
            CHECK(islands[k].bus_ids == components[k]);
        }
    }
}

TEST_CASE("two-bus flow oracle") {
    const auto c = bare_case({{1, "", "", 0.0, 10.0, std::nullopt},
                              {2, "", "", 10.0, 0.0, std::nullopt}},
                             {{1, 1, 2, 0.01, 100.0, 115, {}}});
    const auto r = powerflow::evaluate_outage_step(c, {});
    CHECK(r.total_shed_mw == 0.0);
    CHECK(r.branch_flow_mw.at(1) == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(r.per_bus.at(1).generation_mw == doctest::Approx(10.0));
    CHECK(r.per_bus.at(2).served_load_mw == doctest::Approx(10.0));

    const auto islands = powerflow::find_islands(c, {});
    std::map<int, double> flows;
    const auto angles =
        powerflow::dc_power_flow(c, islands[0], {}, {{1, 10.0}, {2, -10.0}}, flows);
    CHECK(angles.at(1) == 0.0); // slack
    CHECK(angles.at(2) == doctest::Approx(-0.001).epsilon(1e-10));
}

TEST_CASE("three-bus equal-reactance triangle splits flow two to one") {
    const auto c = bare_case({{1, "", "", 0.0, 10.0, std::nullopt},
                              {2, "", "", 10.0, 0.0, std::nullopt},
                              {3, "", "", 0.0, 0.0, std::nullopt}},
                             {{1, 1, 2, 0.1, 100.0, 115, {}},
                              {2, 1, 3, 0.1, 100.0, 115, {}},
                              {3, 2, 3, 0.1, 100.0, 115, {}}});
    const auto r = powerflow::evaluate_outage_step(c, {});
    CHECK(r.branch_flow_mw.at(1) == doctest::Approx(20.0 / 3.0).epsilon(1e-9));
    CHECK(r.branch_flow_mw.at(2) == doctest::Approx(10.0 / 3.0).epsilon(1e-9));
    CHECK(r.branch_flow_mw.at(3) == doctest::Approx(-10.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("balance rules: surplus scaling, uniform deficit, dead island") {
    const auto c = bare_case({{1, "", "", 50.0, 80.0, std::nullopt},
                              {2, "", "", 100.0, 60.0, std::nullopt},
                              {3, "", "", 40.0, 0.0, std::nullopt}},
                             {{1, 1, 2, 0.01, 500.0, 115, {}},
                              {2, 2, 3, 0.01, 500.0, 115, {}}});

    // One island: load 190, capacity 140, uniform shed fraction 50/190.
    const auto islands = powerflow::find_islands(c, {});
    const auto bal = powerflow::balance_island(islands[0], c);
    const double f = 50.0 / 190.0;
    CHECK(bal.shed_fraction == doctest::Approx(f).epsilon(1e-12));
    CHECK(bal.per_bus.at(1).shed_load_mw == doctest::Approx(50.0 * f).epsilon(1e-12));
    CHECK(bal.per_bus.at(2).shed_load_mw == doctest::Approx(100.0 * f).epsilon(1e-12));
    CHECK(bal.per_bus.at(3).served_load_mw == doctest::Approx(40.0 * (1 - f)).epsilon(1e-12));

    // Splitting both branches: bus 1 surplus (gen scaled 50/80), bus 2
    // deficit (40% shed), bus 3 dead (everything shed).
    const auto r = powerflow::evaluate_outage_step(c, {1, 2});
    CHECK(r.per_bus.at(1).shed_load_mw == 0.0);
    CHECK(r.per_bus.at(1).generation_mw == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(r.per_bus.at(2).shed_load_mw == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(r.per_bus.at(3).shed_load_mw == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(r.total_shed_mw == doctest::Approx(80.0).epsilon(1e-12));
}

TEST_CASE("priority shedding strips low tiers first, pro rata at the margin") {
    std::vector<grid::Bus> buses = {{1, "", "", 30.0, 0.0, 1},
                                    {2, "", "", 50.0, 0.0, 2},
                                    {3, "", "", 40.0, 0.0, 3},
                                    {4, "", "", 0.0, 70.0, std::nullopt}};
    const std::vector<grid::Branch> branches = {{1, 1, 2, 0.01, 500.0, 115, {}},
                                                {2, 2, 3, 0.01, 500.0, 115, {}},
                                                {3, 3, 4, 0.01, 500.0, 115, {}}};
    const auto c = bare_case(buses, branches);
    const auto islands = powerflow::find_islands(c, {});
    const auto bal = powerflow::balance_island(islands[0], c);
    CHECK(bal.per_bus.at(1).shed_load_mw == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(bal.per_bus.at(2).shed_load_mw == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(bal.per_bus.at(3).shed_load_mw == 0.0);
    CHECK(bal.per_bus.at(2).served_load_mw == doctest::Approx(30.0).epsilon(1e-12));

    // One load bus without a priority disables the tiered path entirely.
    buses[2].priority.reset();
    const auto mixed = bare_case(buses, branches);
    const auto uniform = powerflow::balance_island(powerflow::find_islands(mixed, {})[0], mixed);
    const double f = 50.0 / 120.0;
    CHECK(uniform.per_bus.at(1).shed_load_mw == doctest::Approx(30.0 * f).epsilon(1e-12));
    CHECK(uniform.per_bus.at(3).shed_load_mw == doctest::Approx(40.0 * f).epsilon(1e-12));
}

TEST_CASE("dispatch satisfies nodal balance on random connected islands") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 12;
        std::vector<grid::Bus> buses;
        std::uniform_real_distribution<double> load(0.0, 80.0), cap(0.0, 120.0);
        for (int i = 1; i <= n; ++i) {
            buses.push_back({i, "", "", load(rng), cap(rng), std::nullopt});
        }
        std::vector<grid::Branch> branches;
        int e = 1;
        std::uniform_int_distribution<int> prior(1, n - 1);
        std::uniform_real_distribution<double> x(0.005, 0.05);
        for (int i = 2; i <= n; ++i) {
            branches.push_back({e++, std::uniform_int_distribution<int>(1, i - 1)(rng), i,
                                x(rng), 400.0, 115, {}});
        }
        for (int extra = 0; extra < 5; ++extra) {
            int a = prior(rng), b = prior(rng) + 1;
            if (a == b) continue;
            branches.push_back({e++, a, b, x(rng), 400.0, 115, {}});
        }
        const auto c = bare_case(buses, branches);
        const auto r = powerflow::evaluate_outage_step(c, {});

        // At every bus, generation minus served load equals the net branch
        // outflow (power balance, the DC flow invariant).
        for (const auto& bus : buses) {
            double outflow = 0.0;
            for (const auto& br : branches) {
                const auto it = r.branch_flow_mw.find(br.id);
                REQUIRE(it != r.branch_flow_mw.end());
                if (br.from_bus == bus.id) outflow += it->second;
                if (br.to_bus == bus.id) outflow -= it->second;
            }
            const auto& d = r.per_bus.at(bus.id);
            CHECK(outflow ==
                  doctest::Approx(d.generation_mw - d.served_load_mw).epsilon(1e-8));
        }
    }
}

TEST_CASE("overloaded branches are reported, not enforced") {
    const auto c = bare_case({{1, "", "", 0.0, 50.0, std::nullopt},
                              {2, "", "", 50.0, 0.0, std::nullopt}},
                             {{1, 1, 2, 0.01, 20.0, 115, {}}});
    const auto r = powerflow::evaluate_outage_step(c, {});
    CHECK(r.branch_flow_mw.at(1) == doctest::Approx(50.0));
    REQUIRE(r.overloads.size() == 1);
    CHECK(r.overloads[0].find("branch 1") != std::string::npos);
    CHECK(r.total_shed_mw == 0.0);
}
