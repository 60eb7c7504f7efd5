#include "stormgrid/powerflow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stormgrid/errors.hpp"
#include "stormgrid/util.hpp"

namespace stormgrid::powerflow {

namespace {

int find_root(std::map<int, int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

// In-place Cholesky of a dense symmetric positive-definite matrix stored
// row-major; returns false when a pivot falls under the tolerance.
bool cholesky(std::vector<double>& a, std::size_t n) {
    constexpr double kPivotTol = 1e-12;
    for (std::size_t k = 0; k < n; ++k) {
        double d = a[k * n + k];
        for (std::size_t j = 0; j < k; ++j) d -= a[k * n + j] * a[k * n + j];
        if (d <= kPivotTol) return false;
        const double lkk = std::sqrt(d);
        a[k * n + k] = lkk;
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = a[i * n + k];
            for (std::size_t j = 0; j < k; ++j) s -= a[i * n + j] * a[k * n + j];
            a[i * n + k] = s / lkk;
        }
    }
    return true;
}

void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= l[i * n + j] * x[j];
        x[i] = s / l[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= l[j * n + ii] * x[j];
        x[ii] = s / l[ii * n + ii];
    }
}

} // namespace

std::vector<Island> find_islands(const grid::GridCase& c, const std::set<int>& failed_branches) {
    std::map<int, int> parent;
    for (const auto& b : c.buses) parent[b.id] = b.id;
    for (const auto& br : c.branches) {
        if (failed_branches.count(br.id)) continue;
        const int ra = find_root(parent, br.from_bus);
        const int rb = find_root(parent, br.to_bus);
        if (ra != rb) parent[ra] = rb;
    }

    std::map<int, std::vector<int>> groups; // keyed by lowest member id
    for (const auto& b : c.buses) {
        groups[find_root(parent, b.id)].push_back(b.id);
    }
    std::map<int, std::vector<int>> by_min;
    for (auto& [root, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        by_min.emplace(ids.front(), std::move(ids));
    }

    std::vector<Island> islands;
    for (auto& [min_id, ids] : by_min) {
        Island isl;
        isl.island_id = static_cast<int>(islands.size());
        isl.bus_ids = std::move(ids);
        isl.slack_bus = isl.bus_ids.front();
        bool slack_set = false;
        for (int bid : isl.bus_ids) {
            const auto& bus = c.bus(bid);
            isl.total_load_mw += bus.load_mw;
            isl.total_capacity_mw += bus.gen_capacity_mw;
            if (!slack_set && bus.gen_capacity_mw > 0.0) {
                isl.slack_bus = bid;
                slack_set = true;
            }
        }
        islands.push_back(std::move(isl));
    }
    return islands;
}

IslandBalance balance_island(const Island& island, const grid::GridCase& c) {
    IslandBalance out;
    const double load = island.total_load_mw;
    const double cap = island.total_capacity_mw;

    if (cap >= load) {
        const double gen_scale = cap > 0.0 ? load / cap : 0.0;
        out.shed_fraction = 0.0;
        for (int bid : island.bus_ids) {
            const auto& bus = c.bus(bid);
            out.per_bus[bid] = {bus.load_mw, 0.0, bus.gen_capacity_mw * gen_scale};
        }
        return out;
    }

    out.shed_fraction = load > 0.0 ? (load - cap) / load : 1.0;

    bool priorities_complete = true;
    for (int bid : island.bus_ids) {
        const auto& bus = c.bus(bid);
        if (bus.load_mw > 0.0 && !bus.priority) {
            priorities_complete = false;
            break;
        }
    }

    if (!priorities_complete) {
        for (int bid : island.bus_ids) {
            const auto& bus = c.bus(bid);
            const double shed = bus.load_mw * out.shed_fraction;
            out.per_bus[bid] = {bus.load_mw - shed, shed, bus.gen_capacity_mw};
        }
        return out;
    }

    // Priority shedding: strip whole tiers from the lowest priority up, pro
    // rata inside the tier where the deficit runs out.
    std::map<int, std::vector<int>> tiers; // priority -> load buses
    for (int bid : island.bus_ids) {
        const auto& bus = c.bus(bid);
        out.per_bus[bid] = {bus.load_mw, 0.0, bus.gen_capacity_mw};
        if (bus.load_mw > 0.0) tiers[*bus.priority].push_back(bid);
    }
    double to_shed = load - cap;
    for (const auto& [priority, bus_list] : tiers) {
        if (to_shed <= 0.0) break;
        double tier_load = 0.0;
        for (int bid : bus_list) tier_load += c.bus(bid).load_mw;
        const double frac = to_shed >= tier_load ? 1.0 : to_shed / tier_load;
        for (int bid : bus_list) {
            const double shed = c.bus(bid).load_mw * frac;
            out.per_bus[bid].shed_load_mw = shed;
            out.per_bus[bid].served_load_mw = c.bus(bid).load_mw - shed;
        }
        to_shed -= std::min(to_shed, tier_load);
    }
    return out;
}

std::map<int, double> dc_power_flow(const grid::GridCase& c, const Island& island,
                                    const std::set<int>& failed_branches,
                                    const std::map<int, double>& injections_mw,
                                    std::map<int, double>& flows_mw) {
    const std::size_t n = island.bus_ids.size();
    std::map<int, std::size_t> local;
    for (std::size_t i = 0; i < n; ++i) local.emplace(island.bus_ids[i], i);

    std::map<int, double> angles;
    if (n == 1) {
        angles[island.bus_ids[0]] = 0.0;
        return angles;
    }

    std::vector<const grid::Branch*> live;
    for (const auto& br : c.branches) {
        if (failed_branches.count(br.id)) continue;
        auto fi = local.find(br.from_bus);
        auto ti = local.find(br.to_bus);
        if (fi == local.end() || ti == local.end()) continue;
        live.push_back(&br);
    }

    // Susceptance Laplacian, then drop the slack row/column.
    std::vector<double> b_full(n * n, 0.0);
    for (const auto* br : live) {
        const std::size_t i = local.at(br->from_bus);
        const std::size_t j = local.at(br->to_bus);
        const double y = 1.0 / br->reactance_pu;
        b_full[i * n + i] += y;
        b_full[j * n + j] += y;
        b_full[i * n + j] -= y;
        b_full[j * n + i] -= y;
    }

    const std::size_t slack = local.at(island.slack_bus);
    const std::size_t m = n - 1;
    std::vector<double> b_red(m * m, 0.0);
    std::vector<double> p_red(m, 0.0);
    std::vector<std::size_t> keep;
    keep.reserve(m);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != slack) keep.push_back(i);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            b_red[i * m + j] = b_full[keep[i] * n + keep[j]];
        }
        auto it = injections_mw.find(island.bus_ids[keep[i]]);
        const double inj = it != injections_mw.end() ? it->second : 0.0;
        p_red[i] = inj / c.base_mva;
    }

    if (!cholesky(b_red, m)) {
        throw NumericalError("singular susceptance matrix on island " +
                             std::to_string(island.island_id) + " (" + std::to_string(n) +
                             " buses, " + std::to_string(live.size()) + " live branches)");
    }
    cholesky_solve(b_red, m, p_red);

    for (std::size_t i = 0; i < n; ++i) angles[island.bus_ids[i]] = 0.0;
    for (std::size_t i = 0; i < m; ++i) angles[island.bus_ids[keep[i]]] = p_red[i];

    for (const auto* br : live) {
        const double flow_pu =
            (angles.at(br->from_bus) - angles.at(br->to_bus)) / br->reactance_pu;
        flows_mw[br->id] = flow_pu * c.base_mva;
    }
    return angles;
}

DispatchResult evaluate_outage_step(const grid::GridCase& c,
                                    const std::set<int>& failed_branches) {
    DispatchResult out;
    out.islands = find_islands(c, failed_branches);

    for (const auto& island : out.islands) {
        IslandBalance balance = balance_island(island, c);
        out.island_shed_fraction.push_back(balance.shed_fraction);

        std::map<int, double> injections;
        for (const auto& [bid, d] : balance.per_bus) {
            injections[bid] = d.generation_mw - d.served_load_mw;
            out.total_shed_mw += d.shed_load_mw;
        }
        dc_power_flow(c, island, failed_branches, injections, out.branch_flow_mw);
        out.per_bus.merge(balance.per_bus);
    }

    for (const auto& br : c.branches) {
        auto it = out.branch_flow_mw.find(br.id);
        if (it != out.branch_flow_mw.end() && std::fabs(it->second) > br.rating_mw) {
            out.overloads.push_back("branch " + std::to_string(br.id) + " carries " +
                                    format_double(std::fabs(it->second)) + " MW over its " +
                                    format_double(br.rating_mw) + " MW rating");
        }
    }
    return out;
}

} // namespace stormgrid::powerflow
