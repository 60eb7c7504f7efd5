#include "stormgrid/fragility.hpp"

#include <cmath>
#include <string>

#include "stormgrid/errors.hpp"

namespace stormgrid::fragility {

WindFragilityTable WindFragilityTable::defaults() {
    WindFragilityTable t;
    t.thresholds_ms = {
        {115, {25.0, 55.0}},
        {161, {30.0, 60.0}},
        {230, {35.0, 65.0}},
        {500, {45.0, 75.0}},
    };
    return t;
}

void WindFragilityTable::validate() const {
    if (thresholds_ms.empty()) {
        throw ValidationError("wind fragility table has no voltage classes");
    }
    for (const auto& [kv, pair] : thresholds_ms) {
        if (!(pair.first < pair.second)) {
            throw ValidationError("wind fragility for " + std::to_string(kv) +
                                  " kV needs v_cri < v_col");
        }
    }
}

const std::pair<double, double>& WindFragilityTable::thresholds_for(int voltage_kv) const {
    auto it = thresholds_ms.find(voltage_kv);
    if (it == thresholds_ms.end()) {
        throw ConfigError("no wind fragility thresholds for voltage class " +
                          std::to_string(voltage_kv) + " kV");
    }
    return it->second;
}

void FloodFragilityParams::validate() const {
    if (!(a_m > 0.0)) throw ValidationError("flood fragility scale a must be positive");
    if (!(b > 2.0)) throw ValidationError("flood fragility exponent b must exceed 2");
}

double line_outage_prob(double gamma_ms, int voltage_kv, const WindFragilityTable& table) {
    const auto& [v_cri, v_col] = table.thresholds_for(voltage_kv);
    if (gamma_ms <= v_cri) return 0.0;
    if (gamma_ms >= v_col) return 1.0;
    return (gamma_ms - v_cri) / (v_col - v_cri);
}

double substation_outage_prob(double depth_m, const FloodFragilityParams& params) {
    if (depth_m < 0.0) throw ValidationError("flood depth must be non-negative");
    return -std::expm1(-std::pow(depth_m / params.a_m, params.b));
}

} // namespace stormgrid::fragility
