#pragma once

#include <map>
#include <utility>

namespace stormgrid::fragility {

// Critical and collapse sustained wind speeds (m/s) per voltage class. A
// branch is certain to survive below v_cri and certain to fail at v_col.
struct WindFragilityTable {
    std::map<int, std::pair<double, double>> thresholds_ms; // voltage_kv -> (v_cri, v_col)

    static WindFragilityTable defaults();
    void validate() const;
    const std::pair<double, double>& thresholds_for(int voltage_kv) const;
};

// Stretched-exponential flood fragility constants. The defaults are
// placeholders for studies without calibrated values; the pipeline requires
// an explicit opt-in to run with them.
struct FloodFragilityParams {
    double a_m = 3.0;
    double b = 3.0;

    void validate() const; // a > 0, b > 2
};

// Linear ramp between the voltage class thresholds: 0 at or below v_cri,
// 1 at or above v_col. Exact IEEE division keeps representable midpoints
// exact.
double line_outage_prob(double gamma_ms, int voltage_kv, const WindFragilityTable& table);

// 1 - exp(-(depth/a)^b): zero at depth 0, strictly increasing, saturating
// toward 1.
double substation_outage_prob(double depth_m, const FloodFragilityParams& params);

} // namespace stormgrid::fragility
