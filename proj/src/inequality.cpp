#include "chlab/inequality.hpp"

#include <cmath>

namespace chlab {

CHReport ch_statistic(const Behavior& b, double tol, double validation_slack) {
    if (!(tol > 0.0)) throw validation_error("tolerance must be positive");
    require_valid_behavior(b, validation_slack);
    CHReport r;
    r.terms = {b.joint[0][0], -b.joint[0][1], b.joint[1][0],
               b.joint[1][1], -b.single1[1],  -b.single2[0]};
    double s = 0.0;
    for (double t : r.terms) s += t;
    r.S = s;
    r.tol = tol;
    r.lower_ok = s > -1.0 - tol;
    r.upper_ok = s < 0.0 + tol;
    return r;
}

std::vector<SweepPoint> ch_sweep(const std::function<Behavior(double)>& behavior_at,
                                 double from_deg, double to_deg, double step_deg, double tol) {
    if (!(step_deg > 0.0)) throw validation_error("sweep step must be positive");
    // Grid by index, so accumulated addition error cannot drop the endpoint.
    const long count = std::lround(std::floor((to_deg - from_deg) / step_deg + 1e-9)) + 1;
    if (count < 1) throw validation_error("sweep range is empty");
    std::vector<SweepPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long idx = 0; idx < count; ++idx) {
        const double phi = from_deg + step_deg * static_cast<double>(idx);
        out.push_back({phi, ch_statistic(behavior_at(phi), tol)});
    }
    return out;
}

Scenario canonical_family(double phi_deg) {
    return Scenario::from_planar_deg(0.0, 360.0 - 2.0 * phi_deg, 3.0 * phi_deg, phi_deg);
}

}  // namespace chlab
