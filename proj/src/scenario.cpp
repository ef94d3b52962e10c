#include "chlab/scenario.hpp"

#include <cmath>
#include <sstream>

namespace chlab {

namespace {
constexpr double kDegPerRad = 180.0 / M_PI;
constexpr double kRadPerDeg = M_PI / 180.0;
constexpr double kUnitNormTol = 1e-12;
}  // namespace

Direction Direction::from_vector(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (std::abs(norm - 1.0) > kUnitNormTol) {
        std::ostringstream msg;
        msg << "direction (" << x << ", " << y << ", " << z << ") is not unit: |v| = " << norm;
        throw validation_error(msg.str());
    }
    return Direction{x, y, z};
}

Direction Direction::from_vector_normalized(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (norm < 1e-14) {
        throw validation_error("cannot normalize a zero direction vector");
    }
    return Direction{x / norm, y / norm, z / norm};
}

Direction Direction::from_planar_deg(double angle_deg) {
    const double rad = angle_deg * kRadPerDeg;
    return Direction{std::sin(rad), 0.0, std::cos(rad)};
}

double theta_between(const Direction& a, const Direction& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    const double sx = a.x + b.x, sy = a.y + b.y, sz = a.z + b.z;
    const double diff = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double sum = std::sqrt(sx * sx + sy * sy + sz * sz);
    return 2.0 * std::atan2(diff, sum) * kDegPerRad;
}

Scenario Scenario::from_planar_deg(double a1_deg, double a2_deg, double b1_deg, double b2_deg) {
    return Scenario{Direction::from_planar_deg(a1_deg), Direction::from_planar_deg(a2_deg),
                    Direction::from_planar_deg(b1_deg), Direction::from_planar_deg(b2_deg)};
}

std::array<double, 8> behavior_vector(const Behavior& b) {
    return {b.joint[0][0], b.joint[0][1], b.joint[1][0], b.joint[1][1],
            b.single1[0],  b.single1[1],  b.single2[0],  b.single2[1]};
}

namespace {

void check_range(BehaviorVerdict& v, const std::string& entry, double value, double slack) {
    if (value < -slack || value > 1.0 + slack) {
        const double margin = value < 0.0 ? -value : value - 1.0;
        v.violations.push_back({"probability range [0,1]", entry, margin});
    }
}

}  // namespace

BehaviorVerdict validate_behavior(const Behavior& b, double slack) {
    BehaviorVerdict v;
    for (int i = 0; i < 2; ++i) {
        check_range(v, "single1[" + std::to_string(i) + "]", b.single1[i], slack);
        check_range(v, "single2[" + std::to_string(i) + "]", b.single2[i], slack);
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const std::string entry = "joint[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            const double jij = b.joint[i][j];
            check_range(v, entry, jij, slack);
            const double upper = std::min(b.single1[i], b.single2[j]);
            if (jij > upper + slack) {
                v.violations.push_back({"Frechet upper bound joint <= min(single1, single2)",
                                        entry, jij - upper});
            }
            const double lower = std::max(0.0, b.single1[i] + b.single2[j] - 1.0);
            if (jij < lower - slack) {
                v.violations.push_back({"Frechet lower bound joint >= max(0, single1 + single2 - 1)",
                                        entry, lower - jij});
            }
        }
    }
    v.ok = v.violations.empty();
    return v;
}

void require_valid_behavior(const Behavior& b, double slack) {
    const BehaviorVerdict v = validate_behavior(b, slack);
    if (v.ok) return;
    std::ostringstream msg;
    msg << "invalid behavior:";
    for (const auto& viol : v.violations) {
        msg << " [" << viol.entry << ": " << viol.constraint << ", margin " << viol.margin << "]";
    }
    throw validation_error(msg.str());
}

}  // namespace chlab
