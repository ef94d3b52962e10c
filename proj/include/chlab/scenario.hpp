#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

// Domain types for a two-party, two-setting, two-outcome detection experiment:
// analyzer directions, the four-setting scenario, and the observable behavior
// (four joint + four single detection probabilities).

namespace chlab {

// Thrown when an input violates a documented precondition (non-unit direction,
// out-of-range probability, malformed file, ...). The CLI maps it to exit 2.
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A measurement orientation, stored as a unit 3-vector (|v| = 1 within 1e-12).
// Coplanar setups use the planar constructor, which places the direction in
// the x-z plane so that 0 deg = +z and 90 deg = +x.
struct Direction {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    // Rejects vectors whose norm is off unit by more than 1e-12.
    static Direction from_vector(double x, double y, double z);

    // Scales an arbitrary nonzero vector to unit length.
    static Direction from_vector_normalized(double x, double y, double z);

    static Direction from_planar_deg(double angle_deg);

    double dot(const Direction& o) const { return x * o.x + y * o.y + z * o.z; }
};

// Angle between two unit directions in degrees, in [0, 180]. Symmetric in its
// arguments bit-for-bit. Computed as 2*atan2(|a-b|, |a+b|), which stays
// accurate near 0 and 180 deg where acos(a.b) does not.
double theta_between(const Direction& a, const Direction& b);

// The four analyzer settings of one experiment: side 1 takes a1 or a2,
// side 2 takes b1 or b2.
struct Scenario {
    Direction a1, a2, b1, b2;

    // Setting indices are 0-based everywhere in this library:
    // side-1 index 0 -> a1, 1 -> a2; side-2 index 0 -> b1, 1 -> b2.
    const Direction& side1(int i) const { return i == 0 ? a1 : a2; }
    const Direction& side2(int j) const { return j == 0 ? b1 : b2; }

    static Scenario from_planar_deg(double a1_deg, double a2_deg, double b1_deg, double b2_deg);
};

// One run's detection outcomes.
struct Outcome {
    bool detected1 = false;
    bool detected2 = false;
};

// The eight observable probabilities of one scenario: joint[i][j] is the
// probability that both sides detect at settings (i, j); single1[i] / single2[j]
// are the per-side detection probabilities.
struct Behavior {
    std::array<std::array<double, 2>, 2> joint{};
    std::array<double, 2> single1{};
    std::array<double, 2> single2{};
};

// Fixed flattening used by the polytope and fit code:
// (J00, J01, J10, J11, P1(0), P1(1), P2(0), P2(1)).
std::array<double, 8> behavior_vector(const Behavior& b);

struct BehaviorViolation {
    std::string constraint;  // which rule failed
    std::string entry;       // offending entry, e.g. "joint[0][1]"
    double margin = 0.0;     // amount by which the rule is broken
};

struct BehaviorVerdict {
    bool ok = true;
    std::vector<BehaviorViolation> violations;
};

// Checks every Behavior invariant: entries in [0,1] and the Frechet bounds
//   max(0, P1+P2-1) - slack <= joint <= min(P1, P2) + slack.
// `slack` defaults to the exact-arithmetic tolerance; statistical estimates
// may pass a larger one.
BehaviorVerdict validate_behavior(const Behavior& b, double slack = 1e-12);

// Convenience: throws validation_error with the verdict's violations listed.
void require_valid_behavior(const Behavior& b, double slack = 1e-12);

}  // namespace chlab
