#pragma once

#include <array>
#include <functional>
#include <vector>

#include "chlab/scenario.hpp"

// The Clauser-Horne combination of four joints and two singles,
//   S = J(0,0) - J(0,1) + J(1,0) + J(1,1) - P1(1) - P2(0),
// which every locality-factorized model keeps inside [-1, 0].
// Setting convention: side-1 index 0 -> a1, 1 -> a2; side-2 index 0 -> b1,
// 1 -> b2; so the subtracted single terms are P1(a2) and P2(b1).

namespace chlab {

struct CHReport {
    double S = 0.0;
    // Signed contributions in the order J00, -J01, J10, J11, -P1(1), -P2(0);
    // S is their left-to-right sum.
    std::array<double, 6> terms{};
    bool lower_ok = true;  // S > -1 - tol
    bool upper_ok = true;  // S <  0 + tol
    double tol = 1e-9;
};

// Evaluates the CH statistic. The behavior must pass validate_behavior at
// `validation_slack` (estimates from finite samples may need a looser slack).
// The bound verdicts use closed bounds [-1, 0] with tolerance `tol`:
// deterministic strategies attain both endpoints exactly.
CHReport ch_statistic(const Behavior& b, double tol = 1e-9, double validation_slack = 1e-12);

struct SweepPoint {
    double param_deg = 0.0;
    CHReport report;
};

// Evaluates a one-parameter family of behaviors on the grid
// {from, from+step, ...} up to the last point that does not pass `to`.
// Rejects step <= 0 and an empty grid.
std::vector<SweepPoint> ch_sweep(const std::function<Behavior(double)>& behavior_at,
                                 double from_deg, double to_deg, double step_deg,
                                 double tol = 1e-9);

// The planar one-parameter scenario family used by the sweep subcommand:
// a1 = 0, a2 = 360 - 2*phi, b1 = 3*phi, b2 = phi (degrees). At phi = 45 it is
// the canonical violating geometry (0, 270, 135, 45).
Scenario canonical_family(double phi_deg);

}  // namespace chlab
