#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "chlab/scenario.hpp"

// Exact two-spin-1/2 predictions. Two independent routes are kept side by side:
// the closed-form singlet formulas, and a general projector engine for
// arbitrary pure states that serves as their oracle.

namespace chlab {

// Pure state of two qubits, amplitudes over the product basis |00>,|01>,|10>,|11>
// with |0> the spin-up (+1) eigenstate along +z. Must be normalized within 1e-12.
struct TwoQubitPureState {
    std::array<std::complex<double>, 4> amp{};

    static TwoQubitPureState from_amplitudes(const std::array<std::complex<double>, 4>& amp);

    // (|01> - |10>)/sqrt(2), the total-spin-zero state.
    static TwoQubitPureState singlet();

    // |u> x |v> from two single-qubit amplitude pairs (normalized internally).
    static TwoQubitPureState product(std::complex<double> u0, std::complex<double> u1,
                                     std::complex<double> v0, std::complex<double> v1);
};

// Spin-up projector along n: (I + n.sigma)/2.
Eigen::Matrix2cd spin_up_projector(const Direction& n);

// --- closed-form singlet predictions -------------------------------------

// Single-side detection probability of the singlet; 1/2 for every direction.
double singlet_marginal();

// Joint (+1,+1) probability of the singlet: (1/2) sin^2(theta_ab / 2).
double singlet_joint(const Direction& a, const Direction& b);

// Side-2 (+1) probability conditioned on the side-1 outcome along a.
// conditioned_outcome = +1 gives sin^2(theta/2); -1 gives cos^2(theta/2).
// (The two branches mix with weight 1/2 each back to the 1/2 marginal.)
double singlet_conditional(const Direction& a, const Direction& b, int conditioned_outcome);

// --- general projector engine ---------------------------------------------

// Probabilities of the four outcome pairs for analyzers a, b:
// result[oa][ob] with index 0 = outcome +1, 1 = outcome -1.
std::array<std::array<double, 2>, 2> outcome_probs(const TwoQubitPureState& psi,
                                                   const Direction& a, const Direction& b);

// Behavior table of a pure state under a scenario, with the "+1 outcome =
// detected" identification: joints are <psi| P+(a_i) x P+(b_j) |psi>, singles
// <psi| P+ x I |psi> and <psi| I x P+ |psi>.
Behavior state_behavior(const TwoQubitPureState& psi, const Scenario& s);

// Rank of the 2x2 amplitude matrix [[c00,c01],[c10,c11]]: 1 iff the state is a
// tensor product. Decision threshold |det| > 1e-10.
int schmidt_rank(const TwoQubitPureState& psi);

}  // namespace chlab
