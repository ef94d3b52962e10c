#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "chlab/hvmodel.hpp"
#include "chlab/scenario.hpp"

// Seeded event-level simulation of detection experiments and the frequency
// estimates recovered from the counts. All sampling goes through the
// counter-based generator keyed by (seed, setting pair, trial), so a counts
// table is a pure function of (source, n_per_pair, seed).

namespace chlab {

struct PairCounts {
    std::uint64_t n = 0;
    std::uint64_t dd = 0;  // both detected
    std::uint64_t dn = 0;  // side 1 only
    std::uint64_t nd = 0;  // side 2 only
    std::uint64_t nn = 0;  // neither
};

struct CountsTable {
    std::array<std::array<PairCounts, 2>, 2> pair{};  // [i][j]
    std::uint64_t n_per_pair = 0;
    std::uint64_t seed = 0;
    std::string source;  // identifier of what was sampled
};

// Per trial: draw lambda from rho, then each side's outcome from its response
// probability; sequential models pick the side-2 branch matching the side-1
// outcome.
CountsTable simulate(const FactorizedModel& m, std::uint64_t n_per_pair, std::uint64_t seed,
                     const std::string& source_id = "factorized");
CountsTable simulate(const SequentialModel& m, std::uint64_t n_per_pair, std::uint64_t seed,
                     const std::string& source_id = "sequential");

// Samples the four-cell outcome distribution determined by (joint, single1,
// single2):
//   P(d,d) = J,  P(d,n) = P1 - J,  P(n,d) = P2 - J,  P(n,n) = 1 - P1 - P2 + J.
// Rejects behaviors outside the Frechet bounds (no valid coupling exists).
CountsTable simulate(const Behavior& b, std::uint64_t n_per_pair, std::uint64_t seed,
                     const std::string& source_id = "behavior");

struct EstimatedBehavior {
    Behavior behavior;
    std::array<std::array<double, 2>, 2> joint_se{};
    std::array<double, 2> single1_se{};
    std::array<double, 2> single2_se{};
    // Marginals pool the counts of both remote settings; each pooled estimate
    // equals the n-weighted mean of the per-pair marginal frequencies.
    std::string pooling = "marginals pooled across the two remote settings";
};

// Frequencies with binomial standard errors sqrt(p(1-p)/n). Every cell must
// hold at least one trial.
EstimatedBehavior estimate_behavior(const CountsTable& c);

}  // namespace chlab
