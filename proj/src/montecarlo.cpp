#include "chlab/montecarlo.hpp"

#include <cmath>
#include <vector>

#include "chlab/philox.hpp"

namespace chlab {

namespace {

// Draw slots within one trial.
constexpr std::uint32_t kSlotLambda = 0;
constexpr std::uint32_t kSlotSide1 = 1;
constexpr std::uint32_t kSlotSide2 = 2;

std::uint32_t pair_stream(int i, int j) { return std::uint32_t(2 * i + j); }

std::vector<double> cumulative_weights(const LambdaSpace& space) {
    std::vector<double> cum(space.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k) {
        acc += space.weight(k);
        cum[k] = acc;
    }
    cum.back() = 1.0;  // guard against rounding in the running sum
    return cum;
}

std::size_t draw_lambda(const std::vector<double>& cum, double u) {
    std::size_t lo = 0, hi = cum.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < cum[mid]) hi = mid; else lo = mid + 1;
    }
    return lo;
}

void tally(PairCounts& c, bool d1, bool d2) {
    ++c.n;
    if (d1 && d2) ++c.dd;
    else if (d1) ++c.dn;
    else if (d2) ++c.nd;
    else ++c.nn;
}

template <typename TrialFn>
CountsTable run_pairs(std::uint64_t n_per_pair, std::uint64_t seed, const std::string& source_id,
                      TrialFn&& trial) {
    if (n_per_pair < 1) throw validation_error("n_per_pair must be at least 1");
    CountsTable table;
    table.n_per_pair = n_per_pair;
    table.seed = seed;
    table.source = source_id;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const CounterRng rng(seed, pair_stream(i, j));
            for (std::uint64_t t = 0; t < n_per_pair; ++t) {
                trial(rng, i, j, t, table.pair[i][j]);
            }
        }
    }
    return table;
}

}  // namespace

CountsTable simulate(const FactorizedModel& m, std::uint64_t n_per_pair, std::uint64_t seed,
                     const std::string& source_id) {
    const auto cum = cumulative_weights(m.lambda_space);
    return run_pairs(n_per_pair, seed, source_id,
                     [&](const CounterRng& rng, int i, int j, std::uint64_t t, PairCounts& c) {
                         const std::size_t k = draw_lambda(cum, rng.uniform(t, kSlotLambda));
                         const bool d1 = rng.uniform(t, kSlotSide1) < m.r1[i][k];
                         const bool d2 = rng.uniform(t, kSlotSide2) < m.r2[j][k];
                         tally(c, d1, d2);
                     });
}

CountsTable simulate(const SequentialModel& m, std::uint64_t n_per_pair, std::uint64_t seed,
                     const std::string& source_id) {
    const auto cum = cumulative_weights(m.lambda_space);
    return run_pairs(n_per_pair, seed, source_id,
                     [&](const CounterRng& rng, int i, int j, std::uint64_t t, PairCounts& c) {
                         const std::size_t k = draw_lambda(cum, rng.uniform(t, kSlotLambda));
                         const bool d1 = rng.uniform(t, kSlotSide1) < m.r1[i][j][k];
                         const double r2 = d1 ? m.r2_given_plus[i][j][k] : m.r2_given_minus[i][j][k];
                         const bool d2 = rng.uniform(t, kSlotSide2) < r2;
                         tally(c, d1, d2);
                     });
}

CountsTable simulate(const Behavior& b, std::uint64_t n_per_pair, std::uint64_t seed,
                     const std::string& source_id) {
    require_valid_behavior(b);
    // Cell probabilities of the unique two-outcome coupling, cumulative.
    std::array<std::array<std::array<double, 3>, 2>, 2> cum{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double jd = b.joint[i][j];
            const double dn = std::max(0.0, b.single1[i] - jd);
            const double nd = std::max(0.0, b.single2[j] - jd);
            cum[i][j] = {jd, jd + dn, jd + dn + nd};
        }
    }
    return run_pairs(n_per_pair, seed, source_id,
                     [&](const CounterRng& rng, int i, int j, std::uint64_t t, PairCounts& c) {
                         const double u = rng.uniform(t, kSlotLambda);
                         const auto& cm = cum[i][j];
                         if (u < cm[0]) tally(c, true, true);
                         else if (u < cm[1]) tally(c, true, false);
                         else if (u < cm[2]) tally(c, false, true);
                         else tally(c, false, false);
                     });
}

EstimatedBehavior estimate_behavior(const CountsTable& c) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (c.pair[i][j].n < 1)
                throw validation_error("pair (" + std::to_string(i + 1) + "," +
                                       std::to_string(j + 1) + ") has no trials");

    EstimatedBehavior est;
    auto se = [](double p, double n) { return std::sqrt(p * (1.0 - p) / n); };

    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const auto& pc = c.pair[i][j];
            const double n = double(pc.n);
            const double p = double(pc.dd) / n;
            est.behavior.joint[i][j] = p;
            est.joint_se[i][j] = se(p, n);
        }
    }
    for (int i = 0; i < 2; ++i) {
        const auto& p0 = c.pair[i][0];
        const auto& p1 = c.pair[i][1];
        const double n = double(p0.n + p1.n);
        const double p = double(p0.dd + p0.dn + p1.dd + p1.dn) / n;
        est.behavior.single1[i] = p;
        est.single1_se[i] = se(p, n);
    }
    for (int j = 0; j < 2; ++j) {
        const auto& p0 = c.pair[0][j];
        const auto& p1 = c.pair[1][j];
        const double n = double(p0.n + p1.n);
        const double p = double(p0.dd + p0.nd + p1.dd + p1.nd) / n;
        est.behavior.single2[j] = p;
        est.single2_se[j] = se(p, n);
    }
    return est;
}

}  // namespace chlab
