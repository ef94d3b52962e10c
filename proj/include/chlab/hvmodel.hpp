#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "chlab/scenario.hpp"

// Finite stochastic hidden-variable models. The hidden variable ranges over a
// finite set {lambda_0, ..., lambda_{K-1}} with weights rho; observable
// probabilities are rho-weighted sums of per-lambda response probabilities.
//
// Two model classes:
//  - FactorizedModel: the per-lambda joint factorizes into independent
//    per-side responses (the locality factorization).
//  - SequentialModel: the per-lambda joint is decomposed as a side-1 marginal
//    times a side-2 conditional (the plain conditional-probability product),
//    with both conditioned branches stored.
//
// Responses are tabulated per setting index (0 or 1 on each side), not per
// continuous direction: a model is tied to the four slots of a scenario.

namespace chlab {

// Weights rho(lambda_k): nonnegative, summing to 1. from_weights renormalizes
// when the sum is within 1e-9 of 1 (reporting whether it did) and rejects
// anything further off.
class LambdaSpace {
public:
    static LambdaSpace from_weights(std::vector<double> weights, bool* renormalized = nullptr);
    static LambdaSpace point_mass() { return from_weights({1.0}); }

    std::size_t size() const { return weights_.size(); }
    double weight(std::size_t k) const { return weights_[k]; }
    const std::vector<double>& weights() const { return weights_; }

private:
    explicit LambdaSpace(std::vector<double> w) : weights_(std::move(w)) {}
    std::vector<double> weights_;
};

// Locality-factorized model: per-lambda responses r1[i][k] for side-1 setting i
// and r2[j][k] for side-2 setting j, all in [0,1]. The per-lambda joint is
// their product.
struct FactorizedModel {
    LambdaSpace lambda_space = LambdaSpace::point_mass();
    std::array<std::vector<double>, 2> r1;  // [setting][lambda]
    std::array<std::vector<double>, 2> r2;

    static FactorizedModel make(LambdaSpace space, std::array<std::vector<double>, 2> r1,
                                std::array<std::vector<double>, 2> r2);
};

// Conditional-product model: per-lambda side-1 marginal r1[i][j][k] (which may
// read the remote setting j) and side-2 responses conditioned on the side-1
// outcome, r2_given_plus / r2_given_minus, all in [0,1]. The per-lambda joint
// is r1 * r2_given_plus.
struct SequentialModel {
    using Table = std::array<std::array<std::vector<double>, 2>, 2>;  // [i][j][lambda]

    LambdaSpace lambda_space = LambdaSpace::point_mass();
    Table r1;
    Table r2_given_plus;
    Table r2_given_minus;

    static SequentialModel make(LambdaSpace space, Table r1, Table r2_given_plus,
                                Table r2_given_minus);

    // Outcome-unconditioned side-2 response at fixed lambda, by total
    // probability over the side-1 outcome. Written so that equal branches give
    // the branch value back exactly.
    double r2_unconditioned(int i, int j, std::size_t k) const {
        const double plus = r2_given_plus[i][j][k];
        const double minus = r2_given_minus[i][j][k];
        return plus + (1.0 - r1[i][j][k]) * (minus - plus);
    }
};

// Lambda-averaged joint detection probability at setting pair (i, j).
double joint_prob_factorized(const FactorizedModel& m, int i, int j);
double joint_prob_sequential(const SequentialModel& m, int i, int j);

// Lambda-averaged side-1 marginal of a sequential model at pair (i, j).
double side1_marginal_average(const SequentialModel& m, int i, int j);

// Lambda-averaged side-2 response conditioned on side-1 outcome +1 at (i, j).
double side2_conditional_average(const SequentialModel& m, int i, int j);

// Observable behavior of a model. For the sequential class the side-2 single
// is the outcome-unconditioned average; both sides' singles must not depend on
// the remote setting beyond 1e-9 (a signaling table has no behavior), and the
// value at remote setting 0 is used.
Behavior model_behavior(const FactorizedModel& m);
Behavior model_behavior(const SequentialModel& m);

// Embeds a factorized model into the sequential class: r1 copies ignore the
// remote setting, both conditioned branches equal r2. Joint probabilities
// agree bit-for-bit with the factorized ones.
SequentialModel as_sequential(const FactorizedModel& m);

// Covariance over lambda between the side-1 marginal and the side-2 (+1)-
// conditioned response at pair (i, j):
//   E[r1 * r2+] - E[r1] E[r2+]
// computed via central moments. Zero exactly when the product of the two
// lambda-averages reproduces the averaged product; always in [-1/4, 1/4].
double lambda_covariance(const SequentialModel& m, int i, int j);

}  // namespace chlab
