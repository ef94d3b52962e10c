#include "chlab/hvmodel.hpp"

#include <cmath>
#include <sstream>

namespace chlab {

namespace {

void check_response_table(const std::vector<double>& r, std::size_t lambda_count,
                          const std::string& name) {
    if (r.size() != lambda_count) {
        std::ostringstream msg;
        msg << name << " has " << r.size() << " entries, expected one per lambda ("
            << lambda_count << ")";
        throw validation_error(msg.str());
    }
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (!(r[k] >= 0.0 && r[k] <= 1.0)) {
            std::ostringstream msg;
            msg << name << "[" << k << "] = " << r[k] << " out of range [0,1]";
            throw validation_error(msg.str());
        }
    }
}

double weighted_sum(const LambdaSpace& space, const std::vector<double>& r) {
    double s = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k) s += space.weight(k) * r[k];
    return s;
}

}  // namespace

LambdaSpace LambdaSpace::from_weights(std::vector<double> weights, bool* renormalized) {
    if (weights.empty()) {
        throw validation_error("lambda space needs at least one point");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] >= 0.0)) {
            std::ostringstream msg;
            msg << "weights[" << k << "] = " << weights[k] << " is negative";
            throw validation_error(msg.str());
        }
        sum += weights[k];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "weights sum to " << sum << ", outside the 1e-9 normalization tolerance";
        throw validation_error(msg.str());
    }
    const bool needs_rescale = sum != 1.0;
    if (needs_rescale) {
        for (double& w : weights) w /= sum;
    }
    if (renormalized) *renormalized = needs_rescale;
    return LambdaSpace(std::move(weights));
}

FactorizedModel FactorizedModel::make(LambdaSpace space, std::array<std::vector<double>, 2> r1,
                                      std::array<std::vector<double>, 2> r2) {
    for (int i = 0; i < 2; ++i) {
        check_response_table(r1[i], space.size(), "r1[" + std::to_string(i) + "]");
        check_response_table(r2[i], space.size(), "r2[" + std::to_string(i) + "]");
    }
    return FactorizedModel{std::move(space), std::move(r1), std::move(r2)};
}

SequentialModel SequentialModel::make(LambdaSpace space, Table r1, Table r2_given_plus,
                                      Table r2_given_minus) {
    const char* names[3] = {"r1", "r2_given_plus", "r2_given_minus"};
    const Table* tables[3] = {&r1, &r2_given_plus, &r2_given_minus};
    for (int t = 0; t < 3; ++t) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                std::ostringstream name;
                name << names[t] << "[" << i << "][" << j << "]";
                check_response_table((*tables[t])[i][j], space.size(), name.str());
            }
        }
    }
    return SequentialModel{std::move(space), std::move(r1), std::move(r2_given_plus),
                           std::move(r2_given_minus)};
}

double joint_prob_factorized(const FactorizedModel& m, int i, int j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.lambda_space.size(); ++k) {
        s += m.lambda_space.weight(k) * m.r1[i][k] * m.r2[j][k];
    }
    return s;
}

double joint_prob_sequential(const SequentialModel& m, int i, int j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.lambda_space.size(); ++k) {
        s += m.lambda_space.weight(k) * m.r1[i][j][k] * m.r2_given_plus[i][j][k];
    }
    return s;
}

double side1_marginal_average(const SequentialModel& m, int i, int j) {
    return weighted_sum(m.lambda_space, m.r1[i][j]);
}

double side2_conditional_average(const SequentialModel& m, int i, int j) {
    return weighted_sum(m.lambda_space, m.r2_given_plus[i][j]);
}

Behavior model_behavior(const FactorizedModel& m) {
    Behavior b;
    for (int i = 0; i < 2; ++i) {
        b.single1[i] = weighted_sum(m.lambda_space, m.r1[i]);
        b.single2[i] = weighted_sum(m.lambda_space, m.r2[i]);
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b.joint[i][j] = joint_prob_factorized(m, i, j);
    return b;
}

Behavior model_behavior(const SequentialModel& m) {
    constexpr double kSignalTol = 1e-9;
    Behavior b;
    for (int i = 0; i < 2; ++i) {
        const double at_b0 = side1_marginal_average(m, i, 0);
        const double at_b1 = side1_marginal_average(m, i, 1);
        if (std::abs(at_b0 - at_b1) > kSignalTol) {
            std::ostringstream msg;
            msg << "side-1 marginal at setting " << i << " depends on the remote setting ("
                << at_b0 << " vs " << at_b1 << "); no observable behavior exists";
            throw validation_error(msg.str());
        }
        b.single1[i] = at_b0;
    }
    for (int j = 0; j < 2; ++j) {
        double avg[2];
        for (int i = 0; i < 2; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < m.lambda_space.size(); ++k) {
                s += m.lambda_space.weight(k) * m.r2_unconditioned(i, j, k);
            }
            avg[i] = s;
        }
        if (std::abs(avg[0] - avg[1]) > kSignalTol) {
            std::ostringstream msg;
            msg << "side-2 marginal at setting " << j << " depends on the remote setting ("
                << avg[0] << " vs " << avg[1] << "); no observable behavior exists";
            throw validation_error(msg.str());
        }
        b.single2[j] = avg[0];
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b.joint[i][j] = joint_prob_sequential(m, i, j);
    return b;
}

SequentialModel as_sequential(const FactorizedModel& m) {
    SequentialModel::Table r1, r2p, r2m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r1[i][j] = m.r1[i];
            r2p[i][j] = m.r2[j];
            r2m[i][j] = m.r2[j];
        }
    }
    return SequentialModel{m.lambda_space, std::move(r1), std::move(r2p), std::move(r2m)};
}

double lambda_covariance(const SequentialModel& m, int i, int j) {
    const double mean1 = side1_marginal_average(m, i, j);
    const double mean2 = side2_conditional_average(m, i, j);
    double cov = 0.0;
    for (std::size_t k = 0; k < m.lambda_space.size(); ++k) {
        cov += m.lambda_space.weight(k) * (m.r1[i][j][k] - mean1) *
               (m.r2_given_plus[i][j][k] - mean2);
    }
    return cov;
}

}  // namespace chlab
