#include <doctest.h>

#include <cmath>
#include <string>

#include "chlab/montecarlo.hpp"
#include "chlab/quantum.hpp"
#include "support/generators.hpp"

using namespace chlab;

namespace {

bool tables_equal(const CountsTable& a, const CountsTable& b) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const PairCounts& x = a.pair[i][j];
            const PairCounts& y = b.pair[i][j];
            if (x.n != y.n || x.dd != y.dd || x.dn != y.dn || x.nd != y.nd || x.nn != y.nn)
                return false;
        }
    return true;
}

FactorizedModel constant_model(double r1, double r2) {
    std::array<std::vector<double>, 2> t1 = {std::vector<double>{r1}, std::vector<double>{r1}};
    std::array<std::vector<double>, 2> t2 = {std::vector<double>{r2}, std::vector<double>{r2}};
    return FactorizedModel::make(LambdaSpace::point_mass(), t1, t2);
}

}  // namespace

TEST_CASE("counts are a pure function of source, n and seed") {
    const FactorizedModel m = testgen::random_factorized(83, 0);
    const CountsTable a = simulate(m, 2000, 11);
    const CountsTable b = simulate(m, 2000, 11);
    CHECK(tables_equal(a, b));
    const CountsTable c = simulate(m, 2000, 12);
    CHECK_FALSE(tables_equal(a, c));
    CHECK(a.n_per_pair == 2000);
    CHECK(a.seed == 11);
    CHECK(a.source == "factorized");
}

TEST_CASE("every trial lands in exactly one cell") {
    const FactorizedModel fm = testgen::random_factorized(83, 1);
    const SequentialModel sm = testgen::random_sequential(83, 2);
    const Behavior bb = model_behavior(fm);
    for (const CountsTable& t :
         {simulate(fm, 500, 3), simulate(sm, 500, 3), simulate(bb, 500, 3)}) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const PairCounts& c = t.pair[i][j];
                CHECK(c.n == 500);
                CHECK(c.dd + c.dn + c.nd + c.nn == c.n);
            }
        }
    }
}

TEST_CASE("deterministic responses produce deterministic counts") {
    const CountsTable both = simulate(constant_model(1.0, 1.0), 100, 0);
    const CountsTable side1 = simulate(constant_model(1.0, 0.0), 100, 0);
    const CountsTable neither = simulate(Behavior{}, 100, 0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(both.pair[i][j].dd == 100);
            CHECK(side1.pair[i][j].dn == 100);
            CHECK(neither.pair[i][j].nn == 100);
        }
    }
}

TEST_CASE("sequential sampling branches on the side-1 outcome") {
    // Side 2 copies side 1 exactly: only both-or-neither cells can fill.
    SequentialModel::Table r1, r2p, r2m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            r1[i][j] = {0.5};
            r2p[i][j] = {1.0};
            r2m[i][j] = {0.0};
        }
    const SequentialModel m = SequentialModel::make(LambdaSpace::point_mass(), r1, r2p, r2m);
    const CountsTable t = simulate(m, 10000, 21);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const PairCounts& c = t.pair[i][j];
            CHECK(c.dn == 0);
            CHECK(c.nd == 0);
            const double p = double(c.dd) / double(c.n);
            CHECK(std::abs(p - 0.5) < 0.025);  // 5 binomial standard errors
        }
    }
}

TEST_CASE("a zero-probability coupling cell stays exactly empty") {
    Behavior b;
    b.single1 = {0.3, 0.3};
    b.single2 = {0.6, 0.6};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b.joint[i][j] = 0.3;  // J = P1: side-1-only cell is null
    const CountsTable t = simulate(b, 5000, 5);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(t.pair[i][j].dn == 0);
}

TEST_CASE("estimates recover the sampled model within statistical error") {
    const FactorizedModel m = testgen::random_factorized(89, 4);
    const Behavior truth = model_behavior(m);
    const EstimatedBehavior est = estimate_behavior(simulate(m, 100000, 31));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(est.behavior.joint[i][j] - truth.joint[i][j]) <
                  5.0 * est.joint_se[i][j] + 1e-9);
        }
        CHECK(std::abs(est.behavior.single1[i] - truth.single1[i]) <
              5.0 * est.single1_se[i] + 1e-9);
        CHECK(std::abs(est.behavior.single2[i] - truth.single2[i]) <
              5.0 * est.single2_se[i] + 1e-9);
    }
}

TEST_CASE("behavior sampling reproduces the singlet statistics at scale") {
    const Behavior target = state_behavior(TwoQubitPureState::singlet(),
                                           Scenario::from_planar_deg(0.0, 270.0, 135.0, 45.0));
    const EstimatedBehavior est = estimate_behavior(simulate(target, 200000, 7));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(est.behavior.joint[i][j] - target.joint[i][j]) <
                  5.0 * est.joint_se[i][j] + 1e-9);
        }
        CHECK(std::abs(est.behavior.single1[i] - target.single1[i]) <
              5.0 * est.single1_se[i] + 1e-9);
        CHECK(std::abs(est.behavior.single2[i] - target.single2[i]) <
              5.0 * est.single2_se[i] + 1e-9);
    }
}

TEST_CASE("synthetic counts give exact frequencies and binomial errors") {
    CountsTable t;
    t.n_per_pair = 1000000;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            t.pair[i][j] = {1000000, 250000, 250000, 250000, 250000};
    const EstimatedBehavior est = estimate_behavior(t);
    const double joint_se = std::sqrt(0.25 * 0.75 / 1e6);
    const double single_se = std::sqrt(0.5 * 0.5 / 2e6);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(est.behavior.joint[i][j] == 0.25);
            CHECK(std::abs(est.joint_se[i][j] - joint_se) < 1e-15);
        }
        CHECK(est.behavior.single1[i] == 0.5);
        CHECK(est.behavior.single2[i] == 0.5);
        CHECK(std::abs(est.single1_se[i] - single_se) < 1e-15);
    }
}

TEST_CASE("pooled marginals are the n-weighted mean of per-pair frequencies") {
    CountsTable t;
    t.n_per_pair = 0;  // irrelevant for estimation
    t.pair[0][0] = {1000, 200, 100, 300, 400};  // side-1 frequency 0.3
    t.pair[0][1] = {3000, 900, 600, 300, 1200};  // side-1 frequency 0.5
    t.pair[1][0] = {1000, 100, 100, 100, 700};
    t.pair[1][1] = {1000, 100, 100, 100, 700};
    const EstimatedBehavior est = estimate_behavior(t);
    CHECK(est.behavior.single1[0] == (200.0 + 100.0 + 900.0 + 600.0) / 4000.0);
    CHECK(est.behavior.single1[0] == (1000.0 * 0.3 + 3000.0 * 0.5) / 4000.0);
    CHECK(est.behavior.single2[0] == (200.0 + 300.0 + 100.0 + 100.0) / 2000.0);
}

TEST_CASE("estimation names the first empty pair in one-based form") {
    CountsTable t;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) t.pair[i][j] = {1, 1, 0, 0, 0};
    t.pair[1][0] = {};  // no trials
    try {
        estimate_behavior(t);
        FAIL_CHECK("expected a validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("pair (2,1)") != std::string::npos);
    }
}

TEST_CASE("simulation argument validation") {
    const FactorizedModel m = constant_model(0.5, 0.5);
    CHECK_THROWS_AS(simulate(m, 0, 1), validation_error);
    Behavior invalid;
    invalid.joint[0][0] = 0.5;  // exceeds both singles
    CHECK_THROWS_AS(simulate(invalid, 10, 1), validation_error);
}
