#include <doctest.h>

#include <cmath>
#include <vector>

#include "chlab/philox.hpp"
#include "chlab/simplex.hpp"

using namespace chlab;

namespace {

// Checks the Farkas/feasibility contract the callers rely on: a near-zero
// objective with residual ||Ax - b|| tiny, or positive objective with duals
// satisfying y'A <= 0 and y'b = objective.
void check_contract(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                    const PhaseOneResult& r) {
    const std::size_t m = A.size();
    const std::size_t n = A.empty() ? 0 : A[0].size();
    REQUIRE(r.x.size() == n);
    REQUIRE(r.duals.size() == m);
    for (double xj : r.x) CHECK(xj >= -1e-12);
    if (r.objective <= 1e-9) {
        for (std::size_t i = 0; i < m; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += A[i][j] * r.x[j];
            CHECK(std::abs(row - b[i]) < 1e-8);
        }
    } else {
        double yb = 0.0;
        for (std::size_t i = 0; i < m; ++i) yb += r.duals[i] * b[i];
        CHECK(std::abs(yb - r.objective) < 1e-8);
        for (std::size_t j = 0; j < n; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < m; ++i) col += r.duals[i] * A[i][j];
            CHECK(col <= 1e-9);
        }
    }
}

}  // namespace

TEST_CASE("a feasible identity system is solved exactly") {
    const std::vector<std::vector<double>> A = {{1.0, 0.0}, {0.0, 1.0}};
    const std::vector<double> b = {0.25, 0.75};
    const PhaseOneResult r = phase_one_simplex(A, b);
    CHECK(r.objective == 0.0);
    CHECK(std::abs(r.x[0] - 0.25) < 1e-12);
    CHECK(std::abs(r.x[1] - 0.75) < 1e-12);
    check_contract(A, b, r);
}

TEST_CASE("an underdetermined feasible system reaches objective zero") {
    // One equation, many nonnegative solutions.
    const std::vector<std::vector<double>> A = {{1.0, 2.0, 3.0}};
    const std::vector<double> b = {6.0};
    const PhaseOneResult r = phase_one_simplex(A, b);
    CHECK(r.objective <= 1e-12);
    check_contract(A, b, r);
}

TEST_CASE("negative right-hand sides are handled by internal row negation") {
    const std::vector<std::vector<double>> A = {{-1.0, 0.0}, {0.0, -1.0}};
    const std::vector<double> b = {-0.5, -1.5};
    const PhaseOneResult r = phase_one_simplex(A, b);
    CHECK(r.objective <= 1e-12);
    CHECK(std::abs(r.x[0] - 0.5) < 1e-12);
    CHECK(std::abs(r.x[1] - 1.5) < 1e-12);
    check_contract(A, b, r);
}

TEST_CASE("zero right-hand-side rows stay feasible") {
    const std::vector<std::vector<double>> A = {{1.0, -1.0}, {1.0, 1.0}};
    const std::vector<double> b = {0.0, 1.0};
    const PhaseOneResult r = phase_one_simplex(A, b);
    CHECK(r.objective <= 1e-12);
    check_contract(A, b, r);
}

TEST_CASE("an infeasible system yields a verified Farkas certificate") {
    // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold.
    const std::vector<std::vector<double>> A = {{1.0, 1.0}, {1.0, 1.0}};
    const std::vector<double> b = {1.0, 2.0};
    const PhaseOneResult r = phase_one_simplex(A, b);
    CHECK(r.objective > 0.5);
    check_contract(A, b, r);

    // The certificate is explicit: y'b = objective and y'A <= 0.
    double yb = 0.0;
    for (std::size_t i = 0; i < 2; ++i) yb += r.duals[i] * b[i];
    CHECK(yb > 0.5);
}

TEST_CASE("nonnegativity makes a sign-blocked system infeasible") {
    // x >= 0 cannot produce a negative combination of nonnegative columns.
    const std::vector<std::vector<double>> A = {{1.0, 2.0}};
    const std::vector<double> b = {-3.0};
    const PhaseOneResult r = phase_one_simplex(A, b);
    CHECK(r.objective > 1.0);
    check_contract(A, b, r);
}

TEST_CASE("random convex-combination systems match their construction") {
    // Build A from random columns, take b as a convex combination of them:
    // always feasible. Then move b outside the cone by negating it: whenever
    // the solver reports a positive objective the certificate must verify.
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const CounterRng rng(31, static_cast<std::uint32_t>(trial));
        const std::size_t m = 3, n = 6;
        std::vector<std::vector<double>> A(m, std::vector<double>(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                A[i][j] = rng.uniform(j, static_cast<std::uint32_t>(i));
        std::vector<double> w(n);
        double wsum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = 0.01 + rng.uniform(j, 10);
            wsum += w[j];
        }
        std::vector<double> b(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) b[i] += A[i][j] * (w[j] / wsum);

        const PhaseOneResult feasible = phase_one_simplex(A, b);
        CHECK(feasible.objective <= 1e-9);
        check_contract(A, b, feasible);

        std::vector<double> flipped(m);
        for (std::size_t i = 0; i < m; ++i) flipped[i] = -b[i];
        const PhaseOneResult maybe = phase_one_simplex(A, flipped);
        check_contract(A, flipped, maybe);
    }
}
