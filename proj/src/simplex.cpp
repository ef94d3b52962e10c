#include "chlab/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace chlab {

namespace {

constexpr double kPivotEps = 1e-11;

}  // namespace

PhaseOneResult phase_one_simplex(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b) {
    const std::size_t m = A.size();
    if (m == 0 || b.size() != m) throw std::invalid_argument("simplex: bad system shape");
    const std::size_t n = A[0].size();
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("simplex: ragged matrix");

    // Tableau: m rows of [structural | artificial | rhs], then the phase-1
    // reduced-cost row. Artificials start basic, so the cost row begins as
    // the negated column sums and the objective as -sum(b).
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = sign * A[i][j];
        t[i][n + i] = 1.0;
        t[i][cols - 1] = sign * b[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += t[i][j];
        t[m][j] = -s;
    }
    for (std::size_t i = 0; i < m; ++i) t[m][cols - 1] -= t[i][cols - 1];

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Only structural columns may enter. If the method stalls with a negative
    // artificial reduced cost the current duals still satisfy y'A <= 0 and
    // y'b = objective, which is all the callers use.
    for (;;) {
        std::size_t enter = n;
        for (std::size_t j = 0; j < n; ++j) {  // Bland: lowest eligible index
            if (t[m][j] < -kPivotEps) { enter = j; break; }
        }
        if (enter == n) break;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > kPivotEps) {
                const double ratio = t[i][cols - 1] / t[i][enter];
                if (ratio < best_ratio - kPivotEps ||
                    (ratio < best_ratio + kPivotEps && (leave == m || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) throw std::runtime_error("simplex: unbounded phase-1 (cannot happen)");

        const double pivot = t[leave][enter];
        for (std::size_t j = 0; j < cols; ++j) t[leave][j] /= pivot;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    PhaseOneResult res;
    res.objective = -t[m][cols - 1];
    if (res.objective < 0.0 && res.objective > -1e-9) res.objective = 0.0;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) res.x[basis[i]] = std::max(0.0, t[i][cols - 1]);
    }
    res.duals.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double y = 1.0 - t[m][n + i];
        res.duals[i] = (b[i] < 0.0) ? -y : y;  // undo the row negation
    }
    return res;
}

}  // namespace chlab
