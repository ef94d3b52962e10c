#pragma once

#include <vector>

// Dense phase-1 simplex for small equality-form feasibility problems:
//
//   find x >= 0 with A x = b
//
// solved as  min sum(a)  s.t.  A x + I a = b,  x >= 0,  a >= 0
//
// with one artificial variable per row. The objective is 0 exactly when the
// system is feasible; when it is positive the duals form a Farkas certificate
// y with  y'A <= 0  and  y'b = objective > 0.

namespace chlab {

struct PhaseOneResult {
    double objective = 0.0;      // optimal sum of artificials
    std::vector<double> x;       // structural variables at the optimum
    std::vector<double> duals;   // y_i = 1 - (final reduced cost of artificial i)
};

// A is row-major, m rows by n columns; b has m entries. Rows with negative b
// are negated internally so the artificial start is feasible. Bland's rule, so
// termination does not depend on tie-breaking luck. Sizes here are tiny (tens
// of columns); no factorization, just the full tableau.
PhaseOneResult phase_one_simplex(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b);

}  // namespace chlab
