#pragma once

#include <vector>

namespace cotforge {

enum class SolverEngine {
    Auto,           // floating point first, exact confirmation where affordable
    FloatingPoint,  // double arithmetic, violation tolerance 1e-9
    ExactRational,  // exact pivoting; requires integral row entries
};

struct MarginSolveResult {
    bool feasible = false;
    std::vector<double> w;  // satisfies rows[j] . w >= 1 for all j when feasible
    int iterations = 0;
};

// Feasibility of the uniform-margin system  rows[j] . w >= 1  for all j.
//
// Phase-1 formulation: minimize total constraint violation
//   min sum_j xi_j   s.t.   rows[j] . w + xi_j >= 1, xi >= 0, w free;
// the system is feasible iff the optimum is 0. The solver runs simplex on the
// equivalent bounded dual (max 1'y s.t. A'y = 0, 0 <= y <= 1, A = columns
// rows[j]), whose basis is dim x dim, and reads w off the simplex multipliers
// at optimum. Any dual point with positive objective certifies infeasibility.
//
// The exact engine pivots over arbitrary-precision rationals and requires the
// row entries to be integers. The floating-point engine uses tolerance 1e-9,
// nine orders of magnitude below the unit margin.
MarginSolveResult solve_margin_system(const std::vector<std::vector<double>>& rows, int dim,
                                      SolverEngine engine = SolverEngine::Auto);

}  // namespace cotforge
