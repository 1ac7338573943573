#pragma once

// Finite-difference reference solver for second-order problems, used to
// cross-validate the spectral solution with an independent method.
// Second-order central differences on a periodic grid over [-l, l),
// classical four-stage explicit (RK4) time stepping.

#include "steppde/solver.hpp"

namespace steppde {

struct UnsupportedOrderError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct FDConfig {
    int nx = 256;        // periodic spatial points, >= 16
    double dt = 1e-4;    // must satisfy dt <= 0.5 * dx^2 / (2 max|A2|)
};

// State at t_end sampled on the FD grid (a 1 x nx Field).  Requires
// order <= 2, t_end < T, and t_end plus every crossed interface
// commensurate with dt to within dt/2 so stepping lands on interfaces.
Field fd_solve(const StepProblem& problem, const FDConfig& cfg, double t_end);

struct CompareReport {
    double max_abs = 0.0;     // max-norm of the difference
    double rms = 0.0;         // sqrt(mean squared difference)
    double t_at_max = 0.0;
    double x_at_max = 0.0;
    std::size_t compared = 0; // entries present in both fields
};

// Norms of (a - b) over entries present in both; grids must be identical.
CompareReport compare_fields(const Field& a, const Field& b);

}  // namespace steppde
