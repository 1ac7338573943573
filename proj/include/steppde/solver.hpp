#pragma once

// Weak solution of d/dt psi = sum_n A_n(t,x) d^n/dx^n psi on
// [0,T) x [-l,l) where every A_n is constant on the rectangles of a
// time x space partition and the initial condition is a trigonometric
// polynomial.
//
// Each space strip is marched independently through the time rows,
// starting from the global initial condition and stitching coefficients
// at every interior time line; the assembled solution reads strip j only
// on [x_j, x_{j+1}).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steppde/propagator.hpp"

namespace steppde {

struct StepProblem {
    double l = 1.0;                       // half-period, x domain is [-l, l)
    double T = 1.0;                       // time horizon, t domain is [0, T)
    std::vector<double> time_partition;   // t_0 = 0 < ... < t_I = T
    std::vector<double> space_partition;  // x_0 = -l < ... < x_J = l
    int order = 2;                        // 2m, even, >= 2
    // coeffs[i][j][n] = A_n on [t_i, t_{i+1}) x [x_j, x_{j+1});
    // dimensions I x J x (order+1).
    std::vector<std::vector<std::vector<double>>> coeffs;
    FourierState initial;

    int time_cells() const { return static_cast<int>(time_partition.size()) - 1; }
    int space_cells() const { return static_cast<int>(space_partition.size()) - 1; }
    OperatorCoefficients cell_operator(int i, int j) const;
};

// Every violation, empty when the problem is well formed.
std::vector<std::string> validate_problem(const StepProblem& p);

enum class Severity { growth, overflow };

// A mode whose e^{sigma t} factor grows on a cell.  `max_exponent` is the
// largest exponent reached on the cell (sigma * t_end for in-cell growth,
// the stitch exponent when stitching itself overflowed); severity is
// overflow iff max_exponent > 700.
struct DivergenceNote {
    int i = 0;
    int j = 0;
    int k = 0;
    double sigma = 0.0;
    double max_exponent = 0.0;
    Severity severity = Severity::growth;
};

std::string to_string(const DivergenceNote& note);

// Requesting a value from a cell whose evolution overflows the double range.
struct UnavailableValueError : Error {
    DivergenceNote note;
    explicit UnavailableValueError(const DivergenceNote& n);
};

struct PiecewiseSolution {
    StepProblem problem;
    // strips[j][i]; a strip aborted by a stitch overflow carries only the
    // rows built before the failure.
    std::vector<std::vector<CellState>> strips;
    std::vector<DivergenceNote> diagnostics;

    // The overflow note blocking cell (i, j), or nullptr when evaluable.
    const DivergenceNote* overflow_note(int i, int j) const;
};

// Rectangular sample of the solution.  `present[r*nx + c]` is 0 where the
// covering cell overflows; such values are absent, never infinite.
struct Field {
    std::vector<double> t_values;
    std::vector<double> x_values;
    std::vector<double> values;     // row-major, t rows by x columns
    std::vector<std::uint8_t> present;
    std::string provenance;         // problem digest + truncation

    std::size_t index(std::size_t it, std::size_t ix) const {
        return it * x_values.size() + ix;
    }
};

// FNV-1a over the problem's numeric content; stable across runs.
std::uint64_t problem_digest(const StepProblem& p);

PiecewiseSolution build(const StepProblem& problem);

// Value at (t, x), locating the half-open cell [t_i,t_{i+1}) x [x_j,x_{j+1}).
double evaluate(const PiecewiseSolution& sol, double t, double x);

// Sample on explicit coordinate lists (each t in [0,T), each x in [-l,l)).
Field evaluate_at(const PiecewiseSolution& sol, std::vector<double> t_values,
                  std::vector<double> x_values);

// Uniform nt x nx grid on [0,T) x [x_lo,x_hi), right endpoints excluded.
Field evaluate_grid(const PiecewiseSolution& sol, int nt, int nx,
                    std::optional<double> x_lo = std::nullopt,
                    std::optional<double> x_hi = std::nullopt);

// (analytic, finite-difference) PDE residual at an interior point:
// analytic uses the exact time derivative of each mode, the FD variant
// replaces it with (psi(t+dt) - psi(t-dt)) / (2 dt).  Requires t further
// than dt from the cell's time boundaries and x off the partition lines.
std::pair<double, double> residual(const PiecewiseSolution& sol, double t,
                                   double x, double dt);

// Tolerance scale: max over cells of sum_n |A_n| (K pi/l)^n * (largest
// coefficient magnitude in that cell).  High-order operators amplify
// rounding by (k pi/l)^n, so absolute residual tolerances are meaningless
// without it.
double residual_scale(const PiecewiseSolution& sol);

// Static divergence scan: spectral pairs of every cell for all modes
// 0..K without solving, reported overflow-first.
std::vector<DivergenceNote> check_divergence(const StepProblem& problem);

}  // namespace steppde
