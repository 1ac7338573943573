#pragma once

// Closed-form time evolution of one rectangular cell and the
// interface stitching that hands a strip's coefficients from one time
// row to the next.
//
// Each mode evolves under the 2x2 matrix [[sigma, omega], [-omega, sigma]],
// whose exponential is the rotation-scaling block
//   e^{sigma t} [[cos omega t, sin omega t], [-sin omega t, cos omega t]].
// Coefficients use the absolute-time convention: a cell's stored state is
// always propagated with t measured from 0, and the stitch below chooses
// the next cell's coefficients so both cells produce the same values at
// the interface time.

#include <utility>
#include <vector>

#include "steppde/spectral.hpp"

namespace steppde {

// Exponent threshold: ln(DBL_MAX) is ~709.78, 700 leaves headroom.
inline constexpr double kMaxExponent = 700.0;

struct Block2 {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;
};

// One cell of the (t, x) partition: coefficients valid on
// [t_start, t_end) x (the owning strip), plus the per-mode rates.
struct CellState {
    FourierState state;               // absolute-time coefficients
    std::vector<SpectralPair> pairs;  // k = 0..K; pairs[k].k == k
    double t_start = 0.0;
    double t_end = 0.0;
};

// e^{t [[sigma, omega], [-omega, sigma]]}.
Block2 block_exp(const SpectralPair& p, double t);

// block_exp applied to the column (c, d).
std::pair<double, double> evolve_mode(double c, double d, const SpectralPair& p,
                                      double t);

// All modes of the cell at absolute time t in [t_start, t_end].
// Modes that are exactly (0, 0) stay (0, 0) without touching e^{sigma t},
// so a growing rate on an empty mode cannot produce 0 * inf.
FourierState evolve_state(const CellState& cs, double t);

// Zero-mode handoff: half_c0' = half_c0 * e^{t1 (A0_prev - A0_next)}.
double stitch_zero_mode(double half_c0_prev, double a0_prev, double a0_next,
                        double t1);

// Mode-k handoff: the unique (c', d') whose evolution under `next`
// reproduces at t1 the value of (c, d) evolved under `prev`.
std::pair<double, double> stitch_mode(double c, double d,
                                      const SpectralPair& prev,
                                      const SpectralPair& next, double t1);

}  // namespace steppde
