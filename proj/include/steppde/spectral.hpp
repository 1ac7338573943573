#pragma once

// Coefficient-space representation of 2l-periodic functions and the
// action of constant-coefficient differential operators on it.
//
// A truncated trigonometric polynomial
//   f(x) = c0/2 + sum_{k=1}^{K} c_k cos(k pi x / l) + d_k sin(k pi x / l)
// is stored as (half_c0, (c_1,d_1), ..., (c_K,d_K)).  d/dx acts per mode
// as the 2x2 block [[0, k pi/l], [-k pi/l, 0]], so any operator
// sum_n A_n d^n/dx^n acts mode-wise as [[sigma_k, omega_k],
// [-omega_k, sigma_k]] with sigma_k collecting the even-order terms and
// omega_k the odd-order ones.

#include <vector>

#include "steppde/errors.hpp"

namespace steppde {

struct Mode {
    double c = 0.0;
    double d = 0.0;
    bool operator==(const Mode&) const = default;
};

struct FourierState {
    double half_c0 = 0.0;          // the leading entry c0/2
    std::vector<Mode> modes;       // index i holds mode k = i+1

    int truncation() const { return static_cast<int>(modes.size()); }
    bool operator==(const FourierState&) const = default;
};

// Coefficients A_0..A_{2m} of sum_n A_n d^n/dx^n on [-l, l).
struct OperatorCoefficients {
    int order = 2;                 // 2m, even, >= 2
    std::vector<double> a;         // size order+1
    double l = 1.0;                // half-period, > 0
};

// Growth/rotation rates of one Fourier mode under the operator:
//   sigma_k = sum_{n=0}^{m}   (-1)^n A_{2n}   (k pi / l)^{2n}
//   omega_k = sum_{n=0}^{m-1} (-1)^n A_{2n+1} (k pi / l)^{2n+1}
// Mode 0 is scalar: sigma = A_0, omega = 0.
struct SpectralPair {
    double sigma = 0.0;            // growth/decay rate, 1/time
    double omega = 0.0;            // rotation rate, rad/time
    int k = 0;                     // mode index
};

inline constexpr int kDefaultModeCap = 512;

void validate_state(const FourierState& state);
void validate_operator(const OperatorCoefficients& ops);

// Mode-wise first derivative: half_c0' = 0, (c_k', d_k') = (k pi/l d_k, -k pi/l c_k).
FourierState apply_fourier_derivative(const FourierState& state, double l);

// Coefficients of sum_n A_n f^(n) for the polynomial represented by `state`.
FourierState apply_operator_polynomial(const FourierState& state,
                                       const OperatorCoefficients& ops);

// Throws OverflowError naming k and n when (k pi/l)^n leaves the double
// range with A_n != 0; throws InvalidInputError for k > mode_cap.
SpectralPair spectral_pair(const OperatorCoefficients& ops, int k,
                           int mode_cap = kDefaultModeCap);

// Value of the represented polynomial at x.
double evaluate_series(const FourierState& state, double x, double l);

}  // namespace steppde
