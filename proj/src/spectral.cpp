#include "steppde/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace steppde {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier-compensated accumulator.  The sums for sigma/omega mix terms
// spanning many orders of magnitude ((k pi/l)^22 reaches ~1e13 already at
// k = 4), where naive summation loses digits.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

void validate_state(const FourierState& state) {
    if (!std::isfinite(state.half_c0)) {
        throw InvalidInputError("fourier state: half_c0 is not finite");
    }
    if (state.modes.empty()) {
        throw InvalidInputError("fourier state: needs at least one mode");
    }
    for (std::size_t i = 0; i < state.modes.size(); ++i) {
        if (!std::isfinite(state.modes[i].c) || !std::isfinite(state.modes[i].d)) {
            throw InvalidInputError("fourier state: mode " + std::to_string(i + 1) +
                                    " is not finite");
        }
    }
}

void validate_operator(const OperatorCoefficients& ops) {
    if (ops.order < 2 || ops.order % 2 != 0) {
        throw InvalidInputError("operator: order must be an even integer >= 2");
    }
    if (static_cast<int>(ops.a.size()) != ops.order + 1) {
        throw InvalidInputError("operator: expected " + std::to_string(ops.order + 1) +
                                " coefficients, got " + std::to_string(ops.a.size()));
    }
    if (!(ops.l > 0.0) || !std::isfinite(ops.l)) {
        throw InvalidInputError("operator: half-period l must be positive and finite");
    }
    for (double v : ops.a) {
        if (!std::isfinite(v)) {
            throw InvalidInputError("operator: coefficients must be finite");
        }
    }
}

FourierState apply_fourier_derivative(const FourierState& state, double l) {
    if (!(l > 0.0) || !std::isfinite(l)) {
        throw InvalidInputError("derivative: half-period l must be positive and finite");
    }
    validate_state(state);

    FourierState out;
    out.half_c0 = 0.0;
    out.modes.resize(state.modes.size());
    for (std::size_t i = 0; i < state.modes.size(); ++i) {
        const double freq = static_cast<double>(i + 1) * kPi / l;
        out.modes[i].c = freq * state.modes[i].d;
        out.modes[i].d = -freq * state.modes[i].c;
    }
    return out;
}

SpectralPair spectral_pair(const OperatorCoefficients& ops, int k, int mode_cap) {
    validate_operator(ops);
    if (k < 0) {
        throw InvalidInputError("spectral pair: mode index must be >= 0");
    }
    if (k > mode_cap) {
        throw InvalidInputError("spectral pair: mode " + std::to_string(k) +
                                " exceeds the cap " + std::to_string(mode_cap));
    }
    if (k == 0) {
        return SpectralPair{ops.a[0], 0.0, 0};
    }

    const double base = static_cast<double>(k) * kPi / ops.l;
    CompensatedSum sigma;
    CompensatedSum omega;
    double power = 1.0;  // base^n by iterated multiplication
    for (int n = 0; n <= ops.order; ++n) {
        if (n > 0) power *= base;
        const double coef = ops.a[n];
        if (coef == 0.0) continue;
        if (!std::isfinite(power)) {
            throw OverflowError("spectral pair: (k pi/l)^n overflows for k = " +
                                    std::to_string(k) + ", n = " + std::to_string(n),
                                power, k, n);
        }
        const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
        const double term = sign * coef * power;
        if (!std::isfinite(term)) {
            throw OverflowError("spectral pair: term A_n (k pi/l)^n overflows for k = " +
                                    std::to_string(k) + ", n = " + std::to_string(n),
                                term, k, n);
        }
        if (n % 2 == 0) {
            sigma.add(term);
        } else {
            omega.add(term);
        }
    }

    SpectralPair p{sigma.value(), omega.value(), k};
    if (!std::isfinite(p.sigma) || !std::isfinite(p.omega)) {
        throw OverflowError("spectral pair: rate sum overflows for k = " + std::to_string(k),
                            p.sigma, k, ops.order);
    }
    return p;
}

FourierState apply_operator_polynomial(const FourierState& state,
                                       const OperatorCoefficients& ops) {
    validate_state(state);
    validate_operator(ops);

    FourierState out;
    out.half_c0 = ops.a[0] * state.half_c0;
    out.modes.resize(state.modes.size());
    for (std::size_t i = 0; i < state.modes.size(); ++i) {
        const SpectralPair p = spectral_pair(ops, static_cast<int>(i + 1));
        const double c = state.modes[i].c;
        const double d = state.modes[i].d;
        out.modes[i].c = p.sigma * c + p.omega * d;
        out.modes[i].d = -p.omega * c + p.sigma * d;
    }
    return out;
}

double evaluate_series(const FourierState& state, double x, double l) {
    double acc = state.half_c0;
    for (std::size_t i = 0; i < state.modes.size(); ++i) {
        const Mode& m = state.modes[i];
        if (m.c == 0.0 && m.d == 0.0) continue;
        const double angle = static_cast<double>(i + 1) * kPi / l * x;
        acc += m.c * std::cos(angle) + m.d * std::sin(angle);
    }
    return acc;
}

}  // namespace steppde
