#include "steppde/propagator.hpp"

#include <cmath>
#include <string>

namespace steppde {

namespace {

double checked_exp(double exponent, int k) {
    if (exponent > kMaxExponent) {
        throw OverflowError("exponent " + std::to_string(exponent) + " exceeds " +
                                std::to_string(kMaxExponent) + " for mode " +
                                std::to_string(k),
                            exponent, k);
    }
    return std::exp(exponent);
}

}  // namespace

Block2 block_exp(const SpectralPair& p, double t) {
    const double scale = checked_exp(p.sigma * t, p.k);
    const double co = std::cos(p.omega * t);
    const double si = std::sin(p.omega * t);
    return Block2{scale * co, scale * si, -scale * si, scale * co};
}

std::pair<double, double> evolve_mode(double c, double d, const SpectralPair& p,
                                      double t) {
    const double scale = checked_exp(p.sigma * t, p.k);
    const double co = std::cos(p.omega * t);
    const double si = std::sin(p.omega * t);
    return {scale * (c * co + d * si), scale * (d * co - c * si)};
}

FourierState evolve_state(const CellState& cs, double t) {
    if (!(t >= cs.t_start && t <= cs.t_end)) {
        throw DomainError("time " + std::to_string(t) + " outside cell [" +
                          std::to_string(cs.t_start) + ", " + std::to_string(cs.t_end) +
                          "]");
    }

    FourierState out;
    out.half_c0 = cs.state.half_c0 == 0.0
                      ? 0.0
                      : cs.state.half_c0 * checked_exp(cs.pairs[0].sigma * t, 0);
    out.modes.resize(cs.state.modes.size());
    for (std::size_t i = 0; i < cs.state.modes.size(); ++i) {
        const Mode& m = cs.state.modes[i];
        if (m.c == 0.0 && m.d == 0.0) continue;  // never touch e^{sigma t}
        auto [c, d] = evolve_mode(m.c, m.d, cs.pairs[i + 1], t);
        out.modes[i].c = c;
        out.modes[i].d = d;
    }
    return out;
}

double stitch_zero_mode(double half_c0_prev, double a0_prev, double a0_next,
                        double t1) {
    if (half_c0_prev == 0.0) return 0.0;
    return half_c0_prev * checked_exp((a0_prev - a0_next) * t1, 0);
}

std::pair<double, double> stitch_mode(double c, double d, const SpectralPair& prev,
                                      const SpectralPair& next, double t1) {
    if (c == 0.0 && d == 0.0) return {0.0, 0.0};

    // Previous cell's mode at t1 with the next cell's e^{sigma t1} divided
    // out, then rotated into the next cell's frame.
    const double scale = checked_exp((prev.sigma - next.sigma) * t1, next.k);
    const double cp = std::cos(prev.omega * t1);
    const double sp = std::sin(prev.omega * t1);
    const double a = scale * (c * cp + d * sp);
    const double b = scale * (d * cp - c * sp);

    const double cn = std::cos(next.omega * t1);
    const double sn = std::sin(next.omega * t1);
    return {a * cn - b * sn, b * cn + a * sn};
}

}  // namespace steppde
