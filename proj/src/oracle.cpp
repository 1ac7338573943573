#include "steppde/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace steppde {

namespace {

// Time segments between interfaces, each lying inside one time row.
struct Segment {
    double t0;
    double t1;
    int row;
};

std::vector<Segment> split_by_interfaces(const StepProblem& p, double t_end) {
    std::vector<Segment> segments;
    double t0 = 0.0;
    for (std::size_t i = 1; i < p.time_partition.size() && t0 < t_end; ++i) {
        const double t1 = std::min(p.time_partition[i], t_end);
        if (t1 > t0) {
            segments.push_back(Segment{t0, t1, static_cast<int>(i) - 1});
            t0 = t1;
        }
    }
    return segments;
}

}  // namespace

Field fd_solve(const StepProblem& problem, const FDConfig& cfg, double t_end) {
    if (auto issues = validate_problem(problem); !issues.empty()) {
        throw ValidationError(std::move(issues));
    }
    if (problem.order > 2) {
        throw UnsupportedOrderError(
            "finite-difference reference supports order <= 2, got " +
            std::to_string(problem.order));
    }
    if (cfg.nx < 16) {
        throw ConfigError("fd grid needs nx >= 16");
    }
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw ConfigError("fd time step must be positive and finite");
    }
    if (!(t_end >= 0.0) || t_end >= problem.T) {
        throw DomainError("t_end must lie in [0, T)");
    }

    const double dx = 2.0 * problem.l / cfg.nx;
    double max_a2 = 0.0;
    for (const auto& row : problem.coeffs)
        for (const auto& cell : row) max_a2 = std::max(max_a2, std::abs(cell[2]));
    const double stable = max_a2 > 0.0
                              ? 0.5 * dx * dx / (2.0 * max_a2)
                              : std::numeric_limits<double>::infinity();
    if (cfg.dt > stable * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "fd time step " << cfg.dt << " violates the stability bound " << stable
           << " (0.5 dx^2 / (2 max|A2|))";
        throw ConfigError(os.str());
    }

    std::vector<double> xs(cfg.nx);
    for (int i = 0; i < cfg.nx; ++i) xs[i] = -problem.l + i * dx;

    // Column index of each grid point is time-independent.
    std::vector<int> col(cfg.nx);
    for (int i = 0; i < cfg.nx; ++i) {
        auto it = std::upper_bound(problem.space_partition.begin(),
                                   problem.space_partition.end(), xs[i]);
        col[i] = static_cast<int>(it - problem.space_partition.begin()) - 1;
        col[i] = std::clamp(col[i], 0, problem.space_cells() - 1);
    }

    std::vector<double> u(cfg.nx);
    for (int i = 0; i < cfg.nx; ++i) {
        u[i] = evaluate_series(problem.initial, xs[i], problem.l);
    }

    const auto segments = split_by_interfaces(problem, t_end);
    for (const Segment& seg : segments) {
        // Step count rounds so the march lands exactly on each interface;
        // the landing adjustment is within dt/2 by construction, but the
        // effective step must still respect the stability bound.
        const double span = seg.t1 - seg.t0;
        const long long n =
            std::max<long long>(static_cast<long long>(std::llround(span / cfg.dt)), 1);
        const double h = span / static_cast<double>(n);
        if (h > stable * (1.0 + 1e-9)) {
            std::ostringstream os;
            os << "segment [" << seg.t0 << ", " << seg.t1 << "] forces step " << h
               << " past the stability bound " << stable
               << "; choose dt commensurate with the interfaces";
            throw ConfigError(os.str());
        }

        // du/dt = A0 u + A1 u' + A2 u'' with central differences, periodic.
        auto rhs = [&](const std::vector<double>& v, std::vector<double>& out) {
            const int nx = cfg.nx;
            for (int i = 0; i < nx; ++i) {
                const auto& a = problem.coeffs[seg.row][col[i]];
                const double um = v[(i + nx - 1) % nx];
                const double up = v[(i + 1) % nx];
                out[i] = a[0] * v[i] + a[1] * (up - um) / (2.0 * dx) +
                         a[2] * (up - 2.0 * v[i] + um) / (dx * dx);
            }
        };

        std::vector<double> k1(cfg.nx), k2(cfg.nx), k3(cfg.nx), k4(cfg.nx),
            tmp(cfg.nx);
        for (long long s = 0; s < n; ++s) {
            rhs(u, k1);
            for (int i = 0; i < cfg.nx; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
            rhs(tmp, k2);
            for (int i = 0; i < cfg.nx; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
            rhs(tmp, k3);
            for (int i = 0; i < cfg.nx; ++i) tmp[i] = u[i] + h * k3[i];
            rhs(tmp, k4);
            for (int i = 0; i < cfg.nx; ++i) {
                u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }

    Field field;
    field.t_values = {t_end};
    field.x_values = std::move(xs);
    field.values = std::move(u);
    field.present.assign(cfg.nx, 1);
    std::ostringstream os;
    os << "fd reference, problem " << std::hex << problem_digest(problem) << std::dec
       << " nx=" << cfg.nx << " dt=" << cfg.dt;
    field.provenance = os.str();
    return field;
}

CompareReport compare_fields(const Field& a, const Field& b) {
    if (a.t_values != b.t_values || a.x_values != b.x_values) {
        throw InvalidInputError("compared fields must share an identical grid");
    }

    CompareReport report;
    double sum_sq = 0.0;
    for (std::size_t it = 0; it < a.t_values.size(); ++it) {
        for (std::size_t ix = 0; ix < a.x_values.size(); ++ix) {
            const std::size_t idx = a.index(it, ix);
            if (!a.present[idx] || !b.present[idx]) continue;
            const double diff = std::abs(a.values[idx] - b.values[idx]);
            sum_sq += diff * diff;
            ++report.compared;
            if (diff > report.max_abs) {
                report.max_abs = diff;
                report.t_at_max = a.t_values[it];
                report.x_at_max = a.x_values[ix];
            }
        }
    }
    if (report.compared > 0) {
        report.rms = std::sqrt(sum_sq / static_cast<double>(report.compared));
    }
    return report;
}

}  // namespace steppde
