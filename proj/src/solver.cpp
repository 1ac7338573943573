#include "steppde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

namespace steppde {

namespace {

constexpr double kPi = std::numbers::pi;

int locate(const std::vector<double>& partition, double v) {
    // Index of the half-open interval [p_i, p_{i+1}) containing v; the
    // caller has already checked the outer bounds.
    auto it = std::upper_bound(partition.begin(), partition.end(), v);
    return static_cast<int>(it - partition.begin()) - 1;
}

bool severity_rank(const DivergenceNote& a, const DivergenceNote& b) {
    if (a.severity != b.severity) return a.severity == Severity::overflow;
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
}

DivergenceNote make_note(int i, int j, int k, double sigma, double max_exponent) {
    return DivergenceNote{i,     j,
                          k,     sigma,
                          max_exponent,
                          max_exponent > kMaxExponent ? Severity::overflow
                                                      : Severity::growth};
}

// Growth/overflow notes for the populated modes of one built cell.
void note_cell_growth(const CellState& cell, int i, int j,
                      std::vector<DivergenceNote>& out) {
    const double t_end = cell.t_end;
    if (cell.state.half_c0 != 0.0 && cell.pairs[0].sigma > 0.0) {
        out.push_back(make_note(i, j, 0, cell.pairs[0].sigma,
                                cell.pairs[0].sigma * t_end));
    }
    for (std::size_t m = 0; m < cell.state.modes.size(); ++m) {
        const Mode& mode = cell.state.modes[m];
        if (mode.c == 0.0 && mode.d == 0.0) continue;
        const SpectralPair& p = cell.pairs[m + 1];
        if (p.sigma > 0.0) {
            out.push_back(make_note(i, j, p.k, p.sigma, p.sigma * t_end));
        }
    }
}

}  // namespace

OperatorCoefficients StepProblem::cell_operator(int i, int j) const {
    return OperatorCoefficients{order, coeffs[i][j], l};
}

ValidationError::ValidationError(std::vector<std::string> issues_)
    : Error(issues_.empty() ? std::string("invalid problem")
                            : "invalid problem: " + issues_.front() +
                                  (issues_.size() > 1
                                       ? " (+" + std::to_string(issues_.size() - 1) +
                                             " more)"
                                       : "")),
      issues(std::move(issues_)) {}

UnavailableValueError::UnavailableValueError(const DivergenceNote& n)
    : Error("value unavailable: " + steppde::to_string(n)), note(n) {}

std::string to_string(const DivergenceNote& note) {
    std::ostringstream os;
    os << (note.severity == Severity::overflow ? "overflow" : "growth") << ": cell ("
       << note.i << "," << note.j << ") mode " << note.k << " sigma=" << note.sigma
       << " max_exponent=" << note.max_exponent;
    return os.str();
}

std::vector<std::string> validate_problem(const StepProblem& p) {
    std::vector<std::string> issues;
    auto add = [&issues](std::string msg) { issues.push_back(std::move(msg)); };

    if (!(p.l > 0.0) || !std::isfinite(p.l)) add("l must be positive and finite");
    if (!(p.T > 0.0) || !std::isfinite(p.T)) add("T must be positive and finite");

    auto check_partition = [&](const std::vector<double>& part, const char* name,
                               double lo, double hi) {
        if (part.size() < 2) {
            add(std::string(name) + " needs at least two points");
            return;
        }
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (!std::isfinite(part[i])) {
                add(std::string(name) + " has a non-finite entry at index " +
                    std::to_string(i));
                return;
            }
        }
        for (std::size_t i = 1; i < part.size(); ++i) {
            if (!(part[i] > part[i - 1])) {
                add(std::string(name) + " not strictly increasing at index " +
                    std::to_string(i));
            }
        }
        if (part.front() != lo) {
            add(std::string(name) + " must start at " + std::to_string(lo));
        }
        if (part.back() != hi) {
            add(std::string(name) + " must end at " + std::to_string(hi));
        }
    };
    check_partition(p.time_partition, "time_partition", 0.0, p.T);
    check_partition(p.space_partition, "space_partition", -p.l, p.l);

    if (p.order < 2 || p.order % 2 != 0) add("order must be an even integer >= 2");

    const std::size_t rows = p.time_partition.size() >= 2 ? p.time_partition.size() - 1 : 0;
    const std::size_t cols = p.space_partition.size() >= 2 ? p.space_partition.size() - 1 : 0;
    if (p.coeffs.size() != rows) {
        add("coefficients must have " + std::to_string(rows) + " time rows, got " +
            std::to_string(p.coeffs.size()));
    } else {
        for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
            if (p.coeffs[i].size() != cols) {
                add("coefficients[" + std::to_string(i) + "] must have " +
                    std::to_string(cols) + " space columns, got " +
                    std::to_string(p.coeffs[i].size()));
                continue;
            }
            for (std::size_t j = 0; j < p.coeffs[i].size(); ++j) {
                const auto& cell = p.coeffs[i][j];
                if (p.order >= 2 && cell.size() != static_cast<std::size_t>(p.order) + 1) {
                    add("coefficients[" + std::to_string(i) + "][" + std::to_string(j) +
                        "] must have order+1 = " + std::to_string(p.order + 1) +
                        " entries, got " + std::to_string(cell.size()));
                    continue;
                }
                for (std::size_t n = 0; n < cell.size(); ++n) {
                    if (!std::isfinite(cell[n])) {
                        add("coefficients[" + std::to_string(i) + "][" +
                            std::to_string(j) + "][" + std::to_string(n) +
                            "] is not finite");
                    }
                }
            }
        }
    }

    if (p.initial.modes.empty()) {
        add("initial state needs at least one mode");
    } else {
        if (!std::isfinite(p.initial.half_c0)) add("initial half_c0 is not finite");
        for (std::size_t i = 0; i < p.initial.modes.size(); ++i) {
            if (!std::isfinite(p.initial.modes[i].c) ||
                !std::isfinite(p.initial.modes[i].d)) {
                add("initial mode " + std::to_string(i + 1) + " is not finite");
            }
        }
    }
    return issues;
}

std::uint64_t problem_digest(const StepProblem& p) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix_bytes = [&h](const void* data, std::size_t n) {
        const unsigned char* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    auto mix_double = [&](double v) { mix_bytes(&v, sizeof v); };
    auto mix_int = [&](std::int64_t v) { mix_bytes(&v, sizeof v); };

    mix_double(p.l);
    mix_double(p.T);
    mix_int(static_cast<std::int64_t>(p.time_partition.size()));
    for (double v : p.time_partition) mix_double(v);
    mix_int(static_cast<std::int64_t>(p.space_partition.size()));
    for (double v : p.space_partition) mix_double(v);
    mix_int(p.order);
    for (const auto& row : p.coeffs)
        for (const auto& cell : row)
            for (double v : cell) mix_double(v);
    mix_double(p.initial.half_c0);
    mix_int(p.initial.truncation());
    for (const Mode& m : p.initial.modes) {
        mix_double(m.c);
        mix_double(m.d);
    }
    return h;
}

const DivergenceNote* PiecewiseSolution::overflow_note(int i, int j) const {
    for (const DivergenceNote& n : diagnostics) {
        if (n.severity == Severity::overflow && n.i == i && n.j == j) return &n;
    }
    return nullptr;
}

PiecewiseSolution build(const StepProblem& problem) {
    if (auto issues = validate_problem(problem); !issues.empty()) {
        throw ValidationError(std::move(issues));
    }

    const int rows = problem.time_cells();
    const int cols = problem.space_cells();
    const int K = problem.initial.truncation();

    PiecewiseSolution sol;
    sol.problem = problem;
    sol.strips.resize(cols);

    for (int j = 0; j < cols; ++j) {
        auto& strip = sol.strips[j];
        strip.reserve(rows);
        for (int i = 0; i < rows; ++i) {
            try {
                std::vector<SpectralPair> pairs;
                pairs.reserve(K + 1);
                const OperatorCoefficients ops = problem.cell_operator(i, j);
                for (int k = 0; k <= K; ++k) pairs.push_back(spectral_pair(ops, k));

                FourierState state;
                if (i == 0) {
                    // Every strip restarts from the same global initial
                    // condition; the assembly only reads it on the strip.
                    state = problem.initial;
                } else {
                    const CellState& prev = strip.back();
                    const double t1 = problem.time_partition[i];
                    state.half_c0 = stitch_zero_mode(prev.state.half_c0,
                                                     prev.pairs[0].sigma,
                                                     pairs[0].sigma, t1);
                    state.modes.resize(prev.state.modes.size());
                    for (int k = 1; k <= K; ++k) {
                        const Mode& m = prev.state.modes[k - 1];
                        auto [c, d] =
                            stitch_mode(m.c, m.d, prev.pairs[k], pairs[k], t1);
                        state.modes[k - 1] = Mode{c, d};
                    }
                }

                strip.push_back(CellState{std::move(state), std::move(pairs),
                                          problem.time_partition[i],
                                          problem.time_partition[i + 1]});
                note_cell_growth(strip.back(), i, j, sol.diagnostics);
            } catch (const OverflowError& e) {
                // The strip cannot be continued past this interface; later
                // rows stay unavailable while other strips proceed.
                sol.diagnostics.push_back(
                    make_note(i, j, e.k, std::numeric_limits<double>::infinity(),
                              e.exponent));
                sol.diagnostics.back().severity = Severity::overflow;
                break;
            }
        }
    }

    std::sort(sol.diagnostics.begin(), sol.diagnostics.end(), severity_rank);
    return sol;
}

namespace {

struct CellRef {
    int i;
    int j;
    const CellState* cell;  // nullptr when the strip aborted before row i
};

CellRef locate_cell(const PiecewiseSolution& sol, double t, double x) {
    const StepProblem& p = sol.problem;
    if (!std::isfinite(t) || t < 0.0 || t >= p.T) {
        throw DomainError("t = " + std::to_string(t) + " outside [0, " +
                          std::to_string(p.T) + ")");
    }
    if (!std::isfinite(x) || x < -p.l || x >= p.l) {
        throw DomainError("x = " + std::to_string(x) + " outside [" +
                          std::to_string(-p.l) + ", " + std::to_string(p.l) + ")");
    }
    const int i = locate(p.time_partition, t);
    const int j = locate(p.space_partition, x);
    const auto& strip = sol.strips[j];
    const CellState* cell =
        i < static_cast<int>(strip.size()) ? &strip[i] : nullptr;
    return CellRef{i, j, cell};
}

// Throws UnavailableValueError when (i, j) is blocked by an overflow.
const CellState& usable_cell(const PiecewiseSolution& sol, const CellRef& ref) {
    if (const DivergenceNote* note = sol.overflow_note(ref.i, ref.j)) {
        throw UnavailableValueError(*note);
    }
    if (ref.cell == nullptr) {
        // Aborted strip: the blocking note sits on the abort row.
        for (const DivergenceNote& n : sol.diagnostics) {
            if (n.severity == Severity::overflow && n.j == ref.j && n.i <= ref.i) {
                throw UnavailableValueError(n);
            }
        }
        throw UnavailableValueError(
            make_note(ref.i, ref.j, 0, 0.0, std::numeric_limits<double>::infinity()));
    }
    return *ref.cell;
}

}  // namespace

double evaluate(const PiecewiseSolution& sol, double t, double x) {
    const CellRef ref = locate_cell(sol, t, x);
    const CellState& cell = usable_cell(sol, ref);
    return evaluate_series(evolve_state(cell, t), x, sol.problem.l);
}

Field evaluate_at(const PiecewiseSolution& sol, std::vector<double> t_values,
                  std::vector<double> x_values) {
    Field field;
    field.t_values = std::move(t_values);
    field.x_values = std::move(x_values);
    field.values.assign(field.t_values.size() * field.x_values.size(), 0.0);
    field.present.assign(field.values.size(), 1);

    for (std::size_t it = 0; it < field.t_values.size(); ++it) {
        for (std::size_t ix = 0; ix < field.x_values.size(); ++ix) {
            const std::size_t idx = field.index(it, ix);
            try {
                field.values[idx] = evaluate(sol, field.t_values[it], field.x_values[ix]);
            } catch (const UnavailableValueError&) {
                field.values[idx] = std::numeric_limits<double>::quiet_NaN();
                field.present[idx] = 0;
            }
        }
    }

    std::ostringstream os;
    os << "problem " << std::hex << problem_digest(sol.problem) << std::dec << " K="
       << sol.problem.initial.truncation();
    field.provenance = os.str();
    return field;
}

Field evaluate_grid(const PiecewiseSolution& sol, int nt, int nx,
                    std::optional<double> x_lo, std::optional<double> x_hi) {
    if (nt < 2 || nx < 2) {
        throw InvalidInputError("grid needs nt >= 2 and nx >= 2");
    }
    const double lo = x_lo.value_or(-sol.problem.l);
    const double hi = x_hi.value_or(sol.problem.l);
    if (!(lo < hi) || lo < -sol.problem.l || hi > sol.problem.l) {
        throw InvalidInputError("x range must satisfy -l <= lo < hi <= l");
    }

    std::vector<double> ts(nt);
    for (int i = 0; i < nt; ++i) ts[i] = static_cast<double>(i) * sol.problem.T / nt;
    std::vector<double> xs(nx);
    for (int j = 0; j < nx; ++j) xs[j] = lo + static_cast<double>(j) * (hi - lo) / nx;
    return evaluate_at(sol, std::move(ts), std::move(xs));
}

std::pair<double, double> residual(const PiecewiseSolution& sol, double t, double x,
                                   double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidInputError("residual: dt must be positive and finite");
    }
    const CellRef ref = locate_cell(sol, t, x);
    const CellState& cell = usable_cell(sol, ref);
    if (!(t - cell.t_start > dt) || !(cell.t_end - t > dt)) {
        throw DomainError("residual: t must be further than dt from cell time bounds");
    }
    for (double xp : sol.problem.space_partition) {
        if (x == xp) throw DomainError("residual: x must not be a partition point");
    }

    const double l = sol.problem.l;
    const FourierState at_t = evolve_state(cell, t);

    // Exact time derivative: each mode satisfies (c,d)' = [[s,w],[-w,s]](c,d),
    // and the zero mode (half_c0 e^{A0 t})' = A0 half_c0 e^{A0 t}.
    FourierState ddt;
    ddt.half_c0 = cell.pairs[0].sigma * at_t.half_c0;
    ddt.modes.resize(at_t.modes.size());
    for (std::size_t m = 0; m < at_t.modes.size(); ++m) {
        const SpectralPair& p = cell.pairs[m + 1];
        ddt.modes[m].c = p.sigma * at_t.modes[m].c + p.omega * at_t.modes[m].d;
        ddt.modes[m].d = -p.omega * at_t.modes[m].c + p.sigma * at_t.modes[m].d;
    }
    const double dpsi_dt = evaluate_series(ddt, x, l);

    const FourierState rhs_state =
        apply_operator_polynomial(at_t, sol.problem.cell_operator(ref.i, ref.j));
    const double rhs = evaluate_series(rhs_state, x, l);

    const double fd_dt =
        (evaluate(sol, t + dt, x) - evaluate(sol, t - dt, x)) / (2.0 * dt);

    return {dpsi_dt - rhs, fd_dt - rhs};
}

double residual_scale(const PiecewiseSolution& sol) {
    const StepProblem& p = sol.problem;
    const int K = p.initial.truncation();
    const double base = static_cast<double>(K) * kPi / p.l;

    double scale = 0.0;
    for (int j = 0; j < p.space_cells(); ++j) {
        for (std::size_t i = 0; i < sol.strips[j].size(); ++i) {
            const CellState& cell = sol.strips[j][i];
            double amp = std::abs(cell.state.half_c0);
            for (const Mode& m : cell.state.modes) {
                amp = std::max({amp, std::abs(m.c), std::abs(m.d)});
            }
            const auto& a = p.coeffs[i][j];
            double op_norm = 0.0;
            double power = 1.0;
            for (int n = 0; n <= p.order; ++n) {
                if (n > 0) power *= base;
                op_norm += std::abs(a[n]) * power;
            }
            scale = std::max(scale, op_norm * amp);
        }
    }
    return scale;
}

std::vector<DivergenceNote> check_divergence(const StepProblem& problem) {
    if (auto issues = validate_problem(problem); !issues.empty()) {
        throw ValidationError(std::move(issues));
    }

    const int K = problem.initial.truncation();
    std::vector<DivergenceNote> notes;
    for (int i = 0; i < problem.time_cells(); ++i) {
        const double t_end = problem.time_partition[i + 1];
        for (int j = 0; j < problem.space_cells(); ++j) {
            const OperatorCoefficients ops = problem.cell_operator(i, j);
            // Conservative: every mode up to the truncation, whether or not
            // the initial condition populates it.
            for (int k = 0; k <= K; ++k) {
                try {
                    const SpectralPair p = spectral_pair(ops, k);
                    if (p.sigma > 0.0) {
                        notes.push_back(make_note(i, j, k, p.sigma, p.sigma * t_end));
                    }
                } catch (const OverflowError&) {
                    notes.push_back(make_note(i, j, k,
                                              std::numeric_limits<double>::infinity(),
                                              std::numeric_limits<double>::infinity()));
                }
            }
        }
    }
    std::sort(notes.begin(), notes.end(), severity_rank);
    return notes;
}

}  // namespace steppde
