// steppde: solve, validate, and cross-check step-coefficient spectral PDE
// problems described by JSON documents.
//
// Exit codes: 0 success; 1 schema/validation or check failure; 2 divergence
// (validate: any predicted note, solve/plot: an overflow note); 64 usage
// error; 66 unreadable input or unwritable output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "steppde/oracle.hpp"
#include "steppde/problem_io.hpp"

namespace {

constexpr int kExitDivergence = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 66;

// Fixed seed: identical inputs must produce byte-identical outputs.
constexpr std::uint64_t kSampleSeed = 0x5d3a91f2c4b81e07ULL;

struct IoFailure {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure{"cannot open '" + path + "' for reading"};
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoFailure{"failed reading '" + path + "'"};
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure{"cannot open '" + path + "' for writing"};
    out << content;
    if (!out.good()) throw IoFailure{"failed writing '" + path + "'"};
}

steppde::ProblemDocument load_document(const std::string& path) {
    return steppde::parse_problem(read_file(path));
}

void print_diagnostics(const steppde::ParseError& e) {
    for (const auto& d : e.diagnostics) {
        std::cerr << (d.kind == steppde::Diagnostic::Kind::syntax ? "syntax" : "schema")
                  << " error";
        if (!d.path.empty()) std::cerr << " at " << d.path;
        std::cerr << ": " << d.message << "\n";
    }
}

void print_notes(const std::vector<steppde::DivergenceNote>& notes) {
    for (const auto& n : notes) std::cerr << steppde::to_string(n) << "\n";
}

int run_solve(const std::string& problem_path, const std::string& out_path, int nt,
              int nx, std::optional<double> x_lo, std::optional<double> x_hi) {
    const auto doc = load_document(problem_path);
    const auto sol = steppde::build(steppde::resolve(doc));

    if (nt == 0) nt = doc.settings.grid_nt.value_or(21);
    if (nx == 0) nx = doc.settings.grid_nx.value_or(21);
    const auto field = steppde::evaluate_grid(sol, nt, nx, x_lo, x_hi);
    const std::string csv = steppde::emit_csv(field);
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
    }

    print_notes(sol.diagnostics);
    for (const auto& n : sol.diagnostics) {
        if (n.severity == steppde::Severity::overflow) return kExitDivergence;
    }
    return 0;
}

int run_validate(const std::string& problem_path) {
    const auto doc = load_document(problem_path);
    const auto notes = steppde::check_divergence(steppde::resolve(doc));
    print_notes(notes);
    if (!notes.empty()) return kExitDivergence;
    std::cout << "ok\n";
    return 0;
}

int run_residual(const std::string& problem_path, int samples, double dt) {
    const auto doc = load_document(problem_path);
    const auto problem = steppde::resolve(doc);
    const auto sol = steppde::build(problem);
    const double scale = steppde::residual_scale(sol);

    std::mt19937_64 rng(kSampleSeed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int rows = problem.time_cells();
    const int cols = problem.space_cells();

    double max_analytic = 0.0;
    double max_fd = 0.0;
    int taken = 0;
    for (int s = 0; s < samples; ++s) {
        const int i = s % rows;
        const int j = (s / rows) % cols;
        const double t0 = problem.time_partition[i];
        const double t1 = problem.time_partition[i + 1];
        const double x0 = problem.space_partition[j];
        const double x1 = problem.space_partition[j + 1];
        const double margin = 2.0 * dt;
        if (t1 - t0 <= 2.0 * margin) continue;
        const double t = t0 + margin + (t1 - t0 - 2.0 * margin) * unit(rng);
        const double x = x0 + (x1 - x0) * unit(rng);

        try {
            auto [analytic, fd] = steppde::residual(sol, t, x, dt);
            max_analytic = std::max(max_analytic, std::abs(analytic));
            max_fd = std::max(max_fd, std::abs(fd));
            ++taken;
        } catch (const steppde::UnavailableValueError&) {
            // Overflowing cells carry no values to check.
        } catch (const steppde::DomainError&) {
        }
    }

    std::cout << "samples: " << taken << "\n"
              << "scale: " << scale << "\n"
              << "max analytic residual: " << max_analytic
              << " (scaled: " << (scale > 0.0 ? max_analytic / scale : 0.0) << ")\n"
              << "max fd residual: " << max_fd
              << " (scaled: " << (scale > 0.0 ? max_fd / scale : 0.0) << ")\n";
    return max_analytic <= 1e-9 * scale ? 0 : 1;
}

int run_compare(const std::string& problem_path, int nx, double dt,
                std::optional<double> t_end_opt) {
    const auto doc = load_document(problem_path);
    const auto problem = steppde::resolve(doc);
    const double t_end = t_end_opt.value_or(problem.T / 2.0);

    const auto reference = steppde::fd_solve(problem, steppde::FDConfig{nx, dt}, t_end);
    const auto sol = steppde::build(problem);
    const auto spectral = steppde::evaluate_at(sol, reference.t_values, reference.x_values);
    const auto report = steppde::compare_fields(spectral, reference);

    std::cout << "compared: " << report.compared << " points at t = " << t_end << "\n"
              << "max |spectral - fd|: " << report.max_abs << " at x = "
              << report.x_at_max << "\n"
              << "rms: " << report.rms << "\n";
    return report.max_abs <= 5e-3 ? 0 : 1;
}

int run_plot(const std::string& problem_path, const std::string& script_path,
             const std::string& csv_path, int nt, int nx) {
    const auto doc = load_document(problem_path);
    const auto sol = steppde::build(steppde::resolve(doc));
    if (nt == 0) nt = doc.settings.grid_nt.value_or(21);
    if (nx == 0) nx = doc.settings.grid_nx.value_or(21);

    const auto field = steppde::evaluate_grid(sol, nt, nx);
    write_file(csv_path, steppde::emit_csv(field));
    write_file(script_path, steppde::emit_gnuplot(field, csv_path));

    print_notes(sol.diagnostics);
    for (const auto& n : sol.diagnostics) {
        if (n.severity == steppde::Severity::overflow) return kExitDivergence;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral solver for step-coefficient linear PDEs"};
    app.require_subcommand(1);

    std::string problem_path;
    std::string out_path;
    std::string csv_path;
    int nt = 0;
    int nx = 0;
    int samples = 1000;
    double dt = 1e-3;
    int fd_nx = 256;
    double fd_dt = 1e-4;
    std::optional<double> x_lo;
    std::optional<double> x_hi;
    std::optional<double> t_end;

    auto* solve = app.add_subcommand("solve", "solve and write the field as CSV");
    solve->add_option("-p,--problem", problem_path, "problem document")->required();
    solve->add_option("-o,--output", out_path, "output CSV path ('-' for stdout)");
    solve->add_option("--nt", nt, "time samples (default 21)");
    solve->add_option("--nx", nx, "space samples (default 21)");
    solve->add_option("--strip-x0", x_lo, "restrict output to x >= this");
    solve->add_option("--strip-x1", x_hi, "restrict output to x < this");

    auto* validate = app.add_subcommand("validate", "check schema and predict divergence");
    validate->add_option("-p,--problem", problem_path, "problem document")->required();

    auto* residual = app.add_subcommand("residual", "sample the PDE residual");
    residual->add_option("-p,--problem", problem_path, "problem document")->required();
    residual->add_option("--samples", samples, "number of interior samples");
    residual->add_option("--dt", dt, "central-difference step");

    auto* compare = app.add_subcommand("compare",
                                       "compare against the finite-difference reference");
    compare->add_option("-p,--problem", problem_path, "problem document")->required();
    compare->add_option("--nx", fd_nx, "fd grid points");
    compare->add_option("--dt", fd_dt, "fd time step");
    compare->add_option("--t-end", t_end, "comparison time (default T/2)");

    auto* plot = app.add_subcommand("plot", "write CSV plus a gnuplot script");
    plot->add_option("-p,--problem", problem_path, "problem document")->required();
    plot->add_option("-o,--output", out_path, "gnuplot script path")->required();
    plot->add_option("--csv", csv_path, "CSV path the script reads")->required();
    plot->add_option("--nt", nt, "time samples (default 21)");
    plot->add_option("--nx", nx, "space samples (default 21)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(problem_path, out_path, nt, nx, x_lo, x_hi);
        if (validate->parsed()) return run_validate(problem_path);
        if (residual->parsed()) return run_residual(problem_path, samples, dt);
        if (compare->parsed()) return run_compare(problem_path, fd_nx, fd_dt, t_end);
        if (plot->parsed()) return run_plot(problem_path, out_path, csv_path, nt, nx);
    } catch (const IoFailure& e) {
        std::cerr << e.message << "\n";
        return kExitIo;
    } catch (const steppde::ParseError& e) {
        print_diagnostics(e);
        return 1;
    } catch (const steppde::ValidationError& e) {
        for (const auto& issue : e.issues) std::cerr << "invalid problem: " << issue << "\n";
        return 1;
    } catch (const steppde::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
