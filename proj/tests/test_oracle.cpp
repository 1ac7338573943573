#include <doctest.h>

#include <cmath>

#include "steppde/oracle.hpp"
#include "test_helpers.hpp"

using namespace steppde;
using testutil::kPi;
using testutil::make_heat;

namespace {

StepProblem make_heat_step() {
    StepProblem p = make_heat();
    p.time_partition = {0.0, 0.25, 1.0};
    p.coeffs = {{{0.0, 0.0, 1.0}}, {{0.0, 0.0, 0.5}}};
    return p;
}

double fd_error_vs_exact(int nx, double dt) {
    const auto field = fd_solve(make_heat(), FDConfig{nx, dt}, 0.5);
    double worst = 0.0;
    const double amp = std::exp(-0.5);
    for (std::size_t i = 0; i < field.x_values.size(); ++i) {
        worst = std::max(worst,
                         std::abs(field.values[i] - amp * std::sin(field.x_values[i])));
    }
    return worst;
}

}  // namespace

TEST_CASE("fd_solve: heat fixture lands on the exact decay") {
    CHECK(fd_error_vs_exact(256, 1e-4) <= 1e-3);
}

TEST_CASE("fd_solve: zero initial condition stays exactly zero") {
    StepProblem p = make_heat();
    p.initial.half_c0 = 0.0;
    p.initial.modes = {Mode{0.0, 0.0}};
    const auto field = fd_solve(p, FDConfig{32, 1e-3}, 0.5);
    for (double v : field.values) CHECK(v == 0.0);
}

TEST_CASE("fd_solve: pointwise A0 growth reproduces e^t") {
    StepProblem p = make_heat();
    p.coeffs = {{{1.0, 0.0, 0.0}}};
    p.T = 2.0;
    p.time_partition = {0.0, 2.0};
    const auto field = fd_solve(p, FDConfig{64, 1e-3}, 1.0);
    const double amp = std::exp(1.0);
    for (std::size_t i = 0; i < field.x_values.size(); ++i) {
        CHECK(std::abs(field.values[i] - amp * std::sin(field.x_values[i])) <= 1e-6);
    }
}

TEST_CASE("fd_solve: halving dx cuts the heat error by >= 3.5") {
    const double coarse = fd_error_vs_exact(64, 1e-3);
    const double fine = fd_error_vs_exact(128, 2.5e-4);
    CHECK(coarse / fine >= 3.5);
}

TEST_CASE("fd_solve: config and order guards") {
    auto p = make_heat();
    CHECK_THROWS_AS(fd_solve(p, FDConfig{8, 1e-4}, 0.5), ConfigError);
    CHECK_THROWS_AS(fd_solve(p, FDConfig{256, 1e-2}, 0.5), ConfigError);  // unstable
    CHECK_THROWS_AS(fd_solve(p, FDConfig{256, 1e-4}, 2.0), DomainError);  // t_end >= T

    auto p22 = testutil::make_ex3_3();
    CHECK_THROWS_AS(fd_solve(p22, FDConfig{256, 1e-4}, 1.0), UnsupportedOrderError);

    // a short first segment inflates the effective step past the bound
    StepProblem awkward = make_heat();
    const double bound = 0.5 * (2.0 * kPi / 64) * (2.0 * kPi / 64) / 2.0;
    awkward.time_partition = {0.0, 1.4 * bound, 1.0};
    awkward.coeffs = {{{0.0, 0.0, 1.0}}, {{0.0, 0.0, 1.0}}};
    CHECK_THROWS_AS(fd_solve(awkward, FDConfig{64, bound}, 0.5), ConfigError);

    // slightly incommensurate steps are absorbed by the landing adjustment
    auto stepped = make_heat_step();
    CHECK_NOTHROW(fd_solve(stepped, FDConfig{64, 1.7e-3}, 0.5));
}

TEST_CASE("spectral vs fd: heat and stepped-diffusivity fixtures") {
    {
        const auto problem = make_heat();
        const auto reference = fd_solve(problem, FDConfig{256, 1e-4}, 0.5);
        const auto spectral =
            evaluate_at(build(problem), reference.t_values, reference.x_values);
        const auto report = compare_fields(spectral, reference);
        CHECK(report.max_abs <= 1e-3);
        CHECK(report.compared == 256);
    }
    {
        const auto problem = make_heat_step();
        const auto reference = fd_solve(problem, FDConfig{256, 1e-4}, 0.5);
        const auto spectral =
            evaluate_at(build(problem), reference.t_values, reference.x_values);
        const auto report = compare_fields(spectral, reference);
        CHECK(report.max_abs <= 5e-3);
    }
}

TEST_CASE("compare_fields: identical, offset, and mismatched grids") {
    Field a;
    a.t_values = {0.0};
    a.x_values = {0.0, 1.0, 2.0, 3.0};
    a.values = {1.0, 2.0, 3.0, 4.0};
    a.present = {1, 1, 1, 1};

    const auto same = compare_fields(a, a);
    CHECK(same.max_abs == 0.0);
    CHECK(same.rms == 0.0);

    Field b = a;
    for (double& v : b.values) v += 1.0;
    const auto offset = compare_fields(a, b);
    CHECK(offset.max_abs == 1.0);
    CHECK(offset.rms == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(offset.compared == 4);

    Field c = a;
    c.present[2] = 0;
    CHECK(compare_fields(a, c).compared == 3);

    Field mismatched = a;
    mismatched.x_values.push_back(4.0);
    CHECK_THROWS_AS(compare_fields(a, mismatched), InvalidInputError);
}
