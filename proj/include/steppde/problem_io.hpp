#pragma once

// Problem documents (JSON), CSV emission, and gnuplot script emission.
//
// Document schema, all field names normative:
//   l, T              positive numbers
//   time_partition    array, 0 = t_0 < ... < t_I = T
//   space_partition   array, -l = x_0 < ... < x_J = l
//   order             even integer >= 2
//   coefficients      [i][j][n] nested arrays, n from 0, size order+1
//   initial           { half_c0, modes: [{k, c, d}, ...] }, k strictly
//                     increasing; an omitted k is a zero mode-pair
//   settings          optional { truncation, grid_nt, grid_nx }
//   comment           optional free-form string, ignored by the solver
// Plain decimal numbers only; no NaN/Inf literals.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steppde/solver.hpp"

namespace steppde {

struct Settings {
    std::optional<int> truncation;
    std::optional<int> grid_nt;
    std::optional<int> grid_nx;
    bool operator==(const Settings&) const = default;
};

struct ProblemDocument {
    StepProblem problem;
    Settings settings;
    std::string comment;
};

struct Diagnostic {
    enum class Kind { syntax, semantic };
    Kind kind = Kind::semantic;
    std::string path;     // JSON-pointer-ish locator, e.g. "time_partition[2]"
    std::string message;
};

struct ParseError : Error {
    std::vector<Diagnostic> diagnostics;
    explicit ParseError(std::vector<Diagnostic> diags);
};

// Throws ParseError carrying either the single syntax diagnostic or every
// semantic violation found.  Never crashes on malformed text.
ProblemDocument parse_problem(std::string_view text);

std::string serialize_problem(const ProblemDocument& doc);

// The problem with settings.truncation applied (initial state zero-padded).
StepProblem resolve(const ProblemDocument& doc);

// Header "t,x,psi"; one row per (t, x), t-major; shortest round-trip
// decimal rendering; absent entries emit the literal NA.
std::string emit_csv(const Field& field);

// Surface-plot script for the CSV written by emit_csv; exactly one splot.
std::string emit_gnuplot(const Field& field, std::string_view csv_path);

}  // namespace steppde
