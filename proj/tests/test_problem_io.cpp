#include <doctest.h>

#include <charconv>
#include <limits>
#include <random>
#include <sstream>

#include "steppde/problem_io.hpp"
#include "test_helpers.hpp"

using namespace steppde;
using testutil::kPi;

namespace {

bool state_bits_equal(const StepProblem& a, const StepProblem& b) {
    if (!testutil::bits_equal(a.l, b.l) || !testutil::bits_equal(a.T, b.T)) return false;
    if (a.time_partition.size() != b.time_partition.size()) return false;
    for (std::size_t i = 0; i < a.time_partition.size(); ++i) {
        if (!testutil::bits_equal(a.time_partition[i], b.time_partition[i])) return false;
    }
    if (a.space_partition.size() != b.space_partition.size()) return false;
    for (std::size_t i = 0; i < a.space_partition.size(); ++i) {
        if (!testutil::bits_equal(a.space_partition[i], b.space_partition[i])) return false;
    }
    if (a.order != b.order || a.coeffs.size() != b.coeffs.size()) return false;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i].size() != b.coeffs[i].size()) return false;
        for (std::size_t j = 0; j < a.coeffs[i].size(); ++j) {
            if (a.coeffs[i][j].size() != b.coeffs[i][j].size()) return false;
            for (std::size_t n = 0; n < a.coeffs[i][j].size(); ++n) {
                if (!testutil::bits_equal(a.coeffs[i][j][n], b.coeffs[i][j][n]))
                    return false;
            }
        }
    }
    if (!testutil::bits_equal(a.initial.half_c0, b.initial.half_c0)) return false;
    if (a.initial.modes.size() != b.initial.modes.size()) return false;
    for (std::size_t i = 0; i < a.initial.modes.size(); ++i) {
        if (!testutil::bits_equal(a.initial.modes[i].c, b.initial.modes[i].c) ||
            !testutil::bits_equal(a.initial.modes[i].d, b.initial.modes[i].d))
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("parse: the two-region order-22 fixture") {
    const auto doc = parse_problem(testutil::read_file(testutil::fixture_path("ex3_3.json")));
    const StepProblem& p = doc.problem;
    CHECK(p.l == kPi);
    CHECK(p.T == 2.0 * kPi);
    CHECK(p.time_cells() == 2);
    CHECK(p.space_cells() == 1);
    CHECK(p.order == 22);
    CHECK(p.coeffs[0][0][2] == 1.0);
    CHECK(p.coeffs[0][0][22] == 2.0);
    CHECK(p.coeffs[1][0][2] == 1.55);
    CHECK(p.coeffs[1][0][22] == -2.0);
    CHECK(p.initial.half_c0 == 0.0075);
    REQUIRE(p.initial.truncation() == 1);
    CHECK(p.initial.modes[0].c == 0.0);
    CHECK(p.initial.modes[0].d == 5.0);
    CHECK(!doc.comment.empty());
}

TEST_CASE("parse: every shipped fixture loads and builds") {
    for (const char* name :
         {"ex3_3.json", "ex3_4.json", "ex3_5.json", "ex3_6.json", "ex3_7.json",
          "ex3_8.json", "rem3_10.json", "heat.json", "heat_step.json",
          "two_strip.json"}) {
        CAPTURE(name);
        const auto doc = parse_problem(testutil::read_file(testutil::fixture_path(name)));
        CHECK_NOTHROW(build(resolve(doc)));
    }
}

TEST_CASE("parse: empty or malformed text is a syntax error") {
    for (const char* text : {"", "{", "not json", "[1, 2"}) {
        CAPTURE(text);
        try {
            parse_problem(text);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            REQUIRE(e.diagnostics.size() == 1);
            CHECK(e.diagnostics[0].kind == Diagnostic::Kind::syntax);
        }
    }
}

TEST_CASE("parse: semantic violations are all reported with paths") {
    // non-monotone time partition, odd order, unknown field
    const std::string text = R"({
      "l": 3.141592653589793, "T": 2.0, "bogus": 1,
      "time_partition": [0, 2, 1],
      "space_partition": [-3.141592653589793, 3.141592653589793],
      "order": 3,
      "coefficients": [[[0,0,1,0]],[[0,0,1,0]]],
      "initial": {"half_c0": 0, "modes": [{"k": 1, "c": 0, "d": 1}]}
    })";
    try {
        parse_problem(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        bool monotone = false, order = false, unknown = false;
        for (const auto& d : e.diagnostics) {
            CHECK(d.kind == Diagnostic::Kind::semantic);
            if (d.message.find("not strictly increasing at index 2") != std::string::npos)
                monotone = true;
            if (d.path == "order") order = true;
            if (d.path == "bogus") unknown = true;
        }
        CHECK(monotone);
        CHECK(order);
        CHECK(unknown);
    }
}

TEST_CASE("parse: mode lists must be strictly increasing with gaps as zeros") {
    const std::string text = R"({
      "l": 1, "T": 1,
      "time_partition": [0, 1],
      "space_partition": [-1, 1],
      "order": 2,
      "coefficients": [[[0, 0, 1]]],
      "initial": {"half_c0": 0.5, "modes": [{"k": 3, "c": 2, "d": -1}]}
    })";
    const auto doc = parse_problem(text);
    REQUIRE(doc.problem.initial.truncation() == 3);
    CHECK(doc.problem.initial.modes[0].c == 0.0);
    CHECK(doc.problem.initial.modes[1].d == 0.0);
    CHECK(doc.problem.initial.modes[2].c == 2.0);
    CHECK(doc.problem.initial.modes[2].d == -1.0);

    const std::string bad = R"({
      "l": 1, "T": 1,
      "time_partition": [0, 1],
      "space_partition": [-1, 1],
      "order": 2,
      "coefficients": [[[0, 0, 1]]],
      "initial": {"half_c0": 0, "modes": [{"k": 2, "c": 0, "d": 1}, {"k": 2, "c": 1, "d": 0}]}
    })";
    CHECK_THROWS_AS(parse_problem(bad), ParseError);
}

TEST_CASE("parse: truncation below the initial modes is rejected") {
    const std::string text = R"({
      "l": 1, "T": 1,
      "time_partition": [0, 1],
      "space_partition": [-1, 1],
      "order": 2,
      "coefficients": [[[0, 0, 1]]],
      "initial": {"half_c0": 0, "modes": [{"k": 4, "c": 0, "d": 1}]},
      "settings": {"truncation": 2}
    })";
    CHECK_THROWS_AS(parse_problem(text), ParseError);
}

TEST_CASE("resolve pads the initial state to the requested truncation") {
    const std::string text = R"({
      "l": 1, "T": 1,
      "time_partition": [0, 1],
      "space_partition": [-1, 1],
      "order": 2,
      "coefficients": [[[0, 0, 1]]],
      "initial": {"half_c0": 0, "modes": [{"k": 1, "c": 0, "d": 1}]},
      "settings": {"truncation": 8, "grid_nt": 11, "grid_nx": 13}
    })";
    const auto doc = parse_problem(text);
    CHECK(doc.settings.truncation == 8);
    CHECK(doc.settings.grid_nt == 11);
    CHECK(doc.settings.grid_nx == 13);
    const auto p = resolve(doc);
    CHECK(p.initial.truncation() == 8);
    CHECK(p.initial.modes[7].c == 0.0);
    CHECK(doc.problem.initial.truncation() == 1);  // document untouched
}

TEST_CASE("round trip: serialize then parse is the identity") {
    for (const char* name : {"ex3_3.json", "ex3_5.json", "two_strip.json"}) {
        CAPTURE(name);
        const auto doc = parse_problem(testutil::read_file(testutil::fixture_path(name)));
        const auto again = parse_problem(serialize_problem(doc));
        CHECK(state_bits_equal(doc.problem, again.problem));
        CHECK(doc.settings == again.settings);
        CHECK(doc.comment == again.comment);
    }
}

TEST_CASE("round trip: random documents survive bit for bit") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_int_distribution<int> dim(1, 3);
    for (int rep = 0; rep < 50; ++rep) {
        ProblemDocument doc;
        StepProblem& p = doc.problem;
        const int I = dim(rng);
        const int J = dim(rng);
        const int K = dim(rng);
        p.l = std::abs(coef(rng)) + 0.5;
        p.T = std::abs(coef(rng)) + 0.5;
        p.time_partition.resize(I + 1);
        for (int i = 0; i <= I; ++i)
            p.time_partition[i] = p.T * static_cast<double>(i) / I;
        p.time_partition.front() = 0.0;
        p.time_partition.back() = p.T;
        p.space_partition.resize(J + 1);
        for (int j = 0; j <= J; ++j)
            p.space_partition[j] = -p.l + 2.0 * p.l * static_cast<double>(j) / J;
        p.space_partition.front() = -p.l;
        p.space_partition.back() = p.l;
        p.order = 2 * dim(rng);
        p.coeffs.assign(I, std::vector<std::vector<double>>(
                               J, std::vector<double>(p.order + 1)));
        for (auto& row : p.coeffs)
            for (auto& cell : row)
                for (auto& v : cell) v = coef(rng);
        p.initial.half_c0 = coef(rng);
        p.initial.modes.resize(K);
        for (auto& m : p.initial.modes) m = Mode{coef(rng), coef(rng)};
        if (rep % 3 == 0) doc.settings.truncation = K + 2;
        if (rep % 4 == 0) doc.comment = "fuzz case " + std::to_string(rep);

        const auto again = parse_problem(serialize_problem(doc));
        CHECK(state_bits_equal(p, again.problem));
        CHECK(doc.settings == again.settings);
        CHECK(doc.comment == again.comment);
    }
}

TEST_CASE("parse never crashes on arbitrary mutations") {
    const std::string valid = testutil::read_file(testutil::fixture_path("heat.json"));
    std::mt19937_64 rng(73);
    std::uniform_int_distribution<int> pos(0, static_cast<int>(valid.size()) - 1);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int rep = 0; rep < 500; ++rep) {
        std::string text = valid;
        const int mutations = 1 + rep % 5;
        for (int m = 0; m < mutations && !text.empty(); ++m) {
            const std::size_t at = static_cast<std::size_t>(pos(rng)) % text.size();
            switch (rep % 3) {
                case 0: text[at] = static_cast<char>(byte(rng)); break;
                case 1: text.erase(at, 1); break;
                default: text.insert(at, 1, static_cast<char>(byte(rng)));
            }
        }
        try {
            (void)parse_problem(text);
        } catch (const ParseError&) {
            // structured failure is the contract
        }
    }
}

TEST_CASE("emit_csv: minimal field and exact round-trip of values") {
    Field f;
    f.t_values = {0.0};
    f.x_values = {0.0};
    f.values = {0.0};
    f.present = {1};
    CHECK(emit_csv(f) == "t,x,psi\n0,0,0\n");

    // values re-parse to bit-identical doubles
    const auto sol = build(testutil::make_ex3_3());
    const auto field = evaluate_grid(sol, 7, 9);
    const std::string csv = emit_csv(field);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,x,psi");
    std::size_t idx = 0;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const std::string cell = line.substr(c2 + 1);
        double parsed = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
        REQUIRE(res.ec == std::errc());
        CHECK(testutil::bits_equal(parsed, field.values[idx]));
        ++idx;
    }
    CHECK(idx == field.values.size());
}

TEST_CASE("emit_csv: absent entries render NA") {
    Field f;
    f.t_values = {0.0, 1.0};
    f.x_values = {0.5};
    f.values = {2.5, std::numeric_limits<double>::quiet_NaN()};
    f.present = {1, 0};
    CHECK(emit_csv(f) == "t,x,psi\n0,0.5,2.5\n1,0.5,NA\n");
}

TEST_CASE("emit_gnuplot: exactly one splot, missing-data handling, no empty fields") {
    const auto sol = build(testutil::make_ex3_3());
    const auto field = evaluate_grid(sol, 5, 5);
    const std::string script = emit_gnuplot(field, "out.csv");

    std::size_t count = 0;
    for (std::size_t at = script.find("splot"); at != std::string::npos;
         at = script.find("splot", at + 1)) {
        ++count;
    }
    CHECK(count == 1);
    CHECK(script.find("'out.csv'") != std::string::npos);
    CHECK(script.find("missing 'NA'") != std::string::npos);

    Field empty;
    CHECK_THROWS_AS(emit_gnuplot(empty, "x.csv"), InvalidInputError);
}

TEST_CASE("emit_gnuplot: golden script for the two-region fixture") {
    const auto doc = parse_problem(testutil::read_file(testutil::fixture_path("ex3_3.json")));
    const auto sol = build(resolve(doc));
    const auto field = evaluate_grid(sol, 21, 21);
    const std::string script = emit_gnuplot(field, "ex3_3.csv");
    const std::string golden = testutil::read_file(testutil::fixture_path("golden/ex3_3.gp"));
    CHECK(script == golden);
}
