#include "steppde/problem_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace steppde {

using json = nlohmann::ordered_json;

ParseError::ParseError(std::vector<Diagnostic> diags)
    : Error(diags.empty() ? std::string("parse error")
                          : "parse error: " + diags.front().message +
                                (diags.size() > 1
                                     ? " (+" + std::to_string(diags.size() - 1) +
                                           " more)"
                                     : "")),
      diagnostics(std::move(diags)) {}

namespace {

// Shortest decimal string that round-trips to the same double.
std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Collector {
    std::vector<Diagnostic> diags;

    void semantic(std::string path, std::string message) {
        diags.push_back(Diagnostic{Diagnostic::Kind::semantic, std::move(path),
                                   std::move(message)});
    }
    [[noreturn]] void fail() { throw ParseError(std::move(diags)); }
};

bool finite_number(const json& v) {
    return v.is_number() && std::isfinite(v.get<double>());
}

double number_at(const json& obj, const char* key, Collector& out, bool& ok) {
    if (!obj.contains(key)) {
        out.semantic(key, std::string("missing required field '") + key + "'");
        ok = false;
        return 0.0;
    }
    const json& v = obj.at(key);
    if (!finite_number(v)) {
        out.semantic(key, std::string("'") + key + "' must be a finite number");
        ok = false;
        return 0.0;
    }
    return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& path,
                                 Collector& out, bool& ok) {
    std::vector<double> values;
    if (!v.is_array()) {
        out.semantic(path, path + " must be an array of numbers");
        ok = false;
        return values;
    }
    values.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!finite_number(v[i])) {
            out.semantic(path + "[" + std::to_string(i) + "]",
                         "entry must be a finite number");
            ok = false;
            values.push_back(0.0);
        } else {
            values.push_back(v[i].get<double>());
        }
    }
    return values;
}

void check_known_keys(const json& obj, std::initializer_list<const char*> known,
                      const std::string& scope, Collector& out) {
    for (const auto& item : obj.items()) {
        bool found = false;
        for (const char* k : known) {
            if (item.key() == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            out.semantic(scope.empty() ? item.key() : scope + "." + item.key(),
                         "unknown field '" + item.key() + "'");
        }
    }
}

std::optional<int> int_setting(const json& obj, const char* key, int min_value,
                               const std::string& scope, Collector& out) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < min_value) {
        out.semantic(scope + "." + key, std::string("'") + key +
                                            "' must be an integer >= " +
                                            std::to_string(min_value));
        return std::nullopt;
    }
    return static_cast<int>(v.get<long long>());
}

}  // namespace

ProblemDocument parse_problem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        // nlohmann reports line/column (or byte) positions in the message.
        throw ParseError({Diagnostic{Diagnostic::Kind::syntax, "", e.what()}});
    }

    Collector out;
    if (!doc.is_object()) {
        out.semantic("", "document root must be an object");
        out.fail();
    }

    check_known_keys(doc,
                     {"l", "T", "time_partition", "space_partition", "order",
                      "coefficients", "initial", "settings", "comment"},
                     "", out);

    ProblemDocument result;
    StepProblem& p = result.problem;
    bool ok = true;

    p.l = number_at(doc, "l", out, ok);
    p.T = number_at(doc, "T", out, ok);
    if (doc.contains("time_partition")) {
        p.time_partition = number_array(doc["time_partition"], "time_partition", out, ok);
    } else {
        out.semantic("time_partition", "missing required field 'time_partition'");
        ok = false;
    }
    if (doc.contains("space_partition")) {
        p.space_partition =
            number_array(doc["space_partition"], "space_partition", out, ok);
    } else {
        out.semantic("space_partition", "missing required field 'space_partition'");
        ok = false;
    }

    if (!doc.contains("order") || !doc["order"].is_number_integer()) {
        out.semantic("order", "'order' must be an integer");
        ok = false;
    } else {
        // evenness and range are value-level checks left to validate_problem
        p.order = static_cast<int>(doc["order"].get<long long>());
    }

    if (!doc.contains("coefficients") || !doc["coefficients"].is_array()) {
        out.semantic("coefficients", "'coefficients' must be a 3-D array [i][j][n]");
        ok = false;
    } else {
        const json& table = doc["coefficients"];
        for (std::size_t i = 0; i < table.size(); ++i) {
            std::vector<std::vector<double>> row;
            if (!table[i].is_array()) {
                out.semantic("coefficients[" + std::to_string(i) + "]",
                             "must be an array of per-cell coefficient arrays");
                ok = false;
            } else {
                for (std::size_t j = 0; j < table[i].size(); ++j) {
                    row.push_back(number_array(
                        table[i][j],
                        "coefficients[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                        out, ok));
                }
            }
            p.coeffs.push_back(std::move(row));
        }
    }

    if (!doc.contains("initial") || !doc["initial"].is_object()) {
        out.semantic("initial", "'initial' must be an object");
        ok = false;
    } else {
        const json& init = doc["initial"];
        check_known_keys(init, {"half_c0", "modes"}, "initial", out);
        bool init_ok = true;
        p.initial.half_c0 = number_at(init, "half_c0", out, init_ok);
        int max_k = 0;
        std::vector<std::tuple<int, double, double>> entries;
        if (!init.contains("modes") || !init["modes"].is_array()) {
            out.semantic("initial.modes", "'modes' must be an array of {k, c, d}");
            init_ok = false;
        } else {
            int prev_k = 0;
            const json& modes = init["modes"];
            for (std::size_t m = 0; m < modes.size(); ++m) {
                const std::string path = "initial.modes[" + std::to_string(m) + "]";
                const json& entry = modes[m];
                if (!entry.is_object()) {
                    out.semantic(path, "mode entry must be an object {k, c, d}");
                    init_ok = false;
                    continue;
                }
                check_known_keys(entry, {"k", "c", "d"}, path, out);
                if (!entry.contains("k") || !entry["k"].is_number_integer() ||
                    entry["k"].get<long long>() < 1) {
                    out.semantic(path + ".k", "'k' must be an integer >= 1");
                    init_ok = false;
                    continue;
                }
                const int k = static_cast<int>(entry["k"].get<long long>());
                if (k <= prev_k) {
                    out.semantic(path + ".k", "mode indices must be strictly increasing");
                    init_ok = false;
                }
                prev_k = k;
                bool entry_ok = true;
                const double c = number_at(entry, "c", out, entry_ok);
                const double d = number_at(entry, "d", out, entry_ok);
                init_ok = init_ok && entry_ok;
                entries.emplace_back(k, c, d);
                max_k = std::max(max_k, k);
            }
        }
        if (init_ok) {
            p.initial.modes.assign(std::max(max_k, 1), Mode{});
            for (const auto& [k, c, d] : entries) {
                p.initial.modes[k - 1] = Mode{c, d};
            }
        } else {
            ok = false;
        }
    }

    if (doc.contains("settings")) {
        if (!doc["settings"].is_object()) {
            out.semantic("settings", "'settings' must be an object");
            ok = false;
        } else {
            const json& s = doc["settings"];
            check_known_keys(s, {"truncation", "grid_nt", "grid_nx"}, "settings", out);
            result.settings.truncation = int_setting(s, "truncation", 1, "settings", out);
            result.settings.grid_nt = int_setting(s, "grid_nt", 2, "settings", out);
            result.settings.grid_nx = int_setting(s, "grid_nx", 2, "settings", out);
            if (result.settings.truncation &&
                *result.settings.truncation < p.initial.truncation()) {
                out.semantic("settings.truncation",
                             "truncation below the highest initial mode would drop "
                             "initial-condition content");
            }
        }
    }

    if (doc.contains("comment")) {
        if (!doc["comment"].is_string()) {
            out.semantic("comment", "'comment' must be a string");
        } else {
            result.comment = doc["comment"].get<std::string>();
        }
    }

    // Value-level invariants (monotone partitions, evenness, dimensions, ...)
    // reported through the same channel, with every violation listed; only
    // structural failures above prevent this pass.
    if (ok) {
        for (std::string& issue : validate_problem(p)) {
            // messages lead with the offending field, which is the locator
            const auto cut = issue.find(' ');
            std::string path = cut == std::string::npos ? "" : issue.substr(0, cut);
            out.semantic(std::move(path), std::move(issue));
        }
    }

    if (!out.diags.empty()) out.fail();
    return result;
}

std::string serialize_problem(const ProblemDocument& doc) {
    json j;
    j["l"] = doc.problem.l;
    j["T"] = doc.problem.T;
    j["time_partition"] = doc.problem.time_partition;
    j["space_partition"] = doc.problem.space_partition;
    j["order"] = doc.problem.order;
    j["coefficients"] = doc.problem.coeffs;

    json init;
    init["half_c0"] = doc.problem.initial.half_c0;
    json modes = json::array();
    // All modes 1..K written out, zeros included, so the parsed truncation
    // is exactly the serialized one.
    for (int k = 1; k <= doc.problem.initial.truncation(); ++k) {
        const Mode& m = doc.problem.initial.modes[k - 1];
        modes.push_back(json{{"k", k}, {"c", m.c}, {"d", m.d}});
    }
    init["modes"] = std::move(modes);
    j["initial"] = std::move(init);

    if (doc.settings.truncation || doc.settings.grid_nt || doc.settings.grid_nx) {
        json s;
        if (doc.settings.truncation) s["truncation"] = *doc.settings.truncation;
        if (doc.settings.grid_nt) s["grid_nt"] = *doc.settings.grid_nt;
        if (doc.settings.grid_nx) s["grid_nx"] = *doc.settings.grid_nx;
        j["settings"] = std::move(s);
    }
    if (!doc.comment.empty()) j["comment"] = doc.comment;

    return j.dump(2) + "\n";
}

StepProblem resolve(const ProblemDocument& doc) {
    StepProblem p = doc.problem;
    if (doc.settings.truncation && *doc.settings.truncation > p.initial.truncation()) {
        p.initial.modes.resize(*doc.settings.truncation, Mode{});
    }
    return p;
}

std::string emit_csv(const Field& field) {
    const std::size_t nt = field.t_values.size();
    const std::size_t nx = field.x_values.size();
    if (field.values.size() != nt * nx || field.present.size() != nt * nx) {
        throw InvalidInputError("field dimensions do not match its grid");
    }

    std::string out = "t,x,psi\n";
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            out += shortest(field.t_values[it]);
            out += ',';
            out += shortest(field.x_values[ix]);
            out += ',';
            const std::size_t idx = field.index(it, ix);
            out += field.present[idx] ? shortest(field.values[idx]) : "NA";
            out += '\n';
        }
    }
    return out;
}

std::string emit_gnuplot(const Field& field, std::string_view csv_path) {
    if (field.t_values.empty() || field.x_values.empty()) {
        throw InvalidInputError("cannot plot an empty field");
    }

    // gnuplot single-quoted strings escape ' by doubling it.
    std::string path;
    for (char ch : csv_path) {
        path += ch;
        if (ch == '\'') path += '\'';
    }

    std::ostringstream os;
    os << "# surface plot of a steppde field (" << field.provenance << ")\n"
       << "set datafile separator ','\n"
       << "set datafile missing 'NA'\n"
       << "set xlabel 't'\n"
       << "set ylabel 'x'\n"
       << "set zlabel 'Ψ'\n"
       << "set title '" << field.provenance << "'\n"
       << "set dgrid3d " << field.t_values.size() << "," << field.x_values.size()
       << "\n"
       << "set hidden3d\n"
       << "splot '" << path << "' using 1:2:3 every ::1 with lines notitle\n";
    return os.str();
}

}  // namespace steppde
