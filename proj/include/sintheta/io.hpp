#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sintheta/bounds.hpp"
#include "sintheta/harness.hpp"
#include "sintheta/matrix.hpp"

namespace sintheta::io {

using json = nlohmann::ordered_json;

/// Round-trip-safe decimal for CSV output (17 significant digits).
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// JSON has no infinity literal; gaps use the string "inf" instead.
inline json num_or_inf(double x) {
    if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
    return json(x);
}

inline double parse_num_or_inf(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        throw std::invalid_argument("expected a number or \"inf\", got \"" + s + "\"");
    }
    return j.get<double>();
}

// ---------------------------------------------------------------- matrices

inline DenseMatrix read_matrix_csv(std::istream& in, const std::string& name) {
    std::vector<double> entries;
    std::size_t rows = 0, cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t this_cols = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                entries.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::invalid_argument(name + ": cannot parse '" + cell + "' as a number");
            }
            ++this_cols;
        }
        if (rows == 0)
            cols = this_cols;
        else if (this_cols != cols)
            throw std::invalid_argument(name + ": row " + std::to_string(rows + 1) + " has " +
                                        std::to_string(this_cols) + " entries, expected " +
                                        std::to_string(cols));
        ++rows;
    }
    if (rows == 0) throw std::invalid_argument(name + ": empty matrix file");
    return DenseMatrix(rows, cols, std::move(entries));
}

inline DenseMatrix read_matrix_json(std::istream& in, const std::string& name) {
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw std::invalid_argument(name + ": JSON parse error: " + e.what());
    }
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw std::invalid_argument(name + ": matrix JSON needs rows, cols, data");
    const auto rows = j["rows"].get<std::size_t>();
    const auto cols = j["cols"].get<std::size_t>();
    auto data = j["data"].get<std::vector<double>>();
    if (data.size() != rows * cols)
        throw std::invalid_argument(name + ": data length does not match rows x cols");
    return DenseMatrix(rows, cols, std::move(data));
}

inline DenseMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(path + ": cannot open");
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return read_matrix_json(in, path);
    return read_matrix_csv(in, path);
}

inline void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_number(m(i, j));
        }
        out << '\n';
    }
}

inline void write_matrix_file(const std::string& path, const DenseMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument(path + ": cannot open for writing");
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        json j{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
        out << j.dump(2) << '\n';
    } else {
        write_matrix_csv(out, m);
    }
}

// ---------------------------------------------------------------- reports

inline json to_json(const BoundLine& l) {
    json j;
    j["observed"] = l.observed;
    j["bound"] = l.bound;
    j["holds"] = l.holds;
    j["ratio"] = l.ratio ? json(*l.ratio) : json(nullptr);
    return j;
}

inline json to_json(const GapInfo& g) {
    json j;
    j["upper_gap"] = num_or_inf(g.upper_gap);
    j["lower_gap"] = num_or_inf(g.lower_gap);
    j["population_gap"] = num_or_inf(g.population_gap);
    j["classical_delta"] = num_or_inf(g.classical_delta);
    return j;
}

inline json to_json(const BoundReport& r) {
    json j;
    j["r"] = r.r;
    j["s"] = r.s;
    j["d"] = r.d;
    j["gaps"] = to_json(r.gaps);
    j["diff_op_norm"] = r.diff_op_norm;
    j["diff_frob_norm"] = r.diff_frob_norm;
    j["observed_sin_theta_frob"] = r.observed_sin_theta_frob;
    j["observed_sin_theta_op"] = r.observed_sin_theta_op;
    j["observed_alignment_distance"] = r.observed_alignment_distance;
    j["classical_frob"] = r.classical_frob ? to_json(*r.classical_frob)
                                           : json("inapplicable: delta <= 0");
    j["classical_op"] = r.classical_op ? to_json(*r.classical_op)
                                       : json("inapplicable: delta <= 0");
    j["variant_sin"] = to_json(r.variant_sin);
    j["variant_align"] = to_json(r.variant_align);
    j["sharp_numerator_sin"] = to_json(r.sharp_numerator_sin);
    j["sharp_numerator_align"] = to_json(r.sharp_numerator_align);
    if (r.corollary_sin) j["corollary_sin"] = to_json(*r.corollary_sin);
    if (r.corollary_diff) j["corollary_diff"] = to_json(*r.corollary_diff);
    j["numerator_min_is_operator"] = r.numerator_min_is_operator;
    j["degenerate_full_block"] = r.degenerate_full_block;
    return j;
}

inline json to_json(const SpectrumCheck& c) {
    return json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}};
}

inline json to_json(const TrialRecord& rec) {
    json j;
    j["trial_index"] = rec.trial_index;
    j["report"] = to_json(rec.report);
    if (rec.left_report) j["left_report"] = to_json(*rec.left_report);
    if (rec.factor_check)
        j["factor_check"] = json{{"op", to_json(rec.factor_check->op)},
                                 {"frob", to_json(rec.factor_check->frob)}};
    return j;
}

inline json to_json(const RatioStats& s) {
    json j;
    j["count"] = s.count;
    if (s.count) {
        j["min"] = s.min;
        j["mean"] = *s.mean();
        j["max"] = s.max;
    }
    return j;
}

inline json to_json(const CampaignSummary& s) {
    json j;
    j["trials"] = s.trials;
    j["tightness"] = json{{"variant_sin", to_json(s.variant_sin)},
                          {"variant_align", to_json(s.variant_align)},
                          {"sharp_numerator_sin", to_json(s.sharp_sin)},
                          {"sharp_numerator_align", to_json(s.sharp_align)},
                          {"classical_frob", to_json(s.classical_frob)},
                          {"classical_op", to_json(s.classical_op)},
                          {"corollary_sin", to_json(s.corollary_sin)},
                          {"corollary_diff", to_json(s.corollary_diff)}};
    j["classical_inapplicable"] = s.classical_inapplicable;
    j["numerator_min_is_operator"] = s.numerator_min_is_operator;
    return j;
}

constexpr const char* kSchemaVersion = "1";

/// Top-level document every command emits: an invocation echo plus records
/// and an optional summary.  Round-trips byte-for-byte through dump/parse.
inline json make_document(const std::string& command, json flags, std::uint64_t seed,
                          json records, json summary) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["invocation"] = json{{"command", command}, {"flags", std::move(flags)}, {"seed", seed}};
    j["records"] = std::move(records);
    j["summary"] = std::move(summary);
    return j;
}

// One row per record; the header names the columns.
inline std::string records_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    out << "trial_index,side,r,s,d,population_gap,classical_delta,"
           "observed_sin_theta_frob,observed_sin_theta_op,observed_alignment_distance,"
           "classical_frob_bound,classical_op_bound,variant_sin_bound,variant_align_bound,"
           "sharp_numerator_sin_bound,sharp_numerator_align_bound,"
           "corollary_sin_bound,corollary_diff_bound,numerator_min_is_operator\n";
    auto row = [&](std::size_t trial, const char* side, const BoundReport& r) {
        out << trial << ',' << side << ',' << r.r << ',' << r.s << ',' << r.d << ','
            << format_number(r.gaps.population_gap) << ','
            << format_number(r.gaps.classical_delta) << ','
            << format_number(r.observed_sin_theta_frob) << ','
            << format_number(r.observed_sin_theta_op) << ','
            << format_number(r.observed_alignment_distance) << ','
            << (r.classical_frob ? format_number(r.classical_frob->bound) : "inapplicable") << ','
            << (r.classical_op ? format_number(r.classical_op->bound) : "inapplicable") << ','
            << format_number(r.variant_sin.bound) << ','
            << format_number(r.variant_align.bound) << ','
            << format_number(r.sharp_numerator_sin.bound) << ','
            << format_number(r.sharp_numerator_align.bound) << ','
            << (r.corollary_sin ? format_number(r.corollary_sin->bound) : "") << ','
            << (r.corollary_diff ? format_number(r.corollary_diff->bound) : "") << ','
            << (r.numerator_min_is_operator ? 1 : 0) << '\n';
    };
    for (const TrialRecord& rec : records) {
        row(rec.trial_index, rec.left_report ? "right" : "symmetric", rec.report);
        if (rec.left_report) row(rec.trial_index, "left", *rec.left_report);
    }
    return out.str();
}

}  // namespace sintheta::io
