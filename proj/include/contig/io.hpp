#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"  // nlohmann, vendored

#include "contig/complex.hpp"
#include "contig/contiguity.hpp"
#include "contig/error.hpp"
#include "contig/estimator.hpp"
#include "contig/homology.hpp"
#include "contig/metric.hpp"

namespace contig::io {

using nlohmann::json;

/// Shortest decimal text that parses back to the same double.
inline std::string decimal(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline double parse_decimal(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ParseError("not a number: '" + std::string(s) + "'");
    return v;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- complexes ----

inline json complex_to_json(const SimplicialComplex& c)
{
    auto facets = c.maximal_simplices();
    std::sort(facets.begin(), facets.end(),
              [](const Simplex& a, const Simplex& b) { return a.vertices() < b.vertices(); });
    json out;
    out["vertex_count"] = c.vertex_count();
    json fs = json::array();
    for (const auto& f : facets)
        fs.push_back(f.vertices());
    out["facets"] = std::move(fs);
    if (!c.labels().empty())
        out["labels"] = c.labels();
    return out;
}

inline SimplicialComplex complex_from_json(const json& j, std::size_t cap = SimplicialComplex::kDefaultSimplexCap)
{
    try {
        const auto n = j.at("vertex_count").get<std::size_t>();
        const auto facets = j.at("facets").get<std::vector<std::vector<VertexId>>>();
        auto c = SimplicialComplex::from_facets(n, facets, cap);
        if (j.contains("labels") && !j["labels"].is_null())
            c.set_labels(j["labels"].get<std::vector<std::string>>());
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed complex document: ") + e.what());
    }
}

inline SimplicialComplex complex_from_file(const std::string& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return complex_from_json(j);
}

// ---- maps and partitions ----

inline json map_to_json(const std::string& domain, const std::string& codomain, const Assignment& f)
{
    return {{"domain", domain}, {"codomain", codomain}, {"assignment", f}};
}

inline json partition_to_json(const ClassPartition& p)
{
    json reps = json::array();
    for (std::size_t r : p.representatives())
        reps.push_back(p.maps[r]);
    return {{"map_count", p.maps.size()},
            {"class_count", p.class_count},
            {"class_sizes", p.class_sizes()},
            {"class_representatives", std::move(reps)}};
}

// ---- barcodes and filtrations ----

/// Grades and bar endpoints are written as decimal strings so thresholds round-trip exactly.
inline json barcode_to_json(const Barcode& b)
{
    json bars = json::array();
    for (const auto& [birth, death] : b.bars)
        bars.push_back({decimal(birth), std::isinf(death) ? json(nullptr) : json(decimal(death))});
    json grades = json::array();
    for (double g : b.grades)
        grades.push_back(decimal(g));
    return {{"degree", b.degree}, {"bars", std::move(bars)}, {"grades", std::move(grades)}};
}

inline std::string barcode_text(const Barcode& b)
{
    std::string out = "H" + std::to_string(b.degree) + "\n";
    for (const auto& [birth, death] : b.bars)
        out += "  [" + decimal(birth) + ", " + (std::isinf(death) ? std::string("inf") : decimal(death)) + ")\n";
    return out;
}

inline json filtration_to_json(const RipsFiltration& f)
{
    json values = json::array(), counts = json::array();
    for (double g : f.grades()) {
        values.push_back(decimal(g));
        counts.push_back(f.complex_at(g).counts());
    }
    return {{"critical_values", std::move(values)}, {"simplex_counts", std::move(counts)}, {"max_dim", f.max_dim()}};
}

// ---- estimator ----

struct EstimatorReportInfo {
    std::string target;
    int k = 0;
    bool based = true;
    double wall_time = -1;  // omitted when negative
};

inline json estimator_to_json(const EstimatorState& st, const EstimatorConfig& cfg, const EstimatorReportInfo& info)
{
    json out;
    out["target"] = info.target;
    out["k"] = info.k;
    out["based"] = info.based;
    out["kappa"] = cfg.walk.kappa;
    out["M"] = cfg.walk.max_iters;
    out["seed"] = cfg.walk.seed;
    out["step_soundness"] = cfg.walk.mode == StepSoundness::ContiguousSteps ? "contiguous-steps" : "paper-literal";
    out["schedule"] = st.schedule;
    out["size_after_round"] = st.size_after_round;
    out["stabilized"] = st.stabilized;
    out["class_count"] = st.class_count();
    out["count_over_k2"] = static_cast<double>(st.class_count()) / (info.k * info.k);
    out["class_representatives"] = st.catalog;
    out["class_hits"] = st.class_hits;
    out["trials"] = st.trials;
    out["walks"] = {{"run", st.walks},
                    {"found", st.walks_found},
                    {"not_found", st.walks - st.walks_found},
                    {"skipped_by_invariant", st.walks_skipped},
                    {"iterations", st.walk_iterations},
                    {"memo_hits", st.memo_hits}};
    if (info.wall_time >= 0)
        out["wall_time"] = info.wall_time;
    return out;
}

// ---- CSV ----

/// Rows of comma-separated numbers; blank lines and lines starting with '#' are skipped.
inline std::vector<std::vector<double>> parse_numeric_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
            continue;
        std::vector<double> row;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            const std::string_view cell(line.data() + start, (comma == std::string::npos ? line.size() : comma) - start);
            try {
                row.push_back(parse_decimal(cell));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
            }
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline FiniteMetricSpace points_from_csv(const std::string& path)
{
    const auto rows = parse_numeric_csv(read_file(path));
    for (const auto& r : rows)
        if (r.size() != rows.front().size())
            throw ParseError(path + ": rows have different lengths");
    return FiniteMetricSpace::from_points(rows);
}

inline FiniteMetricSpace distance_matrix_from_csv(const std::string& path)
{
    const auto rows = parse_numeric_csv(read_file(path));
    std::vector<double> d;
    for (const auto& r : rows) {
        if (r.size() != rows.size())
            throw ParseError(path + ": distance matrix is not square");
        d.insert(d.end(), r.begin(), r.end());
    }
    return FiniteMetricSpace(rows.size(), std::move(d));
}

}  // namespace contig::io
