#include "skomap/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "skomap/csv.hpp"
#include "skomap/errors.hpp"

namespace skomap {

using nlohmann::ordered_json;

ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (v == INFINITY) return "inf";
    if (v == -INFINITY) return "-inf";
    return v;
}

namespace {

ordered_json numbers(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(json_number(x));
    return a;
}

}  // namespace

ordered_json to_json(const ConditionReport& r) {
    ordered_json j;
    j["passed"] = r.passed;
    j["tolerance"] = json_number(r.tolerance);
    j["worst_violation"] = json_number(r.worst_violation);
    j["location"] = json_number(r.location);
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.detail) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"worst_violation", json_number(c.worst_violation)},
                          {"location", json_number(c.location)},
                          {"evaluated", c.evaluated}});
    }
    j["checks"] = checks;
    ordered_json metrics = ordered_json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = json_number(v);
    j["metrics"] = metrics;
    j["notes"] = r.notes;
    return j;
}

ordered_json to_json(const SuiteResult& r) {
    ordered_json j;
    j["suite"] = r.suite;
    j["seeds"] = {{"first", r.seeds.first}, {"last", r.seeds.last}};
    j["tolerance"] = json_number(r.tolerance);
    j["instances"] = r.instances;
    j["failures"] = r.failures;
    j["passed"] = r.passed;
    j["worst_violation"] = json_number(r.worst_violation);
    j["worst_seed"] = r.worst_seed;
    j["worst_check"] = r.worst_check;
    j["worst_location"] = json_number(r.worst_location);
    return j;
}

ordered_json to_json(const VariationSeries& s, const std::string& parameter_name) {
    ordered_json j;
    j[parameter_name] = s.parameter;
    j["verdict"] = verdict_name(s.verdict);
    j["final_ratio"] = json_number(s.final_ratio);
    j["resolutions"] = s.resolutions;
    j["means"] = numbers(s.means);
    j["stddevs"] = numbers(s.stddevs);
    j["log2_ratios"] = numbers(s.log2_ratios);
    j["seeds"] = s.seeds;
    j["included"] = s.included;
    j["skipped"] = s.skipped;
    j["monotone_violations"] = s.monotone_violations;
    return j;
}

ordered_json to_json(const VariationReport& r, const std::string& parameter_name) {
    ordered_json j;
    j["experiment"] = r.experiment;
    j["thresholds"] = {{"diverging", r.thresholds.diverging}, {"plateauing", r.thresholds.plateauing}};
    j["verdicts"] = verdict_map(r);
    ordered_json series = ordered_json::array();
    for (const auto& s : r.series) series.push_back(to_json(s, parameter_name));
    j["series"] = series;
    return j;
}

ordered_json to_json(const CombSequence& seq) {
    std::string c;
    switch (seq.construction) {
        case Construction::automatic: c = "automatic"; break;
        case Construction::recursion: c = "recursion"; break;
        case Construction::dyadic: c = "dyadic"; break;
        case Construction::boxes: c = "boxes"; break;
    }
    ordered_json j;
    j["construction"] = c;
    j["count"] = seq.s.size();
    j["first"] = seq.s.empty() ? ordered_json(nullptr) : json_number(seq.s.front());
    j["last"] = seq.s.empty() ? ordered_json(nullptr) : json_number(seq.s.back());
    j["tau"] = seq.tau;
    j["truncated"] = seq.truncated;
    j["truncation"] = seq.truncation;
    return j;
}

std::string parameter_key(double v) {
    char buf[32];
    for (int p = 1; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

ordered_json verdict_map(const VariationReport& r) {
    ordered_json j = ordered_json::object();
    for (const auto& s : r.series) j[parameter_key(s.parameter)] = verdict_name(s.verdict);
    return j;
}

void write_rows_header(std::ostream& out, const std::string& tag_name, const std::string& parameter_name,
                       bool with_excursion) {
    if (!tag_name.empty()) out << tag_name << ',';
    out << parameter_name << ",seed,resolution,variation";
    if (with_excursion) out << ",start,end,height";
    out << '\n';
}

void write_rows(std::ostream& out, const VariationReport& r, const std::string& tag, bool with_excursion) {
    for (const auto& row : r.rows) {
        if (!tag.empty()) out << tag << ',';
        out << format_double(row.parameter) << ',' << row.seed << ',' << row.resolution << ','
            << format_double(row.variation);
        if (with_excursion) {
            out << ',' << format_double(row.start) << ',' << format_double(row.end) << ',' << format_double(row.height);
        }
        out << '\n';
    }
}

void write_text_file(const std::string& filename, const std::string& text) {
    const std::filesystem::path p(filename);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw UsageError("cannot write " + filename);
    out << text;
    if (!out) throw UsageError("write failed for " + filename);
}

}  // namespace skomap
