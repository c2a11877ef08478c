#pragma once

// JSON configurations for the CLI commands. Parsing is strict: wrong types,
// out-of-range values and unknown fields raise ConfigError carrying the
// JSON pointer of the offending field.

#include <optional>
#include <string>

#include <json.hpp>

#include "skomap/cusp.hpp"
#include "skomap/suites.hpp"
#include "skomap/thorn.hpp"
#include "skomap/variation.hpp"

namespace skomap {

class ConfigError : public UsageError {
public:
    ConfigError(const std::string& pointer, const std::string& what)
        : UsageError((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

// Parse errors are reported at pointer "" with the byte offset.
nlohmann::json load_json_file(const std::string& filename);
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

struct SolveConfig {
    std::string psi;
    std::string lower;
    std::string upper;
    std::optional<std::string> out;
};

struct VerifyConfig {
    Suite suite = Suite::esp;
    SeedRange seeds;
    std::optional<double> tol;
};

struct CuspConfig {
    CuspExperiment experiment;
    std::optional<std::string> out;
};

struct ThornConfig {
    ThornExperiment sweep;
    // Widened domain for the full-horizon control run.
    std::optional<ThornSpec> control;
    std::optional<std::string> out;
};

struct CheckConditionsConfig {
    BoundarySpec boundary;
    SequenceOptions sequence;
    std::optional<double> c1;
    double cauchy_tol = 1e-6;
};

// A top-level "command" field, if present, must name the subcommand.
SolveConfig parse_solve_config(const nlohmann::json& j);
VerifyConfig parse_verify_config(const nlohmann::json& j);
CuspConfig parse_cusp_config(const nlohmann::json& j);
ThornConfig parse_thorn_config(const nlohmann::json& j);
CheckConditionsConfig parse_check_conditions_config(const nlohmann::json& j);

// "a..b" or a single integer, as a list.
std::vector<std::uint64_t> expand_seeds(const SeedRange& r);
Construction parse_construction(const std::string& name);

}  // namespace skomap
