#pragma once

/**
 * @file run_config.hpp
 * @brief Run configuration and its text format.
 *
 * The file is a flat key-value format with one section per module:
 *
 *   # comment
 *   [laminate]
 *   n_layers = 11
 *   pattern = 90/0
 *
 * Every key lives in a known section and unknown sections or keys are
 * rejected. Errors carry the source name and line, e.g.
 * "run.cfg:12: scheme.q: must be >= 1 (got 0)". Numbers are written with
 * the shortest representation that reads back to the same double, so
 * format/parse is lossless.
 */

#include "laminate/iga_solver.hpp"
#include "laminate/laminate_model.hpp"
#include "laminate/stress_recovery.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace laminate {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::size_t line, std::string field, const std::string& message);

    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }  ///< 0 when not from a file
    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    std::string source_;
    std::string detail_;
    std::size_t line_;
    std::string field_;
};

struct LaminateConfig {
    std::size_t n_layers = 11;
    double ply_thickness = 1.0;
    /// "90/0" or "0/90" for alternating stacks, or an explicit bottom-to-top
    /// list such as "0,90,0".
    std::string pattern = "90/0";
    OrthotropicMaterial material{};
};

struct CaseConfig {
    double S = 10.0;
    double sigma0 = 1.0;
};

struct SamplingConfig {
    int stations = 5;           ///< per direction, at i/(stations+1), edges excluded
    int per_ply = 10;           ///< cell-centred z samples per ply for the error metric
    double profile_x = 0.25;    ///< relative station of the profile command
    double profile_y = 0.25;
    int profile_per_ply = 11;   ///< profile samples per ply, both ply ends included
};

struct OutputConfig {
    std::string directory = ".";
    std::string case_id = "default";
    std::string coefficients = "coefficients.txt";
    std::string profile = "profile.csv";
    std::string report = "report.csv";
    bool normalized = true;
};

struct RunConfig {
    LaminateConfig laminate{};
    CaseConfig plate{};
    DiscretizationScheme scheme{};
    RecoveryMode recovery = RecoveryMode::from_bottom;
    SamplingConfig sampling{};
    OutputConfig output{};
};

/// All "section.key" names in file order.
[[nodiscard]] const std::vector<std::string>& config_keys();

/// Sets one field from its text form; throws ConfigError with line 0.
void set_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Text form of one field, as written by format_config.
[[nodiscard]] std::string get_value(const RunConfig& cfg, std::string_view key);

/// Cross-field checks (pattern length, station ranges, scheme vs layup).
void validate(const RunConfig& cfg);

[[nodiscard]] RunConfig parse_config(std::string_view text, std::string_view source = "config");
[[nodiscard]] RunConfig load_config(const std::string& path);
[[nodiscard]] std::string format_config(const RunConfig& cfg);

[[nodiscard]] std::vector<PlyAngle> ply_angles(const LaminateConfig& lam);
[[nodiscard]] PlateCase make_plate(const RunConfig& cfg);

}  // namespace laminate
