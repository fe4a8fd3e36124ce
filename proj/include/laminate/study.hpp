#pragma once

/**
 * @file study.hpp
 * @brief Case runs, parameter sweeps, timing and CSV output.
 *
 * Error metric domain: stations at (i, j)/(n+1) L for i, j = 1..n and
 * `per_ply` cell-centred z samples in every ply; one scalar per component.
 * Only the timing columns depend on the machine.
 */

#include "laminate/iga_solver.hpp"
#include "laminate/pagano.hpp"
#include "laminate/run_config.hpp"
#include "laminate/stress_recovery.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace laminate {

/// Out-of-plane components in report order.
inline constexpr std::array<StressComponent, 3> kTransverse{StressComponent::s13, StressComponent::s23,
                                                            StressComponent::s33};

struct PhaseTimes {
    double assembly = 0.0;
    double solve = 0.0;
    double recovery = 0.0;
};

struct ErrorSet {
    std::array<double, 3> raw{};        ///< s13, s23, s33 from sigma = C eps
    std::array<double, 3> recovered{};  ///< s13, s23, s33 from equilibrium

    [[nodiscard]] double raw_max() const;
    [[nodiscard]] double recovered_max() const;
};

struct CaseResult {
    std::string case_id;
    std::size_t n_layers = 0;
    double S = 0.0;
    DiscretizationScheme scheme{};
    RecoveryMode mode = RecoveryMode::from_bottom;
    std::size_t scalar_dofs = 0;
    std::size_t free_dofs = 0;
    PhaseTimes times{};
    ErrorSet errors{};
    double residual = 0.0;
    std::string status = "ok";  ///< failure message for a case that did not run
};

/// Solved case kept alive for further queries.
struct SolvedCase {
    PlateCase plate;
    DisplacementField field;
    PhaseTimes times;
};

SolvedCase solve_case(const RunConfig& cfg);

/// Per-component errors over the station grid of `cfg.sampling`.
ErrorSet grid_errors(const RunConfig& cfg, const DisplacementField& field, const PaganoSolution& oracle,
                     double* recovery_seconds = nullptr);

/// Solve and evaluate one case. With `repeats` > 1 an untimed warm-up solve
/// runs first and every phase time is the median over the repetitions.
CaseResult run_case(const RunConfig& cfg, int repeats = 1);

enum class SweepAxis { S, n_layers, q, n_elements };

[[nodiscard]] SweepAxis parse_axis(std::string_view name);
[[nodiscard]] std::string_view axis_name(SweepAxis a);

/// Config of the base case with one axis moved to `value`.
[[nodiscard]] RunConfig with_axis(const RunConfig& base, SweepAxis axis, double value);

/// One row per value, in input order. A failing case is reported in its
/// row's status and the sweep continues. `parallel` runs cases concurrently
/// (timings then mean little).
std::vector<CaseResult> sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values,
                              bool parallel = false);

struct TimingRow {
    std::size_t n_layers = 0;
    CaseResult layerwise;
    CaseResult single_q2;
    CaseResult single_q4;
};

/// Layerwise against single element (q = 2 and q = 4) per layer count,
/// each phase the median of `repeats` runs.
std::vector<TimingRow> timing(const RunConfig& base, const std::vector<std::size_t>& layers, int repeats = 3);

/// Assembly plus solve time.
[[nodiscard]] inline double solve_cost(const CaseResult& r) { return r.times.assembly + r.times.solve; }

struct ProfileRow {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    std::size_t layer = 0;
    StressComponent component = StressComponent::s11;
    std::optional<double> raw;
    std::optional<double> recovered;
    double oracle = 0.0;
};

/// Raw, recovered and exact stresses through the thickness at the relative
/// station (xr, yr); one row per (z, component). Throws std::domain_error
/// for a station outside (0, 1)^2.
std::vector<ProfileRow> profile(const RunConfig& cfg, const DisplacementField& field, const PaganoSolution& oracle,
                                double xr, double yr);

/// Exact stresses only, same layout with raw and recovered empty.
std::vector<ProfileRow> oracle_profile(const RunConfig& cfg, const PaganoSolution& oracle, double xr, double yr);

inline constexpr const char* kProfileSchema = "# laminate-profile v1";
inline constexpr const char* kReportSchema = "# laminate-report v1";
inline constexpr const char* kTimingSchema = "# laminate-timing v1";

/// Writes the schema comment, the header
/// case_id,n_layers,S,q,p_inplane,p_z,n_el,x,y,z,component,raw,recovered,oracle,normalized
/// and the rows; empty cells for values that do not apply.
void write_profile_csv(std::ostream& os, const RunConfig& cfg, const std::vector<ProfileRow>& rows);

void write_report_csv(std::ostream& os, const std::vector<CaseResult>& rows);
void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows);

/// Displacement coefficients, one "dof value" line per vector dof.
void write_coefficients(std::ostream& os, const DisplacementField& field);

}  // namespace laminate
