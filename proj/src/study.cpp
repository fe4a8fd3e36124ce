#include "laminate/study.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace laminate {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v)
{
    if (v == 0.0) {
        v = 0.0;  // drop the sign of -0
    }
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string default_case_id(const RunConfig& cfg)
{
    const auto& s = cfg.scheme;
    std::string id = "nl" + std::to_string(cfg.laminate.n_layers) + "_S" + num(cfg.plate.S) + "_";
    if (s.variant == Variant::layerwise) {
        id += "lw";
    } else {
        id += "q" + std::to_string(s.q_per_layer);
    }
    return id + "_p" + std::to_string(s.p_inplane) + "_pz" + std::to_string(s.p_z) + "_ne" +
           std::to_string(s.n_elements);
}

std::string case_id(const RunConfig& cfg)
{
    return cfg.output.case_id == "default" ? default_case_id(cfg) : cfg.output.case_id;
}

void check_station(double xr, double yr)
{
    if (!(xr > 0.0 && xr < 1.0 && yr > 0.0 && yr < 1.0)) {
        throw std::domain_error("station (" + num(xr) + ", " + num(yr) + ") outside (0,1)^2");
    }
}

}  // namespace

double ErrorSet::raw_max() const
{
    return *std::max_element(raw.begin(), raw.end());
}

double ErrorSet::recovered_max() const
{
    return *std::max_element(recovered.begin(), recovered.end());
}

SolvedCase solve_case(const RunConfig& cfg)
{
    validate(cfg);
    PlateCase plate = make_plate(cfg);
    const Discretization disc = build_discretization(plate, cfg.scheme);
    PhaseTimes times;
    auto t0 = Clock::now();
    const SparseSystem sys = assemble(disc);
    times.assembly = seconds_since(t0);
    t0 = Clock::now();
    DisplacementField field = solve(disc, sys);
    times.solve = seconds_since(t0);
    return {std::move(plate), std::move(field), times};
}

ErrorSet grid_errors(const RunConfig& cfg, const DisplacementField& field, const PaganoSolution& oracle,
                     double* recovery_seconds)
{
    const auto& plate = field.plate();
    const double L = plate.length();
    const int n = cfg.sampling.stations;
    const auto samples = interior_samples(plate.layup, cfg.sampling.per_ply);
    const auto options = RecoveryOptions::for_plate(plate, cfg.recovery);

    std::array<std::vector<double>, 3> ref, raw, rec;
    double rtime = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double x = L * i / (n + 1);
            const double y = L * j / (n + 1);
            const auto t0 = Clock::now();
            const auto prof = recover_profile(field, x, y, samples, options);
            rtime += seconds_since(t0);
            for (std::size_t s = 0; s < samples.size(); ++s) {
                const auto exact = oracle.stress(x, y, samples[s].z, samples[s].layer);
                const auto approx = stress_at(field, x, y, samples[s].z, samples[s].layer).sigma;
                const std::array<double, 3> r{prof.s13[s], prof.s23[s], prof.s33[s]};
                for (std::size_t c = 0; c < 3; ++c) {
                    const std::size_t v = voigt_index(kTransverse[c]);
                    ref[c].push_back(exact[v]);
                    raw[c].push_back(approx[v]);
                    rec[c].push_back(r[c]);
                }
            }
        }
    }
    if (recovery_seconds) {
        *recovery_seconds = rtime;
    }
    ErrorSet e;
    for (std::size_t c = 0; c < 3; ++c) {
        e.raw[c] = error_metric(raw[c], ref[c]);
        e.recovered[c] = error_metric(rec[c], ref[c]);
    }
    return e;
}

CaseResult run_case(const RunConfig& cfg, int repeats)
{
    CaseResult r;
    r.case_id = case_id(cfg);
    r.n_layers = cfg.laminate.n_layers;
    r.S = cfg.plate.S;
    r.scheme = cfg.scheme;
    r.mode = cfg.recovery;
    try {
        std::vector<double> ta, ts, tr;
        if (repeats > 1) {
            (void)solve_case(cfg);  // warm-up, not timed
        }
        for (int k = 0; k < std::max(repeats, 1); ++k) {
            const SolvedCase sc = solve_case(cfg);
            const PaganoSolution oracle(sc.plate);
            double rt = 0.0;
            r.errors = grid_errors(cfg, sc.field, oracle, &rt);
            ta.push_back(sc.times.assembly);
            ts.push_back(sc.times.solve);
            tr.push_back(rt);
            r.scalar_dofs = sc.field.discretization().scalar_dofs();
            r.free_dofs = sc.field.discretization().n_free();
            r.residual = sc.field.residual();
        }
        r.times = {median(ta), median(ts), median(tr)};
    } catch (const std::exception& e) {
        r.status = e.what();
    }
    return r;
}

SweepAxis parse_axis(std::string_view name)
{
    if (name == "S") {
        return SweepAxis::S;
    }
    if (name == "n_layers") {
        return SweepAxis::n_layers;
    }
    if (name == "q") {
        return SweepAxis::q;
    }
    if (name == "n_elements") {
        return SweepAxis::n_elements;
    }
    throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                                "' (expected S, n_layers, q or n_elements)");
}

std::string_view axis_name(SweepAxis a)
{
    switch (a) {
    case SweepAxis::S:
        return "S";
    case SweepAxis::n_layers:
        return "n_layers";
    case SweepAxis::q:
        return "q";
    case SweepAxis::n_elements:
        return "n_elements";
    }
    return "?";
}

RunConfig with_axis(const RunConfig& base, SweepAxis axis, double value)
{
    RunConfig cfg = base;
    const std::string text = num(value);
    switch (axis) {
    case SweepAxis::S:
        set_value(cfg, "case.S", text);
        break;
    case SweepAxis::n_layers:
        set_value(cfg, "laminate.n_layers", text);
        break;
    case SweepAxis::q:
        set_value(cfg, "scheme.q", text);
        break;
    case SweepAxis::n_elements:
        set_value(cfg, "scheme.n_elements", text);
        break;
    }
    cfg.output.case_id = "default";
    return cfg;
}

std::vector<CaseResult> sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values,
                              bool parallel)
{
    std::vector<CaseResult> rows(values.size());
    auto run_one = [&](std::size_t i) {
        try {
            rows[i] = run_case(with_axis(base, axis, values[i]));
        } catch (const std::exception& e) {
            rows[i].case_id = std::string(axis_name(axis)) + "=" + num(values[i]);
            rows[i].status = e.what();
        }
    };
    if (!parallel) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            run_one(i);
        }
        return rows;
    }
    std::atomic<std::size_t> next{0};
    const auto n_threads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), values.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) {
                run_one(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    return rows;
}

std::vector<TimingRow> timing(const RunConfig& base, const std::vector<std::size_t>& layers, int repeats)
{
    std::vector<TimingRow> out;
    for (std::size_t n : layers) {
        RunConfig cfg = base;
        cfg.laminate.n_layers = n;
        cfg.output.case_id = "default";
        TimingRow row;
        row.n_layers = n;
        RunConfig lw = cfg;
        lw.scheme.variant = Variant::layerwise;
        row.layerwise = run_case(lw, repeats);
        RunConfig se = cfg;
        se.scheme.variant = Variant::single_element;
        se.scheme.q_per_layer = 2;
        row.single_q2 = run_case(se, repeats);
        se.scheme.q_per_layer = 4;
        row.single_q4 = run_case(se, repeats);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<ProfileRow> profile(const RunConfig& cfg, const DisplacementField& field, const PaganoSolution& oracle,
                                double xr, double yr)
{
    check_station(xr, yr);
    const auto& plate = field.plate();
    const double x = xr * plate.length();
    const double y = yr * plate.length();
    const auto samples = profile_samples(plate.layup, cfg.sampling.profile_per_ply);
    const auto rec = recover_profile(field, x, y, samples, RecoveryOptions::for_plate(plate, cfg.recovery));

    std::vector<ProfileRow> rows;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto exact = oracle.stress(x, y, samples[s].z, samples[s].layer);
        const auto approx = stress_at(field, x, y, samples[s].z, samples[s].layer).sigma;
        for (std::size_t v = 0; v < 6; ++v) {
            ProfileRow r{x, y, samples[s].z, samples[s].layer, static_cast<StressComponent>(v), approx[v],
                         std::nullopt, exact[v]};
            if (r.component == StressComponent::s13) {
                r.recovered = rec.s13[s];
            } else if (r.component == StressComponent::s23) {
                r.recovered = rec.s23[s];
            } else if (r.component == StressComponent::s33) {
                r.recovered = rec.s33[s];
            }
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<ProfileRow> oracle_profile(const RunConfig& cfg, const PaganoSolution& oracle, double xr, double yr)
{
    check_station(xr, yr);
    const auto& plate = oracle.plate();
    const double x = xr * plate.length();
    const double y = yr * plate.length();
    std::vector<ProfileRow> rows;
    for (const auto& smp : profile_samples(plate.layup, cfg.sampling.profile_per_ply)) {
        const auto exact = oracle.stress(x, y, smp.z, smp.layer);
        for (std::size_t v = 0; v < 6; ++v) {
            rows.push_back({x, y, smp.z, smp.layer, static_cast<StressComponent>(v), std::nullopt, std::nullopt,
                            exact[v]});
        }
    }
    return rows;
}

void write_profile_csv(std::ostream& os, const RunConfig& cfg, const std::vector<ProfileRow>& rows)
{
    const PlateCase plate = make_plate(cfg);
    const bool norm = cfg.output.normalized;
    auto value = [&](double v, StressComponent c) { return num(norm ? normalize(v, c, plate) : v); };
    const std::string prefix = case_id(cfg) + "," + std::to_string(cfg.laminate.n_layers) + "," +
                               num(cfg.plate.S) + "," +
                               (cfg.scheme.variant == Variant::layerwise ? std::string() :
                                                                           std::to_string(cfg.scheme.q_per_layer)) +
                               "," + std::to_string(cfg.scheme.p_inplane) + "," + std::to_string(cfg.scheme.p_z) +
                               "," + std::to_string(cfg.scheme.n_elements) + ",";
    os << kProfileSchema << "\n"
       << "case_id,n_layers,S,q,p_inplane,p_z,n_el,x,y,z,component,raw,recovered,oracle,normalized\n";
    for (const auto& r : rows) {
        os << prefix << num(r.x) << "," << num(r.y) << "," << num(r.z) << "," << component_name(r.component) << ","
           << (r.raw ? value(*r.raw, r.component) : "") << ","
           << (r.recovered ? value(*r.recovered, r.component) : "") << "," << value(r.oracle, r.component) << ","
           << (norm ? "true" : "false") << "\n";
    }
}

void write_report_csv(std::ostream& os, const std::vector<CaseResult>& rows)
{
    os << kReportSchema << "\n"
       << "case_id,n_layers,S,variant,q,p_inplane,p_z,n_el,dofs,free_dofs,assembly_time,solve_time,recovery_time,"
          "raw_s13,raw_s23,raw_s33,recovered_s13,recovered_s23,recovered_s33,recovered_max,mode,status\n";
    for (const auto& r : rows) {
        os << r.case_id << "," << r.n_layers << "," << num(r.S) << "," << variant_name(r.scheme.variant) << ","
           << r.scheme.q_per_layer << "," << r.scheme.p_inplane << "," << r.scheme.p_z << ","
           << r.scheme.n_elements << "," << r.scalar_dofs << "," << r.free_dofs << "," << num(r.times.assembly)
           << "," << num(r.times.solve) << "," << num(r.times.recovery);
        for (double e : r.errors.raw) {
            os << "," << num(e);
        }
        for (double e : r.errors.recovered) {
            os << "," << num(e);
        }
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        os << "," << num(r.errors.recovered_max()) << "," << mode_name(r.mode) << "," << status << "\n";
    }
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows)
{
    os << kTimingSchema << "\n"
       << "n_layers,dofs_layerwise,dofs_single,assembly_layerwise,solve_layerwise,recovery_layerwise,"
          "assembly_q2,solve_q2,recovery_q2,assembly_q4,solve_q4,recovery_q4,"
          "ratio_layerwise_q2,ratio_layerwise_q4,ratio_q4_q2\n";
    for (const auto& r : rows) {
        const double lw = solve_cost(r.layerwise);
        const double q2 = solve_cost(r.single_q2);
        const double q4 = solve_cost(r.single_q4);
        os << r.n_layers << "," << r.layerwise.scalar_dofs << "," << r.single_q2.scalar_dofs;
        for (const CaseResult* c : {&r.layerwise, &r.single_q2, &r.single_q4}) {
            os << "," << num(c->times.assembly) << "," << num(c->times.solve) << "," << num(c->times.recovery);
        }
        os << "," << num(lw / q2) << "," << num(lw / q4) << "," << num(q4 / q2) << "\n";
    }
}

void write_coefficients(std::ostream& os, const DisplacementField& field)
{
    const auto& c = field.coefficients();
    os << "# dofs " << c.size() << " (dof = 3 * basis + component)\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        os << i << " " << num(c[i]) << "\n";
    }
}

}  // namespace laminate
