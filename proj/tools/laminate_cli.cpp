// laminate: solve, profile, sweep and time the laminated-plate benchmark.
//
// Configuration is applied in order: --config file, then field flags
// (--S, --q, --n_layers, ...), then --set section.key=value.

#include "laminate/pagano.hpp"
#include "laminate/run_config.hpp"
#include "laminate/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace laminate;

namespace {

struct ConfigOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> fields;  // section.key -> value from a field flag
};

void add_config_options(CLI::App& app, ConfigOptions& o)
{
    app.add_option("--config", o.config_path, "Configuration file");
    app.add_option("--set", o.sets, "Override as section.key=value (repeatable)");
    for (const auto& key : config_keys()) {
        const std::string name = key.substr(key.find('.') + 1);
        app.add_option_function<std::string>(
               "--" + name, [&o, key](const std::string& v) { o.fields[key] = v; }, "Sets " + key)
            ->group("Run configuration");
    }
}

RunConfig build_config(const ConfigOptions& o)
{
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    for (const auto& [key, value] : o.fields) {
        set_value(cfg, key, value);
    }
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("set", 0, s, "expected section.key=value");
        }
        set_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
}

std::string output_path(const RunConfig& cfg, const std::string& name)
{
    if (name == "-") {
        return name;
    }
    const std::filesystem::path p(name);
    if (p.is_absolute()) {
        return name;
    }
    std::filesystem::create_directories(cfg.output.directory);
    return (std::filesystem::path(cfg.output.directory) / p).string();
}

template <class Writer>
void write_to(const std::string& path, Writer&& w)
{
    if (path == "-") {
        w(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    w(out);
    std::cerr << "wrote " << path << "\n";
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) {
            throw std::invalid_argument("bad list value '" + tok + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty value list");
    }
    return out;
}

/// Console summaries move to stderr when the data goes to stdout.
std::FILE* summary_stream(const std::string& path)
{
    return path == "-" ? stderr : stdout;
}

void print_case(std::FILE* f, const CaseResult& r)
{
    std::fprintf(f, "%-28s dofs %7zu  asm %8.3fs  solve %8.3fs  rec %7.3fs  raw %.3e  recovered %.3e %.3e %.3e  %s\n",
                r.case_id.c_str(), r.scalar_dofs, r.times.assembly, r.times.solve, r.times.recovery,
                r.errors.raw_max(), r.errors.recovered[0], r.errors.recovered[1], r.errors.recovered[2],
                r.status.c_str());
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Laminated plate benchmark: 3D spline solve, equilibrium stress recovery, exact reference"};
    app.require_subcommand(1);

    ConfigOptions solve_o, profile_o, sweep_o, timing_o, oracle_o;

    auto* solve = app.add_subcommand("solve", "Solve one case and write its displacement coefficients");
    add_config_options(*solve, solve_o);

    double px = -1.0, py = -1.0;
    std::string profile_out;
    auto* prof = app.add_subcommand("profile", "Raw, recovered and exact stress profiles at one station");
    add_config_options(*prof, profile_o);
    prof->add_option("--x", px, "Relative station x/L in (0,1)");
    prof->add_option("--y", py, "Relative station y/L in (0,1)");
    prof->add_option("--output,-o", profile_out, "CSV path ('-' for stdout)");

    std::string axis, values, report_out;
    bool parallel = false;
    auto* sw = app.add_subcommand("sweep", "Error and cost over one parameter axis");
    add_config_options(*sw, sweep_o);
    sw->add_option("--axis", axis, "S, n_layers, q or n_elements")->required();
    sw->add_option("--values", values, "Comma-separated values")->required();
    sw->add_flag("--parallel", parallel, "Run cases concurrently (timings become unreliable)");
    sw->add_option("--output,-o", report_out, "CSV path ('-' for stdout)");

    std::string layers = "3,11,34";
    std::string timing_out;
    int repeats = 3;
    auto* tm = app.add_subcommand("timing", "Layerwise against single-element cost per layer count");
    add_config_options(*tm, timing_o);
    tm->add_option("--layers", layers, "Comma-separated layer counts");
    tm->add_option("--repeats", repeats, "Runs per case; phases report the median")->check(CLI::PositiveNumber);
    tm->add_option("--output,-o", timing_out, "CSV path ('-' for stdout)");

    double ox = -1.0, oy = -1.0;
    std::string oracle_out;
    auto* od = app.add_subcommand("oracle-dump", "Exact stress profile at one station");
    add_config_options(*od, oracle_o);
    od->add_option("--x", ox, "Relative station x/L in (0,1)");
    od->add_option("--y", oy, "Relative station y/L in (0,1)");
    od->add_option("--output,-o", oracle_out, "CSV path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (solve->parsed()) {
            const RunConfig cfg = build_config(solve_o);
            const SolvedCase sc = solve_case(cfg);
            const auto& disc = sc.field.discretization();
            const std::string path = output_path(cfg, cfg.output.coefficients);
            std::fprintf(summary_stream(path), "scalar dofs %zu\nvector dofs %zu\nfree dofs %zu\nassembly %.4f s\nsolve %.4f s\n"
                        "relative residual %.3e\n",
                        disc.scalar_dofs(), disc.vector_dofs(), disc.n_free(), sc.times.assembly, sc.times.solve,
                        sc.field.residual());
            write_to(path, [&](std::ostream& os) { write_coefficients(os, sc.field); });
        } else if (prof->parsed()) {
            const RunConfig cfg = build_config(profile_o);
            const double x = px < 0.0 ? cfg.sampling.profile_x : px;
            const double y = py < 0.0 ? cfg.sampling.profile_y : py;
            const SolvedCase sc = solve_case(cfg);
            const PaganoSolution oracle(sc.plate);
            const auto rows = profile(cfg, sc.field, oracle, x, y);
            write_to(output_path(cfg, profile_out.empty() ? cfg.output.profile : profile_out),
                     [&](std::ostream& os) { write_profile_csv(os, cfg, rows); });
        } else if (sw->parsed()) {
            const RunConfig cfg = build_config(sweep_o);
            const auto rows = sweep(cfg, parse_axis(axis), parse_list(values), parallel);
            const std::string path = output_path(cfg, report_out.empty() ? cfg.output.report : report_out);
            for (const auto& r : rows) {
                print_case(summary_stream(path), r);
            }
            write_to(path, [&](std::ostream& os) { write_report_csv(os, rows); });
        } else if (tm->parsed()) {
            const RunConfig cfg = build_config(timing_o);
            std::vector<std::size_t> counts;
            for (double v : parse_list(layers)) {
                if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
                    throw std::invalid_argument("layer counts must be positive integers");
                }
                counts.push_back(static_cast<std::size_t>(v));
            }
            const auto rows = timing(cfg, counts, repeats);
            const std::string path = output_path(cfg, timing_out.empty() ? "timing.csv" : timing_out);
            for (const auto& r : rows) {
                const double lw = solve_cost(r.layerwise);
                std::fprintf(summary_stream(path), "%3zu layers  layerwise %.3fs (%zu dofs)  q=2 %.3fs  q=4 %.3fs  "
                            "layerwise/q2 %.2f  layerwise/q4 %.2f\n",
                            r.n_layers, lw, r.layerwise.scalar_dofs, solve_cost(r.single_q2),
                            solve_cost(r.single_q4), lw / solve_cost(r.single_q2), lw / solve_cost(r.single_q4));
            }
            write_to(path, [&](std::ostream& os) { write_timing_csv(os, rows); });
        } else if (od->parsed()) {
            const RunConfig cfg = build_config(oracle_o);
            const double x = ox < 0.0 ? cfg.sampling.profile_x : ox;
            const double y = oy < 0.0 ? cfg.sampling.profile_y : oy;
            const PaganoSolution oracle(make_plate(cfg));
            const auto rows = oracle_profile(cfg, oracle, x, y);
            write_to(output_path(cfg, oracle_out.empty() ? "oracle.csv" : oracle_out),
                     [&](std::ostream& os) { write_profile_csv(os, cfg, rows); });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
