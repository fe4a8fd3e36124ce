#include "laminate/run_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace laminate {

ConfigError::ConfigError(std::string source, std::size_t line, std::string field, const std::string& message)
    : std::runtime_error(source + ":" + (line > 0 ? std::to_string(line) + ":" : std::string()) + " " +
                         (field.empty() ? std::string() : field + ": ") + message),
      source_(std::move(source)),
      detail_(message),
      line_(line),
      field_(std::move(field))
{
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

double parse_double(std::string_view s)
{
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("expected a finite number (got '" + std::string(s) + "')");
    }
    return v;
}

long parse_long(std::string_view s)
{
    long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::invalid_argument("expected an integer (got '" + std::string(s) + "')");
    }
    return v;
}

int parse_int_min(std::string_view s, long lo)
{
    const long v = parse_long(s);
    if (v < lo || v > 100000) {
        throw std::invalid_argument("must be >= " + std::to_string(lo) + " (got " + std::string(s) + ")");
    }
    return static_cast<int>(v);
}

double parse_positive(std::string_view s)
{
    const double v = parse_double(s);
    if (!(v > 0.0)) {
        throw std::invalid_argument("must be > 0 (got " + std::string(s) + ")");
    }
    return v;
}

double parse_open_unit(std::string_view s)
{
    const double v = parse_double(s);
    if (!(v > 0.0 && v < 1.0)) {
        throw std::invalid_argument("must lie strictly between 0 and 1 (got " + std::string(s) + ")");
    }
    return v;
}

bool parse_bool(std::string_view s)
{
    if (s == "true") {
        return true;
    }
    if (s == "false") {
        return false;
    }
    throw std::invalid_argument("expected true or false (got '" + std::string(s) + "')");
}

std::string parse_nonempty(std::string_view s)
{
    if (s.empty()) {
        throw std::invalid_argument("must not be empty");
    }
    return std::string(s);
}

struct Field {
    std::string key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class Member>
Field positive_field(std::string key, Member member)
{
    return {std::move(key), [member](RunConfig& c, std::string_view v) { member(c) = parse_positive(v); },
            [member](const RunConfig& c) { return format_double(member(c)); }};
}

template <class Member>
Field int_field(std::string key, long lo, Member member)
{
    return {std::move(key), [member, lo](RunConfig& c, std::string_view v) { member(c) = parse_int_min(v, lo); },
            [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

template <class Member>
Field string_field(std::string key, Member member)
{
    return {std::move(key), [member](RunConfig& c, std::string_view v) { member(c) = parse_nonempty(v); },
            [member](const RunConfig& c) { return member(c); }};
}

template <class Member>
Field unit_field(std::string key, Member member)
{
    return {std::move(key), [member](RunConfig& c, std::string_view v) { member(c) = parse_open_unit(v); },
            [member](const RunConfig& c) { return format_double(member(c)); }};
}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back({"laminate.n_layers",
                     [](RunConfig& c, std::string_view v) {
                         c.laminate.n_layers = static_cast<std::size_t>(parse_int_min(v, 1));
                     },
                     [](const RunConfig& c) { return std::to_string(c.laminate.n_layers); }});
        f.push_back(positive_field("laminate.ply_thickness", [](auto& c) -> auto& { return c.laminate.ply_thickness; }));
        f.push_back(string_field("laminate.pattern", [](auto& c) -> auto& { return c.laminate.pattern; }));
        f.push_back(positive_field("laminate.E1", [](auto& c) -> auto& { return c.laminate.material.E1; }));
        f.push_back(positive_field("laminate.E2", [](auto& c) -> auto& { return c.laminate.material.E2; }));
        f.push_back(positive_field("laminate.E3", [](auto& c) -> auto& { return c.laminate.material.E3; }));
        f.push_back(positive_field("laminate.G12", [](auto& c) -> auto& { return c.laminate.material.G12; }));
        f.push_back(positive_field("laminate.G13", [](auto& c) -> auto& { return c.laminate.material.G13; }));
        f.push_back(positive_field("laminate.G23", [](auto& c) -> auto& { return c.laminate.material.G23; }));
        auto nu = [](std::string key, double OrthotropicMaterial::*m) {
            return Field{std::move(key),
                         [m](RunConfig& c, std::string_view v) {
                             const double x = parse_double(v);
                             if (!(x > -1.0)) {
                                 throw std::invalid_argument("must be > -1 (got " + std::string(v) + ")");
                             }
                             c.laminate.material.*m = x;
                         },
                         [m](const RunConfig& c) { return format_double(c.laminate.material.*m); }};
        };
        f.push_back(nu("laminate.nu12", &OrthotropicMaterial::nu12));
        f.push_back(nu("laminate.nu13", &OrthotropicMaterial::nu13));
        f.push_back(nu("laminate.nu23", &OrthotropicMaterial::nu23));

        f.push_back(positive_field("case.S", [](auto& c) -> auto& { return c.plate.S; }));
        f.push_back(positive_field("case.sigma0", [](auto& c) -> auto& { return c.plate.sigma0; }));

        f.push_back({"scheme.variant",
                     [](RunConfig& c, std::string_view v) {
                         if (v == "layerwise") {
                             c.scheme.variant = Variant::layerwise;
                         } else if (v == "single_element") {
                             c.scheme.variant = Variant::single_element;
                         } else {
                             throw std::invalid_argument("expected layerwise or single_element (got '" +
                                                         std::string(v) + "')");
                         }
                     },
                     [](const RunConfig& c) { return std::string(variant_name(c.scheme.variant)); }});
        f.push_back(int_field("scheme.p_inplane", 1, [](auto& c) -> auto& { return c.scheme.p_inplane; }));
        f.push_back(int_field("scheme.n_elements", 1, [](auto& c) -> auto& { return c.scheme.n_elements; }));
        f.push_back(int_field("scheme.p_z", 1, [](auto& c) -> auto& { return c.scheme.p_z; }));
        f.push_back(int_field("scheme.q", 1, [](auto& c) -> auto& { return c.scheme.q_per_layer; }));
        f.push_back(int_field("scheme.z_elements_per_layer", 1,
                              [](auto& c) -> auto& { return c.scheme.z_elements_per_layer; }));

        f.push_back({"recovery.mode",
                     [](RunConfig& c, std::string_view v) {
                         if (v == "from_bottom") {
                             c.recovery = RecoveryMode::from_bottom;
                         } else if (v == "two_sided_average") {
                             c.recovery = RecoveryMode::two_sided_average;
                         } else {
                             throw std::invalid_argument("expected from_bottom or two_sided_average (got '" +
                                                         std::string(v) + "')");
                         }
                     },
                     [](const RunConfig& c) { return std::string(mode_name(c.recovery)); }});

        f.push_back(int_field("sampling.stations", 1, [](auto& c) -> auto& { return c.sampling.stations; }));
        f.push_back(int_field("sampling.per_ply", 1, [](auto& c) -> auto& { return c.sampling.per_ply; }));
        f.push_back(unit_field("sampling.profile_x", [](auto& c) -> auto& { return c.sampling.profile_x; }));
        f.push_back(unit_field("sampling.profile_y", [](auto& c) -> auto& { return c.sampling.profile_y; }));
        f.push_back(int_field("sampling.profile_per_ply", 2,
                              [](auto& c) -> auto& { return c.sampling.profile_per_ply; }));

        f.push_back(string_field("output.directory", [](auto& c) -> auto& { return c.output.directory; }));
        f.push_back(string_field("output.case_id", [](auto& c) -> auto& { return c.output.case_id; }));
        f.push_back(string_field("output.coefficients",
                                 [](auto& c) -> auto& { return c.output.coefficients; }));
        f.push_back(string_field("output.profile", [](auto& c) -> auto& { return c.output.profile; }));
        f.push_back(string_field("output.report", [](auto& c) -> auto& { return c.output.report; }));
        f.push_back({"output.normalized",
                     [](RunConfig& c, std::string_view v) { c.output.normalized = parse_bool(v); },
                     [](const RunConfig& c) { return std::string(c.output.normalized ? "true" : "false"); }});
        return f;
    }();
    return table;
}

const Field* find_field(std::string_view key)
{
    for (const auto& f : fields()) {
        if (f.key == key) {
            return &f;
        }
    }
    return nullptr;
}

void set_at(RunConfig& cfg, std::string_view key, std::string_view value, std::string_view source,
            std::size_t line)
{
    const Field* f = find_field(key);
    if (!f) {
        throw ConfigError(std::string(source), line, std::string(key), "unknown key");
    }
    try {
        f->set(cfg, value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(source), line, std::string(key), e.what());
    }
}

}  // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) {
            k.push_back(f.key);
        }
        return k;
    }();
    return keys;
}

void set_value(RunConfig& cfg, std::string_view key, std::string_view value)
{
    set_at(cfg, key, trim(value), "set", 0);
}

std::string get_value(const RunConfig& cfg, std::string_view key)
{
    const Field* f = find_field(key);
    if (!f) {
        throw ConfigError("get", 0, std::string(key), "unknown key");
    }
    return f->get(cfg);
}

std::vector<PlyAngle> ply_angles(const LaminateConfig& lam)
{
    const std::size_t n = lam.n_layers;
    std::vector<PlyAngle> out;
    if (lam.pattern == "90/0" || lam.pattern == "0/90") {
        const bool start90 = lam.pattern == "90/0";
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back((i % 2 == 0) == start90 ? PlyAngle::deg90 : PlyAngle::deg0);
        }
        return out;
    }
    std::string_view rest = lam.pattern;
    while (true) {
        const auto comma = rest.find(',');
        const auto tok = trim(rest.substr(0, comma));
        if (tok == "0") {
            out.push_back(PlyAngle::deg0);
        } else if (tok == "90") {
            out.push_back(PlyAngle::deg90);
        } else {
            throw ConfigError("config", 0, "laminate.pattern",
                              "expected 90/0, 0/90 or a comma list of 0 and 90 (got '" + lam.pattern + "')");
        }
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    if (out.size() != n) {
        throw ConfigError("config", 0, "laminate.pattern",
                          "lists " + std::to_string(out.size()) + " plies but laminate.n_layers = " +
                              std::to_string(n));
    }
    return out;
}

PlateCase make_plate(const RunConfig& cfg)
{
    return PlateCase(make_layup(ply_angles(cfg.laminate), cfg.laminate.ply_thickness, cfg.laminate.material),
                     cfg.plate.S, cfg.plate.sigma0);
}

void validate(const RunConfig& cfg)
{
    (void)ply_angles(cfg.laminate);
    try {
        (void)stiffness_from_engineering(cfg.laminate.material);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config", 0, "laminate", e.what());
    }
    if (cfg.scheme.p_inplane < 3) {
        throw ConfigError("config", 0, "scheme.p_inplane",
                          "recovery needs third displacement derivatives, degree must be >= 3 (got " +
                              std::to_string(cfg.scheme.p_inplane) + ")");
    }
}

RunConfig parse_config(std::string_view text, std::string_view source)
{
    RunConfig cfg;
    std::string section;
    std::set<std::string> seen;
    static const std::set<std::string, std::less<>> sections{"laminate", "case",     "scheme",
                                                            "recovery", "sampling", "output"};
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(std::string(source), line_no, "", "unterminated section header");
            }
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!sections.contains(name)) {
                throw ConfigError(std::string(source), line_no, std::string(name), "unknown section");
            }
            section = std::string(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(source), line_no, "", "expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        if (section.empty()) {
            throw ConfigError(std::string(source), line_no, std::string(key), "key outside any section");
        }
        const std::string full = section + "." + std::string(key);
        if (!seen.insert(full).second) {
            throw ConfigError(std::string(source), line_no, full, "duplicate key");
        }
        set_at(cfg, full, trim(line.substr(eq + 1)), source, line_no);
    }
    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(source), 0, e.field(), e.detail());
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "", "cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string format_config(const RunConfig& cfg)
{
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        const auto dot = f.key.find('.');
        const std::string sec = f.key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) {
                out += "\n";
            }
            out += "[" + sec + "]\n";
            section = sec;
        }
        out += f.key.substr(dot + 1) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

}  // namespace laminate
