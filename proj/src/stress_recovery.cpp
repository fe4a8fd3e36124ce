#include "laminate/stress_recovery.hpp"

#include "laminate/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace laminate {

namespace {

std::size_t resolve_layer(const Layup& layup, double z, std::optional<std::size_t> layer)
{
    if (!layer) {
        return layup.layer_at(z);
    }
    if (*layer >= layup.n_layers()) {
        throw std::out_of_range("stress recovery: layer index out of range");
    }
    const auto& iz = layup.interfaces();
    if (z < iz[*layer] || z > iz[*layer + 1]) {
        throw std::domain_error("stress recovery: z = " + std::to_string(z) + " not in layer " +
                                std::to_string(*layer));
    }
    return *layer;
}

void check_inplane(const PlateCase& plate, double x, double y)
{
    const double L = plate.length();
    if (!(x >= 0.0 && x <= L && y >= 0.0 && y <= L)) {
        throw std::domain_error("stress recovery: station (" + std::to_string(x) + ", " +
                                std::to_string(y) + ") outside the plate");
    }
}

/// Through-thickness integrands at one point: the shear equations, the
/// s33 kernel g and the transverse body force.
struct Integrand {
    double f13 = 0.0;
    double f23 = 0.0;
    double g = 0.0;
    double b3 = 0.0;
};

Integrand integrand(const DisplacementField& field, const BodyForce& bf, double x, double y, double z,
                    std::size_t layer)
{
    const auto d = inplane_stress_derivatives(field, x, y, z, layer, 2);
    Integrand f{d.s11_1 + d.s12_2, d.s12_1 + d.s22_2, d.s11_11 + d.s22_22 + 2.0 * d.s12_12, 0.0};
    if (bf.value) {
        const auto b = bf.value(x, y, z);
        f.f13 -= b[0];
        f.f23 -= b[1];
        f.b3 = b[2];
    }
    if (bf.inplane_derivatives) {
        const auto db = bf.inplane_derivatives(x, y, z);
        f.g -= db[0] + db[1];
    }
    return f;
}

/// Running integrals from z = 0: int f13, int f23, int g, int s*g, int b3.
struct Moments {
    double i13 = 0.0;
    double i23 = 0.0;
    double g0 = 0.0;
    double g1 = 0.0;
    double b3 = 0.0;

    Moments& operator+=(const Moments& o)
    {
        i13 += o.i13;
        i23 += o.i23;
        g0 += o.g0;
        g1 += o.g1;
        b3 += o.b3;
        return *this;
    }

    /// int_0^z G0(s) ds = z G0(z) - G1(z)
    [[nodiscard]] double double_integral(double z) const { return z * g0 - g1; }
};

struct Segment {
    double a;
    double b;
    std::size_t layer;
};

std::vector<Segment> integration_segments(const DisplacementField& field)
{
    const auto& layup = field.plate().layup;
    const double t = layup.thickness();
    std::vector<double> cuts = layup.interfaces();
    for (double k : field.discretization().space().direction(2).knot_vector().breakpoints()) {
        cuts.push_back(k * t);
    }
    std::sort(cuts.begin(), cuts.end());
    // merge cuts closer than round-off so no sliver segments appear
    std::vector<double> merged;
    for (double c : cuts) {
        if (merged.empty() || c - merged.back() > 1e-12 * t) {
            merged.push_back(c);
        }
    }
    merged.back() = t;
    std::vector<Segment> segs;
    for (std::size_t s = 0; s + 1 < merged.size(); ++s) {
        segs.push_back({merged[s], merged[s + 1], layup.layer_at(0.5 * (merged[s] + merged[s + 1]))});
    }
    return segs;
}

Moments integrate(const DisplacementField& field, const BodyForce& bf, const GaussRule& g, double x,
                  double y, double a, double b, std::size_t layer)
{
    Moments acc;
    if (b <= a) {
        return acc;
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < g.size(); ++q) {
        const double w = half * g.weights[q];
        const double z = mid + half * g.points[q];
        const auto f = integrand(field, bf, x, y, z, layer);
        acc.i13 += w * f.f13;
        acc.i23 += w * f.f23;
        acc.g0 += w * f.g;
        acc.g1 += w * z * f.g;
        acc.b3 += w * f.b3;
    }
    return acc;
}

}  // namespace

Voigt6 stress_derivative(const std::array<FieldPartials, 3>& u, const Stiffness6& c,
                         const std::array<int, 3>& order)
{
    auto du = [&](int comp, int dir) {
        std::array<int, 3> o = order;
        ++o[static_cast<std::size_t>(dir)];
        return u[static_cast<std::size_t>(comp)].at(o);
    };
    const Voigt6 strain{du(0, 0), du(1, 1), du(2, 2), du(1, 2) + du(2, 1), du(0, 2) + du(2, 0),
                        du(0, 1) + du(1, 0)};
    return c.apply(strain);
}

StressState stress_at(const DisplacementField& field, double x, double y, double z,
                      std::optional<std::size_t> layer)
{
    const auto& plate = field.plate();
    check_inplane(plate, x, y);
    const std::size_t l = resolve_layer(plate.layup, z, layer);
    const auto u = field.partials(x, y, z, 1, l);
    return {stress_derivative(u, plate.layup.stiffness(l), {0, 0, 0}), l};
}

InplaneStressDerivatives inplane_stress_derivatives(const DisplacementField& field, double x, double y,
                                                    double z, std::optional<std::size_t> layer, int order)
{
    if (order != 1 && order != 2) {
        throw std::invalid_argument("inplane_stress_derivatives: order must be 1 or 2");
    }
    const int p = field.discretization().scheme().p_inplane;
    if (p < order + 1) {
        throw std::invalid_argument("inplane_stress_derivatives: in-plane degree " + std::to_string(p) +
                                    " too low for derivative order " + std::to_string(order));
    }
    const auto& plate = field.plate();
    check_inplane(plate, x, y);
    const std::size_t l = resolve_layer(plate.layup, z, layer);
    const auto u = field.partials(x, y, z, order + 1, l);
    const auto& C = plate.layup.stiffness(l);

    InplaneStressDerivatives d;
    d.order = order;
    const Voigt6 dx = stress_derivative(u, C, {1, 0, 0});
    const Voigt6 dy = stress_derivative(u, C, {0, 1, 0});
    d.s11_1 = dx[0];
    d.s12_1 = dx[5];
    d.s12_2 = dy[5];
    d.s22_2 = dy[1];
    if (order == 2) {
        d.s11_11 = stress_derivative(u, C, {2, 0, 0})[0];
        d.s22_22 = stress_derivative(u, C, {0, 2, 0})[1];
        d.s12_12 = stress_derivative(u, C, {1, 1, 0})[5];
    }
    return d;
}

std::string_view mode_name(RecoveryMode m)
{
    return m == RecoveryMode::from_bottom ? "from_bottom" : "two_sided_average";
}

RecoveryOptions RecoveryOptions::for_plate(const PlateCase& plate, RecoveryMode mode)
{
    RecoveryOptions o;
    o.mode = mode;
    o.top = [plate](double x, double y) { return Traction{0.0, 0.0, -plate.pressure(x, y)}; };
    return o;
}

RecoveredProfile recover_profile(const DisplacementField& field, double x, double y,
                                 std::span<const ZSample> samples, const RecoveryOptions& options)
{
    const auto& plate = field.plate();
    const auto& layup = plate.layup;
    check_inplane(plate, x, y);
    if (options.mode == RecoveryMode::two_sided_average && !options.top) {
        throw std::invalid_argument("recover_profile: two_sided_average needs the top traction");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        resolve_layer(layup, samples[i].z, samples[i].layer);
        if (i > 0 && samples[i].z < samples[i - 1].z) {
            throw std::domain_error("recover_profile: z samples must be sorted");
        }
    }

    const int pz = field.discretization().scheme().p_z;
    const GaussRule g = gauss_legendre((pz + 3) / 2);
    const auto segs = integration_segments(field);
    const double t = layup.thickness();

    // Moments from z = 0 to the start of each segment, plus the total.
    std::vector<Moments> cum(segs.size() + 1);
    for (std::size_t s = 0; s < segs.size(); ++s) {
        cum[s + 1] = cum[s];
        cum[s + 1] += integrate(field, options.body_force, g, x, y, segs[s].a, segs[s].b, segs[s].layer);
    }
    const Moments total = cum.back();

    const Traction bottom = options.bottom ? options.bottom(x, y) : Traction{};
    Traction top{};
    if (options.mode == RecoveryMode::two_sided_average) {
        top = options.top(x, y);
    }

    RecoveredProfile out;
    out.x = x;
    out.y = y;
    out.mode = options.mode;
    out.samples.assign(samples.begin(), samples.end());
    out.s13.reserve(samples.size());
    out.s23.reserve(samples.size());
    out.s33.reserve(samples.size());

    std::size_t s = 0;
    for (const auto& smp : samples) {
        const double z = smp.z;
        while (s + 1 < segs.size() && z > segs[s].b) {
            ++s;
        }
        Moments I = cum[s];
        I += integrate(field, options.body_force, g, x, y, segs[s].a, z, segs[s].layer);

        double s13 = bottom.s13 - I.i13;
        double s23 = bottom.s23 - I.i23;
        double s33 = bottom.s33 - bottom.shear_divergence * z + I.double_integral(z) + I.b3;
        if (options.mode == RecoveryMode::two_sided_average) {
            const double t13 = top.s13 + (total.i13 - I.i13);
            const double t23 = top.s23 + (total.i23 - I.i23);
            const double t33 = top.s33 + (top.shear_divergence + total.g0) * (t - z) -
                               (total.double_integral(t) - I.double_integral(z)) - (total.b3 - I.b3);
            s13 = 0.5 * (s13 + t13);
            s23 = 0.5 * (s23 + t23);
            s33 = 0.5 * (s33 + t33);
        }
        out.s13.push_back(s13);
        out.s23.push_back(s23);
        out.s33.push_back(s33);
    }
    return out;
}

std::vector<ZSample> interior_samples(const Layup& layup, int per_ply)
{
    if (per_ply < 1) {
        throw std::invalid_argument("interior_samples: need at least one sample per ply");
    }
    const auto& iz = layup.interfaces();
    std::vector<ZSample> out;
    for (std::size_t l = 0; l < layup.n_layers(); ++l) {
        const double h = iz[l + 1] - iz[l];
        for (int j = 0; j < per_ply; ++j) {
            out.push_back({iz[l] + h * (j + 0.5) / per_ply, l});
        }
    }
    return out;
}

std::vector<ZSample> profile_samples(const Layup& layup, int per_ply)
{
    if (per_ply < 2) {
        throw std::invalid_argument("profile_samples: need at least two samples per ply");
    }
    const auto& iz = layup.interfaces();
    std::vector<ZSample> out;
    for (std::size_t l = 0; l < layup.n_layers(); ++l) {
        const double h = iz[l + 1] - iz[l];
        for (int j = 0; j < per_ply; ++j) {
            const double z = j + 1 == per_ply ? iz[l + 1] : iz[l] + h * j / (per_ply - 1);
            out.push_back({z, l});
        }
    }
    return out;
}

double error_metric(std::span<const double> approx, std::span<const double> reference)
{
    if (approx.size() != reference.size() || reference.empty()) {
        throw std::invalid_argument("error_metric: sample sets must be non-empty and aligned");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        num = std::max(num, std::abs(reference[i] - approx[i]));
        den = std::max(den, std::abs(reference[i]));
    }
    if (den == 0.0) {
        throw std::invalid_argument("error_metric: reference is identically zero");
    }
    return num / den;
}

}  // namespace laminate
