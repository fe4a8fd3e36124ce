#include "laminate/laminate_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace laminate {

std::string_view component_name(StressComponent c)
{
    switch (c) {
    case StressComponent::s11: return "s11";
    case StressComponent::s22: return "s22";
    case StressComponent::s33: return "s33";
    case StressComponent::s23: return "s23";
    case StressComponent::s13: return "s13";
    case StressComponent::s12: return "s12";
    }
    return "?";
}

OrthotropicMaterial OrthotropicMaterial::benchmark(double E1, double G23)
{
    OrthotropicMaterial m;
    m.E1 = E1;
    m.E2 = E1 / 25.0;
    m.E3 = E1 / 25.0;
    m.G23 = G23;
    m.G12 = G23 / 2.5;
    m.G13 = G23 / 2.5;
    m.nu12 = m.nu13 = m.nu23 = 0.25;
    return m;
}

OrthotropicMaterial OrthotropicMaterial::isotropic(double E, double nu)
{
    const double G = E / (2.0 * (1.0 + nu));
    return {E, E, E, G, G, G, nu, nu, nu};
}

Matrix6 compliance(const OrthotropicMaterial& m)
{
    if (!(m.E1 > 0 && m.E2 > 0 && m.E3 > 0 && m.G12 > 0 && m.G13 > 0 && m.G23 > 0)) {
        throw std::invalid_argument("material: all moduli must be positive");
    }
    Matrix6 s = Matrix6::Zero();
    s(0, 0) = 1.0 / m.E1;
    s(1, 1) = 1.0 / m.E2;
    s(2, 2) = 1.0 / m.E3;
    s(0, 1) = s(1, 0) = -m.nu12 / m.E1;
    s(0, 2) = s(2, 0) = -m.nu13 / m.E1;
    s(1, 2) = s(2, 1) = -m.nu23 / m.E2;
    s(3, 3) = 1.0 / m.G23;
    s(4, 4) = 1.0 / m.G13;
    s(5, 5) = 1.0 / m.G12;
    return s;
}

Voigt6 Stiffness6::apply(const Voigt6& strain) const
{
    Voigt6 out{};
    for (Eigen::Index i = 0; i < 6; ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < 6; ++j) {
            s += c_(i, j) * strain[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

Stiffness6 stiffness_from_engineering(const OrthotropicMaterial& mat)
{
    const Matrix6 s = compliance(mat);
    Eigen::LLT<Matrix6> llt(s);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("material: compliance is not positive definite");
    }
    Matrix6 c = llt.solve(Matrix6::Identity());
    c = 0.5 * (c + c.transpose()).eval();
    return Stiffness6(c);
}

Stiffness6 rotate_90(const Stiffness6& c)
{
    static constexpr std::array<Eigen::Index, 6> perm{1, 0, 2, 4, 3, 5};
    Matrix6 r;
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j) {
            r(i, j) = c.matrix()(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
    }
    return Stiffness6(r);
}

Layup::Layup(std::vector<Ply> plies) : plies_(std::move(plies))
{
    if (plies_.empty()) {
        throw std::invalid_argument("layup: at least one ply required");
    }
    interfaces_.push_back(0.0);
    for (const auto& p : plies_) {
        if (!(p.thickness > 0.0)) {
            throw std::invalid_argument("layup: ply thickness must be positive");
        }
        interfaces_.push_back(interfaces_.back() + p.thickness);
        Stiffness6 c = stiffness_from_engineering(p.material);
        stiffness_.push_back(p.angle == PlyAngle::deg90 ? rotate_90(c) : c);
    }
}

std::size_t Layup::layer_at(double z) const
{
    if (!(z >= 0.0 && z <= thickness())) {
        throw std::domain_error("layup: z = " + std::to_string(z) + " outside [0, t]");
    }
    auto it = std::upper_bound(interfaces_.begin(), interfaces_.end(), z);
    const auto l = static_cast<std::size_t>(it - interfaces_.begin());
    return std::min(l == 0 ? 0 : l - 1, n_layers() - 1);
}

Layup make_layup(const std::vector<PlyAngle>& angles, double ply_thickness,
                 const OrthotropicMaterial& mat)
{
    std::vector<Ply> plies;
    plies.reserve(angles.size());
    for (PlyAngle a : angles) {
        plies.push_back({mat, a, ply_thickness});
    }
    return Layup(std::move(plies));
}

Layup make_cross_ply(std::size_t n_layers, double ply_thickness, const OrthotropicMaterial& mat,
                     PlyAngle start)
{
    std::vector<PlyAngle> angles(n_layers);
    for (std::size_t i = 0; i < n_layers; ++i) {
        const bool same = (i % 2 == 0);
        angles[i] = same ? start : (start == PlyAngle::deg0 ? PlyAngle::deg90 : PlyAngle::deg0);
    }
    return make_layup(angles, ply_thickness, mat);
}

PlateCase::PlateCase(Layup l, double slenderness, double amplitude)
    : layup(std::move(l)), S(slenderness), sigma0(amplitude)
{
    if (!(S > 0.0)) {
        throw std::invalid_argument("plate: slenderness S must be positive");
    }
}

double PlateCase::pressure(double x, double y) const
{
    const double L = length();
    return sigma0 * std::sin(std::numbers::pi * x / L) * std::sin(std::numbers::pi * y / L);
}

double normalize(double value, StressComponent c, const PlateCase& plate)
{
    switch (c) {
    case StressComponent::s11:
    case StressComponent::s22:
    case StressComponent::s12:
        return value / (plate.sigma0 * plate.S * plate.S);
    case StressComponent::s13:
    case StressComponent::s23:
        return value / (plate.sigma0 * plate.S);
    case StressComponent::s33:
        return value / plate.sigma0;
    }
    return value;
}

}  // namespace laminate
