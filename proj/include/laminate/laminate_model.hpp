#pragma once

/**
 * @file laminate_model.hpp
 * @brief Orthotropic plies, cross-ply stacks and per-ply 6x6 stiffness.
 *
 * Voigt ordering throughout the library is (11, 22, 33, 23, 13, 12) with
 * engineering shear strains. Moduli are in GPa and lengths in mm.
 */

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace laminate {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Voigt6 = std::array<double, 6>;

enum class StressComponent { s11 = 0, s22 = 1, s33 = 2, s23 = 3, s13 = 4, s12 = 5 };

[[nodiscard]] std::string_view component_name(StressComponent c);
[[nodiscard]] inline std::size_t voigt_index(StressComponent c) { return static_cast<std::size_t>(c); }

struct OrthotropicMaterial {
    double E1 = 25.0;
    double E2 = 1.0;
    double E3 = 1.0;
    double G12 = 0.2;
    double G13 = 0.2;
    double G23 = 0.5;
    double nu12 = 0.25;
    double nu13 = 0.25;
    double nu23 = 0.25;

    /// Ply of the benchmark: E2 = E3 = E1/25, G12 = G13 = G23/2.5, all nu = 0.25.
    static OrthotropicMaterial benchmark(double E1 = 25.0, double G23 = 0.5);
    static OrthotropicMaterial isotropic(double E, double nu);

    bool operator==(const OrthotropicMaterial&) const = default;
};

/// Symmetric compliance in Voigt order, with the minor entries built from
/// reciprocity (nu21/E2 = nu12/E1 and so on).
Matrix6 compliance(const OrthotropicMaterial& mat);

/// Symmetric positive-definite ply stiffness.
class Stiffness6 {
public:
    Stiffness6() = default;
    explicit Stiffness6(const Matrix6& c) : c_(c) {}

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const
    {
        return c_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    [[nodiscard]] const Matrix6& matrix() const noexcept { return c_; }

    /// sigma = C * strain, strain in engineering Voigt form.
    [[nodiscard]] Voigt6 apply(const Voigt6& strain) const;

private:
    Matrix6 c_ = Matrix6::Zero();
};

/// Inverts the compliance; throws std::invalid_argument when the engineering
/// constants do not give a positive-definite compliance.
Stiffness6 stiffness_from_engineering(const OrthotropicMaterial& mat);

/// Same ply turned by 90 degrees about the z axis: exchanges the 1/2 axes,
/// i.e. Voigt rows/cols 11<->22 and 23<->13.
Stiffness6 rotate_90(const Stiffness6& c);

enum class PlyAngle { deg0, deg90 };

struct Ply {
    OrthotropicMaterial material;
    PlyAngle angle = PlyAngle::deg0;
    double thickness = 1.0;
};

/// Ordered stack of plies, bottom (z = 0) to top (z = t).
class Layup {
public:
    explicit Layup(std::vector<Ply> plies);

    [[nodiscard]] std::size_t n_layers() const noexcept { return plies_.size(); }
    [[nodiscard]] const std::vector<Ply>& plies() const noexcept { return plies_; }
    [[nodiscard]] double thickness() const noexcept { return interfaces_.back(); }

    /// z of every ply boundary, n_layers + 1 values starting at 0.
    [[nodiscard]] const std::vector<double>& interfaces() const noexcept { return interfaces_; }

    [[nodiscard]] const Stiffness6& stiffness(std::size_t layer) const { return stiffness_.at(layer); }

    /// Ply containing z: half-open [z_i, z_{i+1}), the top ply closed.
    /// Throws std::domain_error outside [0, t].
    [[nodiscard]] std::size_t layer_at(double z) const;

    [[nodiscard]] std::pair<const Stiffness6&, std::size_t> stiffness_at(double z) const
    {
        const std::size_t l = layer_at(z);
        return {stiffness_[l], l};
    }

private:
    std::vector<Ply> plies_;
    std::vector<double> interfaces_;
    std::vector<Stiffness6> stiffness_;
};

/// Alternating cross-ply stack. With `start` = deg90 this is 90/0/90/...
Layup make_cross_ply(std::size_t n_layers, double ply_thickness, const OrthotropicMaterial& mat,
                     PlyAngle start = PlyAngle::deg90);

/// Explicit orientation sequence, bottom to top.
Layup make_layup(const std::vector<PlyAngle>& angles, double ply_thickness,
                 const OrthotropicMaterial& mat);

/// Simply-supported square plate of side L = S t under the top pressure
/// p(x,y) = sigma0 sin(pi x / L) sin(pi y / L).
struct PlateCase {
    Layup layup;
    double S = 10.0;
    double sigma0 = 1.0;

    PlateCase(Layup l, double slenderness, double amplitude);

    [[nodiscard]] double length() const noexcept { return S * layup.thickness(); }
    [[nodiscard]] double thickness() const noexcept { return layup.thickness(); }
    [[nodiscard]] double pressure(double x, double y) const;
};

/// Normalized stress: in-plane sigma/(sigma0 S^2), transverse shear
/// sigma/(sigma0 S), normal sigma/sigma0.
[[nodiscard]] double normalize(double value, StressComponent c, const PlateCase& plate);

}  // namespace laminate
