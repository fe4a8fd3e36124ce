#pragma once

/**
 * @file stress_recovery.hpp
 * @brief Out-of-plane stresses from through-thickness integration of the
 *        equilibrium equations.
 *
 * With div(sigma) = b, the transverse components follow from the in-plane
 * stress derivatives:
 *
 *   s13(z) = s13(0) - int_0^z (s11,1 + s12,2 - b1) ds
 *   s23(z) = s23(0) - int_0^z (s12,1 + s22,2 - b2) ds
 *
 * and, substituting both into the third equilibrium equation with
 * g = s11,11 + s22,22 + 2 s12,12 - b1,1 - b2,2,
 *
 *   s33(z) = s33(0) - z (s13,1 + s23,2)(0) + int_0^z [(z - s) g(s) + b3(s)] ds
 *
 * which is the twice-integrated form written as a single Cauchy integral.
 * The in-plane stress derivatives come from second and third derivatives of
 * the spline displacement, with the ply stiffness held constant. Integration
 * runs segment by segment (ply interfaces and z knots split segments), each
 * with a Gauss rule of ceil((p_z+2)/2) points, exact for (z - s) g(s), so the
 * recovered profiles are continuous in z by construction.
 */

#include "laminate/iga_solver.hpp"
#include "laminate/laminate_model.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace laminate {

struct StressState {
    Voigt6 sigma{};
    std::size_t layer = 0;
};

/// sigma = C(ply) eps(u). `layer` selects the ply for points on an
/// interface; the default follows Layup::layer_at.
StressState stress_at(const DisplacementField& field, double x, double y, double z,
                      std::optional<std::size_t> layer = std::nullopt);

struct InplaneStressDerivatives {
    int order = 1;
    double s11_1 = 0.0;
    double s12_2 = 0.0;
    double s12_1 = 0.0;
    double s22_2 = 0.0;
    // order 2 only
    double s11_11 = 0.0;
    double s22_22 = 0.0;
    double s12_12 = 0.0;
};

/// Order 1 needs in-plane degree >= 2, order 2 needs >= 3; throws
/// std::invalid_argument otherwise.
InplaneStressDerivatives inplane_stress_derivatives(const DisplacementField& field, double x, double y,
                                                    double z, std::optional<std::size_t> layer, int order);

/// Derivative of the Voigt stress of ply `layer`, d^(a+b+c)/dx^a dy^b dz^c,
/// from displacement partials of one order higher.
Voigt6 stress_derivative(const std::array<FieldPartials, 3>& u, const Stiffness6& c,
                         const std::array<int, 3>& order);

/// Body force per unit volume with the in-plane derivatives b1,1 and b2,2.
struct BodyForce {
    std::function<std::array<double, 3>(double, double, double)> value;
    std::function<std::array<double, 2>(double, double, double)> inplane_derivatives;

    [[nodiscard]] bool is_zero() const { return !value && !inplane_derivatives; }
};

/// Transverse traction (s13, s23, s33) prescribed on a face, with the
/// in-plane divergence s13,1 + s23,2 of its shear part.
struct Traction {
    double s13 = 0.0;
    double s23 = 0.0;
    double s33 = 0.0;
    double shear_divergence = 0.0;
};
using TractionFn = std::function<Traction(double x, double y)>;

enum class RecoveryMode { from_bottom, two_sided_average };

[[nodiscard]] std::string_view mode_name(RecoveryMode m);

struct RecoveryOptions {
    RecoveryMode mode = RecoveryMode::from_bottom;
    BodyForce body_force{};
    TractionFn bottom{};  ///< empty: traction-free bottom face
    TractionFn top{};     ///< required by two_sided_average

    /// Traction-free bottom and the top pressure (0, 0, -p(x, y)) of the plate.
    static RecoveryOptions for_plate(const PlateCase& plate, RecoveryMode mode = RecoveryMode::from_bottom);
};

/// Through-thickness sample with its owning ply; on an interface the ply
/// decides which one-sided limit the constitutive values use.
struct ZSample {
    double z = 0.0;
    std::size_t layer = 0;
};

struct RecoveredProfile {
    double x = 0.0;
    double y = 0.0;
    RecoveryMode mode = RecoveryMode::from_bottom;
    std::vector<ZSample> samples;
    std::vector<double> s13;
    std::vector<double> s23;
    std::vector<double> s33;
};

/// Throws std::domain_error for samples outside [0, t] or out of order, and
/// std::invalid_argument when two-sided averaging has no top traction.
RecoveredProfile recover_profile(const DisplacementField& field, double x, double y,
                                 std::span<const ZSample> samples, const RecoveryOptions& options);

/// `per_ply` cell-centred samples in every ply, strictly inside the plies.
std::vector<ZSample> interior_samples(const Layup& layup, int per_ply);

/// `per_ply` equispaced samples per ply including both ply ends, so every
/// interface appears twice (once from each side).
std::vector<ZSample> profile_samples(const Layup& layup, int per_ply);

/// max |reference - approx| / max |reference| over matching samples.
/// Throws std::invalid_argument on a size mismatch or zero reference.
double error_metric(std::span<const double> approx, std::span<const double> reference);

}  // namespace laminate
