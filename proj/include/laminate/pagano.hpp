#pragma once

/**
 * @file pagano.hpp
 * @brief Exact 3D elasticity solution of the simply-supported cross-ply plate
 *        under a bisinusoidal top pressure.
 *
 * With a = b = pi/L the fields separate as
 *
 *   u = U(z) cos(ax) sin(by),  v = V(z) sin(ax) cos(by),  w = W(z) sin(ax) sin(by)
 *
 * and the amplitudes of (U, V, W, s13, s23, s33) obey X' = A_k X inside
 * ply k, with A_k constant. The state is carried across the stack by the
 * per-ply transfer matrix exp(A_k h_k); displacement and traction continuity
 * at interfaces are therefore built in. The three unknown bottom
 * displacement amplitudes follow from the top traction conditions
 * s13 = s23 = 0, s33 = -sigma0 (the bottom face is traction free).
 */

#include "laminate/laminate_model.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace laminate {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using State6 = Eigen::Matrix<double, 6, 1>;

class PaganoSolution {
public:
    /// Throws std::runtime_error when the top-traction system is singular.
    explicit PaganoSolution(PlateCase plate);

    [[nodiscard]] const PlateCase& plate() const noexcept { return plate_; }

    /// Amplitudes (U, V, W, s13, s23, s33) at z. `layer` picks the ply for a
    /// point on an interface; by default the layup tie-break applies.
    [[nodiscard]] State6 state(double z, std::optional<std::size_t> layer = std::nullopt) const;

    /// (u, v, w) at a physical point.
    [[nodiscard]] std::array<double, 3> displacement(double x, double y, double z,
                                                     std::optional<std::size_t> layer = std::nullopt) const;

    /// Voigt stress (11, 22, 33, 23, 13, 12) at a physical point.
    [[nodiscard]] Voigt6 stress(double x, double y, double z,
                                std::optional<std::size_t> layer = std::nullopt) const;

    [[nodiscard]] double stress(double x, double y, double z, StressComponent c,
                                std::optional<std::size_t> layer = std::nullopt) const
    {
        return stress(x, y, z, layer)[voigt_index(c)];
    }

    /// State at the bottom of every ply; the six constants per layer.
    [[nodiscard]] const std::vector<State6>& layer_states() const noexcept { return bottom_states_; }

private:
    [[nodiscard]] std::size_t resolve_layer(double z, std::optional<std::size_t> layer) const;
    void check_point(double x, double y, double z) const;

    PlateCase plate_;
    double wave_ = 0.0;  // pi / L
    std::vector<Matrix6> system_;
    std::vector<State6> bottom_states_;
};

/// 6x6 state matrix of one ply for the wavenumber a = b = `wave`.
Matrix6 pagano_state_matrix(const Stiffness6& c, double wave);

}  // namespace laminate
