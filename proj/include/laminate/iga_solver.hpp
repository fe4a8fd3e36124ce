#pragma once

/**
 * @file iga_solver.hpp
 * @brief Galerkin 3D elasticity on the plate box with tensor-product splines.
 *
 * Two through-thickness discretizations share the same in-plane space:
 *  - layerwise: one z element per ply with C0 interfaces, p_z+1 Gauss points
 *    per z element;
 *  - single element: one z element for the whole stack, q Gauss points in
 *    every ply.
 *
 * Because the geometry is an axis-aligned box and the stiffness depends on z
 * only, every stiffness entry is a sum of products of 1D integrals. The
 * assembler builds those 1D factors with the element quadrature above and
 * contracts them directly into compressed sparse storage; the result equals
 * sum_q w_q B^T C B |J| evaluated with the tensor Gauss rule.
 *
 * Degrees of freedom are interleaved: dof = 3 * I + c with I the scalar
 * basis index and c the displacement component.
 */

#include "laminate/bspline.hpp"
#include "laminate/laminate_model.hpp"
#include "laminate/quadrature.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace laminate {

enum class Variant { layerwise, single_element };

[[nodiscard]] std::string_view variant_name(Variant v);

struct DiscretizationScheme {
    Variant variant = Variant::single_element;
    int p_inplane = 4;
    int n_elements = 9;  ///< per in-plane direction
    int p_z = 3;
    int q_per_layer = 4;           ///< single-element only
    int z_elements_per_layer = 1;  ///< layerwise only

    bool operator==(const DiscretizationScheme&) const = default;
};

class Discretization {
public:
    Discretization(PlateCase plate, DiscretizationScheme scheme);

    [[nodiscard]] const PlateCase& plate() const noexcept { return plate_; }
    [[nodiscard]] const DiscretizationScheme& scheme() const noexcept { return scheme_; }
    [[nodiscard]] const TensorSpace3D& space() const noexcept { return space_; }
    [[nodiscard]] const Box& box() const noexcept { return box_; }

    /// Physical-coordinate rules: x and y use p+1 points per element, z is
    /// per-ply as described above.
    [[nodiscard]] const LayeredRule& rule(int direction) const { return rules_[static_cast<std::size_t>(direction)]; }

    [[nodiscard]] std::size_t scalar_dofs() const noexcept { return space_.dim(); }
    [[nodiscard]] std::size_t vector_dofs() const noexcept { return 3 * space_.dim(); }

    /// Simple support: u_y = u_z = 0 on x = 0, L and u_x = u_z = 0 on y = 0, L.
    [[nodiscard]] bool is_fixed(std::size_t dof) const { return fixed_[dof] != 0; }
    [[nodiscard]] std::size_t n_free() const noexcept { return n_free_; }

private:
    PlateCase plate_;
    DiscretizationScheme scheme_;
    TensorSpace3D space_;
    Box box_;
    std::array<LayeredRule, 3> rules_;
    std::vector<char> fixed_;
    std::size_t n_free_ = 0;
};

/// Validates the scheme against the layup; throws std::invalid_argument.
Discretization build_discretization(const PlateCase& plate, const DiscretizationScheme& scheme);

/// Scalar-space dimension predicted by the closed forms, without building anything.
[[nodiscard]] std::size_t predicted_scalar_dofs(std::size_t n_layers, const DiscretizationScheme& scheme);

/// 1D factors of the stiffness operator; `entry` gives any K(row, col) of the
/// unconstrained system.
class TensorStiffness {
public:
    explicit TensorStiffness(const Discretization& disc);

    [[nodiscard]] double entry(std::size_t row_dof, std::size_t col_dof) const;

    /// Upper triangle on the free dofs, compressed column storage.
    [[nodiscard]] Eigen::SparseMatrix<double> assemble_free_upper(const Discretization& disc,
                                                                  const std::vector<std::ptrdiff_t>& free_index) const;

private:
    // [deriv_row][deriv_col] for x and y; dense n x n
    std::array<std::array<Eigen::MatrixXd, 2>, 2> x_, y_;
    // z factor for (component m, direction alpha, component n, direction beta)
    std::array<Eigen::MatrixXd, 81> z_;
    std::vector<std::array<std::size_t, 2>> z_overlap_;
    std::size_t nx_, ny_, nz_;
    int px_, py_;

    [[nodiscard]] const Eigen::MatrixXd& zf(int m, int a, int n, int b) const
    {
        return z_[static_cast<std::size_t>(((m * 3 + a) * 3 + n) * 3 + b)];
    }
    [[nodiscard]] double value(std::size_t i, std::size_t j, std::size_t k, int m, std::size_t i2,
                               std::size_t j2, std::size_t k2, int n) const;
};

struct SparseSystem {
    Eigen::SparseMatrix<double> K;  ///< upper triangle, free dofs only
    Eigen::VectorXd F;              ///< free dofs only
    std::vector<std::size_t> free_dofs;
    std::vector<std::ptrdiff_t> free_index;  ///< dof -> free index, -1 when fixed
};

/// Consistent nodal forces of the downward top traction (0, 0, -p(x,y)),
/// full length (all dofs).
Eigen::VectorXd apply_load(const Discretization& disc);

SparseSystem assemble(const Discretization& disc);

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual)
    {
    }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct SpdSolution {
    Eigen::VectorXd x;
    double relative_residual = 0.0;
};

/// Direct sparse Cholesky of a symmetric matrix given by its upper triangle,
/// followed by iterative refinement until ||Kx - b|| / ||b|| <= tol.
SpdSolution solve_spd(const Eigen::SparseMatrix<double>& upper, const Eigen::VectorXd& rhs,
                      double tol = 1e-10);

/// Solved spline displacement over the plate.
class DisplacementField {
public:
    DisplacementField(Discretization disc, std::vector<double> coeffs, double residual = 0.0);

    [[nodiscard]] const Discretization& discretization() const noexcept { return disc_; }
    [[nodiscard]] const PlateCase& plate() const noexcept { return disc_.plate(); }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

    /// Physical partials of (u, v, w) at (x, y, z). On a ply interface the
    /// through-thickness span is taken from inside `layer` when given.
    [[nodiscard]] std::array<FieldPartials, 3> partials(double x, double y, double z, int max_deriv,
                                                        std::optional<std::size_t> layer = std::nullopt) const;

    [[nodiscard]] std::array<double, 3> value(double x, double y, double z) const;

private:
    Discretization disc_;
    std::vector<double> coeffs_;
    double residual_;
};

DisplacementField solve(const Discretization& disc, const SparseSystem& system);

}  // namespace laminate
