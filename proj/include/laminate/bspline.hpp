#pragma once

/**
 * @file bspline.hpp
 * @brief Univariate and tensor-product B-spline spaces on the unit cube.
 *
 * Knot vectors are open (clamped) on [0,1]. Interior multiplicity controls
 * the continuity: multiplicity m at a breakpoint gives C^(p-m) there, so the
 * layerwise through-thickness space uses m = p (C0 interfaces) and the
 * single-element space has no interior knots at all.
 *
 * Basis evaluation follows the knot-span recursion with a derivative table
 * (Piegl & Tiller, A2.3) and returns only the p+1 functions active on the
 * span. Derivatives of order above the degree are reported as zero.
 */

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace laminate {

/// Highest derivative order any evaluator in the library produces.
inline constexpr int kMaxDerivative = 3;

/// Which knot span owns a point that sits exactly on a breakpoint.
enum class Side { right, left };

class KnotVector {
public:
    /// Validates the clamped-knot invariants; throws std::invalid_argument.
    KnotVector(int degree, std::vector<double> knots);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }
    [[nodiscard]] std::size_t n_basis() const noexcept { return knots_.size() - degree_ - 1; }

    /// Distinct knot values, 0 and 1 included.
    [[nodiscard]] std::vector<double> breakpoints() const;
    [[nodiscard]] int multiplicity(double value) const;

private:
    int degree_;
    std::vector<double> knots_;
};

/// Open knot vector with the given interior breakpoints, each repeated
/// `interior_multiplicity` times.
KnotVector make_knot_vector(int degree, std::span<const double> breakpoints,
                            int interior_multiplicity = 1);

/// `n_elements` uniform spans.
KnotVector uniform_knot_vector(int degree, int n_elements, int interior_multiplicity = 1);

/// Active basis functions and their derivatives at one parametric point.
struct BasisTable {
    std::size_t first = 0;  ///< global index of the first active function
    int degree = 0;
    int max_deriv = 0;
    std::vector<double> values;  ///< row-major (max_deriv+1) x (degree+1)

    [[nodiscard]] double operator()(int deriv, int local) const
    {
        return values[static_cast<std::size_t>(deriv * (degree + 1) + local)];
    }
};

class SplineSpace1D {
public:
    explicit SplineSpace1D(KnotVector knots);

    [[nodiscard]] const KnotVector& knot_vector() const noexcept { return knots_; }
    [[nodiscard]] int degree() const noexcept { return knots_.degree(); }
    [[nodiscard]] std::size_t n_basis() const noexcept { return knots_.n_basis(); }

    /// Index of the knot span [k_s, k_{s+1}) containing u; throws
    /// std::domain_error outside [0,1].
    [[nodiscard]] std::size_t find_span(double u, Side side = Side::right) const;

    /// Non-empty spans as (begin, end) parameter pairs.
    [[nodiscard]] std::vector<std::array<double, 2>> elements() const;

    /// Greville abscissae, one per basis function.
    [[nodiscard]] std::vector<double> greville() const;

private:
    KnotVector knots_;
};

BasisTable eval_basis(const SplineSpace1D& space, double u, int max_deriv,
                      Side side = Side::right);

/// Axis-aligned box [0,Lx] x [0,Ly] x [0,Lz]; the parametric cube maps onto it
/// by a constant diagonal Jacobian.
struct Box {
    std::array<double, 3> extent{1.0, 1.0, 1.0};

    [[nodiscard]] std::array<double, 3> to_parametric(double x, double y, double z) const
    {
        return {x / extent[0], y / extent[1], z / extent[2]};
    }
};

class TensorSpace3D {
public:
    TensorSpace3D(SplineSpace1D x, SplineSpace1D y, SplineSpace1D z);

    [[nodiscard]] const SplineSpace1D& direction(int d) const { return spaces_[static_cast<std::size_t>(d)]; }
    [[nodiscard]] std::size_t n_basis(int d) const { return direction(d).n_basis(); }

    /// Scalar dimension: product of the univariate dimensions.
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept
    {
        return i + spaces_[0].n_basis() * (j + spaces_[1].n_basis() * k);
    }

private:
    std::array<SplineSpace1D, 3> spaces_;
    std::size_t dim_;
};

/// All partials d^(a+b+c) f / dx^a dy^b dz^c with a,b,c <= 3 in physical
/// coordinates. Entries above the requested total order are zero.
class FieldPartials {
public:
    [[nodiscard]] double operator()(int a, int b, int c) const { return data_[slot(a, b, c)]; }
    double& operator()(int a, int b, int c) { return data_[slot(a, b, c)]; }

    /// Multi-index access; order[d] is the derivative count in direction d.
    [[nodiscard]] double at(const std::array<int, 3>& order) const
    {
        return (*this)(order[0], order[1], order[2]);
    }

private:
    static std::size_t slot(int a, int b, int c) { return static_cast<std::size_t>(16 * a + 4 * b + c); }
    std::array<double, 64> data_{};
};

/// Evaluates a scalar spline field at a parametric point. `coeffs` is read
/// with the given stride and offset so interleaved vector coefficients work
/// without copying.
FieldPartials eval_field(const TensorSpace3D& space, const Box& box,
                         std::span<const double> coeffs,
                         const std::array<double, 3>& param, int max_deriv,
                         const std::array<Side, 3>& sides = {Side::right, Side::right, Side::right},
                         std::size_t stride = 1, std::size_t offset = 0);

/// Three-component field with interleaved coefficients (3*I + c).
std::array<FieldPartials, 3> eval_vector_field(
    const TensorSpace3D& space, const Box& box, std::span<const double> coeffs,
    const std::array<double, 3>& param, int max_deriv,
    const std::array<Side, 3>& sides = {Side::right, Side::right, Side::right});

/// Tensor interpolant at the Greville points of a function given in
/// physical coordinates. Exact for functions in the space.
std::vector<double> interpolate(const TensorSpace3D& space, const Box& box,
                                const std::function<double(double, double, double)>& f);

}  // namespace laminate
