#include "laminate/pagano.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace laminate {

Matrix6 pagano_state_matrix(const Stiffness6& c, double wave)
{
    const double a = wave;
    const double b = wave;
    const double C11 = c(0, 0), C12 = c(0, 1), C13 = c(0, 2);
    const double C22 = c(1, 1), C23 = c(1, 2), C33 = c(2, 2);
    const double C44 = c(3, 3), C55 = c(4, 4), C66 = c(5, 5);

    // Rows of dW/dz in terms of the state, reused in the traction rows.
    Eigen::Matrix<double, 1, 6> dW = Eigen::Matrix<double, 1, 6>::Zero();
    dW(0) = C13 * a / C33;
    dW(1) = C23 * b / C33;
    dW(5) = 1.0 / C33;

    Matrix6 A = Matrix6::Zero();
    // U' = s13/C55 - a W
    A(0, 3) = 1.0 / C55;
    A(0, 2) = -a;
    // V' = s23/C44 - b W
    A(1, 4) = 1.0 / C44;
    A(1, 2) = -b;
    A.row(2) = dW;
    // s13' = a (C11 a U + C12 b V - C13 W') + b C66 (b U + a V)
    A(3, 0) = a * C11 * a + b * C66 * b;
    A(3, 1) = a * C12 * b + b * C66 * a;
    A.row(3) -= a * C13 * dW;
    // s23' = a C66 (b U + a V) + b (C12 a U + C22 b V - C23 W')
    A(4, 0) = a * C66 * b + b * C12 * a;
    A(4, 1) = a * C66 * a + b * C22 * b;
    A.row(4) -= b * C23 * dW;
    // s33' = a s13 + b s23
    A(5, 3) = a;
    A(5, 4) = b;
    return A;
}

PaganoSolution::PaganoSolution(PlateCase plate) : plate_(std::move(plate))
{
    const auto& layup = plate_.layup;
    wave_ = std::numbers::pi / plate_.length();
    const auto& z = layup.interfaces();

    system_.reserve(layup.n_layers());
    for (std::size_t k = 0; k < layup.n_layers(); ++k) {
        system_.push_back(pagano_state_matrix(layup.stiffness(k), wave_));
    }

    // Propagate the three unit bottom displacement states through the stack.
    Eigen::Matrix<double, 6, 3> top = Eigen::Matrix<double, 6, 3>::Zero();
    top.topRows<3>().setIdentity();
    std::vector<Eigen::Matrix<double, 6, 3>> bottoms;
    for (std::size_t k = 0; k < layup.n_layers(); ++k) {
        bottoms.push_back(top);
        const Matrix6 T = (system_[k] * (z[k + 1] - z[k])).exp();
        top = T * top;
    }

    const Eigen::Matrix3d M = top.bottomRows<3>();
    const Eigen::Vector3d rhs(0.0, 0.0, -plate_.sigma0);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
    if (!lu.isInvertible()) {
        throw std::runtime_error("pagano: singular top-traction system (degenerate material data)");
    }
    const Eigen::Vector3d u0 = lu.solve(rhs);
    bottom_states_.reserve(bottoms.size());
    for (const auto& B : bottoms) {
        bottom_states_.push_back(B * u0);
    }
}

std::size_t PaganoSolution::resolve_layer(double z, std::optional<std::size_t> layer) const
{
    const auto& layup = plate_.layup;
    if (!layer) {
        return layup.layer_at(z);
    }
    if (*layer >= layup.n_layers()) {
        throw std::out_of_range("pagano: layer index out of range");
    }
    const auto& iz = layup.interfaces();
    if (z < iz[*layer] || z > iz[*layer + 1]) {
        throw std::domain_error("pagano: z outside requested layer");
    }
    return *layer;
}

void PaganoSolution::check_point(double x, double y, double z) const
{
    const double L = plate_.length();
    if (!(x >= 0.0 && x <= L && y >= 0.0 && y <= L && z >= 0.0 && z <= plate_.thickness())) {
        throw std::domain_error("pagano: point outside plate (" + std::to_string(x) + ", " +
                                std::to_string(y) + ", " + std::to_string(z) + ")");
    }
}

State6 PaganoSolution::state(double z, std::optional<std::size_t> layer) const
{
    const std::size_t k = resolve_layer(z, layer);
    const double dz = z - plate_.layup.interfaces()[k];
    if (dz == 0.0) {
        return bottom_states_[k];
    }
    return (system_[k] * dz).exp() * bottom_states_[k];
}

std::array<double, 3> PaganoSolution::displacement(double x, double y, double z,
                                                   std::optional<std::size_t> layer) const
{
    check_point(x, y, z);
    const State6 s = state(z, layer);
    const double sx = std::sin(wave_ * x), cx = std::cos(wave_ * x);
    const double sy = std::sin(wave_ * y), cy = std::cos(wave_ * y);
    return {s(0) * cx * sy, s(1) * sx * cy, s(2) * sx * sy};
}

Voigt6 PaganoSolution::stress(double x, double y, double z, std::optional<std::size_t> layer) const
{
    check_point(x, y, z);
    const std::size_t k = resolve_layer(z, layer);
    const State6 s = state(z, k);
    const auto& c = plate_.layup.stiffness(k);
    const double a = wave_;
    const double b = wave_;
    const double U = s(0), V = s(1);
    const double dW = (s(5) + c(0, 2) * a * U + c(1, 2) * b * V) / c(2, 2);

    const double sx = std::sin(a * x), cx = std::cos(a * x);
    const double sy = std::sin(b * y), cy = std::cos(b * y);
    Voigt6 out{};
    out[0] = (-c(0, 0) * a * U - c(0, 1) * b * V + c(0, 2) * dW) * sx * sy;
    out[1] = (-c(0, 1) * a * U - c(1, 1) * b * V + c(1, 2) * dW) * sx * sy;
    out[2] = s(5) * sx * sy;
    out[3] = s(4) * sx * cy;
    out[4] = s(3) * cx * sy;
    out[5] = c(5, 5) * (b * U + a * V) * cx * cy;
    return out;
}

}  // namespace laminate
