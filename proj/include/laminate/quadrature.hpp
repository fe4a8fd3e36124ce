#pragma once

#include <cstddef>
#include <vector>

namespace laminate {

/// Gauss-Legendre rule on [-1,1]; exact for polynomials of degree 2n-1.
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

GaussRule gauss_legendre(int n);

/// A 1D quadrature on a physical interval with the owning material layer of
/// every point recorded.
struct LayeredRule {
    std::vector<double> points;
    std::vector<double> weights;
    std::vector<std::size_t> layer;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    void append(const GaussRule& rule, double a, double b, std::size_t layer_index);
};

}  // namespace laminate
