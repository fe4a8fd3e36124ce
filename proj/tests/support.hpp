#pragma once

// Shared test helpers: trivariate polynomials with exact derivatives and
// small plate fixtures.

#include "laminate/iga_solver.hpp"
#include "laminate/laminate_model.hpp"

#include <array>
#include <cmath>
#include <map>
#include <random>

namespace testing_support {

/// sum c_ijk x^i y^j z^k
struct Poly3 {
    std::map<std::array<int, 3>, double> terms;

    Poly3& add(double c, int i, int j, int k)
    {
        terms[{i, j, k}] += c;
        return *this;
    }

    /// d^(a+b+c)/dx^a dy^b dz^c at (x, y, z)
    [[nodiscard]] double operator()(double x, double y, double z, int a = 0, int b = 0, int c = 0) const
    {
        auto falling = [](int n, int d) {
            double f = 1.0;
            for (int m = 0; m < d; ++m) {
                f *= n - m;
            }
            return f;
        };
        double s = 0.0;
        for (const auto& [e, coef] : terms) {
            if (e[0] < a || e[1] < b || e[2] < c) {
                continue;
            }
            s += coef * falling(e[0], a) * falling(e[1], b) * falling(e[2], c) * std::pow(x, e[0] - a) *
                 std::pow(y, e[1] - b) * std::pow(z, e[2] - c);
        }
        return s;
    }
};

/// Displacement (u, v, w) given by polynomials, with the exact stress of a
/// homogeneous stiffness and its divergence.
struct PolyDisplacement {
    std::array<Poly3, 3> u;

    /// d u_comp / d x_dir, differentiated further by `extra`
    [[nodiscard]] double grad(int comp, int dir, double x, double y, double z, std::array<int, 3> extra = {}) const
    {
        ++extra[static_cast<std::size_t>(dir)];
        return u[static_cast<std::size_t>(comp)](x, y, z, extra[0], extra[1], extra[2]);
    }

    [[nodiscard]] laminate::Voigt6 stress(const laminate::Stiffness6& C, double x, double y, double z,
                                          std::array<int, 3> extra = {}) const
    {
        auto g = [&](int c, int d) { return grad(c, d, x, y, z, extra); };
        return C.apply({g(0, 0), g(1, 1), g(2, 2), g(1, 2) + g(2, 1), g(0, 2) + g(2, 0), g(0, 1) + g(1, 0)});
    }

    /// b = div sigma, differentiated by `extra`
    [[nodiscard]] std::array<double, 3> divergence(const laminate::Stiffness6& C, double x, double y, double z,
                                                   std::array<int, 3> extra = {}) const
    {
        auto d = [&](int dir) {
            auto e = extra;
            ++e[static_cast<std::size_t>(dir)];
            return stress(C, x, y, z, e);
        };
        const auto dx = d(0), dy = d(1), dz = d(2);
        return {dx[0] + dy[5] + dz[4], dx[5] + dy[1] + dz[3], dx[4] + dy[3] + dz[2]};
    }
};

inline laminate::PlateCase benchmark_plate(std::size_t n_layers, double S)
{
    return {laminate::make_cross_ply(n_layers, 1.0, laminate::OrthotropicMaterial::benchmark()), S, 1.0};
}

/// Plies of one orientation: piecewise layered bookkeeping, homogeneous material.
inline laminate::PlateCase homogeneous_plate(std::size_t n_layers, double ply, double S)
{
    return {laminate::make_layup(std::vector<laminate::PlyAngle>(n_layers, laminate::PlyAngle::deg0), ply,
                                 laminate::OrthotropicMaterial::benchmark()),
            S, 1.0};
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(20240611);
    return g;
}

inline double uniform(double a, double b)
{
    return std::uniform_real_distribution<double>(a, b)(rng());
}

}  // namespace testing_support
