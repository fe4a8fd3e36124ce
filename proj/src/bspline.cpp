#include "laminate/bspline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace laminate {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots))
{
    if (degree_ < 1) {
        throw std::invalid_argument("knot vector: degree must be >= 1");
    }
    const auto p = static_cast<std::size_t>(degree_);
    if (knots_.size() < 2 * (p + 1)) {
        throw std::invalid_argument("knot vector: needs at least 2*(degree+1) knots");
    }
    if (!std::is_sorted(knots_.begin(), knots_.end())) {
        throw std::invalid_argument("knot vector: knots must be non-decreasing");
    }
    if (knots_.front() != 0.0 || knots_.back() != 1.0) {
        throw std::invalid_argument("knot vector: knots must span [0,1]");
    }
    if (multiplicity(0.0) != degree_ + 1 || multiplicity(1.0) != degree_ + 1) {
        throw std::invalid_argument("knot vector: end knots must be repeated degree+1 times");
    }
    for (double b : breakpoints()) {
        if (b > 0.0 && b < 1.0 && multiplicity(b) > degree_) {
            throw std::invalid_argument("knot vector: interior multiplicity exceeds degree at " +
                                        std::to_string(b));
        }
    }
}

std::vector<double> KnotVector::breakpoints() const
{
    std::vector<double> out;
    std::unique_copy(knots_.begin(), knots_.end(), std::back_inserter(out));
    return out;
}

int KnotVector::multiplicity(double value) const
{
    return static_cast<int>(std::count(knots_.begin(), knots_.end(), value));
}

KnotVector make_knot_vector(int degree, std::span<const double> breakpoints,
                            int interior_multiplicity)
{
    if (degree < 1) {
        throw std::invalid_argument("make_knot_vector: degree must be >= 1");
    }
    if (interior_multiplicity < 1 || interior_multiplicity > degree) {
        throw std::invalid_argument("make_knot_vector: interior multiplicity must lie in [1, degree]");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > 0.0 && breakpoints[i] < 1.0)) {
            throw std::invalid_argument("make_knot_vector: breakpoints must be interior to (0,1)");
        }
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) {
            throw std::invalid_argument("make_knot_vector: breakpoints must be strictly increasing");
        }
    }
    std::vector<double> knots(static_cast<std::size_t>(degree + 1), 0.0);
    for (double b : breakpoints) {
        knots.insert(knots.end(), static_cast<std::size_t>(interior_multiplicity), b);
    }
    knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), 1.0);
    return KnotVector(degree, std::move(knots));
}

KnotVector uniform_knot_vector(int degree, int n_elements, int interior_multiplicity)
{
    if (n_elements < 1) {
        throw std::invalid_argument("uniform_knot_vector: need at least one element");
    }
    std::vector<double> breaks;
    for (int e = 1; e < n_elements; ++e) {
        breaks.push_back(static_cast<double>(e) / n_elements);
    }
    return make_knot_vector(degree, breaks, interior_multiplicity);
}

SplineSpace1D::SplineSpace1D(KnotVector knots) : knots_(std::move(knots)) {}

std::size_t SplineSpace1D::find_span(double u, Side side) const
{
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("spline evaluation outside [0,1]: u = " + std::to_string(u));
    }
    const auto k = knots_.knots();
    const auto p = static_cast<std::size_t>(degree());
    const std::size_t n = n_basis();
    if (side == Side::right || u == 0.0) {
        if (u == 1.0) {
            return n - 1;
        }
        // last s with k[s] <= u
        auto it = std::upper_bound(k.begin() + static_cast<std::ptrdiff_t>(p),
                                   k.begin() + static_cast<std::ptrdiff_t>(n + 1), u);
        return static_cast<std::size_t>(it - k.begin()) - 1;
    }
    // first s with k[s] < u <= k[s+1]
    auto it = std::lower_bound(k.begin() + static_cast<std::ptrdiff_t>(p),
                               k.begin() + static_cast<std::ptrdiff_t>(n + 1), u);
    return static_cast<std::size_t>(it - k.begin()) - 1;
}

std::vector<std::array<double, 2>> SplineSpace1D::elements() const
{
    const auto b = knots_.breakpoints();
    std::vector<std::array<double, 2>> out;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        out.push_back({b[i], b[i + 1]});
    }
    return out;
}

std::vector<double> SplineSpace1D::greville() const
{
    const auto k = knots_.knots();
    const int p = degree();
    std::vector<double> g(n_basis());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (int j = 1; j <= p; ++j) {
            s += k[i + static_cast<std::size_t>(j)];
        }
        g[i] = s / p;
    }
    return g;
}

BasisTable eval_basis(const SplineSpace1D& space, double u, int max_deriv, Side side)
{
    if (max_deriv < 0 || max_deriv > kMaxDerivative) {
        throw std::invalid_argument("eval_basis: derivative order must lie in [0, 3]");
    }
    const std::size_t span = space.find_span(u, side);
    const auto U = space.knot_vector().knots();
    const int p = space.degree();
    const int nd = std::min(max_deriv, p);
    const auto P = static_cast<std::size_t>(p + 1);

    BasisTable out;
    out.first = span - static_cast<std::size_t>(p);
    out.degree = p;
    out.max_deriv = max_deriv;
    out.values.assign(static_cast<std::size_t>(max_deriv + 1) * P, 0.0);

    // ndu: upper triangle holds basis values, lower triangle knot differences.
    std::vector<double> ndu(P * P), left(P), right(P);
    auto NDU = [&](int r, int c) -> double& { return ndu[static_cast<std::size_t>(r) * P + static_cast<std::size_t>(c)]; };
    NDU(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[static_cast<std::size_t>(j)] = u - U[span + 1 - static_cast<std::size_t>(j)];
        right[static_cast<std::size_t>(j)] = U[span + static_cast<std::size_t>(j)] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            NDU(j, r) = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
            const double temp = NDU(r, j - 1) / NDU(j, r);
            NDU(r, j) = saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        NDU(j, j) = saved;
    }
    auto D = [&](int k, int j) -> double& { return out.values[static_cast<std::size_t>(k) * P + static_cast<std::size_t>(j)]; };
    for (int j = 0; j <= p; ++j) {
        D(0, j) = NDU(j, p);
    }

    std::vector<double> a(2 * P);
    auto A = [&](int s, int c) -> double& { return a[static_cast<std::size_t>(s) * P + static_cast<std::size_t>(c)]; };
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        A(0, 0) = 1.0;
        for (int k = 1; k <= nd; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                A(s2, 0) = A(s1, 0) / NDU(pk + 1, rk);
                d = A(s2, 0) * NDU(rk, pk);
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                A(s2, j) = (A(s1, j) - A(s1, j - 1)) / NDU(pk + 1, rk + j);
                d += A(s2, j) * NDU(rk + j, pk);
            }
            if (r <= pk) {
                A(s2, k) = -A(s1, k - 1) / NDU(pk + 1, r);
                d += A(s2, k) * NDU(r, pk);
            }
            D(k, r) = d;
            std::swap(s1, s2);
        }
    }
    int factor = p;
    for (int k = 1; k <= nd; ++k) {
        for (int j = 0; j <= p; ++j) {
            D(k, j) *= factor;
        }
        factor *= (p - k);
    }
    return out;
}

TensorSpace3D::TensorSpace3D(SplineSpace1D x, SplineSpace1D y, SplineSpace1D z)
    : spaces_{std::move(x), std::move(y), std::move(z)},
      dim_(spaces_[0].n_basis() * spaces_[1].n_basis() * spaces_[2].n_basis())
{
}

namespace {

template <int NComp>
std::array<FieldPartials, NComp> eval_impl(const TensorSpace3D& space, const Box& box,
                                           std::span<const double> coeffs,
                                           const std::array<double, 3>& param, int max_deriv,
                                           const std::array<Side, 3>& sides, std::size_t stride,
                                           std::size_t offset)
{
    if (max_deriv < 0 || max_deriv > kMaxDerivative) {
        throw std::invalid_argument("eval_field: derivative order must lie in [0, 3]");
    }
    if (coeffs.size() < space.dim() * stride) {
        throw std::invalid_argument("eval_field: coefficient vector too short");
    }
    std::array<BasisTable, 3> tab{
        eval_basis(space.direction(0), param[0], max_deriv, sides[0]),
        eval_basis(space.direction(1), param[1], max_deriv, sides[1]),
        eval_basis(space.direction(2), param[2], max_deriv, sides[2]),
    };
    std::array<int, 3> deg{};
    for (int d = 0; d < 3; ++d) {
        deg[static_cast<std::size_t>(d)] = space.direction(d).degree();
    }

    std::array<FieldPartials, NComp> out{};
    const int m = max_deriv;
    for (int kc = 0; kc <= deg[2]; ++kc) {
        const std::size_t k = tab[2].first + static_cast<std::size_t>(kc);
        for (int jc = 0; jc <= deg[1]; ++jc) {
            const std::size_t j = tab[1].first + static_cast<std::size_t>(jc);
            // Contract over x first: tx[comp][a] = sum_i N_i^(a) c_ijk
            std::array<std::array<double, 4>, NComp> tx{};
            for (int ic = 0; ic <= deg[0]; ++ic) {
                const std::size_t I = space.index(tab[0].first + static_cast<std::size_t>(ic), j, k);
                for (int comp = 0; comp < NComp; ++comp) {
                    const double c = coeffs[I * stride + offset + static_cast<std::size_t>(comp)];
                    if (c == 0.0) {
                        continue;
                    }
                    for (int a = 0; a <= m; ++a) {
                        tx[static_cast<std::size_t>(comp)][static_cast<std::size_t>(a)] += tab[0](a, ic) * c;
                    }
                }
            }
            for (int comp = 0; comp < NComp; ++comp) {
                auto& f = out[static_cast<std::size_t>(comp)];
                for (int a = 0; a <= m; ++a) {
                    const double va = tx[static_cast<std::size_t>(comp)][static_cast<std::size_t>(a)];
                    if (va == 0.0) {
                        continue;
                    }
                    for (int b = 0; a + b <= m; ++b) {
                        const double vab = va * tab[1](b, jc);
                        for (int c = 0; a + b + c <= m; ++c) {
                            f(a, b, c) += vab * tab[2](c, kc);
                        }
                    }
                }
            }
        }
    }

    std::array<std::array<double, 4>, 3> scale{};
    for (std::size_t d = 0; d < 3; ++d) {
        scale[d][0] = 1.0;
        for (std::size_t o = 1; o < 4; ++o) {
            scale[d][o] = scale[d][o - 1] / box.extent[d];
        }
    }
    for (auto& f : out) {
        for (int a = 0; a <= m; ++a) {
            for (int b = 0; a + b <= m; ++b) {
                for (int c = 0; a + b + c <= m; ++c) {
                    f(a, b, c) *= scale[0][static_cast<std::size_t>(a)] * scale[1][static_cast<std::size_t>(b)] *
                                  scale[2][static_cast<std::size_t>(c)];
                }
            }
        }
    }
    return out;
}

}  // namespace

FieldPartials eval_field(const TensorSpace3D& space, const Box& box, std::span<const double> coeffs,
                         const std::array<double, 3>& param, int max_deriv,
                         const std::array<Side, 3>& sides, std::size_t stride, std::size_t offset)
{
    return eval_impl<1>(space, box, coeffs, param, max_deriv, sides, stride, offset)[0];
}

std::array<FieldPartials, 3> eval_vector_field(const TensorSpace3D& space, const Box& box,
                                               std::span<const double> coeffs,
                                               const std::array<double, 3>& param, int max_deriv,
                                               const std::array<Side, 3>& sides)
{
    return eval_impl<3>(space, box, coeffs, param, max_deriv, sides, 3, 0);
}

std::vector<double> interpolate(const TensorSpace3D& space, const Box& box,
                                const std::function<double(double, double, double)>& f)
{
    std::array<std::vector<double>, 3> g;
    std::array<Eigen::PartialPivLU<Eigen::MatrixXd>, 3> lu;
    for (int d = 0; d < 3; ++d) {
        const auto& s = space.direction(d);
        g[static_cast<std::size_t>(d)] = s.greville();
        const auto n = static_cast<Eigen::Index>(s.n_basis());
        Eigen::MatrixXd colloc = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto t = eval_basis(s, g[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)], 0);
            for (int l = 0; l <= s.degree(); ++l) {
                colloc(r, static_cast<Eigen::Index>(t.first) + l) = t(0, l);
            }
        }
        lu[static_cast<std::size_t>(d)].compute(colloc);
    }

    const std::size_t nx = space.n_basis(0);
    const std::size_t ny = space.n_basis(1);
    const std::size_t nz = space.n_basis(2);
    std::vector<double> c(space.dim());
    for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                c[space.index(i, j, k)] = f(g[0][i] * box.extent[0], g[1][j] * box.extent[1],
                                            g[2][k] * box.extent[2]);
            }
        }
    }
    // Apply the inverse collocation operator one direction at a time.
    auto solve_lines = [&](int d) {
        const std::array<std::size_t, 3> n{nx, ny, nz};
        const auto nd = n[static_cast<std::size_t>(d)];
        Eigen::VectorXd line(static_cast<Eigen::Index>(nd));
        std::array<std::size_t, 3> idx{};
        const int d1 = (d + 1) % 3;
        const int d2 = (d + 2) % 3;
        for (idx[static_cast<std::size_t>(d2)] = 0; idx[static_cast<std::size_t>(d2)] < n[static_cast<std::size_t>(d2)];
             ++idx[static_cast<std::size_t>(d2)]) {
            for (idx[static_cast<std::size_t>(d1)] = 0; idx[static_cast<std::size_t>(d1)] < n[static_cast<std::size_t>(d1)];
                 ++idx[static_cast<std::size_t>(d1)]) {
                for (std::size_t r = 0; r < nd; ++r) {
                    idx[static_cast<std::size_t>(d)] = r;
                    line(static_cast<Eigen::Index>(r)) = c[space.index(idx[0], idx[1], idx[2])];
                }
                const Eigen::VectorXd sol = lu[static_cast<std::size_t>(d)].solve(line);
                for (std::size_t r = 0; r < nd; ++r) {
                    idx[static_cast<std::size_t>(d)] = r;
                    c[space.index(idx[0], idx[1], idx[2])] = sol(static_cast<Eigen::Index>(r));
                }
            }
        }
    };
    solve_lines(0);
    solve_lines(1);
    solve_lines(2);
    return c;
}

}  // namespace laminate
