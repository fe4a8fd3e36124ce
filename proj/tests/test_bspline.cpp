#include "laminate/bspline.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

using namespace laminate;
using testing_support::uniform;

namespace {

// Cox-de Boor recursion, with derivatives from the same recursion applied
// to the lower-degree functions. Half-open spans except the last.
double cox_de_boor(const std::vector<double>& U, int i, int p, double u, int d = 0)
{
    const auto k = [&](int j) { return U[static_cast<std::size_t>(j)]; };
    if (d > p) {
        return 0.0;
    }
    if (d > 0) {
        double s = 0.0;
        if (k(i + p) > k(i)) {
            s += p / (k(i + p) - k(i)) * cox_de_boor(U, i, p - 1, u, d - 1);
        }
        if (k(i + p + 1) > k(i + 1)) {
            s -= p / (k(i + p + 1) - k(i + 1)) * cox_de_boor(U, i + 1, p - 1, u, d - 1);
        }
        return s;
    }
    if (p == 0) {
        const bool last = u == U.back() && k(i + 1) == U.back() && k(i) < k(i + 1);
        return (k(i) <= u && u < k(i + 1)) || last ? 1.0 : 0.0;
    }
    double s = 0.0;
    if (k(i + p) > k(i)) {
        s += (u - k(i)) / (k(i + p) - k(i)) * cox_de_boor(U, i, p - 1, u);
    }
    if (k(i + p + 1) > k(i + 1)) {
        s += (k(i + p + 1) - u) / (k(i + p + 1) - k(i + 1)) * cox_de_boor(U, i + 1, p - 1, u);
    }
    return s;
}

std::vector<double> to_vector(std::span<const double> s)
{
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("knot vector validation")
{
    CHECK_NOTHROW(KnotVector(2, {0, 0, 0, 0.5, 1, 1, 1}));
    CHECK_THROWS_AS(KnotVector(0, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 0.7, 0.5, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 0.5, 2, 2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 0.2, 0.5, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 0.5, 0.5, 0.5, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(uniform_knot_vector(3, 0), std::invalid_argument);
    const std::vector<double> bad{0.5, 0.4};
    CHECK_THROWS_AS(make_knot_vector(3, bad), std::invalid_argument);
}

TEST_CASE("knot vector queries")
{
    const KnotVector kv = uniform_knot_vector(3, 4, 2);
    CHECK(kv.n_basis() == 3 + 1 + 3 * 2);
    CHECK(kv.multiplicity(0.5) == 2);
    CHECK(kv.multiplicity(0.0) == 4);
    CHECK(kv.breakpoints() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
}

TEST_CASE("basis matches the Cox-de Boor recursion, derivatives included")
{
    const std::vector<double> bp{0.13, 0.4, 0.77};
    for (int p = 1; p <= 5; ++p) {
        for (int mult = 1; mult <= p; ++mult) {
            const SplineSpace1D space(make_knot_vector(p, bp, mult));
            const auto U = to_vector(space.knot_vector().knots());
            for (int t = 0; t < 40; ++t) {
                const double u = t == 0 ? 1.0 : uniform(0.0, 1.0);
                const BasisTable tab = eval_basis(space, u, 3);
                for (std::size_t i = 0; i < space.n_basis(); ++i) {
                    const bool active = i >= tab.first && i <= tab.first + static_cast<std::size_t>(p);
                    for (int d = 0; d <= 3; ++d) {
                        const double mine = active ? tab(d, static_cast<int>(i - tab.first)) : 0.0;
                        const double ref = cox_de_boor(U, static_cast<int>(i), p, u, d);
                        CHECK(mine == doctest::Approx(ref).epsilon(1e-10).scale(1.0 + std::abs(ref)));
                    }
                }
            }
        }
    }
}

TEST_CASE("partition of unity and non-negativity")
{
    const SplineSpace1D space(uniform_knot_vector(4, 9));
    for (int t = 0; t <= 200; ++t) {
        const double u = t / 200.0;
        const BasisTable tab = eval_basis(space, u, 2);
        double sum = 0.0, dsum = 0.0, d2sum = 0.0;
        for (int j = 0; j <= 4; ++j) {
            CHECK(tab(0, j) >= -1e-15);
            sum += tab(0, j);
            dsum += tab(1, j);
            d2sum += tab(2, j);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(dsum) < 1e-10);
        CHECK(std::abs(d2sum) < 1e-8);
    }
}

TEST_CASE("span lookup at breakpoints and outside the domain")
{
    const SplineSpace1D space(uniform_knot_vector(2, 4, 2));
    const std::size_t right = space.find_span(0.5, Side::right);
    const std::size_t left = space.find_span(0.5, Side::left);
    const auto U = space.knot_vector().knots();
    CHECK(U[right] == 0.5);
    CHECK(U[left + 1] == 0.5);
    CHECK(U[space.find_span(1.0)] < 1.0);
    CHECK(U[space.find_span(0.0, Side::left)] == 0.0);
    CHECK_THROWS_AS((void)space.find_span(-1e-9), std::domain_error);
    CHECK_THROWS_AS((void)space.find_span(1.0 + 1e-9), std::domain_error);
    CHECK_THROWS_AS((void)eval_basis(space, 0.3, 4), std::invalid_argument);
}

TEST_CASE("one-sided evaluation at a C0 breakpoint")
{
    // f = |u - 0.5| is in the C0 quadratic space; its slope jumps at 0.5.
    const SplineSpace1D sx(uniform_knot_vector(2, 2, 2));
    const SplineSpace1D s1(uniform_knot_vector(1, 1));
    const TensorSpace3D space(sx, s1, s1);
    const Box box{{1.0, 1.0, 1.0}};
    const auto c = interpolate(space, box, [](double x, double, double) { return std::abs(x - 0.5); });
    const auto right = eval_field(space, box, c, {0.5, 0.3, 0.3}, 1, {Side::right, Side::right, Side::right});
    const auto left = eval_field(space, box, c, {0.5, 0.3, 0.3}, 1, {Side::left, Side::right, Side::right});
    CHECK(right(1, 0, 0) == doctest::Approx(1.0));
    CHECK(left(1, 0, 0) == doctest::Approx(-1.0));
    CHECK(right(0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("greville abscissae and element list")
{
    const SplineSpace1D space(uniform_knot_vector(3, 2));
    const auto g = space.greville();
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(space.elements().size() == 2);
}

TEST_CASE("tensor interpolation reproduces polynomials of the space with physical derivatives")
{
    const TensorSpace3D space(SplineSpace1D(uniform_knot_vector(4, 3)), SplineSpace1D(uniform_knot_vector(3, 2)),
                              SplineSpace1D(uniform_knot_vector(3, 1)));
    const Box box{{6.0, 4.0, 2.0}};
    testing_support::Poly3 f;
    f.add(0.3, 4, 0, 0).add(-1.1, 2, 3, 1).add(0.7, 1, 1, 3).add(2.0, 0, 0, 0).add(-0.2, 3, 2, 2);
    const auto c = interpolate(space, box, [&](double x, double y, double z) { return f(x, y, z); });
    for (int t = 0; t < 50; ++t) {
        const double x = uniform(0, 6), y = uniform(0, 4), z = uniform(0, 2);
        const auto P = eval_field(space, box, c, box.to_parametric(x, y, z), 3);
        for (int a = 0; a <= 3; ++a) {
            for (int b = 0; a + b <= 3; ++b) {
                for (int d = 0; a + b + d <= 3; ++d) {
                    const double ref = f(x, y, z, a, b, d);
                    CHECK(P(a, b, d) == doctest::Approx(ref).epsilon(1e-9).scale(1.0 + std::abs(ref)));
                }
            }
        }
    }
}

TEST_CASE("field derivatives match finite differences")
{
    const TensorSpace3D space(SplineSpace1D(uniform_knot_vector(4, 5)), SplineSpace1D(uniform_knot_vector(4, 5)),
                              SplineSpace1D(uniform_knot_vector(3, 1)));
    const Box box{{10.0, 10.0, 1.0}};
    const auto c = interpolate(space, box, [](double x, double y, double z) {
        return std::sin(0.4 * x) * std::cos(0.3 * y) * (1.0 + z * z);
    });
    const double h = 1e-5;
    for (int t = 0; t < 30; ++t) {
        const double x = uniform(1, 9), y = uniform(1, 9), z = uniform(0.1, 0.9);
        auto at = [&](double xx, double yy, double zz) {
            return eval_field(space, box, c, box.to_parametric(xx, yy, zz), 3);
        };
        const auto P = at(x, y, z);
        const auto px = at(x + h, y, z), mx = at(x - h, y, z);
        const auto py = at(x, y + h, z), my = at(x, y - h, z);
        // second x derivative, x-y mixed third derivative, z derivative
        CHECK(P(2, 0, 0) == doctest::Approx((px(1, 0, 0) - mx(1, 0, 0)) / (2 * h)).epsilon(1e-6));
        CHECK(P(2, 1, 0) == doctest::Approx((py(2, 0, 0) - my(2, 0, 0)) / (2 * h)).epsilon(1e-5));
        const auto pz = at(x, y, z + h), mz = at(x, y, z - h);
        CHECK(P(0, 0, 1) == doctest::Approx((pz(0, 0, 0) - mz(0, 0, 0)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("vector field reads interleaved coefficients")
{
    const TensorSpace3D space(SplineSpace1D(uniform_knot_vector(2, 2)), SplineSpace1D(uniform_knot_vector(2, 2)),
                              SplineSpace1D(uniform_knot_vector(1, 1)));
    const Box box{{1.0, 1.0, 1.0}};
    std::vector<double> c(3 * space.dim());
    for (std::size_t i = 0; i < space.dim(); ++i) {
        c[3 * i] = 1.0;
        c[3 * i + 1] = 2.0;
        c[3 * i + 2] = -3.0;
    }
    const auto v = eval_vector_field(space, box, c, {0.3, 0.6, 0.2}, 1);
    CHECK(v[0](0, 0, 0) == doctest::Approx(1.0));
    CHECK(v[1](0, 0, 0) == doctest::Approx(2.0));
    CHECK(v[2](0, 0, 0) == doctest::Approx(-3.0));
    CHECK(std::abs(v[2](1, 0, 0)) < 1e-13);
    CHECK_THROWS_AS((void)eval_field(space, box, std::span<const double>(c).first(3), {0.1, 0.1, 0.1}, 0),
                    std::invalid_argument);
}
