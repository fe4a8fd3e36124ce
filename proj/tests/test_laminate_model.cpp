#include "laminate/laminate_model.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

using namespace laminate;

TEST_CASE("benchmark ply compliance diagonal")
{
    const Matrix6 s = compliance(OrthotropicMaterial::benchmark());
    const double diag[6] = {1.0 / 25.0, 1.0, 1.0, 2.0, 5.0, 5.0};
    for (int i = 0; i < 6; ++i) {
        CHECK(s(i, i) == doctest::Approx(diag[i]));
    }
    CHECK(s(0, 1) == doctest::Approx(-0.25 / 25.0));
    CHECK(s(1, 0) == s(0, 1));
    CHECK(s(1, 2) == doctest::Approx(-0.25));
    CHECK((s - s.transpose()).norm() == 0.0);
}

TEST_CASE("stiffness inverts the compliance")
{
    const auto mat = OrthotropicMaterial::benchmark();
    const Stiffness6 c = stiffness_from_engineering(mat);
    const Matrix6 back = c.matrix().inverse();
    const Matrix6 s = compliance(mat);
    CHECK((back - s).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((c.matrix() - c.matrix().transpose()).norm() == 0.0);
}

TEST_CASE("isotropic limit gives the Lame stiffness")
{
    const double E = 2.5, nu = 0.25;
    const Stiffness6 c = stiffness_from_engineering(OrthotropicMaterial::isotropic(E, nu));
    const double lambda = E * nu / ((1 + nu) * (1 - 2 * nu));
    const double mu = E / (2 * (1 + nu));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(c(i, j) == doctest::Approx(lambda + (i == j ? 2 * mu : 0.0)).epsilon(1e-12));
        }
        CHECK(c(i + 3, i + 3) == doctest::Approx(mu).epsilon(1e-12));
    }
    CHECK((rotate_90(c).matrix() - c.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("90 degree rotation equals the ply built with swapped axes")
{
    const auto mat = OrthotropicMaterial::benchmark();
    OrthotropicMaterial swapped = mat;
    swapped.E1 = mat.E2;
    swapped.E2 = mat.E1;
    swapped.G13 = mat.G23;
    swapped.G23 = mat.G13;
    // reciprocity: nu21 = nu12 E2/E1 becomes the new nu12; nu13 and nu23 trade places
    swapped.nu12 = mat.nu12 * mat.E2 / mat.E1;
    swapped.nu13 = mat.nu23;
    swapped.nu23 = mat.nu13;
    const Stiffness6 direct = stiffness_from_engineering(swapped);
    const Stiffness6 rotated = rotate_90(stiffness_from_engineering(mat));
    CHECK((direct.matrix() - rotated.matrix()).cwiseAbs().maxCoeff() < 1e-12 * direct.matrix().cwiseAbs().maxCoeff());
    CHECK(rotated(0, 0) == doctest::Approx(stiffness_from_engineering(mat)(1, 1)));
}

TEST_CASE("invalid materials are rejected")
{
    OrthotropicMaterial m = OrthotropicMaterial::benchmark();
    m.G12 = 0.0;
    CHECK_THROWS_AS(compliance(m), std::invalid_argument);
    m = OrthotropicMaterial::benchmark();
    m.nu23 = 1.2;  // indefinite compliance
    CHECK_THROWS_AS(stiffness_from_engineering(m), std::invalid_argument);
}

TEST_CASE("stiffness applied to a strain")
{
    const Stiffness6 c = stiffness_from_engineering(OrthotropicMaterial::benchmark());
    const Voigt6 s = c.apply({0.1, 0, 0, 0, 0, 0});
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(s[i] == doctest::Approx(0.1 * c(i, 0)));
    }
}

TEST_CASE("cross-ply stack layout and layer lookup")
{
    const Layup l = make_cross_ply(3, 1.0, OrthotropicMaterial::benchmark());
    CHECK(l.n_layers() == 3);
    CHECK(l.thickness() == 3.0);
    CHECK(l.interfaces() == std::vector<double>{0, 1, 2, 3});
    CHECK(l.plies()[0].angle == PlyAngle::deg90);
    CHECK(l.plies()[1].angle == PlyAngle::deg0);
    CHECK(l.layer_at(0.5) == 0);
    CHECK(l.layer_at(1.0) == 1);
    CHECK(l.layer_at(3.0) == 2);
    CHECK(l.layer_at(0.0) == 0);
    CHECK(l.stiffness_at(0.5).first(0, 0) == doctest::Approx(l.stiffness(1)(1, 1)));
    CHECK_THROWS_AS((void)l.layer_at(3.0001), std::domain_error);
    CHECK_THROWS_AS((void)l.layer_at(-0.1), std::domain_error);
    CHECK_THROWS_AS(Layup({}), std::invalid_argument);
    CHECK_THROWS_AS(make_layup({PlyAngle::deg0}, -1.0, OrthotropicMaterial::benchmark()), std::invalid_argument);
}

TEST_CASE("plate geometry, load and normalization")
{
    const PlateCase p(make_cross_ply(4, 1.0, OrthotropicMaterial::benchmark()), 10.0, 2.0);
    CHECK(p.length() == 40.0);
    CHECK(p.pressure(20.0, 20.0) == doctest::Approx(2.0));
    CHECK(std::abs(p.pressure(0.0, 13.0)) < 1e-15);
    CHECK(normalize(-2.0, StressComponent::s33, p) == -1.0);
    CHECK(normalize(0.0, StressComponent::s13, p) == 0.0);
    CHECK(normalize(2.0 * 2.0 * 100.0, StressComponent::s11, p) == 2.0);
    CHECK(normalize(20.0, StressComponent::s23, p) == 1.0);
    CHECK(component_name(StressComponent::s12) == "s12");
    CHECK_THROWS_AS(PlateCase(make_cross_ply(1, 1.0, OrthotropicMaterial::benchmark()), 0.0, 1.0),
                    std::invalid_argument);
}
