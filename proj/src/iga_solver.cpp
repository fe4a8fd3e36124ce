#include "laminate/iga_solver.hpp"

#include <Eigen/SparseCholesky>
#ifdef LAMINATE_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include <algorithm>
#include <cmath>
#include <numbers>

namespace laminate {

std::string_view variant_name(Variant v)
{
    return v == Variant::layerwise ? "layerwise" : "single_element";
}

namespace {

void validate(const PlateCase& plate, const DiscretizationScheme& s)
{
    if (s.p_inplane < 1) {
        throw std::invalid_argument("scheme.p_inplane: degree must be >= 1");
    }
    if (s.p_z < 1) {
        throw std::invalid_argument("scheme.p_z: degree must be >= 1");
    }
    if (s.n_elements < 1) {
        throw std::invalid_argument("scheme.n_elements: must be >= 1");
    }
    if (s.variant == Variant::single_element && s.q_per_layer < 1) {
        throw std::invalid_argument("scheme.q: quadrature points per layer must be >= 1");
    }
    if (s.variant == Variant::layerwise && s.z_elements_per_layer < 1) {
        throw std::invalid_argument("scheme.z_elements_per_layer: must be >= 1");
    }
    if (plate.layup.n_layers() < 1) {
        throw std::invalid_argument("layup: no plies");
    }
}

KnotVector z_knots(const PlateCase& plate, const DiscretizationScheme& s)
{
    const int p = s.p_z;
    std::vector<double> knots(static_cast<std::size_t>(p + 1), 0.0);
    if (s.variant == Variant::layerwise) {
        const auto& iz = plate.layup.interfaces();
        const double t = plate.thickness();
        const int ne = s.z_elements_per_layer;
        for (std::size_t l = 0; l < plate.layup.n_layers(); ++l) {
            for (int e = 1; e < ne; ++e) {
                knots.push_back((iz[l] + (iz[l + 1] - iz[l]) * e / ne) / t);
            }
            if (l + 1 < plate.layup.n_layers()) {
                knots.insert(knots.end(), static_cast<std::size_t>(p), iz[l + 1] / t);
            }
        }
    }
    knots.insert(knots.end(), static_cast<std::size_t>(p + 1), 1.0);
    return KnotVector(p, std::move(knots));
}

TensorSpace3D make_space(const PlateCase& plate, const DiscretizationScheme& s)
{
    validate(plate, s);
    return TensorSpace3D(SplineSpace1D(uniform_knot_vector(s.p_inplane, s.n_elements)),
                         SplineSpace1D(uniform_knot_vector(s.p_inplane, s.n_elements)),
                         SplineSpace1D(z_knots(plate, s)));
}

/// Voigt slot holding d u_comp / d x_dir.
constexpr std::array<std::array<int, 3>, 3> kVoigtOf{{{0, 5, 4}, {5, 1, 3}, {4, 3, 2}}};

}  // namespace

Discretization::Discretization(PlateCase plate, DiscretizationScheme scheme)
    : plate_(std::move(plate)), scheme_(scheme), space_(make_space(plate_, scheme_))
{
    const double L = plate_.length();
    const double t = plate_.thickness();
    box_.extent = {L, L, t};

    const GaussRule inplane = gauss_legendre(scheme_.p_inplane + 1);
    for (int d = 0; d < 2; ++d) {
        for (const auto& e : space_.direction(d).elements()) {
            rules_[static_cast<std::size_t>(d)].append(inplane, e[0] * L, e[1] * L, 0);
        }
    }

    auto& zr = rules_[2];
    if (scheme_.variant == Variant::layerwise) {
        const GaussRule g = gauss_legendre(scheme_.p_z + 1);
        for (const auto& e : space_.direction(2).elements()) {
            const double a = e[0] * t;
            const double b = e[1] * t;
            zr.append(g, a, b, plate_.layup.layer_at(0.5 * (a + b)));
        }
    } else {
        const GaussRule g = gauss_legendre(scheme_.q_per_layer);
        const auto& iz = plate_.layup.interfaces();
        for (std::size_t l = 0; l < plate_.layup.n_layers(); ++l) {
            zr.append(g, iz[l], iz[l + 1], l);
        }
    }

    const std::size_t nx = space_.n_basis(0);
    const std::size_t ny = space_.n_basis(1);
    const std::size_t nz = space_.n_basis(2);
    fixed_.assign(vector_dofs(), 0);
    for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t I = space_.index(i, j, k);
                if (i == 0 || i + 1 == nx) {
                    fixed_[3 * I + 1] = 1;
                    fixed_[3 * I + 2] = 1;
                }
                if (j == 0 || j + 1 == ny) {
                    fixed_[3 * I + 0] = 1;
                    fixed_[3 * I + 2] = 1;
                }
            }
        }
    }
    n_free_ = static_cast<std::size_t>(std::count(fixed_.begin(), fixed_.end(), 0));
}

Discretization build_discretization(const PlateCase& plate, const DiscretizationScheme& scheme)
{
    return Discretization(plate, scheme);
}

std::size_t predicted_scalar_dofs(std::size_t n_layers, const DiscretizationScheme& s)
{
    const auto n_in = static_cast<std::size_t>(s.p_inplane + s.n_elements);
    const auto pz = static_cast<std::size_t>(s.p_z);
    std::size_t nz = pz + 1;
    if (s.variant == Variant::layerwise) {
        const auto ne = static_cast<std::size_t>(s.z_elements_per_layer);
        nz = n_layers * pz + 1 + n_layers * (ne - 1);
    }
    return n_in * n_in * nz;
}

TensorStiffness::TensorStiffness(const Discretization& disc)
    : nx_(disc.space().n_basis(0)),
      ny_(disc.space().n_basis(1)),
      nz_(disc.space().n_basis(2)),
      px_(disc.space().direction(0).degree()),
      py_(disc.space().direction(1).degree())
{
    const auto& space = disc.space();
    const auto& box = disc.box();

    auto inplane = [&](int d, std::array<std::array<Eigen::MatrixXd, 2>, 2>& out) {
        const auto n = static_cast<Eigen::Index>(space.n_basis(d));
        for (auto& row : out) {
            for (auto& m : row) {
                m = Eigen::MatrixXd::Zero(n, n);
            }
        }
        const auto& rule = disc.rule(d);
        const double ext = box.extent[static_cast<std::size_t>(d)];
        const int p = space.direction(d).degree();
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto tab = eval_basis(space.direction(d), rule.points[q] / ext, 1);
            const double w = rule.weights[q];
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double s = w / std::pow(ext, a + b);
                    for (int r = 0; r <= p; ++r) {
                        for (int c = 0; c <= p; ++c) {
                            out[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)](
                                static_cast<Eigen::Index>(tab.first) + r, static_cast<Eigen::Index>(tab.first) + c) +=
                                s * tab(a, r) * tab(b, c);
                        }
                    }
                }
            }
        }
    };
    inplane(0, x_);
    inplane(1, y_);

    const auto nz = static_cast<Eigen::Index>(nz_);
    for (auto& m : z_) {
        m = Eigen::MatrixXd::Zero(nz, nz);
    }
    const auto& zspace = space.direction(2);
    const auto& rule = disc.rule(2);
    const double t = box.extent[2];
    const int pz = zspace.degree();
    const auto& layup = disc.plate().layup;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto tab = eval_basis(zspace, rule.points[q] / t, 1);
        const double w = rule.weights[q];
        const auto& C = layup.stiffness(rule.layer[q]);
        for (int m = 0; m < 3; ++m) {
            for (int a = 0; a < 3; ++a) {
                for (int n = 0; n < 3; ++n) {
                    for (int b = 0; b < 3; ++b) {
                        const double D = C(static_cast<std::size_t>(kVoigtOf[static_cast<std::size_t>(m)][static_cast<std::size_t>(a)]),
                                           static_cast<std::size_t>(kVoigtOf[static_cast<std::size_t>(n)][static_cast<std::size_t>(b)]));
                        if (D == 0.0) {
                            continue;
                        }
                        const int da = a == 2 ? 1 : 0;
                        const int db = b == 2 ? 1 : 0;
                        const double s = w * D / std::pow(t, da + db);
                        auto& Z = z_[static_cast<std::size_t>(((m * 3 + a) * 3 + n) * 3 + b)];
                        for (int r = 0; r <= pz; ++r) {
                            for (int c = 0; c <= pz; ++c) {
                                Z(static_cast<Eigen::Index>(tab.first) + r, static_cast<Eigen::Index>(tab.first) + c) +=
                                    s * tab(da, r) * tab(db, c);
                            }
                        }
                    }
                }
            }
        }
    }

    const auto U = zspace.knot_vector().knots();
    const auto P = static_cast<std::size_t>(pz);
    z_overlap_.resize(nz_);
    for (std::size_t k = 0; k < nz_; ++k) {
        std::size_t lo = nz_;
        std::size_t hi = 0;
        const std::size_t from = k > P ? k - P : 0;
        const std::size_t to = std::min(nz_ - 1, k + P);
        for (std::size_t k2 = from; k2 <= to; ++k2) {
            if (std::max(U[k], U[k2]) < std::min(U[k + P + 1], U[k2 + P + 1])) {
                lo = std::min(lo, k2);
                hi = std::max(hi, k2);
            }
        }
        z_overlap_[k] = {lo, hi};
    }
}

double TensorStiffness::value(std::size_t i, std::size_t j, std::size_t k, int m, std::size_t i2,
                              std::size_t j2, std::size_t k2, int n) const
{
    const auto I = static_cast<Eigen::Index>(i), I2 = static_cast<Eigen::Index>(i2);
    const auto J = static_cast<Eigen::Index>(j), J2 = static_cast<Eigen::Index>(j2);
    const auto K = static_cast<Eigen::Index>(k), K2 = static_cast<Eigen::Index>(k2);
    double v = 0.0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double z = zf(m, a, n, b)(K, K2);
            if (z == 0.0) {
                continue;
            }
            const double x = x_[a == 0 ? 1 : 0][b == 0 ? 1 : 0](I, I2);
            const double y = y_[a == 1 ? 1 : 0][b == 1 ? 1 : 0](J, J2);
            v += x * y * z;
        }
    }
    return v;
}

double TensorStiffness::entry(std::size_t row_dof, std::size_t col_dof) const
{
    const int m = static_cast<int>(row_dof % 3);
    const int n = static_cast<int>(col_dof % 3);
    const std::size_t r = row_dof / 3;
    const std::size_t c = col_dof / 3;
    return value(r % nx_, (r / nx_) % ny_, r / (nx_ * ny_), m, c % nx_, (c / nx_) % ny_, c / (nx_ * ny_), n);
}

Eigen::SparseMatrix<double> TensorStiffness::assemble_free_upper(const Discretization& disc,
                                                                 const std::vector<std::ptrdiff_t>& free_index) const
{
    const auto n_free = static_cast<Eigen::Index>(disc.n_free());
    Eigen::SparseMatrix<double> K(n_free, n_free);
    const auto px = static_cast<std::size_t>(px_);
    const auto py = static_cast<std::size_t>(py_);
    std::size_t estimate = 0;
    for (std::size_t k = 0; k < nz_; ++k) {
        estimate += (z_overlap_[k][1] - z_overlap_[k][0] + 1);
    }
    estimate = estimate * nx_ * ny_ * 9 * (2 * px + 1) * (2 * py + 1) / 2;
    K.reserve(static_cast<Eigen::Index>(std::min<std::size_t>(estimate, std::size_t{1} << 31)));

    for (std::size_t k2 = 0; k2 < nz_; ++k2) {
        for (std::size_t j2 = 0; j2 < ny_; ++j2) {
            for (std::size_t i2 = 0; i2 < nx_; ++i2) {
                const std::size_t J = i2 + nx_ * (j2 + ny_ * k2);
                for (int n = 0; n < 3; ++n) {
                    const std::size_t cd = 3 * J + static_cast<std::size_t>(n);
                    const std::ptrdiff_t col = free_index[cd];
                    if (col < 0) {
                        continue;
                    }
                    K.startVec(static_cast<Eigen::Index>(col));
                    const std::size_t jlo = j2 > py ? j2 - py : 0;
                    const std::size_t jhi = std::min(ny_ - 1, j2 + py);
                    const std::size_t ilo = i2 > px ? i2 - px : 0;
                    const std::size_t ihi = std::min(nx_ - 1, i2 + px);
                    bool done = false;
                    for (std::size_t k = z_overlap_[k2][0]; k <= k2 && !done; ++k) {
                        for (std::size_t j = jlo; j <= jhi && !done; ++j) {
                            for (std::size_t i = ilo; i <= ihi && !done; ++i) {
                                const std::size_t I = i + nx_ * (j + ny_ * k);
                                for (int m = 0; m < 3; ++m) {
                                    const std::size_t rd = 3 * I + static_cast<std::size_t>(m);
                                    if (rd > cd) {
                                        done = true;
                                        break;
                                    }
                                    const std::ptrdiff_t row = free_index[rd];
                                    if (row < 0) {
                                        continue;
                                    }
                                    const double v = value(i, j, k, m, i2, j2, k2, n);
                                    if (v != 0.0 || rd == cd) {
                                        K.insertBack(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    K.finalize();
    K.makeCompressed();
    return K;
}

Eigen::VectorXd apply_load(const Discretization& disc)
{
    const auto& space = disc.space();
    const auto& plate = disc.plate();
    const double L = plate.length();
    std::array<std::vector<double>, 2> f;
    for (int d = 0; d < 2; ++d) {
        auto& fd = f[static_cast<std::size_t>(d)];
        fd.assign(space.n_basis(d), 0.0);
        const auto& rule = disc.rule(d);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double x = rule.points[q];
            const auto tab = eval_basis(space.direction(d), x / L, 0);
            const double s = rule.weights[q] * std::sin(std::numbers::pi * x / L);
            for (int r = 0; r <= space.direction(d).degree(); ++r) {
                fd[tab.first + static_cast<std::size_t>(r)] += s * tab(0, r);
            }
        }
    }
    Eigen::VectorXd F = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.vector_dofs()));
    const std::size_t k = space.n_basis(2) - 1;
    for (std::size_t j = 0; j < space.n_basis(1); ++j) {
        for (std::size_t i = 0; i < space.n_basis(0); ++i) {
            F(static_cast<Eigen::Index>(3 * space.index(i, j, k) + 2)) = -plate.sigma0 * f[0][i] * f[1][j];
        }
    }
    return F;
}

SparseSystem assemble(const Discretization& disc)
{
    SparseSystem sys;
    sys.free_index.assign(disc.vector_dofs(), -1);
    for (std::size_t d = 0; d < disc.vector_dofs(); ++d) {
        if (!disc.is_fixed(d)) {
            sys.free_index[d] = static_cast<std::ptrdiff_t>(sys.free_dofs.size());
            sys.free_dofs.push_back(d);
        }
    }
    const TensorStiffness op(disc);
    sys.K = op.assemble_free_upper(disc, sys.free_index);

    const Eigen::VectorXd full = apply_load(disc);
    sys.F.resize(static_cast<Eigen::Index>(sys.free_dofs.size()));
    for (std::size_t i = 0; i < sys.free_dofs.size(); ++i) {
        sys.F(static_cast<Eigen::Index>(i)) = full(static_cast<Eigen::Index>(sys.free_dofs[i]));
    }
    return sys;
}

SpdSolution solve_spd(const Eigen::SparseMatrix<double>& upper, const Eigen::VectorXd& rhs, double tol)
{
    SpdSolution out;
    const double bnorm = rhs.norm();
    out.x = Eigen::VectorXd::Zero(rhs.size());
    if (bnorm == 0.0) {
        return out;
    }
#ifdef LAMINATE_HAVE_CHOLMOD
    Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Upper> factor;
#else
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Upper> factor;
#endif
    factor.compute(upper);
    if (factor.info() != Eigen::Success) {
        throw SolverError("solve: factorization failed (matrix not SPD?)", 1.0);
    }
    const auto K = upper.selfadjointView<Eigen::Upper>();
    Eigen::VectorXd r = rhs;
    out.relative_residual = 1.0;
    for (int it = 0; it < 6; ++it) {
        out.x += factor.solve(r);
        r = rhs - K * out.x;
        out.relative_residual = r.norm() / bnorm;
        if (out.relative_residual <= tol) {
            return out;
        }
    }
    throw SolverError("solve: relative residual " + std::to_string(out.relative_residual) +
                          " above tolerance",
                      out.relative_residual);
}

DisplacementField::DisplacementField(Discretization disc, std::vector<double> coeffs, double residual)
    : disc_(std::move(disc)), coeffs_(std::move(coeffs)), residual_(residual)
{
    if (coeffs_.size() != disc_.vector_dofs()) {
        throw std::invalid_argument("displacement field: coefficient count does not match the space");
    }
}

std::array<FieldPartials, 3> DisplacementField::partials(double x, double y, double z, int max_deriv,
                                                         std::optional<std::size_t> layer) const
{
    const auto& iz = plate().layup.interfaces();
    Side zside = Side::right;
    if (layer) {
        if (*layer >= plate().layup.n_layers()) {
            throw std::out_of_range("displacement field: layer index out of range");
        }
        if (z >= iz[*layer + 1]) {
            zside = Side::left;
        }
    }
    const auto param = disc_.box().to_parametric(x, y, z);
    return eval_vector_field(disc_.space(), disc_.box(), coeffs_, param, max_deriv,
                             {Side::right, Side::right, zside});
}

std::array<double, 3> DisplacementField::value(double x, double y, double z) const
{
    const auto p = partials(x, y, z, 0);
    return {p[0](0, 0, 0), p[1](0, 0, 0), p[2](0, 0, 0)};
}

DisplacementField solve(const Discretization& disc, const SparseSystem& system)
{
    const SpdSolution sol = solve_spd(system.K, system.F);
    std::vector<double> coeffs(disc.vector_dofs(), 0.0);
    for (std::size_t i = 0; i < system.free_dofs.size(); ++i) {
        coeffs[system.free_dofs[i]] = sol.x(static_cast<Eigen::Index>(i));
    }
    return DisplacementField(disc, std::move(coeffs), sol.relative_residual);
}

}  // namespace laminate
