#include "hq/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hq/errors.hpp"

namespace hq {

namespace {

constexpr double kPi = std::numbers::pi;

void check_size(const ScalarField& field, int expected) {
    if (static_cast<int>(field.size()) != expected)
        throw SizeMismatch("field has " + std::to_string(field.size()) + " values, grid has " +
                           std::to_string(expected) + " nodes");
}

// Surface area of the unit S^m.
double sphere_area(int m) {
    return 2.0 * std::pow(kPi, (m + 1) / 2.0) / std::tgamma((m + 1) / 2.0);
}

// Pole-crossing lookup: ring -1 and ring n_theta are the same-latitude rings
// on the antipodal meridian.
struct S2Lookup {
    const ScalarField& field;
    const SphereGrid2D& grid;

    [[nodiscard]] int node(int i, int j) const {
        if (i < 0) {
            i = -i - 1;
            j += grid.n_phi / 2;
        } else if (i >= grid.n_theta) {
            i = 2 * grid.n_theta - 1 - i;
            j += grid.n_phi / 2;
        }
        j %= grid.n_phi;
        if (j < 0) j += grid.n_phi;
        return grid.index(i, j);
    }
    [[nodiscard]] double operator()(int i, int j) const {
        return field[static_cast<std::size_t>(node(i, j))];
    }
};

}  // namespace

AxisymGrid build_axisym_grid(int node_count) {
    if (node_count < 16)
        throw TooCoarse("axisymmetric grid needs at least 16 nodes, got " + std::to_string(node_count));
    AxisymGrid grid;
    grid.node_count = node_count;
    grid.spacing = kPi / (node_count - 1);
    grid.theta.resize(static_cast<std::size_t>(node_count));
    for (int m = 0; m < node_count; ++m) grid.theta[static_cast<std::size_t>(m)] = m * grid.spacing;
    grid.theta.back() = kPi;
    return grid;
}

SphereGrid2D build_s2_grid(int n_theta, int n_phi) {
    if (n_theta < 16 || n_phi < 32 || n_phi % 2 != 0)
        throw TooCoarse("S^2 grid needs n_theta >= 16 and an even n_phi >= 32");
    SphereGrid2D grid;
    grid.n_theta = n_theta;
    grid.n_phi = n_phi;
    grid.dtheta = kPi / n_theta;
    grid.dphi = 2.0 * kPi / n_phi;
    for (int i = 0; i < n_theta; ++i) grid.theta.push_back((i + 0.5) * grid.dtheta);
    for (int j = 0; j < n_phi; ++j) grid.phi.push_back(j * grid.dphi);
    return grid;
}

int node_count(const Grid& grid) {
    return std::visit(
        [](const auto& g) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, AxisymGrid>)
                return g.node_count;
            else
                return g.node_count();
        },
        grid);
}

PointJet axisym_point_jet(double theta, double rho, double d_theta, double d_theta2, int n) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const bool pole = std::abs(s) < 1e-12;

    PointJet jet;
    jet.rho = rho;
    jet.grad = Eigen::VectorXd::Zero(n);
    jet.grad(0) = d_theta;
    jet.hess = Eigen::MatrixXd::Zero(n, n);
    jet.hess(0, 0) = d_theta2;
    const double tangential = pole ? d_theta2 : (c / s) * d_theta;
    for (int a = 1; a < n; ++a) jet.hess(a, a) = tangential;

    jet.point = Eigen::VectorXd::Zero(n + 1);
    jet.point(0) = c;
    jet.point(1) = s;
    jet.frame = Eigen::MatrixXd::Zero(n + 1, n);
    jet.frame(0, 0) = -s;
    jet.frame(1, 0) = c;
    for (int a = 1; a < n; ++a) jet.frame(a + 1, a) = 1.0;
    return jet;
}

PointJet s2_point_jet(double theta, double phi, const SphericalPartials& d) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double cot = ct / st;

    PointJet jet;
    jet.rho = d.rho;
    jet.grad = Eigen::Vector2d(d.t, d.p / st);
    jet.hess.resize(2, 2);
    jet.hess(0, 0) = d.tt;
    jet.hess(0, 1) = jet.hess(1, 0) = (d.tp - cot * d.p) / st;
    jet.hess(1, 1) = d.pp / (st * st) + cot * d.t;
    jet.point = Eigen::Vector3d(ct, st * cp, st * sp);
    jet.frame.resize(3, 2);
    jet.frame.col(0) = Eigen::Vector3d(-st, ct * cp, ct * sp);
    jet.frame.col(1) = Eigen::Vector3d(0.0, -sp, cp);
    return jet;
}

std::vector<PointJet> axisym_jets(const ScalarField& field, const AxisymGrid& grid, int n) {
    check_size(field, grid.node_count);
    const int last = grid.node_count - 1;
    const double h = grid.spacing;
    // Even reflection across each pole: ρ(-θ) = ρ(θ), ρ(π+θ) = ρ(π-θ).
    auto at = [&](int m) {
        if (m < 0) m = -m;
        if (m > last) m = 2 * last - m;
        return field[static_cast<std::size_t>(m)];
    };
    std::vector<PointJet> jets;
    jets.reserve(field.size());
    for (int m = 0; m <= last; ++m) {
        const double d1 = (at(m + 1) - at(m - 1)) / (2.0 * h);
        const double d2 = (at(m + 1) - 2.0 * at(m) + at(m - 1)) / (h * h);
        const double theta = grid.theta[static_cast<std::size_t>(m)];
        // Exact poles: the reflected stencil already gives ρ′ = 0.
        PointJet jet = axisym_point_jet(theta, at(m), d1, d2, n);
        if (m == 0 || m == last) {
            jet.grad(0) = 0.0;
            for (int a = 1; a < n; ++a) jet.hess(a, a) = d2;
        }
        jets.push_back(std::move(jet));
    }
    return jets;
}

std::vector<PointJet> s2_jets(const ScalarField& field, const SphereGrid2D& grid) {
    check_size(field, grid.node_count());
    const S2Lookup at{field, grid};
    const double ht = grid.dtheta, hp = grid.dphi;
    std::vector<PointJet> jets;
    jets.reserve(field.size());
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            SphericalPartials d{};
            d.rho = at(i, j);
            d.t = (at(i + 1, j) - at(i - 1, j)) / (2.0 * ht);
            d.p = (at(i, j + 1) - at(i, j - 1)) / (2.0 * hp);
            d.tt = (at(i + 1, j) - 2.0 * d.rho + at(i - 1, j)) / (ht * ht);
            d.pp = (at(i, j + 1) - 2.0 * d.rho + at(i, j - 1)) / (hp * hp);
            d.tp = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
                   (4.0 * ht * hp);
            jets.push_back(s2_point_jet(grid.theta[static_cast<std::size_t>(i)],
                                        grid.phi[static_cast<std::size_t>(j)], d));
        }
    }
    return jets;
}

std::vector<PointJet> grid_jets(const ScalarField& field, const Grid& grid, int n) {
    if (const auto* axi = std::get_if<AxisymGrid>(&grid)) return axisym_jets(field, *axi, n);
    if (n != 2) throw UnsupportedDimension("the S^2 grid only supports n = 2");
    return s2_jets(field, std::get<SphereGrid2D>(grid));
}

Eigen::VectorXd node_direction(const Grid& grid, int node, int n) {
    if (const auto* axi = std::get_if<AxisymGrid>(&grid)) {
        const double theta = axi->theta[static_cast<std::size_t>(node)];
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n + 1);
        x(0) = std::cos(theta);
        x(1) = std::sin(theta);
        return x;
    }
    const auto& s2 = std::get<SphereGrid2D>(grid);
    const double theta = s2.theta[static_cast<std::size_t>(node / s2.n_phi)];
    const double phi = s2.phi[static_cast<std::size_t>(node % s2.n_phi)];
    return Eigen::Vector3d(std::cos(theta), std::sin(theta) * std::cos(phi),
                           std::sin(theta) * std::sin(phi));
}

std::vector<int> stencil(const Grid& grid, int node) {
    std::vector<int> out;
    if (const auto* axi = std::get_if<AxisymGrid>(&grid)) {
        for (int m = node - 1; m <= node + 1; ++m)
            if (m >= 0 && m < axi->node_count) out.push_back(m);
        return out;
    }
    const auto& s2 = std::get<SphereGrid2D>(grid);
    const ScalarField none;
    const S2Lookup at{none, s2};
    const int i = node / s2.n_phi, j = node % s2.n_phi;
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) out.push_back(at.node(i + di, j + dj));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FieldNorms field_norms(const ScalarField& field, const Grid& grid, int n) {
    check_size(field, node_count(grid));
    FieldNorms norms{0.0, 0.0};
    double sum = 0.0;
    if (const auto* axi = std::get_if<AxisymGrid>(&grid)) {
        const double area = sphere_area(n - 1);
        for (int m = 0; m < axi->node_count; ++m) {
            const double value = field[static_cast<std::size_t>(m)];
            const double w = area * std::pow(std::sin(axi->theta[static_cast<std::size_t>(m)]), n - 1) *
                             axi->spacing;
            norms.sup = std::max(norms.sup, std::abs(value));
            sum += w * value * value;
        }
    } else {
        const auto& s2 = std::get<SphereGrid2D>(grid);
        for (int i = 0; i < s2.n_theta; ++i) {
            const double w = std::sin(s2.theta[static_cast<std::size_t>(i)]) * s2.dtheta * s2.dphi;
            for (int j = 0; j < s2.n_phi; ++j) {
                const double value = field[static_cast<std::size_t>(s2.index(i, j))];
                norms.sup = std::max(norms.sup, std::abs(value));
                sum += w * value * value;
            }
        }
    }
    norms.l2 = std::sqrt(sum);
    return norms;
}

}  // namespace hq
