#include "hq/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hq {

BoundsSnapshot snapshot_from_geometry(std::span<const PointGeometry> nodes, int k) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    BoundsSnapshot s{kInf, -kInf, kInf, 0.0, 0.0, kInf, kInf};
    for (const auto& g : nodes) {
        s.rho_min = std::min(s.rho_min, g.rho);
        s.rho_max = std::max(s.rho_max, g.rho);
        s.u_min = std::min(s.u_min, g.u);
        s.grad_sup = std::max(s.grad_sup, g.grad_norm);
        s.kappa_sup = std::max(s.kappa_sup, g.kappa.cwiseAbs().maxCoeff());
        s.cone_margin_min = std::min(s.cone_margin_min, in_gamma_k(g.eta_spectrum, k).margin);
        for (double e : g.eta_spectrum.values()) s.eta_min = std::min(s.eta_min, e);
    }
    return s;
}

BoundsSnapshot snapshot_bounds(const ScalarField& rho, const Grid& grid, const QuotientParams& p) {
    const auto jets = grid_jets(rho, grid, p.n);
    std::vector<PointGeometry> nodes;
    nodes.reserve(jets.size());
    for (const auto& jet : jets) nodes.push_back(assemble_point_geometry(jet, p.n));
    return snapshot_from_geometry(nodes, p.k);
}

C0Check check_c0(const BoundsSnapshot& s, double r1, double r2) {
    const double lower = s.rho_min - r1;
    const double upper = r2 - s.rho_max;
    return {lower > 0.0 && upper > 0.0, lower, upper};
}

bool check_positivity(const BoundsSnapshot& s) { return s.u_min > 0.0 && s.cone_margin_min > 0.0; }

}  // namespace hq
