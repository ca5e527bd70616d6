#include "vring/rearrange.hpp"

#include "vring/errors.hpp"
#include "vring/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vring {

VorticityField steiner_symmetrize(const VorticityField& xi, double z_center) {
    const AxiGrid& g = xi.grid;
    const int j0 = g.nearest_j(z_center);

    // Offset walk 0, +1, -1, +2, -2, ... restricted to cells on the grid.
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(g.nz));
    if (j0 >= 0 && j0 < g.nz) order.push_back(j0);
    for (int d = 1; static_cast<int>(order.size()) < g.nz; ++d) {
        if (j0 + d < g.nz && j0 + d >= 0) order.push_back(j0 + d);
        if (j0 - d >= 0 && j0 - d < g.nz) order.push_back(j0 - d);
    }

    VorticityField out = VorticityField::zeros(g, xi.strength_cap);
    std::vector<double> row(static_cast<std::size_t>(g.nz));
    for (int i = 0; i < g.nr; ++i) {
        const double* src = xi.values.data() + g.index(i, 0);
        std::copy(src, src + g.nz, row.begin());
        std::sort(row.begin(), row.end(), std::greater<double>());
        double* dst = out.values.data() + g.index(i, 0);
        for (int k = 0; k < g.nz; ++k) dst[order[static_cast<std::size_t>(k)]] = row[static_cast<std::size_t>(k)];
    }
    return out;
}

VorticityField radial_shift(const VorticityField& xi, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("radial_shift: tau must be finite and >= 0");
    const AxiGrid& g = xi.grid;
    if (tau == 0.0) return xi;

    VorticityField out = VorticityField::zeros(g, xi.strength_cap);
    const double hr = g.hr();
    const double r0 = g.r(0);
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.r(i);
        if (r <= tau) continue;
        const double rs = r - tau;
        // Linear interpolation at radius rs; constant below the first node.
        const double x = (rs - r0) / hr;
        const int k = static_cast<int>(std::floor(x));
        const double frac = x - k;
        const double scale = rs / r;
        double* dst = out.values.data() + g.index(i, 0);
        for (int j = 0; j < g.nz; ++j) {
            double v;
            if (x <= 0.0) {
                v = xi.at(0, j);
            } else {
                const int k1 = std::min(k + 1, g.nr - 1);
                v = (1.0 - frac) * xi.at(k, j) + frac * xi.at(k1, j);
            }
            dst[j] = scale * v;
        }
    }
    return out;
}

double solve_radial_shift_for_impulse(const VorticityField& xi, double target, double rel_tol) {
    if (!(rel_tol > 0.0)) throw DomainError("solve_radial_shift_for_impulse: rel_tol must be > 0");
    const QuantityRecord base = quantities(xi);
    if (base.circulation <= 0.0) throw DomainError("solve_radial_shift_for_impulse: field is zero");
    if (target < base.impulse * (1.0 - 1e-12))
        throw DomainError("solve_radial_shift_for_impulse: target below current impulse");
    if (target <= base.impulse) return 0.0;

    const AxiGrid& g = xi.grid;
    auto impulse_at = [&](double tau) { return quantities(radial_shift(xi, tau)).impulse; };

    // Doubling bracket. If the support starts leaking past r_max before the
    // target is reached the impulse saturates and the request is infeasible.
    double lo = 0.0;
    double hi = g.hr();
    for (;;) {
        if (hi > g.r_max) {
            throw InfeasibleError("solve_radial_shift_for_impulse: target impulse not reachable on this grid");
        }
        const VorticityField shifted = radial_shift(xi, hi);
        const QuantityRecord q = quantities(shifted);
        if (q.circulation < base.circulation * (1.0 - 1e-9)) {
            if (q.impulse >= target) break; // still usable as an upper end
            throw InfeasibleError("solve_radial_shift_for_impulse: support leaves the grid before reaching target");
        }
        if (q.impulse >= target) break;
        lo = hi;
        hi *= 2.0;
    }

    // Bisection; impulse is monotone in tau while mass stays on the grid.
    const double tol = rel_tol * std::max(1.0, std::abs(target));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = impulse_at(mid);
        if (std::abs(f - target) <= tol) return mid;
        if (f < target) lo = mid; else hi = mid;
        if (hi - lo <= 1e-15 * g.r_max) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace vring
