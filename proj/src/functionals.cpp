#include "vring/functionals.hpp"

#include "vring/errors.hpp"
#include "vring/stream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace vring {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Sums the row in descending-value order. Equal values tie arbitrarily but
// the sum does not depend on how ties are broken, so the result is a pure
// function of the multiset of row values.
double sorted_row_sum(std::vector<double>& scratch) {
    std::sort(scratch.begin(), scratch.end(), std::greater<double>());
    double acc = 0.0;
    for (double v : scratch) acc += v;
    return acc;
}

} // namespace

QuantityRecord quantities(const VorticityField& xi) {
    const AxiGrid& g = xi.grid;
    const double cell = g.hr() * g.hz();
    QuantityRecord q;
    q.energy = std::numeric_limits<double>::quiet_NaN();

    double l1 = 0.0, l2 = 0.0, imp = 0.0, circ = 0.0, zm = 0.0, peak = 0.0;
    std::vector<double> row(static_cast<std::size_t>(g.nz));
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.r(i);
        const double w = kTwoPi * r * cell;
        const double* src = xi.values.data() + g.index(i, 0);

        for (int j = 0; j < g.nz; ++j) row[static_cast<std::size_t>(j)] = src[j];
        const double s1 = sorted_row_sum(row);
        l1 += w * s1;                      // values are nonnegative
        circ += w * s1;
        imp += 0.5 * r * r * w * s1;

        for (int j = 0; j < g.nz; ++j) {
            const double v = src[j];
            row[static_cast<std::size_t>(j)] = v * v;
            if (v > peak) peak = v;
            zm += r * r * w * g.z(j) * v;
        }
        l2 += w * sorted_row_sum(row);
    }
    q.l1 = l1;
    q.l2 = std::sqrt(l2);
    q.strength = peak;
    q.impulse = imp;
    q.circulation = circ;
    q.z_moment = zm;
    return q;
}

double kinetic_energy(const VorticityField& xi, const ScalarField& psi) {
    if (!(psi.grid == xi.grid)) throw DomainError("kinetic_energy: grids differ");
    const AxiGrid& g = xi.grid;
    const double cell = g.hr() * g.hz();
    double acc = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double w = 0.5 * kTwoPi * g.r(i) * cell;
        const double* px = xi.values.data() + g.index(i, 0);
        const double* pp = psi.values.data() + g.index(i, 0);
        double row = 0.0;
        for (int j = 0; j < g.nz; ++j) row += px[j] * pp[j];
        acc += w * row;
    }
    return acc;
}

QuantityRecord quantities(const VorticityField& xi, const ScalarField& psi) {
    QuantityRecord q = quantities(xi);
    q.energy = kinetic_energy(xi, psi);
    return q;
}

double band_mass(const VorticityField& xi, double a, double b) {
    if (!(a < b)) throw DomainError("band_mass: requires a < b");
    const AxiGrid& g = xi.grid;
    const double cell = g.hr() * g.hz();
    double total = 0.0;
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(g.nz));
    for (int i = 0; i < g.nr; ++i) {
        row.clear();
        const double* src = xi.values.data() + g.index(i, 0);
        for (int j = 0; j < g.nz; ++j) {
            const double v = src[j];
            if (v > a && v < b) row.push_back(v);
        }
        total += kTwoPi * g.r(i) * cell * sorted_row_sum(row);
    }
    return total;
}

DistanceRecord weighted_distance(const VorticityField& a, const VorticityField& b) {
    if (!(a.grid == b.grid)) throw DomainError("weighted_distance: grids differ");
    const AxiGrid& g = a.grid;
    const double cell = g.hr() * g.hz();
    DistanceRecord d;
    double l2 = 0.0;
    std::vector<double> row(static_cast<std::size_t>(g.nz));
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.r(i);
        const double w = kTwoPi * r * cell;
        const double* pa = a.values.data() + g.index(i, 0);
        const double* pb = b.values.data() + g.index(i, 0);

        for (int j = 0; j < g.nz; ++j) row[static_cast<std::size_t>(j)] = std::abs(pa[j] - pb[j]);
        const double s1 = sorted_row_sum(row);
        d.l1 += w * s1;
        d.w1 += r * r * w * s1;

        for (int j = 0; j < g.nz; ++j) {
            const double dv = pa[j] - pb[j];
            row[static_cast<std::size_t>(j)] = dv * dv;
        }
        l2 += w * sorted_row_sum(row);
    }
    d.l2 = std::sqrt(l2);
    return d;
}

double weighted_symmetric_difference(const VorticityField& a, const VorticityField& b) {
    const DistanceRecord d = weighted_distance(a, b);
    return d.l1 + d.w1;
}

namespace {

double metric_value(const DistanceRecord& d, OrbitalMetric m) {
    return m == OrbitalMetric::combined ? d.combined() : d.weighted_l1();
}

} // namespace

OrbitalResult orbital_distance(const VorticityField& a, const VorticityField& b,
                               OrbitalMetric metric) {
    if (!(a.grid == b.grid)) throw DomainError("orbital_distance: grids differ");
    const AxiGrid& g = a.grid;
    const double hz = g.hz();

    auto eval = [&](double tau) {
        return weighted_distance(shift_z(a, tau), b);
    };

    // Coarse pass over whole-cell shifts. Scanning in increasing tau with a
    // strict improvement test picks the smallest minimizer on ties.
    double best_tau = 0.0;
    DistanceRecord best_rec;
    double best_val = std::numeric_limits<double>::infinity();
    for (int k = -g.nz; k <= g.nz; ++k) {
        const double tau = k * hz;
        const DistanceRecord rec = eval(tau);
        const double val = metric_value(rec, metric);
        if (val < best_val) {
            best_val = val;
            best_tau = tau;
            best_rec = rec;
        }
    }

    // Golden-section refinement inside the bracketing cell pair.
    const double gr = 0.61803398874989484820458683436564;
    double lo = best_tau - hz;
    double hi = best_tau + hz;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    DistanceRecord r1 = eval(x1), r2 = eval(x2);
    double f1 = metric_value(r1, metric), f2 = metric_value(r2, metric);
    while (hi - lo > hz / 100.0) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            r2 = r1;
            x1 = hi - gr * (hi - lo);
            r1 = eval(x1);
            f1 = metric_value(r1, metric);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            r1 = r2;
            x2 = lo + gr * (hi - lo);
            r2 = eval(x2);
            f2 = metric_value(r2, metric);
        }
    }

    OrbitalResult out;
    if (f1 < best_val || f2 < best_val) {
        if (f1 <= f2) {
            out.tau = x1;
            out.value = f1;
            out.record = r1;
        } else {
            out.tau = x2;
            out.value = f2;
            out.record = r2;
        }
    } else {
        out.tau = best_tau;
        out.value = best_val;
        out.record = best_rec;
    }
    return out;
}

double wan_metric(const VorticityField& a, const VorticityField& b) {
    const DistanceRecord d = weighted_distance(a, b);
    const QuantityRecord qa = quantities(a);
    const QuantityRecord qb = quantities(b);
    return d.w1 + std::abs(qa.z_moment - qb.z_moment);
}

} // namespace vring
