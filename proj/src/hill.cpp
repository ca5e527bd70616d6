#include "vring/hill.hpp"

#include <algorithm>
#include <cmath>

namespace vring {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kUnitSpeed = 2.0 / 15.0; // W of the unit vortex (lambda = a = 1)

void check(const HillVortex& h) {
    if (!(h.lambda > 0.0) || !std::isfinite(h.lambda))
        throw DomainError("hill: lambda must be finite and > 0");
    if (!(h.a > 0.0) || !std::isfinite(h.a))
        throw DomainError("hill: a must be finite and > 0");
    if (!std::isfinite(h.c))
        throw DomainError("hill: c must be finite");
}

// Unit stream function (lambda = a = 1) at rescaled coordinates.
double unit_stream(double r, double z) {
    const double rho2 = r * r + z * z;
    if (rho2 <= 1.0)
        return 0.5 * kUnitSpeed * r * r * (2.5 - 1.5 * rho2);
    return 0.5 * kUnitSpeed * r * r / (rho2 * std::sqrt(rho2));
}

// Antiderivative of the chord half-width w(t) = sqrt(a^2 - t^2): the integral
// of w from 0 to t, clamped to the support |t| <= a.
double chord_integral(double a, double t) {
    const double s = std::clamp(t, -a, a);
    return 0.5 * (s * std::sqrt(std::max(0.0, a * a - s * s)) +
                  a * a * std::asin(std::clamp(s / a, -1.0, 1.0)));
}

// Integral over t in [0, tau] of clamp(w(t), r0, r1) - r0, the covered width
// of the radial slab [r0, r1] at height t. The integrand is even in t, flat
// and equal to r1 - r0 while w >= r1, follows w - r0 until w falls below r0,
// then vanishes.
double covered_width_integral(double a, double r0, double r1, double tau) {
    const double b1 = (r1 < a) ? std::sqrt(a * a - r1 * r1) : 0.0;
    const double b0 = (r0 < a) ? std::sqrt(a * a - r0 * r0) : 0.0;
    double acc = (r1 - r0) * std::min(tau, b1);
    const double hi = std::min(tau, b0);
    if (hi > b1)
        acc += chord_integral(a, hi) - chord_integral(a, b1) - r0 * (hi - b1);
    return acc;
}

// Area of the intersection of the cell [r0,r1] x [t0,t1] with the half-disk
// {r < w(t)}, where t is the axial offset from the ball center.
double cell_ball_overlap(double a, double r0, double r1, double t0, double t1) {
    auto signed_part = [&](double t) {
        return (t >= 0.0) ? covered_width_integral(a, r0, r1, t)
                          : -covered_width_integral(a, r0, r1, -t);
    };
    return signed_part(t1) - signed_part(t0);
}

} // namespace

double hill_speed(const HillVortex& h) {
    check(h);
    return kUnitSpeed * h.lambda * h.a * h.a;
}

double hill_vorticity(const HillVortex& h, double r, double z) {
    check(h);
    const double x = r / h.a, y = (z - h.c) / h.a;
    return (x * x + y * y < 1.0) ? h.lambda : 0.0;
}

double hill_stream(const HillVortex& h, double r, double z) {
    check(h);
    if (r < 0.0) throw DomainError("hill_stream: r must be >= 0");
    const double a4 = h.a * h.a * h.a * h.a;
    return h.lambda * a4 * unit_stream(r / h.a, (z - h.c) / h.a);
}

double hill_adjusted_stream(const HillVortex& h, double r, double z) {
    return hill_stream(h, r, z) - 0.5 * hill_speed(h) * r * r;
}

HillQuantities hill_quantities(const HillVortex& h) {
    check(h);
    const double a3 = h.a * h.a * h.a;
    const double a5 = a3 * h.a * h.a;
    const double a7 = a5 * h.a * h.a;
    return {h.lambda, 4.0 / 3.0 * kPi * h.lambda * a3, 4.0 / 15.0 * kPi * h.lambda * a5,
            8.0 / 315.0 * kPi * h.lambda * h.lambda * a7};
}

double hill_radius_from_impulse(double mu, double lambda) {
    if (!(mu > 0.0) || !(lambda > 0.0))
        throw DomainError("hill_radius_from_impulse: mu and lambda must be > 0");
    return std::pow(15.0 * mu / (4.0 * kPi * lambda), 0.2);
}

double uniqueness_threshold() {
    return 4.0 / 15.0 * kPi * std::pow(4.0 / 3.0 * kPi, -5.0 / 3.0);
}

bool in_uniqueness_regime(double mu, double nu, double lambda) {
    if (!(mu > 0.0) || !(nu > 0.0) || !(lambda > 0.0))
        throw DomainError("in_uniqueness_regime: constraints must be > 0");
    const double m = mu * std::pow(nu, -5.0 / 3.0) * std::pow(lambda, 2.0 / 3.0);
    return m <= uniqueness_threshold();
}

VorticityField hill_field(const HillVortex& h, const AxiGrid& grid) {
    check(h);
    VorticityField f = VorticityField::zeros(grid, h.lambda);
    for (int i = 0; i < grid.nr; ++i)
        for (int j = 0; j < grid.nz; ++j)
            f.at(i, j) = hill_vorticity(h, grid.r(i), grid.z(j));
    return f;
}

VorticityField hill_field_averaged(const HillVortex& h, const AxiGrid& grid) {
    check(h);
    VorticityField f = VorticityField::zeros(grid, h.lambda);
    const double hr = grid.hr(), hz = grid.hz();
    const double diag = 0.5 * std::hypot(hr, hz);
    for (int i = 0; i < grid.nr; ++i) {
        for (int j = 0; j < grid.nz; ++j) {
            const double r = grid.r(i), t = grid.z(j) - h.c;
            const double rho = std::hypot(r, t);
            // Cells whose bounding circle misses the sphere are exactly
            // inside or outside; only boundary cells need the overlap.
            if (rho + diag <= h.a) {
                f.at(i, j) = h.lambda;
            } else if (rho - diag >= h.a) {
                f.at(i, j) = 0.0;
            } else {
                const double area = cell_ball_overlap(h.a, r - hr / 2, r + hr / 2,
                                                      t - hz / 2, t + hz / 2);
                f.at(i, j) = h.lambda * std::clamp(area / (hr * hz), 0.0, 1.0);
            }
        }
    }
    return f;
}

ScalarField hill_stream_field(const HillVortex& h, const AxiGrid& grid) {
    check(h);
    ScalarField f = ScalarField::zeros(grid);
    for (int i = 0; i < grid.nr; ++i)
        for (int j = 0; j < grid.nz; ++j)
            f.at(i, j) = hill_stream(h, grid.r(i), grid.z(j));
    return f;
}

} // namespace vring
