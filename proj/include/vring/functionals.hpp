#pragma once

#include "vring/grid.hpp"

namespace vring {

// Integrals use the cylindrical volume element dV = 2 pi r dr dz and the
// midpoint rule. Reductions whose weight is constant along a fixed-r row
// (l1, l2, w1, impulse, circulation, band masses) sum each row's values in
// descending order before combining rows in increasing-r order; this makes
// them invariant under within-row permutations (so symmetrization preserves
// them bit-exactly) while staying deterministic for any thread count.
struct QuantityRecord {
    double l1 = 0.0;          // integral of |xi| dV
    double l2 = 0.0;          // sqrt of integral of xi^2 dV
    double strength = 0.0;    // max value
    double impulse = 0.0;     // (1/2) integral of r^2 xi dV
    double circulation = 0.0; // integral of xi dV
    double energy = 0.0;      // (1/2) integral of xi psi dV (NaN without psi)
    double z_moment = 0.0;    // integral of z r^2 xi dV
};

QuantityRecord quantities(const VorticityField& xi);
QuantityRecord quantities(const VorticityField& xi, const ScalarField& psi);

// (1/2) integral of xi psi dV.
double kinetic_energy(const VorticityField& xi, const ScalarField& psi);

// Mass carried by values strictly inside the band: integral of xi over
// {a < xi < b} dV.
double band_mass(const VorticityField& xi, double a, double b);

struct DistanceRecord {
    double l1 = 0.0; // integral |xi1 - xi2| dV
    double l2 = 0.0; // L2 distance
    double w1 = 0.0; // integral r^2 |xi1 - xi2| dV

    double combined() const { return l1 + l2 + w1; }
    double weighted_l1() const { return l1 + w1; } // (1 + r^2)-weighted L1
};

DistanceRecord weighted_distance(const VorticityField& a, const VorticityField& b);

// Convenience: integral of (1 + r^2)|a - b| dV.
double weighted_symmetric_difference(const VorticityField& a, const VorticityField& b);

enum class OrbitalMetric { combined, weighted_l1 };

struct OrbitalResult {
    double tau = 0.0;      // optimal axial shift of the first field
    double value = 0.0;    // metric at tau
    DistanceRecord record; // components at tau
};

// Minimizes the chosen metric of (shift_z(a, tau), b) over tau: coarse scan
// in steps of hz over the full overlap range, then golden-section refinement
// to hz/100. Ties prefer the smallest tau; if refinement fails to improve on
// the coarse minimum the coarse result is returned.
OrbitalResult orbital_distance(const VorticityField& a, const VorticityField& b,
                               OrbitalMetric metric = OrbitalMetric::combined);

// w1 distance plus the z-moment mismatch |m(a) - m(b)|, m = integral z r^2 xi dV.
double wan_metric(const VorticityField& a, const VorticityField& b);

} // namespace vring
