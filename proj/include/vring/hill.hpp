#pragma once

#include "vring/grid.hpp"

namespace vring {

// Spherical vortex ring of strength lambda and radius a, centered at z = c:
// vorticity lambda inside the ball, zero outside. Travels at speed
// (2/15) lambda a^2 along the axis.
struct HillVortex {
    double lambda = 1.0;
    double a = 1.0;
    double c = 0.0;
};

struct HillQuantities {
    double strength;    // lambda
    double circulation; // (4/3) pi lambda a^3
    double impulse;     // (4/15) pi lambda a^5
    double energy;      // (8/315) pi lambda^2 a^7
};

double hill_speed(const HillVortex& h);

// lambda on the strictly interior ball rho^2 < a^2, 0 outside (the boundary
// sphere itself maps to 0).
double hill_vorticity(const HillVortex& h, double r, double z);

// Stream function of the traveling solution; continuous across rho = a.
// Evaluated in rescaled coordinates x/a so large radii do not overflow.
double hill_stream(const HillVortex& h, double r, double z);

// psi - (1/2) W r^2 with W = hill_speed(h) and zero flux constant: positive
// strictly inside the ball, zero on the boundary sphere, negative outside.
double hill_adjusted_stream(const HillVortex& h, double r, double z);

HillQuantities hill_quantities(const HillVortex& h);

// Radius of the ball whose vortex of strength lambda carries impulse mu:
// a = (15 mu / (4 pi lambda))^(1/5).
double hill_radius_from_impulse(double mu, double lambda);

// Scale-invariant constraint combination mu nu^(-5/3) lambda^(2/3) and the
// threshold (4/15) pi ((4/3) pi)^(-5/3) below (and at) which the constrained
// energy maximizer is exactly a translate of a Hill vortex.
double uniqueness_threshold();
bool in_uniqueness_regime(double mu, double nu, double lambda);

// Point samples on a grid.
VorticityField hill_field(const HillVortex& h, const AxiGrid& grid);
ScalarField hill_stream_field(const HillVortex& h, const AxiGrid& grid);

// Exact cell averages of the vorticity: lambda times the area fraction of
// each cell inside the ball, from the closed-form chord integral. Point
// sampling leaves an O(h) staircase on the patch boundary that caps stream
// solves at first order near points where the boundary runs parallel to a
// grid line; the averaged field restores second-order convergence, so use it
// for refinement studies. Cells away from the boundary get exactly 0 or
// lambda.
VorticityField hill_field_averaged(const HillVortex& h, const AxiGrid& grid);

} // namespace vring
