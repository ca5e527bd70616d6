#pragma once

#include <optional>
#include <vector>

#include "vring/functionals.hpp"
#include "vring/grid.hpp"
#include "vring/kernel.hpp"
#include "vring/stream.hpp"

namespace vring {

// Bilinear interpolation of a node field at an arbitrary point, with the
// symmetry of the axis built in: even fields (vorticity, axial velocity)
// continue across r = 0 with zero slope, odd fields (radial velocity) pass
// through zero. Negative radii reflect (even: f(-r) = f(r), odd: -f(r)) and
// everything tapers linearly to zero within half a cell of the other grid
// edges.
double sample_axis_even(const ScalarField& f, double r, double z);
double sample_axis_odd(const ScalarField& f, double r, double z);

// One semi-Lagrangian step of the transport equation d(xi)/dt = 0 along the
// flow: each node traces a midpoint-rule characteristic backwards through
// the frozen velocity and picks up the interpolated vorticity there, clamped
// to [0, cap]. Throws StepSizeError when dt * max|u| exceeds
// cfl_limit * min(hr, hz).
VorticityField advect_step(const VorticityField& xi, const VelocityField& vel,
                           double dt, double cfl_limit, int threads = 1);

struct DiagRow {
    double t = 0.0;
    QuantityRecord q;
    double centroid_z = 0.0; // z moment / (2 impulse)
    std::vector<double> band_masses;
};

struct EvolveConfig {
    double t_end = 0.0;
    double cfl = 0.5;
    int resolve_every = 1;   // steps between velocity refreshes
    double diag_every = 0.0; // diagnostic times k * diag_every (0: ends only)
    std::vector<std::pair<double, double>> bands; // band-mass diagnostics
    int threads = 1;
    std::optional<KernelEval> kernel; // default: tabulated profile
};

struct EvolveResult {
    VorticityField xi;
    std::vector<DiagRow> diagnostics;
    int steps = 0;
};

// Evolves the field to t_end, refreshing the stream function every
// resolve_every steps and landing on every diagnostic time exactly (the step
// is shortened, never stretched). Diagnostics are computed from a fresh
// stream solve at each recorded time.
EvolveResult evolve(const VorticityField& xi0, const EvolveConfig& cfg);

// Perturbed spherical-vortex run against the gridded steady reference.
struct StabilityConfig {
    enum class Kind { radius, notch };
    Kind kind = Kind::radius;
    double delta = 0.0; // radius: relative radius change; notch: notch radius / a
    double t_end = 0.0;
    double diag_every = 0.0;
    double cfl = 0.5;
    int threads = 1;
    std::optional<KernelEval> kernel;
};

struct StabilityRow {
    double t = 0.0;
    double orbital = 0.0; // translation-minimized combined distance to reference
    double tau = 0.0;     // minimizing shift
};

struct StabilityResult {
    double delta0 = 0.0; // orbital distance at t = 0
    std::vector<StabilityRow> series;
    EvolveResult run;
};

// Evolves a perturbation of the unit spherical vortex and tracks the orbital
// distance to the unperturbed gridded profile at every diagnostic time. A
// delta = 0 run measures the numerical drift floor of the scheme itself.
StabilityResult stability_experiment(const AxiGrid& grid, const StabilityConfig& cfg);

} // namespace vring
