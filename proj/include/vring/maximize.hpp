#pragma once

#include <optional>
#include <vector>

#include "vring/grid.hpp"
#include "vring/kernel.hpp"
#include "vring/stream.hpp"

namespace vring {

// Constraint class for the kinetic-energy maximization: fields with
// 0 <= xi <= lambda, impulse equal to mu, circulation at most nu.
struct Constraints {
    double mu = 0.0;     // target impulse (1/2) int r^2 xi dV
    double nu = 0.0;     // circulation budget int xi dV
    double lambda = 0.0; // pointwise strength cap

    void check() const;
};

// One bathtub step: the maximizer of int xi psi dV over the constraint
// class for a frozen stream function. W is the impulse multiplier (the
// translation speed of a steady ring), gamma >= 0 the circulation
// multiplier, and the optimal set is { psi - (W/2) r^2 > gamma } with at
// most a couple of fractional cells where constraints pin the level set.
struct MultiplierResult {
    VorticityField xi;
    double W = 0.0;
    double gamma = 0.0;
    double impulse = 0.0;     // achieved (equals mu)
    double circulation = 0.0; // achieved (at most nu)
};

MultiplierResult solve_multipliers(const ScalarField& psi, const Constraints& c);

struct MaximizeOptions {
    int max_iters = 60;
    double set_tol = 1e-10;  // relative (1 + r^2)-weighted set change for convergence
    int symmetrize_every = 5; // axial Steiner symmetrization cadence (0 = never)
    int threads = 1;
    std::optional<KernelEval> kernel;      // default: tabulated profile
    std::optional<VorticityField> seed;    // default: solid torus at the ring radius
};

struct MaximizeResult {
    VorticityField xi;
    ScalarField psi; // stream function of the final field
    double W = 0.0;
    double gamma = 0.0;
    double energy = 0.0;
    std::vector<double> energy_trace;     // energy after each stream solve
    std::vector<double> set_change_trace; // relative weighted set change per step
    std::vector<int> restarts;            // trace indices of kept stall-escape jumps
    bool converged = false;
    int iterations = 0;
};

// Ascent iteration xi -> bathtub(stream(xi)), with periodic axial
// symmetrization about the vorticity centroid. Each step maximizes the
// linearized energy over the constraint class and the quadratic remainder is
// the kinetic energy of the difference field, so from the first constrained
// iterate on the energy trace is non-decreasing up to quadrature error (the
// leading entry is the raw seed, which need not satisfy the constraints).
// A set that reproduces itself under the bathtub step maximizes only the
// linear model, so a stall is probed before it is accepted: if the
// circulation cap is slack, the iteration jumps to the cap-saturated branch
// (budget spent as an equality), since the quadratic term can favor a
// vertex the linear model rejects; if the stalled set is measurably
// z-asymmetric, it jumps to the mirror-average about its impulse centroid,
// since one-sided boundary cells can lock in below a symmetric competitor.
// Each jump is tentative: the branch runs to its own stall and the iterate
// with more energy is kept. A kept jump is recorded in restarts by the
// trace index of its first iterate; the energy trace may dip once at that
// index before the ascent resumes, and is non-decreasing between restarts.
// A jump that fails to beat the stall it left is rolled back and leaves no
// mark.
MaximizeResult maximize_energy(const Constraints& c, const AxiGrid& grid,
                               const MaximizeOptions& opts = {});

// Steady-ring consistency checks for a maximizer:
//   identity_residual = |7 E - 5 W mu - 3 gamma Gamma| / (7 E),
//   speed_bound_ok    = W >= E / (2 mu) up to rel_slack,
//   support_margin_cells = cell distance from the support to the outer
//                          r and both z boundaries.
struct RingIdentityReport {
    double identity_residual = 0.0;
    bool speed_bound_ok = false;
    int support_margin_cells = 0;
    double energy = 0.0;
    double impulse = 0.0;
    double circulation = 0.0;
};

RingIdentityReport verify_ring_identities(const MaximizeResult& result,
                                          double rel_slack = 1e-9);

} // namespace vring
