#pragma once

#include <functional>
#include <vector>

#include "vring/grid.hpp"
#include "vring/kernel.hpp"

namespace vring {

struct VelocityField {
    ScalarField ur; // -d(psi)/dz / r
    ScalarField uz; // +d(psi)/dr / r
};

// Midpoint-rule Biot-Savart sum psi(p) = sum_q green(p, q) xi(q) r_q hr hz,
// with the singular q = p cell replaced by the analytic integral of the
// small-separation kernel expansion over the cell rectangle.
//
// The kernel depends on z only through |z - z2|, so construction precomputes
// one kernel row per radius pair (O(nr^2 nz) memory) and each solve is a
// direct O((nr nz)^2) summation. For every target node the source sum runs
// in a fixed order (source rows by increasing radius, nodes by increasing z),
// so results are byte-identical for any thread count.
class StreamSolver {
  public:
    StreamSolver(const AxiGrid& grid, const KernelEval& eval, int threads = 1);

    const AxiGrid& grid() const { return grid_; }
    ScalarField solve(const VorticityField& xi, int threads = 1) const;

  private:
    AxiGrid grid_;
    std::vector<double> table_; // triangular rows (i <= i2), each nz long
    const double* row(int i, int i2) const;
};

// One-shot convenience wrapper around StreamSolver.
ScalarField stream_solve(const VorticityField& xi, const KernelEval& eval, int threads = 1);

// Analytic self-cell weight: integral over one hr x hz cell centered at
// radius rp of the kernel times the r dr dz volume factor of the source
// point, divided by rp hr hz so it can stand in the summation (which
// multiplies every row by r_source hr hz) where green(p, p) would sit.
// Exposed for tests.
double self_cell_weight(double rp, double hr, double hz);

// Central second-order differences inside, one-sided second-order stencils
// on the edges.
VelocityField velocity(const ScalarField& psi);

// Axial velocity on the axis at plane j: u_z(0, z_j) = 2 * eta(0, z_j) where
// eta = psi / r^2 is extrapolated to r = 0 by a quadratic through the first
// three radial nodes. u_r on the axis is identically 0.
double uz_on_axis(const ScalarField& psi, int j);

// Max over admissible nodes of | -(1/r^2) L_h psi - xi | where
// L_h = r d_r((1/r) d_r) + d_zz in conservation form (exact on r^2, r^4,
// r^2 z^2). Admissible: interior nodes further than 2 cells (Chebyshev) from
// any detected jump of xi and, if given, inside `region`(r, z).
double elliptic_residual(const ScalarField& psi, const ScalarField& xi);
double elliptic_residual(const ScalarField& psi, const ScalarField& xi,
                         const std::function<bool(double, double)>& region);

// Resample at z - tau by linear interpolation in z; zero outside the grid.
ScalarField shift_z(const ScalarField& f, double tau);
VorticityField shift_z(const VorticityField& f, double tau);

} // namespace vring
