#include "vring/stream.hpp"

#include <algorithm>
#include <cmath>

#include "vring/parallel.hpp"

namespace vring {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

} // namespace

double self_cell_weight(double rp, double hr, double hz) {
    // Integral over the cell rectangle of the small-separation expansion
    //   F(s) ~ -ln t + ln rp + ln 8 - 2,  s = t^2 / rp^2,
    // times rp^2 / (2 pi); the O(s ln(1/s)) remainder is dropped. With
    // A = hr/2, B = hz/2 the rectangle integral of ln t has the closed form
    //   2 [ A B ln(A^2+B^2) - 3 A B + A^2 atan(B/A) + B^2 atan(A/B) ].
    const double A = 0.5 * hr, B = 0.5 * hz;
    const double log_integral =
        2.0 * (A * B * std::log(A * A + B * B) - 3.0 * A * B + A * A * std::atan2(B, A) +
               B * B * std::atan2(A, B));
    const double cell = hr * hz;
    const double value =
        rp * rp / (2.0 * kPi) * ((std::log(8.0 * rp) - 2.0) * cell - log_integral);
    return value / (rp * cell);
}

StreamSolver::StreamSolver(const AxiGrid& grid, const KernelEval& eval, int threads)
    : grid_(grid) {
    const int nr = grid.nr, nz = grid.nz;
    const double hr = grid.hr(), hz = grid.hz();
    const std::size_t rows = static_cast<std::size_t>(nr) * (nr + 1) / 2;
    table_.assign(rows * nz, 0.0);
    // Row (i, i2) with i <= i2 holds green(r_i, 0, r_i2, dj*hz) for dj in
    // [0, nz); the i == i2, dj == 0 entry is the analytic self-cell weight.
    parallel_for_chunks(nr, threads, [&](int ibegin, int iend) {
        for (int i = ibegin; i < iend; ++i) {
            const double ri = grid_.r(i);
            const std::size_t base = static_cast<std::size_t>(i) * (2 * nr - i + 1) / 2;
            for (int i2 = i; i2 < nr; ++i2) {
                const double r2 = grid_.r(i2);
                double* row_ptr = table_.data() + (base + (i2 - i)) * nz;
                for (int dj = 0; dj < nz; ++dj) {
                    if (i2 == i && dj == 0)
                        row_ptr[dj] = self_cell_weight(ri, hr, hz);
                    else
                        row_ptr[dj] = green(ri, 0.0, r2, dj * hz, eval);
                }
            }
        }
    });
}

const double* StreamSolver::row(int i, int i2) const {
    // Triangular index for i <= i2 in a matrix stored row by row.
    const std::size_t base =
        static_cast<std::size_t>(i) * (2 * grid_.nr - i + 1) / 2 + (i2 - i);
    return table_.data() + base * grid_.nz;
}

ScalarField StreamSolver::solve(const VorticityField& xi, int threads) const {
    if (!(xi.grid == grid_))
        throw DomainError("StreamSolver: field grid does not match solver grid");
    const int nr = grid_.nr, nz = grid_.nz;
    const double hr = grid_.hr(), hz = grid_.hz();
    ScalarField psi = ScalarField::zeros(grid_);

    // Nonzero extent [lo, hi) of every source row; rows of zeros are skipped.
    // Dropping exact zero terms cannot change any partial sum bitwise (all
    // contributions are >= 0), so this keeps byte-determinism.
    std::vector<int> lo(nr, 0), hi(nr, 0);
    for (int i = 0; i < nr; ++i) {
        const double* src = xi.values.data() + grid_.index(i, 0);
        int a = 0, b = nz;
        while (a < b && src[a] == 0.0) ++a;
        while (b > a && src[b - 1] == 0.0) --b;
        lo[i] = a;
        hi[i] = b;
    }

    parallel_for_chunks(nr, threads, [&](int ibegin, int iend) {
        for (int i = ibegin; i < iend; ++i) {
            double* out = psi.values.data() + grid_.index(i, 0);
            for (int i2 = 0; i2 < nr; ++i2) {
                if (lo[i2] >= hi[i2]) continue;
                const double* g = (i <= i2) ? row(i, i2) : row(i2, i);
                const double* src = xi.values.data() + grid_.index(i2, 0);
                const double w = grid_.r(i2) * hr * hz;
                for (int j = 0; j < nz; ++j) {
                    double acc = 0.0;
                    const int jm = std::min(j + 1, hi[i2]);
                    for (int j2 = lo[i2]; j2 < jm; ++j2) acc += src[j2] * g[j - j2];
                    for (int j2 = std::max(jm, lo[i2]); j2 < hi[i2]; ++j2)
                        acc += src[j2] * g[j2 - j];
                    out[j] += w * acc;
                }
            }
        }
    });
    return psi;
}

ScalarField stream_solve(const VorticityField& xi, const KernelEval& eval, int threads) {
    return StreamSolver(xi.grid, eval, threads).solve(xi, threads);
}

VelocityField velocity(const ScalarField& psi) {
    const AxiGrid& g = psi.grid;
    const int nr = g.nr, nz = g.nz;
    const double hr = g.hr(), hz = g.hz();
    VelocityField v{ScalarField::zeros(g), ScalarField::zeros(g)};
    for (int i = 0; i < nr; ++i) {
        const double inv_r = 1.0 / g.r(i);
        for (int j = 0; j < nz; ++j) {
            double dpsi_dz;
            if (j == 0)
                dpsi_dz = (-3.0 * psi.at(i, 0) + 4.0 * psi.at(i, 1) - psi.at(i, 2)) / (2.0 * hz);
            else if (j == nz - 1)
                dpsi_dz =
                    (3.0 * psi.at(i, j) - 4.0 * psi.at(i, j - 1) + psi.at(i, j - 2)) / (2.0 * hz);
            else
                dpsi_dz = (psi.at(i, j + 1) - psi.at(i, j - 1)) / (2.0 * hz);

            double dpsi_dr;
            if (i == 0)
                dpsi_dr = (-3.0 * psi.at(0, j) + 4.0 * psi.at(1, j) - psi.at(2, j)) / (2.0 * hr);
            else if (i == nr - 1)
                dpsi_dr =
                    (3.0 * psi.at(i, j) - 4.0 * psi.at(i - 1, j) + psi.at(i - 2, j)) / (2.0 * hr);
            else
                dpsi_dr = (psi.at(i + 1, j) - psi.at(i - 1, j)) / (2.0 * hr);

            v.ur.at(i, j) = -dpsi_dz * inv_r;
            v.uz.at(i, j) = dpsi_dr * inv_r;
        }
    }
    return v;
}

double uz_on_axis(const ScalarField& psi, int j) {
    const AxiGrid& g = psi.grid;
    if (j < 0 || j >= g.nz) throw DomainError("uz_on_axis: plane index out of range");
    // Quadratic extrapolation of eta = psi / r^2 to r = 0; with nodes at
    // (k + 1/2) hr the Lagrange weights at r = 0 are fixed.
    const double e0 = psi.at(0, j) / (g.r(0) * g.r(0));
    const double e1 = psi.at(1, j) / (g.r(1) * g.r(1));
    const double e2 = psi.at(2, j) / (g.r(2) * g.r(2));
    const double eta0 = 1.875 * e0 - 1.25 * e1 + 0.375 * e2;
    return 2.0 * eta0;
}

namespace {

double residual_impl(const ScalarField& psi, const ScalarField& xi,
                     const std::function<bool(double, double)>* region) {
    if (!(psi.grid == xi.grid))
        throw DomainError("elliptic_residual: fields on different grids");
    const AxiGrid& g = psi.grid;
    const int nr = g.nr, nz = g.nz;
    const double hr = g.hr(), hz = g.hz();

    // Jump detector: a node is a discontinuity witness when a 4-neighbor
    // differs by more than a quarter of the global range.
    double vmin = xi.values[0], vmax = xi.values[0];
    for (double v : xi.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double jump = 0.25 * (vmax - vmin);
    std::vector<char> bad(g.size(), 0);
    if (jump > 0.0) {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) {
                const double v = xi.at(i, j);
                bool flag = false;
                if (i > 0 && std::abs(xi.at(i - 1, j) - v) > jump) flag = true;
                if (i + 1 < nr && std::abs(xi.at(i + 1, j) - v) > jump) flag = true;
                if (j > 0 && std::abs(xi.at(i, j - 1) - v) > jump) flag = true;
                if (j + 1 < nz && std::abs(xi.at(i, j + 1) - v) > jump) flag = true;
                if (flag) bad[g.index(i, j)] = 1;
            }
    }

    double worst = 0.0;
    for (int i = 1; i + 1 < nr; ++i) {
        const double ri = g.r(i);
        for (int j = 1; j + 1 < nz; ++j) {
            if (region && !(*region)(ri, g.z(j))) continue;
            bool near_jump = false;
            for (int di = -2; di <= 2 && !near_jump; ++di)
                for (int dj = -2; dj <= 2 && !near_jump; ++dj) {
                    const int ii = i + di, jj = j + dj;
                    if (ii >= 0 && ii < nr && jj >= 0 && jj < nz && bad[g.index(ii, jj)])
                        near_jump = true;
                }
            if (near_jump) continue;
            const double flux =
                ri * ((psi.at(i + 1, j) - psi.at(i, j)) / (ri + 0.5 * hr) -
                      (psi.at(i, j) - psi.at(i - 1, j)) / (ri - 0.5 * hr)) /
                (hr * hr);
            const double dzz = (psi.at(i, j + 1) - 2.0 * psi.at(i, j) + psi.at(i, j - 1)) / (hz * hz);
            const double lhs = -(flux + dzz) / (ri * ri);
            worst = std::max(worst, std::abs(lhs - xi.at(i, j)));
        }
    }
    return worst;
}

} // namespace

double elliptic_residual(const ScalarField& psi, const ScalarField& xi) {
    return residual_impl(psi, xi, nullptr);
}

double elliptic_residual(const ScalarField& psi, const ScalarField& xi,
                         const std::function<bool(double, double)>& region) {
    return residual_impl(psi, xi, &region);
}

ScalarField shift_z(const ScalarField& f, double tau) {
    if (!std::isfinite(tau)) throw DomainError("shift_z: tau must be finite");
    const AxiGrid& g = f.grid;
    ScalarField out = ScalarField::zeros(g);
    const double hz = g.hz();
    for (int j = 0; j < g.nz; ++j) {
        // Source position z_j - tau in fractional cell units.
        const double x = (g.z(j) - tau - g.z_min) / hz - 0.5;
        const double xf = std::floor(x);
        const int k = static_cast<int>(xf);
        const double frac = x - xf;
        const double w0 = 1.0 - frac, w1 = frac;
        for (int i = 0; i < g.nr; ++i) {
            double v = 0.0;
            if (k >= 0 && k < g.nz) v += w0 * f.at(i, k);
            if (k + 1 >= 0 && k + 1 < g.nz) v += w1 * f.at(i, k + 1);
            out.at(i, j) = v;
        }
    }
    return out;
}

VorticityField shift_z(const VorticityField& f, double tau) {
    VorticityField out = f;
    out.values = shift_z(static_cast<const ScalarField&>(f), tau).values;
    return out;
}

} // namespace vring
