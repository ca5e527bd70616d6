#include "vring/maximize.hpp"

#include "vring/errors.hpp"
#include "vring/functionals.hpp"
#include "vring/hill.hpp"
#include "vring/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace vring {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct CellWeights {
    std::vector<double> circ; // volume of cell: 2 pi r hr hz
    std::vector<double> imp;  // (1/2) r^2 * volume
    std::vector<double> rsq;  // r^2 at the cell
};

CellWeights cell_weights(const AxiGrid& g) {
    CellWeights w;
    const std::size_t n = g.size();
    w.circ.resize(n);
    w.imp.resize(n);
    w.rsq.resize(n);
    const double cell = g.hr() * g.hz();
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.r(i);
        const double vol = kTwoPi * r * cell;
        for (int j = 0; j < g.nz; ++j) {
            const std::size_t c = g.index(i, j);
            w.circ[c] = vol;
            w.imp[c] = 0.5 * r * r * vol;
            w.rsq[c] = r * r;
        }
    }
    return w;
}

// Largest impulse a field in the constraint class can carry on this grid:
// spend the circulation budget on the outermost cells.
double impulse_capacity(const AxiGrid& g, const CellWeights& w, const Constraints& c) {
    double imp = 0.0;
    double budget = c.nu;
    for (int i = g.nr - 1; i >= 0 && budget > 0.0; --i) {
        const std::size_t idx = g.index(i, 0);
        const double row_circ = c.lambda * w.circ[idx] * g.nz;
        const double take = std::min(budget, row_circ);
        imp += take * 0.5 * w.rsq[idx];
        budget -= take;
    }
    return imp;
}

struct Fill {
    std::vector<double> xi;
    double impulse = 0.0;
    double circulation = 0.0;
    double marginal_phi = 0.0; // phi of the last (possibly fractional) cell
    bool budget_bound = false; // true if the circulation budget stopped the fill
};

// Bathtub fill for a frozen impulse price W: maximize
//   sum xi_c (psi_c - (W/2) r_c^2) w_c  over 0 <= xi <= lambda,
//   sum xi_c w_c <= nu.
// Cells with positive phi are taken in descending phi order until phi runs
// out or the circulation budget is spent; one fractional cell respects the
// budget exactly. Ties resolve by cell index, so the result is a pure
// function of (psi, W). With spend_full_budget the circulation cap is
// treated as an equality: the fill continues into nonpositive-phi cells
// until the budget is gone (used to probe the cap-saturated branch).
Fill fill_at(const std::vector<double>& psi, const CellWeights& w, const Constraints& c,
             double W, std::vector<int>& order, bool spend_full_budget = false) {
    const std::size_t n = psi.size();
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = psi[i] - 0.5 * W * w.rsq[i];

    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (phi[static_cast<std::size_t>(a)] != phi[static_cast<std::size_t>(b)])
            return phi[static_cast<std::size_t>(a)] > phi[static_cast<std::size_t>(b)];
        return a < b;
    });

    Fill f;
    f.xi.assign(n, 0.0);
    double budget = c.nu;
    for (int idx : order) {
        const std::size_t ci = static_cast<std::size_t>(idx);
        if (!spend_full_budget && !(phi[ci] > 0.0)) break;
        const double cell_circ = c.lambda * w.circ[ci];
        if (cell_circ >= budget) {
            const double v = std::clamp(budget / w.circ[ci], 0.0, c.lambda);
            f.xi[ci] = v;
            f.circulation += v * w.circ[ci];
            f.impulse += v * 0.5 * w.rsq[ci] * w.circ[ci];
            f.marginal_phi = phi[ci];
            f.budget_bound = true;
            return f;
        }
        f.xi[ci] = c.lambda;
        f.circulation += cell_circ;
        f.impulse += cell_circ * 0.5 * w.rsq[ci];
        f.marginal_phi = phi[ci];
        budget -= cell_circ;
    }
    return f;
}

} // namespace

void Constraints::check() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("constraints: impulse target must be finite and > 0");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("constraints: circulation budget must be finite and > 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("constraints: strength cap must be finite and > 0");
}

MultiplierResult solve_multipliers(const ScalarField& psi, const Constraints& c) {
    c.check();
    const AxiGrid& g = psi.grid;
    const CellWeights w = cell_weights(g);
    const std::size_t n = g.size();

    double psi_max = 0.0;
    for (double v : psi.values) psi_max = std::max(psi_max, v);
    if (!(psi_max > 0.0)) throw InfeasibleError("solve_multipliers: stream function has no positive part");

    if (impulse_capacity(g, w, c) < c.mu)
        throw InfeasibleError("solve_multipliers: impulse target exceeds grid capacity for this circulation budget");

    // Fast path: if the circulation budget stays slack, the impulse-only
    // bathtub is exact. Fill by the ratio rho = 2 psi / r^2 (the price at
    // which a cell leaves the set) until the impulse hits mu; the marginal
    // ratio is W and gamma = 0.
    {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> rho(n);
        for (std::size_t i = 0; i < n; ++i) rho[i] = 2.0 * psi.values[i] / w.rsq[i];
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (rho[static_cast<std::size_t>(a)] != rho[static_cast<std::size_t>(b)])
                return rho[static_cast<std::size_t>(a)] > rho[static_cast<std::size_t>(b)];
            return a < b;
        });

        std::vector<double> xi(n, 0.0);
        double imp = 0.0, circ = 0.0, Wstar = 0.0;
        bool reached = false;
        for (int idx : order) {
            const std::size_t ci = static_cast<std::size_t>(idx);
            if (!(rho[ci] > 0.0)) break;
            const double cell_imp = c.lambda * w.imp[ci];
            Wstar = rho[ci];
            if (imp + cell_imp >= c.mu) {
                const double v = std::clamp((c.mu - imp) / w.imp[ci], 0.0, c.lambda);
                xi[ci] = v;
                circ += v * w.circ[ci];
                imp = c.mu;
                reached = true;
                break;
            }
            xi[ci] = c.lambda;
            imp += cell_imp;
            circ += c.lambda * w.circ[ci];
        }
        if (reached && circ <= c.nu * (1.0 + 1e-12)) {
            MultiplierResult out;
            out.xi = VorticityField::from_values(g, c.lambda, std::move(xi));
            out.W = Wstar;
            out.gamma = 0.0;
            out.impulse = imp;
            out.circulation = circ;
            return out;
        }
    }

    // Circulation budget binds: bisect the price W so the budget-capped fill
    // carries exactly the target impulse. The fill impulse is a step function
    // of W, so after the bracket collapses the two endpoint fills straddle mu
    // and the unique convex blend hitting mu exactly is still optimal (both
    // endpoints lie on the optimal face of the linear program).
    std::vector<int> scratch;
    auto impulse_of = [&](double W) { return fill_at(psi.values, w, c, W, scratch); };

    double w_hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) w_hi = std::max(w_hi, 2.0 * psi.values[i] / w.rsq[i]);
    w_hi *= 1.0000001; // empty set: impulse 0 < mu
    double w_lo = 0.0;
    Fill f_lo = impulse_of(w_lo);
    if (f_lo.impulse < c.mu) {
        double step = std::max(1.0, w_hi);
        for (int k = 0; k < 200 && f_lo.impulse < c.mu; ++k) {
            w_lo -= step;
            step *= 2.0;
            f_lo = impulse_of(w_lo);
        }
        if (f_lo.impulse < c.mu)
            throw InfeasibleError("solve_multipliers: cannot bracket the impulse price");
    }
    Fill f_hi = impulse_of(w_hi);

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (w_lo + w_hi);
        if (mid == w_lo || mid == w_hi) break;
        Fill f_mid = impulse_of(mid);
        if (f_mid.impulse >= c.mu) {
            w_lo = mid;
            f_lo = std::move(f_mid);
        } else {
            w_hi = mid;
            f_hi = std::move(f_mid);
        }
        if (w_hi - w_lo <= 1e-15 * std::max(1.0, std::abs(w_lo))) break;
    }

    MultiplierResult out;
    const double denom = f_lo.impulse - f_hi.impulse;
    const double theta = denom > 0.0 ? (c.mu - f_hi.impulse) / denom : 1.0;
    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i)
        xi[i] = std::clamp(theta * f_lo.xi[i] + (1.0 - theta) * f_hi.xi[i], 0.0, c.lambda);
    out.xi = VorticityField::from_values(g, c.lambda, std::move(xi));
    out.W = 0.5 * (w_lo + w_hi);
    out.gamma = std::max(0.0, theta * f_lo.marginal_phi + (1.0 - theta) * f_hi.marginal_phi);
    out.impulse = theta * f_lo.impulse + (1.0 - theta) * f_hi.impulse;
    out.circulation = theta * f_lo.circulation + (1.0 - theta) * f_hi.circulation;
    return out;
}

namespace {

// Candidate on the cap-saturated branch: maximize the frozen linear form
// with the circulation cap taken as an equality, bisecting the impulse
// price so the fill carries exactly mu. A vertex that is self-consistent
// with a slack cap can still lose to this branch on the true quadratic
// energy (the curvature term is nonnegative), so the fixed-point iteration
// probes it on stall and keeps it only if the energy strictly improves.
std::optional<MultiplierResult> cap_saturated_candidate(const ScalarField& psi,
                                                        const Constraints& c) {
    const AxiGrid& g = psi.grid;
    const CellWeights w = cell_weights(g);
    const std::size_t n = g.size();
    double capacity = 0.0;
    for (std::size_t i = 0; i < n; ++i) capacity += c.lambda * w.circ[i];
    if (capacity <= c.nu) return std::nullopt;

    std::vector<int> scratch;
    auto fill = [&](double W) { return fill_at(psi.values, w, c, W, scratch, true); };

    // The fill impulse decreases as W rises (the price pushes the budget
    // toward the axis), so bracket and bisect.
    double w_hi = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        w_hi = std::max(w_hi, 2.0 * std::abs(psi.values[i]) / w.rsq[i]);
    w_hi = std::max(w_hi, 1.0);
    double w_lo = -w_hi;
    Fill f_lo = fill(w_lo);
    for (int k = 0; k < 200 && f_lo.impulse < c.mu; ++k) {
        w_lo *= 2.0;
        f_lo = fill(w_lo);
    }
    if (f_lo.impulse < c.mu) return std::nullopt;
    Fill f_hi = fill(w_hi);
    for (int k = 0; k < 200 && f_hi.impulse > c.mu; ++k) {
        w_hi *= 2.0;
        f_hi = fill(w_hi);
    }
    if (f_hi.impulse > c.mu) return std::nullopt;

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (w_lo + w_hi);
        if (mid == w_lo || mid == w_hi) break;
        Fill f_mid = fill(mid);
        if (f_mid.impulse >= c.mu) {
            w_lo = mid;
            f_lo = std::move(f_mid);
        } else {
            w_hi = mid;
            f_hi = std::move(f_mid);
        }
        if (w_hi - w_lo <= 1e-15 * std::max(1.0, std::abs(w_lo))) break;
    }

    const double denom = f_lo.impulse - f_hi.impulse;
    const double theta = denom > 0.0 ? (c.mu - f_hi.impulse) / denom : 1.0;
    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i)
        xi[i] = std::clamp(theta * f_lo.xi[i] + (1.0 - theta) * f_hi.xi[i], 0.0, c.lambda);
    MultiplierResult out;
    out.xi = VorticityField::from_values(g, c.lambda, std::move(xi));
    out.W = 0.5 * (w_lo + w_hi);
    out.gamma = std::max(0.0, theta * f_lo.marginal_phi + (1.0 - theta) * f_hi.marginal_phi);
    out.impulse = theta * f_lo.impulse + (1.0 - theta) * f_hi.impulse;
    out.circulation = theta * f_lo.circulation + (1.0 - theta) * f_hi.circulation;
    return out;
}

// Mirror-average of the field about the z face nearest z_center. Cell
// weights depend on r only, so the average of a field and its mirror keeps
// the impulse and circulation exactly and stays inside [0, cap]; by
// convexity its energy sits slightly below the field's own. That makes it a
// restart point rather than an accepted step: a stall that is not
// z-symmetric can lock in one-sided boundary cells that a symmetric
// competitor beats, and the iteration re-sharpens from the average. Returns
// nullopt for an empty field or when the mirrored support would leave the
// grid.
std::optional<VorticityField> mirror_averaged(const VorticityField& xi, double z_center,
                                              double cap) {
    const AxiGrid& g = xi.grid;
    int j0 = g.nz, j1 = -1;
    for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.nz; ++j) {
            if (xi.values[g.index(i, j)] > 0.0) {
                j0 = std::min(j0, j);
                j1 = std::max(j1, j);
            }
        }
    }
    if (j1 < 0) return std::nullopt;
    const int face = static_cast<int>(std::lround((z_center - g.z_min) / g.hz()));
    if (2 * face - 1 - j0 > g.nz - 1 || 2 * face - 1 - j1 < 0) return std::nullopt;
    std::vector<double> out(g.size(), 0.0);
    for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.nz; ++j) {
            const int jm = 2 * face - 1 - j;
            const double mirrored = (jm >= 0 && jm < g.nz) ? xi.values[g.index(i, jm)] : 0.0;
            out[g.index(i, j)] = 0.5 * (xi.values[g.index(i, j)] + mirrored);
        }
    }
    return VorticityField::from_values(g, cap, std::move(out));
}

VorticityField default_seed(const AxiGrid& g, const Constraints& c) {
    // Solid torus of cap-strength vorticity centered at the ring radius that
    // a spherical vortex of the target impulse would have.
    const double a = hill_radius_from_impulse(c.mu, c.lambda);
    const double zc = 0.5 * (g.z_min + g.z_max);
    const double rc = std::min(a, 0.75 * g.r_max);
    const double rad = 0.5 * rc;
    VorticityField xi = VorticityField::zeros(g, c.lambda);
    for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.nz; ++j) {
            const double dr = g.r(i) - rc;
            const double dz = g.z(j) - zc;
            if (dr * dr + dz * dz <= rad * rad) xi.values[g.index(i, j)] = c.lambda;
        }
    }
    return xi;
}

} // namespace

MaximizeResult maximize_energy(const Constraints& c, const AxiGrid& grid,
                               const MaximizeOptions& opts) {
    c.check();
    if (opts.max_iters < 1) throw DomainError("maximize_energy: max_iters must be >= 1");
    const KernelEval kernel = opts.kernel ? *opts.kernel : KernelEval::with_table();
    const StreamSolver solver(grid, kernel, opts.threads);

    VorticityField xi = opts.seed ? *opts.seed : default_seed(grid, c);
    if (!(xi.grid == grid)) throw DomainError("maximize_energy: seed grid differs");

    MaximizeResult res;
    res.xi = xi;

    // A stall with a slack circulation cap can be a self-consistent vertex
    // that still loses to the cap-saturated branch on the true energy, and
    // the first iterate of that branch may sit below the stall (the linear
    // loss of filling marginal cells is paid before the curvature gain), so
    // a one-step energy test cannot tell the branches apart. Instead the
    // jump is tentative: snapshot the stall, run the branch to its own
    // stall, and keep whichever stalled iterate carries more energy.
    struct Snapshot {
        VorticityField xi;
        double W = 0.0;
        double gamma = 0.0;
        int iterations = 0;
        std::size_t trace_len = 0;
        std::size_t change_len = 0;
        double energy = 0.0;
    };
    std::optional<Snapshot> pending;
    auto restore = [&res, &xi](Snapshot& snap) {
        xi = std::move(snap.xi);
        res.W = snap.W;
        res.gamma = snap.gamma;
        res.iterations = snap.iterations;
        res.energy_trace.resize(snap.trace_len);
        res.set_change_trace.resize(snap.change_len);
        res.restarts.pop_back();
        res.converged = true;
    };
    int branch_jumps = 0;
    auto take_jump = [&](VorticityField&& target, double e_stall) {
        Snapshot snap;
        snap.xi = xi;
        snap.W = res.W;
        snap.gamma = res.gamma;
        snap.iterations = res.iterations;
        snap.trace_len = res.energy_trace.size();
        snap.change_len = res.set_change_trace.size();
        snap.energy = e_stall;
        pending = std::move(snap);
        res.restarts.push_back(static_cast<int>(res.energy_trace.size()));
        xi = std::move(target);
        ++branch_jumps;
    };
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        const ScalarField psi = solver.solve(xi, opts.threads);
        res.energy_trace.push_back(kinetic_energy(xi, psi));

        MultiplierResult mult = solve_multipliers(psi, c);
        VorticityField next = std::move(mult.xi);
        if (opts.symmetrize_every > 0 && (iter + 1) % opts.symmetrize_every == 0) {
            const QuantityRecord q = quantities(next);
            if (q.impulse > 0.0) next = steiner_symmetrize(next, q.z_moment / (2.0 * q.impulse));
        }

        const double change = weighted_symmetric_difference(next, xi);
        const double scale = mult.circulation + 2.0 * mult.impulse;
        res.set_change_trace.push_back(change / scale);
        xi = std::move(next);
        res.W = mult.W;
        res.gamma = mult.gamma;
        res.iterations = iter + 1;
        if (change > opts.set_tol * scale) continue;

        // Stalled at a set that reproduces itself.
        const double e_stall = res.energy_trace.back();
        if (pending) {
            if (e_stall > pending->energy +
                              1e-12 * std::max(1.0, std::abs(pending->energy))) {
                pending.reset(); // the branch won; continue from its stall
            } else {
                restore(*pending); // the branch lost; put the old stall back
                pending.reset();
                break;
            }
        }
        if (branch_jumps < 3 && mult.circulation < c.nu * (1.0 - 1e-9)) {
            if (auto alt = cap_saturated_candidate(psi, c)) {
                take_jump(std::move(alt->xi), e_stall);
                continue;
            }
        }
        if (branch_jumps < 3) {
            const QuantityRecord q = quantities(xi);
            if (q.impulse > 0.0) {
                auto sym = mirror_averaged(xi, q.z_moment / (2.0 * q.impulse), c.lambda);
                if (sym && weighted_symmetric_difference(*sym, xi) > opts.set_tol * scale) {
                    take_jump(std::move(*sym), e_stall);
                    continue;
                }
            }
        }
        res.converged = true;
        break;
    }

    if (pending) {
        // Iteration budget ran out inside a tentative branch; keep it only
        // if it already beats the stall it left.
        const ScalarField psi_end = solver.solve(xi, opts.threads);
        const double e_end = kinetic_energy(xi, psi_end);
        if (e_end <= pending->energy +
                         1e-12 * std::max(1.0, std::abs(pending->energy)))
            restore(*pending);
        pending.reset();
    }

    res.xi = xi;
    res.psi = solver.solve(xi, opts.threads);
    res.energy = kinetic_energy(xi, res.psi);
    res.energy_trace.push_back(res.energy);
    return res;
}

RingIdentityReport verify_ring_identities(const MaximizeResult& result, double rel_slack) {
    const QuantityRecord q = quantities(result.xi, result.psi);
    RingIdentityReport rep;
    rep.energy = q.energy;
    rep.impulse = q.impulse;
    rep.circulation = q.circulation;
    const double lhs = 7.0 * q.energy;
    const double rhs = 5.0 * result.W * q.impulse + 3.0 * result.gamma * q.circulation;
    rep.identity_residual = lhs != 0.0 ? std::abs(lhs - rhs) / std::abs(lhs)
                                       : std::abs(rhs);
    rep.speed_bound_ok = result.W >= q.energy / (2.0 * q.impulse) * (1.0 - rel_slack);

    const AxiGrid& g = result.xi.grid;
    int margin = std::min(g.nr, g.nz);
    for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.nz; ++j) {
            if (result.xi.values[g.index(i, j)] > 0.0) {
                margin = std::min(margin, g.nr - 1 - i);
                margin = std::min(margin, j);
                margin = std::min(margin, g.nz - 1 - j);
            }
        }
    }
    rep.support_margin_cells = margin;
    return rep;
}

} // namespace vring
