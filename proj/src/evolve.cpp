#include "vring/evolve.hpp"

#include "vring/errors.hpp"
#include "vring/hill.hpp"
#include "vring/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vring {

namespace {

// Interpolate along z at radial node i, tapering to zero half a cell past
// either end plane.
double z_interp(const ScalarField& f, int i, double z) {
    const AxiGrid& g = f.grid;
    const double x = (z - g.z_min) / g.hz() - 0.5;
    if (x <= -1.0 || x >= static_cast<double>(g.nz)) return 0.0;
    const int j = static_cast<int>(std::floor(x));
    const double w = x - j;
    const double f0 = j >= 0 ? f.at(i, j) : 0.0;
    const double f1 = j + 1 < g.nz ? f.at(i, j + 1) : 0.0;
    return (1.0 - w) * f0 + w * f1;
}

enum class AxisParity { even, odd };

double sample(const ScalarField& f, double r, double z, AxisParity parity) {
    double sign = 1.0;
    if (r < 0.0) {
        r = -r;
        if (parity == AxisParity::odd) sign = -1.0;
    }
    const AxiGrid& g = f.grid;
    const double y = r / g.hr() - 0.5;
    if (y >= static_cast<double>(g.nr)) return 0.0;

    double v;
    if (y < 0.0) {
        // Between the axis and the first node: even fields hold their first
        // value, odd fields drop linearly through zero at the axis.
        const double v0 = z_interp(f, 0, z);
        v = parity == AxisParity::even ? v0 : v0 * (r / g.r(0));
    } else {
        const int i = static_cast<int>(std::floor(y));
        const double w = y - i;
        const double f0 = z_interp(f, i, z);
        const double f1 = i + 1 < g.nr ? z_interp(f, i + 1, z) : 0.0;
        v = (1.0 - w) * f0 + w * f1;
    }
    return sign * v;
}

double max_speed(const VelocityField& vel) {
    double m = 0.0;
    for (double v : vel.ur.values) m = std::max(m, std::abs(v));
    for (double v : vel.uz.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

double sample_axis_even(const ScalarField& f, double r, double z) {
    return sample(f, r, z, AxisParity::even);
}

double sample_axis_odd(const ScalarField& f, double r, double z) {
    return sample(f, r, z, AxisParity::odd);
}

VorticityField advect_step(const VorticityField& xi, const VelocityField& vel,
                           double dt, double cfl_limit, int threads) {
    const AxiGrid& g = xi.grid;
    if (!(vel.ur.grid == g) || !(vel.uz.grid == g))
        throw DomainError("advect_step: velocity grid differs from field grid");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("advect_step: dt must be finite and > 0");
    const double umax = max_speed(vel);
    const double hmin = std::min(g.hr(), g.hz());
    // The slack keeps dt = cfl_limit * hmin / umax itself from tripping the
    // guard through rounding of the division.
    if (dt * umax > cfl_limit * hmin * (1.0 + 1e-9))
        throw StepSizeError("advect_step: dt exceeds the advective step limit");

    VorticityField out = VorticityField::zeros(g, xi.strength_cap);
    const double cap = xi.strength_cap;
    parallel_for_chunks(g.nr, threads, [&](int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            const double r = g.r(i);
            for (int j = 0; j < g.nz; ++j) {
                const double z = g.z(j);
                // Midpoint rule along the reverse characteristic.
                const double ur1 = vel.ur.at(i, j);
                const double uz1 = vel.uz.at(i, j);
                const double rm = r - 0.5 * dt * ur1;
                const double zm = z - 0.5 * dt * uz1;
                const double ur2 = sample(vel.ur, rm, zm, AxisParity::odd);
                const double uz2 = sample(vel.uz, rm, zm, AxisParity::even);
                const double rb = r - dt * ur2;
                const double zb = z - dt * uz2;
                const double v = sample(xi, rb, zb, AxisParity::even);
                out.values[g.index(i, j)] = std::clamp(v, 0.0, cap);
            }
        }
    });
    return out;
}

namespace {

DiagRow diag_at(double t, const VorticityField& xi, const ScalarField& psi,
                const std::vector<std::pair<double, double>>& bands) {
    DiagRow row;
    row.t = t;
    row.q = quantities(xi, psi);
    row.centroid_z = row.q.impulse > 0.0 ? row.q.z_moment / (2.0 * row.q.impulse) : 0.0;
    row.band_masses.reserve(bands.size());
    for (const auto& [a, b] : bands) row.band_masses.push_back(band_mass(xi, a, b));
    return row;
}

} // namespace

EvolveResult evolve(const VorticityField& xi0, const EvolveConfig& cfg) {
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
        throw DomainError("evolve: t_end must be finite and > 0");
    if (!(cfg.cfl > 0.0) || !(cfg.cfl <= 1.0)) throw DomainError("evolve: cfl must lie in (0, 1]");
    if (cfg.resolve_every < 1) throw DomainError("evolve: resolve_every must be >= 1");
    if (cfg.diag_every < 0.0) throw DomainError("evolve: diag_every must be >= 0");

    const AxiGrid& g = xi0.grid;
    const KernelEval kernel = cfg.kernel ? *cfg.kernel : KernelEval::with_table();
    const StreamSolver solver(g, kernel, cfg.threads);

    // Event times the integrator must land on exactly.
    std::vector<double> events;
    if (cfg.diag_every > 0.0) {
        for (int k = 1; k * cfg.diag_every < cfg.t_end * (1.0 - 1e-12); ++k)
            events.push_back(k * cfg.diag_every);
    }
    events.push_back(cfg.t_end);

    EvolveResult res;
    VorticityField xi = xi0;
    ScalarField psi = solver.solve(xi, cfg.threads);
    res.diagnostics.push_back(diag_at(0.0, xi, psi, cfg.bands));

    double t = 0.0;
    bool psi_fresh = true;
    for (double te : events) {
        while (t < te * (1.0 - 1e-14)) {
            if (!psi_fresh) psi = solver.solve(xi, cfg.threads);
            const VelocityField vel = velocity(psi);
            const double umax = max_speed(vel);
            if (umax == 0.0) { // static field: nothing moves
                t = te;
                psi_fresh = true;
                break;
            }
            const double dt_base = cfg.cfl * std::min(g.hr(), g.hz()) / umax;
            for (int k = 0; k < cfg.resolve_every && t < te * (1.0 - 1e-14); ++k) {
                const double dt = std::min(dt_base, te - t);
                xi = advect_step(xi, vel, dt, cfg.cfl, cfg.threads);
                t += dt;
                ++res.steps;
            }
            psi_fresh = false;
        }
        t = te;
        if (!psi_fresh) psi = solver.solve(xi, cfg.threads);
        psi_fresh = true;
        res.diagnostics.push_back(diag_at(t, xi, psi, cfg.bands));
    }

    res.xi = std::move(xi);
    return res;
}

StabilityResult stability_experiment(const AxiGrid& grid, const StabilityConfig& cfg) {
    if (cfg.delta < 0.0) throw DomainError("stability_experiment: delta must be >= 0");

    const HillVortex base{1.0, 1.0, 0.0};
    const VorticityField reference = hill_field(base, grid);

    VorticityField xi0 = VorticityField::zeros(grid, 1.0);
    if (cfg.kind == StabilityConfig::Kind::radius) {
        xi0 = hill_field(HillVortex{1.0, 1.0 + cfg.delta, 0.0}, grid);
    } else {
        // Notch: carve a ball of radius delta * a out of the vortex near the
        // edge of its cross-section.
        xi0 = reference;
        const double cr = 0.7, cz = 0.35, rad = cfg.delta;
        for (int i = 0; i < grid.nr; ++i) {
            for (int j = 0; j < grid.nz; ++j) {
                const double dr = grid.r(i) - cr;
                const double dz = grid.z(j) - cz;
                if (dr * dr + dz * dz <= rad * rad) xi0.values[grid.index(i, j)] = 0.0;
            }
        }
    }

    EvolveConfig ecfg;
    ecfg.t_end = cfg.t_end;
    ecfg.cfl = cfg.cfl;
    ecfg.diag_every = cfg.diag_every;
    ecfg.threads = cfg.threads;
    ecfg.kernel = cfg.kernel ? *cfg.kernel : KernelEval::with_table();

    StabilityResult out;
    {
        const OrbitalResult o0 = orbital_distance(xi0, reference, OrbitalMetric::combined);
        out.delta0 = o0.value;
        out.series.push_back({0.0, o0.value, o0.tau});
    }

    // Evolve segment by segment so the distance series uses the actual state
    // at each diagnostic time.
    const int segments = cfg.diag_every > 0.0
                             ? static_cast<int>(std::ceil(cfg.t_end / cfg.diag_every - 1e-12))
                             : 1;
    VorticityField xi = xi0;
    double t = 0.0;
    EvolveResult merged;
    merged.xi = xi;
    for (int s = 0; s < segments; ++s) {
        const double te = s + 1 == segments ? cfg.t_end : (s + 1) * cfg.diag_every;
        EvolveConfig seg = ecfg;
        seg.t_end = te - t;
        seg.diag_every = 0.0;
        EvolveResult r = evolve(xi, seg);
        xi = std::move(r.xi);
        t = te;
        merged.steps += r.steps;
        if (merged.diagnostics.empty()) merged.diagnostics.push_back(r.diagnostics.front());
        DiagRow last = r.diagnostics.back();
        last.t = t;
        merged.diagnostics.push_back(std::move(last));

        const OrbitalResult o = orbital_distance(xi, reference, OrbitalMetric::combined);
        out.series.push_back({t, o.value, o.tau});
    }
    merged.xi = xi;
    out.run = std::move(merged);
    return out;
}

} // namespace vring
