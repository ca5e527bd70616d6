#include "vring/acceptance.hpp"

#include "vring/cli.hpp"
#include "vring/errors.hpp"
#include "vring/evolve.hpp"
#include "vring/functionals.hpp"
#include "vring/hill.hpp"
#include "vring/kernel.hpp"
#include "vring/maximize.hpp"
#include "vring/rearrange.hpp"
#include "vring/stream.hpp"
#include "vring/wan.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

namespace vring {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Closed-form reference values, frozen from an independent high-precision
// evaluation of W = (2/15) lambda a^2, Gamma = (4/3) pi lambda a^3,
// P = (4/15) pi lambda a^5, E = (8/315) pi lambda^2 a^7.
struct HillRef {
    double lambda, a, W, G, P, E;
};
constexpr HillRef kHillRefs[] = {
    {1.0, 1.0, 0.13333333333333333, 4.188790204786391, 0.8377580409572782,
     0.079786480091169352},
    {1.0, 2.0, 0.53333333333333333, 33.510321638291128, 26.808257310632902,
     10.212669451669677},
    {3.0, 0.5, 0.1, 1.5707963267948966, 0.078539816339744831, 0.0056099868814103451},
    {2.0, 1.5, 0.6, 28.274333882308139, 12.723450247038663, 5.4529072487308554},
};

// Wan-series references for a = 1.2: (8 pi/15)|a^5 - 1|, its product with the
// perturbed speed (2/15) a^2, and (8 pi/15)(a^5 + 1).
constexpr double kWanT0 = 2.4937040950350726;
constexpr double kWanSlope = 0.47879118624673393;
constexpr double kWanSaturation = 5.8447362588641854;

struct CriterionResult {
    bool ok = false;
    std::string detail;
};

std::string sci(double v, int prec = 3) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(prec) << v;
    return os.str();
}

double rel_dev(double got, double want) { return std::abs(got - want) / std::abs(want); }

double fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

// Shared expensive artifacts, built on first use.
struct SharedState {
    int threads = 1;
    std::string work_dir;
    std::optional<KernelEval> table_eval;
    std::optional<VorticityField> hill128_xi;
    std::optional<ScalarField> hill128_psi;

    const KernelEval& kernel() {
        if (!table_eval) table_eval = KernelEval::with_table();
        return *table_eval;
    }

    // Cell-averaged gridding keeps the source second-order accurate, so the
    // refinement study measures the solver's order rather than the staircase
    // of a point-sampled patch boundary.
    void ensure_hill128() {
        if (hill128_psi) return;
        const AxiGrid g(128, 256, 3.0, -3.0, 3.0);
        hill128_xi = hill_field_averaged(HillVortex{1.0, 1.0, 0.0}, g);
        const StreamSolver solver(g, kernel(), threads);
        hill128_psi = solver.solve(*hill128_xi, threads);
    }
};

// --------------------------------------------------------------------------
// 1. closed-form quantities through the CLI
// --------------------------------------------------------------------------

CriterionResult criterion_closed_form(SharedState&) {
    std::ostringstream out, err;
    const int rc = cli_main({"hill", "--lambda", "1", "--a", "1"}, out, err);
    if (rc != 0) return {false, "hill subcommand exited with " + std::to_string(rc)};
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(out.str());
    } catch (const std::exception& e) {
        return {false, std::string("hill output is not JSON: ") + e.what()};
    }
    const HillRef& ref = kHillRefs[0];
    double dev = 0.0;
    dev = std::max(dev, rel_dev(j.at("speed").get<double>(), ref.W));
    dev = std::max(dev, rel_dev(j.at("circulation").get<double>(), ref.G));
    dev = std::max(dev, rel_dev(j.at("impulse").get<double>(), ref.P));
    dev = std::max(dev, rel_dev(j.at("energy").get<double>(), ref.E));
    return {dev <= 1e-12, "max rel dev " + sci(dev) + " (allowed 1e-12)"};
}

// --------------------------------------------------------------------------
// 2. scaling of the closed-form quantities
// --------------------------------------------------------------------------

CriterionResult criterion_scaling(SharedState&) {
    double dev = 0.0;
    for (std::size_t k = 1; k < std::size(kHillRefs); ++k) {
        const HillRef& ref = kHillRefs[k];
        const HillVortex h{ref.lambda, ref.a, 0.0};
        const HillQuantities q = hill_quantities(h);
        dev = std::max(dev, rel_dev(hill_speed(h), ref.W));
        dev = std::max(dev, rel_dev(q.strength, ref.lambda));
        dev = std::max(dev, rel_dev(q.circulation, ref.G));
        dev = std::max(dev, rel_dev(q.impulse, ref.P));
        dev = std::max(dev, rel_dev(q.energy, ref.E));
    }
    return {dev <= 1e-12, "max rel dev over 3 parameter sets " + sci(dev) + " (allowed 1e-12)"};
}

// --------------------------------------------------------------------------
// 3. kernel asymptotics sandwich
// --------------------------------------------------------------------------

CriterionResult criterion_kernel(SharedState&) {
    const KernelEval small_eval;         // default quadrature tolerance
    const KernelEval large_eval(1e-14, 60); // the margin at s = 1e5 is ~6%
    bool ok = true;
    std::string detail;
    for (double s : {1e-4, 1e-5}) {
        const double dev = std::abs(f_profile(s, small_eval) - f_small_asymptote(s));
        const double bound = 5.0 * s * std::log(1.0 / s);
        ok = ok && dev <= bound;
        detail += "s=" + sci(s, 0) + " dev " + sci(dev) + "<=" + sci(bound) + "; ";
    }
    for (double s : {1e4, 1e5}) {
        const double dev = std::abs(f_profile(s, large_eval) * std::pow(s, 1.5) - kPi / 2.0);
        const double bound = 5.0 / s;
        ok = ok && dev <= bound;
        detail += "s=" + sci(s, 0) + " dev " + sci(dev) + "<=" + sci(bound) + "; ";
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

// --------------------------------------------------------------------------
// 4. stream-solve accuracy and refinement order
// --------------------------------------------------------------------------

double masked_stream_error(const ScalarField& psi, const HillVortex& h, double mask_width) {
    const AxiGrid& g = psi.grid;
    double err = 0.0, peak = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.nz; ++j) {
            const double r = g.r(i), z = g.z(j);
            const double exact = hill_stream(h, r, z);
            peak = std::max(peak, std::abs(exact));
            const double rho = std::sqrt(r * r + z * z);
            if (std::abs(rho - h.a) < mask_width) continue;
            err = std::max(err, std::abs(psi.at(i, j) - exact));
        }
    }
    return err / peak;
}

CriterionResult criterion_stream_accuracy(SharedState& st) {
    const HillVortex h{1.0, 1.0, 0.0};
    st.ensure_hill128();
    const double mask = 2.0 * st.hill128_psi->grid.hr();
    const double err_coarse = masked_stream_error(*st.hill128_psi, h, mask);

    const AxiGrid g2(256, 512, 3.0, -3.0, 3.0);
    const VorticityField xi2 = hill_field_averaged(h, g2);
    const StreamSolver solver2(g2, st.kernel(), st.threads);
    const ScalarField psi2 = solver2.solve(xi2, st.threads);
    const double err_fine = masked_stream_error(psi2, h, mask);

    const double ratio = err_coarse / err_fine;
    const bool ok = err_coarse <= 2e-2 && ratio >= 3.5;
    return {ok, "masked rel err " + sci(err_coarse) + " (allowed 2e-2), refinement ratio " +
                    sci(ratio, 2) + " (needed >= 3.5)"};
}

// --------------------------------------------------------------------------
// 5. gridded conserved functionals
// --------------------------------------------------------------------------

CriterionResult criterion_functionals(SharedState& st) {
    st.ensure_hill128();
    const QuantityRecord q = quantities(*st.hill128_xi, *st.hill128_psi);
    const HillRef& ref = kHillRefs[0];
    const double d_imp = rel_dev(q.impulse, ref.P);
    const double d_circ = rel_dev(q.circulation, ref.G);
    const double d_en = rel_dev(q.energy, ref.E);
    const bool ok = d_imp <= 0.01 && d_circ <= 0.01 && d_en <= 0.03;
    return {ok, "impulse dev " + sci(d_imp) + " circulation dev " + sci(d_circ) +
                    " (allowed 1e-2), energy dev " + sci(d_en) + " (allowed 3e-2)"};
}

// --------------------------------------------------------------------------
// 6. rearrangement properties on seeded random fields
// --------------------------------------------------------------------------

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random multi-rectangle fields, kept clear of the outermost radial cells so
// that a one-cell outward shift stays on the grid: the energy monotonicity of
// the shift holds for fields whose translate is still supported inside the
// domain, and edge truncation would silently drop mass.
VorticityField random_field(const AxiGrid& g, std::mt19937_64& rng) {
    VorticityField xi = VorticityField::zeros(g, 1.0);
    const int blobs = 2 + static_cast<int>(rng() % 3);
    for (int b = 0; b < blobs; ++b) {
        const int i0 = static_cast<int>(rng() % (g.nr - 4));
        const int j0 = static_cast<int>(rng() % (g.nz - 4));
        const int wi = 2 + static_cast<int>(rng() % (g.nr / 3));
        const int wj = 2 + static_cast<int>(rng() % (g.nz / 3));
        const double v = 0.2 + 0.8 * u01(rng);
        for (int i = i0; i < std::min(i0 + wi, g.nr - 2); ++i)
            for (int j = j0; j < std::min(j0 + wj, g.nz); ++j)
                xi.values[g.index(i, j)] = std::min(1.0, xi.values[g.index(i, j)] + v * u01(rng));
    }
    return xi;
}

CriterionResult criterion_rearrangement(SharedState& st) {
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0);
    const StreamSolver solver(g, st.kernel(), st.threads);
    std::mt19937_64 rng(20260816ull);

    int exact_fail = 0, energy_fail = 0, shift_fail = 0;
    double worst_drop = 0.0, smallest_gain = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k) {
        const VorticityField xi = random_field(g, rng);
        const QuantityRecord q0 = quantities(xi);
        const double e0 = kinetic_energy(xi, solver.solve(xi, st.threads));
        const double eps = 1e-9 * std::max(1.0, std::abs(e0));

        const double center = q0.impulse > 0.0 ? q0.z_moment / (2.0 * q0.impulse) : 0.0;
        const VorticityField sym = steiner_symmetrize(xi, center);
        const QuantityRecord qs = quantities(sym);
        if (qs.l1 != q0.l1 || qs.l2 != q0.l2 || qs.impulse != q0.impulse ||
            qs.circulation != q0.circulation)
            ++exact_fail;
        const double es = kinetic_energy(sym, solver.solve(sym, st.threads));
        if (!(es >= e0 - eps)) ++energy_fail;
        worst_drop = std::min(worst_drop, es - e0);

        const VorticityField sh = radial_shift(xi, g.hr());
        const double eh = kinetic_energy(sh, solver.solve(sh, st.threads));
        if (!(eh > e0 + eps)) ++shift_fail;
        smallest_gain = std::min(smallest_gain, eh - e0);
    }
    const bool ok = exact_fail == 0 && energy_fail == 0 && shift_fail == 0;
    return {ok, "norm mismatches " + std::to_string(exact_fail) + ", energy drops " +
                    std::to_string(energy_fail) + " (worst " + sci(worst_drop) +
                    "), non-increasing shifts " + std::to_string(shift_fail) +
                    " (smallest gain " + sci(smallest_gain) + ") over 50 fields"};
}

// --------------------------------------------------------------------------
// 7. maximizer endpoint
// --------------------------------------------------------------------------

CriterionResult criterion_maximizer(SharedState& st) {
    const Constraints c{0.837758, 4.18879, 1.0};
    const AxiGrid g(96, 192, 2.5, -2.5, 2.5);
    MaximizeOptions opts;
    opts.threads = st.threads;
    opts.kernel = st.kernel();
    const MaximizeResult res = maximize_energy(c, g, opts);
    const RingIdentityReport rep = verify_ring_identities(res);

    const double gamma_bound = 1e-3 * c.lambda * g.r_max * g.r_max;
    const double w_dev = rel_dev(res.W, 2.0 / 15.0);
    const VorticityField hill = hill_field(HillVortex{1.0, 1.0, 0.0}, g);
    const OrbitalResult orb = orbital_distance(res.xi, hill, OrbitalMetric::weighted_l1);
    const double cell_mass = (1.0 + 1.0) * c.lambda * 2.0 * kPi * 1.0 * g.hr() * g.hz();

    const bool ok = res.converged && res.gamma <= gamma_bound && w_dev <= 0.05 &&
                    orb.value <= 5.0 * cell_mass && rep.identity_residual <= 0.02;
    std::string detail = std::string(res.converged ? "converged" : "NOT CONVERGED") + " in " +
                         std::to_string(res.iterations) + " iters, gamma " + sci(res.gamma) +
                         " (allowed " + sci(gamma_bound) + "), W dev " + sci(w_dev) +
                         " (allowed 5e-2), orbital distance " + sci(orb.value) + " (allowed " +
                         sci(5.0 * cell_mass) + "), identity residual " +
                         sci(rep.identity_residual) + " (allowed 2e-2)";
    return {ok, detail};
}

// --------------------------------------------------------------------------
// 8. ring identity in exact rational arithmetic
// --------------------------------------------------------------------------

struct Frac {
    long long n, d;
    Frac(long long n_, long long d_) : n(n_), d(d_) {
        const long long g = std::gcd(n < 0 ? -n : n, d);
        n /= g;
        d /= g;
    }
    friend Frac operator*(const Frac& a, const Frac& b) { return {a.n * b.n, a.d * b.d}; }
    friend bool operator==(const Frac& a, const Frac& b) { return a.n == b.n && a.d == b.d; }
};

CriterionResult criterion_exact_identity(SharedState&) {
    // 7 E = 5 W P with the pi and lambda^2 a^7 factors cancelled:
    // 7 * 8/315 and 5 * (2/15) * (4/15) must both reduce to 8/45.
    const Frac lhs = Frac(7, 1) * Frac(8, 315);
    const Frac rhs = Frac(5, 1) * Frac(2, 15) * Frac(4, 15);
    const Frac target(8, 45);
    const bool ok = lhs == target && rhs == target;
    return {ok, "7*8/315 = " + std::to_string(lhs.n) + "/" + std::to_string(lhs.d) +
                    ", 5*(2/15)*(4/15) = " + std::to_string(rhs.n) + "/" + std::to_string(rhs.d) +
                    ", both must equal 8/45"};
}

// --------------------------------------------------------------------------
// 9. evolution conservation
// --------------------------------------------------------------------------

CriterionResult criterion_evolution(SharedState& st) {
    const AxiGrid g(128, 256, 3.0, -3.0, 3.0);
    const VorticityField xi0 = hill_field(HillVortex{1.0, 1.0, 0.0}, g);
    EvolveConfig cfg;
    cfg.t_end = 3.0;
    cfg.cfl = 0.5;
    cfg.diag_every = 0.5;
    cfg.threads = st.threads;
    cfg.kernel = st.kernel();
    const EvolveResult res = evolve(xi0, cfg);

    const DiagRow& first = res.diagnostics.front();
    const DiagRow& last = res.diagnostics.back();
    const double d_l1 = rel_dev(last.q.l1, first.q.l1);
    const double d_imp = rel_dev(last.q.impulse, first.q.impulse);
    const double d_en = rel_dev(last.q.energy, first.q.energy);

    std::vector<double> ts, cz;
    for (const auto& row : res.diagnostics) {
        ts.push_back(row.t);
        cz.push_back(row.centroid_z);
    }
    const double speed = fit_slope(ts, cz);
    const double d_speed = rel_dev(speed, 2.0 / 15.0);

    const bool ok = d_l1 <= 0.02 && d_imp <= 0.02 && d_en <= 0.02 && d_speed <= 0.10;
    return {ok, "drift l1 " + sci(d_l1) + " impulse " + sci(d_imp) + " energy " + sci(d_en) +
                    " (allowed 2e-2 each), centroid speed " + sci(speed, 5) + " dev " +
                    sci(d_speed) + " (allowed 1e-1) over " + std::to_string(res.steps) + " steps"};
}

// --------------------------------------------------------------------------
// 10. stability property
// --------------------------------------------------------------------------

CriterionResult criterion_stability(SharedState& st) {
    const AxiGrid g(96, 192, 2.5, -2.5, 2.5);
    auto run = [&](double delta) {
        StabilityConfig cfg;
        cfg.kind = StabilityConfig::Kind::radius;
        cfg.delta = delta;
        cfg.t_end = 3.0;
        cfg.diag_every = 0.5;
        cfg.cfl = 0.5;
        cfg.threads = st.threads;
        cfg.kernel = st.kernel();
        return stability_experiment(g, cfg);
    };

    const StabilityResult floor_run = run(0.0);
    double floor = 0.0;
    for (const auto& row : floor_run.series) floor = std::max(floor, row.orbital);

    bool ok = true;
    std::string detail = "scheme floor " + sci(floor);
    for (double delta : {0.01, 0.03}) {
        const StabilityResult res = run(delta);
        const double delta0 = res.delta0;
        double worst = 0.0;
        for (const auto& row : res.series) worst = std::max(worst, row.orbital);
        const double bound = 3.0 * delta0 + floor;
        ok = ok && worst <= bound;
        detail += "; delta " + sci(delta, 0) + ": delta0 " + sci(delta0) + " max orbital " +
                  sci(worst) + " (allowed " + sci(bound) + ")";
    }
    return {ok, detail};
}

// --------------------------------------------------------------------------
// 11. moment-augmented metric counterexample
// --------------------------------------------------------------------------

CriterionResult criterion_wan(SharedState&) {
    const WanReport rep = wan_counterexample(1.2, {0.0, 50.0, 100.0, 200.0});

    const double t0_dev = rel_dev(rep.points.front().infimum, kWanT0);
    std::vector<double> ts, cm;
    for (const auto& p : rep.points) {
        ts.push_back(p.t);
        cm.push_back(p.center_matched);
    }
    const double slope = fit_slope(ts, cm);
    const double slope_dev = rel_dev(slope, kWanSlope);
    double orb_dev = 0.0;
    for (const auto& p : rep.points)
        orb_dev = std::max(orb_dev, rel_dev(p.orbital, rep.points.front().orbital));
    const double sat = rep.points.back().infimum;

    const bool ok = t0_dev <= 0.01 && slope > 0.0 && slope_dev <= 0.05 && orb_dev <= 1e-9 &&
                    sat >= 0.9 * kWanSaturation;
    return {ok, "t0 dev " + sci(t0_dev) + " (allowed 1e-2), fitted slope " + sci(slope, 6) +
                    " dev " + sci(slope_dev) + " (allowed 5e-2), orbital wobble " + sci(orb_dev) +
                    " (allowed 1e-9), late infimum " + sci(sat, 6) + " (needed >= " +
                    sci(0.9 * kWanSaturation, 6) + ")"};
}

// --------------------------------------------------------------------------
// 12. determinism of the maximizer command
// --------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read '" + p.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

CriterionResult criterion_determinism(SharedState& st) {
    namespace fs = std::filesystem;
    const fs::path base = st.work_dir.empty() ? fs::path("vring-acceptance") : fs::path(st.work_dir);
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) return {false, "cannot create work dir '" + base.string() + "': " + ec.message()};

    auto run_once = [&](const std::string& tag) {
        const fs::path dir = base / ("determinism-" + tag);
        fs::remove_all(dir, ec);
        std::ostringstream out, err;
        const int rc = cli_main({"maximize", "--mu", "0.837758", "--nu", "4.18879", "--lambda",
                                 "1", "--threads", "4", "--out", dir.string()},
                                out, err);
        return std::tuple<int, std::string, fs::path>(rc, out.str(), dir);
    };

    const auto [rc1, out1, dir1] = run_once("a");
    const auto [rc2, out2, dir2] = run_once("b");
    if (rc1 != 0 || rc2 != 0)
        return {false, "maximize exited with " + std::to_string(rc1) + " and " + std::to_string(rc2)};

    const bool stdout_same = out1 == out2;
    const bool snap_same = slurp(dir1 / "maximizer.snap") == slurp(dir2 / "maximizer.snap");
    const bool report_same = slurp(dir1 / "report.json") == slurp(dir2 / "report.json");
    const bool ok = stdout_same && snap_same && report_same;
    return {ok, std::string("stdout ") + (stdout_same ? "identical" : "DIFFERS") + ", snapshot " +
                    (snap_same ? "identical" : "DIFFERS") + ", report " +
                    (report_same ? "identical" : "DIFFERS") + " across two --threads 4 runs"};
}

struct Criterion {
    int id;
    const char* name;
    CriterionResult (*fn)(SharedState&);
};

constexpr Criterion kCriteria[] = {
    {1, "closed-form-quantities", criterion_closed_form},
    {2, "scaling-law", criterion_scaling},
    {3, "kernel-asymptotics", criterion_kernel},
    {4, "stream-solve-accuracy", criterion_stream_accuracy},
    {5, "numerical-functionals", criterion_functionals},
    {6, "rearrangement-properties", criterion_rearrangement},
    {7, "maximizer-endpoint", criterion_maximizer},
    {8, "ring-identity-exact", criterion_exact_identity},
    {9, "evolution-conservation", criterion_evolution},
    {10, "stability-property", criterion_stability},
    {11, "moment-metric-counterexample", criterion_wan},
    {12, "determinism", criterion_determinism},
};

} // namespace

int run_acceptance(const AcceptanceOptions& opts, std::ostream& out) {
    SharedState st;
    st.threads = opts.threads;
    st.work_dir = opts.work_dir;

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end())
            continue;
        CriterionResult res;
        try {
            res = c.fn(st);
        } catch (const std::exception& e) {
            res = {false, std::string("exception: ") + e.what()};
        }
        if (!res.ok) ++failures;
        out << (res.ok ? "[PASS] " : "[FAIL] ") << std::setw(2) << std::setfill('0') << c.id
            << std::setfill(' ') << " " << c.name << ": " << res.detail << "\n";
    }
    if (failures == 0)
        out << "all criteria passed\n";
    else
        out << failures << " criteria failed\n";
    return failures;
}

} // namespace vring
