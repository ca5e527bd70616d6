#include "vring/cli.hpp"

#include "vring/acceptance.hpp"
#include "vring/errors.hpp"
#include "vring/evolve.hpp"
#include "vring/functionals.hpp"
#include "vring/hill.hpp"
#include "vring/kernel.hpp"
#include "vring/maximize.hpp"
#include "vring/numfmt.hpp"
#include "vring/snapshot.hpp"
#include "vring/stream.hpp"
#include "vring/wan.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>

namespace vring {

namespace {

using njson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// configuration file support: a JSON object whose keys mirror the long flag
// names, with one nested object per subcommand. Command-line flags override
// file values.
// ---------------------------------------------------------------------------

class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        njson j;
        try {
            j = njson::parse(input);
        } catch (const std::exception& e) {
            throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        walk(j, {}, items);
        return items;
    }

  private:
    static void walk(const njson& j, const std::vector<std::string>& parents,
                     std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                walk(value, deeper, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& elem : value)
                    item.inputs.push_back(elem.is_string() ? elem.get<std::string>()
                                                           : elem.dump());
            } else {
                item.inputs.push_back(value.is_string() ? value.get<std::string>()
                                                        : value.dump());
            }
            items.push_back(std::move(item));
        }
    }
};

// ---------------------------------------------------------------------------
// small shared helpers
// ---------------------------------------------------------------------------

struct GridSpec {
    int nr = 96;
    int nz = 192;
    double rmax = 2.5;
    double zmax = 2.5;
};

void add_grid_options(CLI::App* sub, GridSpec& gs) {
    sub->add_option_function<std::string>(
           "--grid",
           [&gs](const std::string& v) {
               const auto x = v.find_first_of("xX");
               if (x == std::string::npos)
                   throw CLI::ValidationError("--grid", "expected NRxNZ, e.g. 96x192");
               try {
                   gs.nr = static_cast<int>(parse_long(v.substr(0, x)));
                   gs.nz = static_cast<int>(parse_long(v.substr(x + 1)));
               } catch (const IoError&) {
                   throw CLI::ValidationError("--grid", "expected NRxNZ, e.g. 96x192");
               }
           },
           "Grid resolution as NRxNZ");
    sub->add_option("--rmax", gs.rmax, "Radial extent of the grid")->check(CLI::PositiveNumber);
    sub->add_option("--zmax", gs.zmax, "Axial half-extent; the grid spans [-zmax, zmax]")
        ->check(CLI::PositiveNumber);
}

AxiGrid make_grid(const GridSpec& gs) {
    return AxiGrid(gs.nr, gs.nz, gs.rmax, -gs.zmax, gs.zmax);
}

void emit_record(std::ostream& out, const std::string& format,
                 const std::vector<std::pair<std::string, njson>>& fields) {
    if (format == "json") {
        njson j;
        for (const auto& [k, v] : fields) j[k] = v;
        out << j.dump(2) << "\n";
        return;
    }
    out << "key,value\n";
    for (const auto& [k, v] : fields) {
        out << k << ",";
        if (v.is_number_float())
            out << format_double(v.get<double>());
        else if (v.is_string())
            out << v.get<std::string>();
        else
            out << v.dump();
        out << "\n";
    }
}

CLI::Option* add_format_option(CLI::App* sub, std::string& format) {
    return sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

VorticityField read_vorticity(const std::string& path) {
    return read_snapshot(path).vorticity();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

njson quantities_json(const QuantityRecord& q) {
    njson j;
    j["l1"] = q.l1;
    j["l2"] = q.l2;
    j["strength"] = q.strength;
    j["impulse"] = q.impulse;
    j["circulation"] = q.circulation;
    if (std::isfinite(q.energy)) j["energy"] = q.energy;
    j["z_moment"] = q.z_moment;
    return j;
}

double fitted_slope(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double det = n * stt - st * st;
    if (det == 0.0) return 0.0;
    return (n * sty - st * sy) / det;
}

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

struct HillArgs {
    double lambda = 1.0, a = 1.0, c = 0.0;
    std::string format = "json";
    std::string snapshot;
    GridSpec grid;
    bool grid_given = false;
};

int run_hill(const HillArgs& args, std::ostream& out) {
    const HillVortex h{args.lambda, args.a, args.c};
    const HillQuantities q = hill_quantities(h);
    emit_record(out, args.format,
                {{"lambda", args.lambda},
                 {"a", args.a},
                 {"c", args.c},
                 {"strength", q.strength},
                 {"circulation", q.circulation},
                 {"impulse", q.impulse},
                 {"energy", q.energy},
                 {"speed", hill_speed(h)}});
    if (!args.snapshot.empty()) {
        const VorticityField xi = hill_field(h, make_grid(args.grid));
        write_snapshot(args.snapshot, xi, "hill", 0.0);
    }
    return 0;
}

struct KernelTableArgs {
    double s_min = 1e-6, s_max = 1e6;
    int points = 49;
    double tol = 1e-10;
    std::string format = "csv";
};

int run_kernel_table(const KernelTableArgs& args, std::ostream& out) {
    if (!(args.s_min > 0.0)) throw DomainError("kernel-table: --s-min must be > 0");
    if (!(args.s_max > args.s_min)) throw DomainError("kernel-table: need --s-max > --s-min");
    if (args.points < 2) throw DomainError("kernel-table: need --points >= 2");
    const KernelEval eval(args.tol);
    const double lx0 = std::log(args.s_min);
    const double lx1 = std::log(args.s_max);
    njson rows = njson::array();
    if (args.format == "csv") out << "s,F,asymptote_small,asymptote_large\n";
    for (int k = 0; k < args.points; ++k) {
        const double s = std::exp(lx0 + (lx1 - lx0) * k / (args.points - 1));
        const double f = f_profile(s, eval);
        if (args.format == "csv") {
            out << format_double(s) << "," << format_double(f) << ","
                << format_double(f_small_asymptote(s)) << ","
                << format_double(f_large_asymptote(s)) << "\n";
        } else {
            njson row;
            row["s"] = s;
            row["F"] = f;
            row["asymptote_small"] = f_small_asymptote(s);
            row["asymptote_large"] = f_large_asymptote(s);
            rows.push_back(std::move(row));
        }
    }
    if (args.format == "json") out << rows.dump(2) << "\n";
    return 0;
}

struct StreamArgs {
    std::string input;
    std::string psi_out;
    bool residual = false;
    int threads = 1;
    std::string format = "json";
};

int run_stream(const StreamArgs& args, std::ostream& out) {
    const FieldSnapshot snap = read_snapshot(args.input);
    const VorticityField xi = snap.vorticity();
    const KernelEval kernel = KernelEval::with_table();
    const StreamSolver solver(xi.grid, kernel, args.threads);
    const ScalarField psi = solver.solve(xi, args.threads);
    if (!args.psi_out.empty())
        write_snapshot(args.psi_out, psi, snap.name + "-stream", snap.time, std::nullopt);

    std::vector<std::pair<std::string, njson>> fields;
    fields.emplace_back("input", args.input);
    fields.emplace_back("quantities", quantities_json(quantities(xi, psi)));
    fields.emplace_back("axis_speed_center", uz_on_axis(psi, xi.grid.nz / 2));
    if (args.residual) fields.emplace_back("elliptic_residual", elliptic_residual(psi, xi));
    emit_record(out, args.format, fields);
    return 0;
}

struct CompareArgs {
    std::string a, b;
    bool orbital = false;
    bool wan = false;
    std::string format = "json";
};

int run_compare(const CompareArgs& args, std::ostream& out) {
    const VorticityField fa = read_vorticity(args.a);
    const VorticityField fb = read_vorticity(args.b);
    const DistanceRecord d = weighted_distance(fa, fb);
    std::vector<std::pair<std::string, njson>> fields;
    fields.emplace_back("l1", d.l1);
    fields.emplace_back("l2", d.l2);
    fields.emplace_back("w1", d.w1);
    fields.emplace_back("combined", d.combined());
    fields.emplace_back("weighted_l1", d.weighted_l1());
    if (args.orbital) {
        const OrbitalResult oc = orbital_distance(fa, fb, OrbitalMetric::combined);
        const OrbitalResult ow = orbital_distance(fa, fb, OrbitalMetric::weighted_l1);
        fields.emplace_back("orbital_combined", oc.value);
        fields.emplace_back("orbital_combined_tau", oc.tau);
        fields.emplace_back("orbital_weighted_l1", ow.value);
        fields.emplace_back("orbital_weighted_l1_tau", ow.tau);
    }
    if (args.wan) fields.emplace_back("wan_metric", wan_metric(fa, fb));
    emit_record(out, args.format, fields);
    return 0;
}

struct MaximizeArgs {
    double mu = 0.0, nu = 0.0, lambda = 0.0;
    GridSpec grid;
    std::string seed_file;
    int max_iters = 60;
    double set_tol = 1e-10;
    int symmetrize_every = 5;
    int threads = 1;
    std::string out_dir;
    std::string format = "json";
};

njson maximize_report(const MaximizeResult& res, const RingIdentityReport& rep,
                      const MaximizeArgs& args) {
    njson j;
    j["mu"] = args.mu;
    j["nu"] = args.nu;
    j["lambda"] = args.lambda;
    j["W"] = res.W;
    j["gamma"] = res.gamma;
    j["energy"] = res.energy;
    j["impulse"] = rep.impulse;
    j["circulation"] = rep.circulation;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["identity_residual"] = rep.identity_residual;
    j["speed_bound_ok"] = rep.speed_bound_ok;
    j["support_margin_cells"] = rep.support_margin_cells;
    j["energy_trace"] = res.energy_trace;
    j["set_change_trace"] = res.set_change_trace;
    j["restarts"] = res.restarts;
    return j;
}

int run_maximize(const MaximizeArgs& args, std::ostream& out) {
    const Constraints c{args.mu, args.nu, args.lambda};
    const AxiGrid grid = make_grid(args.grid);
    MaximizeOptions opts;
    opts.max_iters = args.max_iters;
    opts.set_tol = args.set_tol;
    opts.symmetrize_every = args.symmetrize_every;
    opts.threads = args.threads;
    if (!args.seed_file.empty()) opts.seed = read_vorticity(args.seed_file);

    const MaximizeResult res = maximize_energy(c, grid, opts);
    const RingIdentityReport rep = verify_ring_identities(res);
    const njson report = maximize_report(res, rep, args);

    if (!args.out_dir.empty()) {
        ensure_dir(args.out_dir);
        const auto dir = std::filesystem::path(args.out_dir);
        write_snapshot((dir / "maximizer.snap").string(), res.xi, "maximizer", 0.0);
        std::ofstream rf(dir / "report.json", std::ios::binary);
        if (!rf) throw IoError("cannot write report in '" + args.out_dir + "'");
        rf << report.dump(2) << "\n";
    }

    if (args.format == "json") {
        out << report.dump(2) << "\n";
    } else {
        std::vector<std::pair<std::string, njson>> fields;
        for (const auto& [k, v] : report.items())
            if (!v.is_array()) fields.emplace_back(k, v);
        emit_record(out, args.format, fields);
    }
    return 0;
}

struct EvolveArgs {
    std::string init;
    double t_end = 1.0;
    double cfl = 0.5;
    int resolve_every = 1;
    double diag_every = 0.0;
    std::vector<std::string> bands;
    GridSpec grid{128, 256, 3.0, 3.0};
    int threads = 1;
    std::string out_dir;
    std::string format = "csv";
};

VorticityField initial_field(const std::string& init, const GridSpec& gs) {
    if (init.rfind("hill:", 0) == 0) {
        const std::string body = init.substr(5);
        std::vector<double> parts;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            const std::size_t comma = body.find(',', pos);
            const std::string piece =
                body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                parts.push_back(parse_double(piece));
            } catch (const IoError&) {
                throw DomainError("evolve: bad --init, expected hill:lambda,a[,c]");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw DomainError("evolve: bad --init, expected hill:lambda,a[,c]");
        const HillVortex h{parts[0], parts[1], parts.size() == 3 ? parts[2] : 0.0};
        return hill_field(h, make_grid(gs));
    }
    return read_vorticity(init);
}

std::vector<std::pair<double, double>> parse_bands(const std::vector<std::string>& bands) {
    std::vector<std::pair<double, double>> out;
    for (const auto& b : bands) {
        const std::size_t comma = b.find(',');
        if (comma == std::string::npos) throw DomainError("evolve: --band expects 'low,high'");
        out.emplace_back(parse_double(b.substr(0, comma)), parse_double(b.substr(comma + 1)));
    }
    return out;
}

void write_log_csv(std::ostream& os, const std::vector<DiagRow>& rows, std::size_t n_bands) {
    os << "t,l1,l2,impulse,circulation,energy,centroid_z";
    for (std::size_t b = 0; b < n_bands; ++b) os << ",band_mass_" << b;
    os << "\n";
    for (const auto& d : rows) {
        os << format_double(d.t) << "," << format_double(d.q.l1) << "," << format_double(d.q.l2)
           << "," << format_double(d.q.impulse) << "," << format_double(d.q.circulation) << ","
           << format_double(d.q.energy) << "," << format_double(d.centroid_z);
        for (double m : d.band_masses) os << "," << format_double(m);
        os << "\n";
    }
}

njson log_json(const std::vector<DiagRow>& rows) {
    njson arr = njson::array();
    for (const auto& d : rows) {
        njson row;
        row["t"] = d.t;
        row["l1"] = d.q.l1;
        row["l2"] = d.q.l2;
        row["impulse"] = d.q.impulse;
        row["circulation"] = d.q.circulation;
        row["energy"] = d.q.energy;
        row["centroid_z"] = d.centroid_z;
        row["band_masses"] = d.band_masses;
        arr.push_back(std::move(row));
    }
    return arr;
}

int run_evolve(const EvolveArgs& args, std::ostream& out) {
    const VorticityField xi0 = initial_field(args.init, args.grid);
    EvolveConfig cfg;
    cfg.t_end = args.t_end;
    cfg.cfl = args.cfl;
    cfg.resolve_every = args.resolve_every;
    cfg.diag_every = args.diag_every;
    cfg.bands = parse_bands(args.bands);
    cfg.threads = args.threads;
    const EvolveResult res = evolve(xi0, cfg);

    if (!args.out_dir.empty()) {
        ensure_dir(args.out_dir);
        const auto dir = std::filesystem::path(args.out_dir);
        write_snapshot((dir / "initial.snap").string(), xi0, "initial", 0.0);
        write_snapshot((dir / "final.snap").string(), res.xi, "final", args.t_end);
        std::ofstream lf(dir / "log.csv", std::ios::binary);
        if (!lf) throw IoError("cannot write log in '" + args.out_dir + "'");
        write_log_csv(lf, res.diagnostics, cfg.bands.size());
    }

    if (args.format == "json") {
        njson j;
        j["steps"] = res.steps;
        j["log"] = log_json(res.diagnostics);
        out << j.dump(2) << "\n";
    } else {
        write_log_csv(out, res.diagnostics, cfg.bands.size());
    }
    return 0;
}

struct StabilityArgs {
    std::string perturb = "radius:0.01";
    double t_end = 3.0;
    double diag_every = 0.5;
    double cfl = 0.5;
    GridSpec grid{96, 192, 2.5, 2.5};
    int threads = 1;
    std::string out_dir;
    std::string format = "json";
};

int run_stability(const StabilityArgs& args, std::ostream& out) {
    StabilityConfig cfg;
    const std::size_t colon = args.perturb.find(':');
    const std::string kind = args.perturb.substr(0, colon);
    if (colon == std::string::npos || (kind != "radius" && kind != "notch"))
        throw DomainError("stability: --perturb expects radius:DELTA or notch:DELTA");
    cfg.kind = kind == "radius" ? StabilityConfig::Kind::radius : StabilityConfig::Kind::notch;
    cfg.delta = parse_double(args.perturb.substr(colon + 1));
    cfg.t_end = args.t_end;
    cfg.diag_every = args.diag_every;
    cfg.cfl = args.cfl;
    cfg.threads = args.threads;

    const StabilityResult res = stability_experiment(make_grid(args.grid), cfg);

    njson j;
    j["perturb"] = args.perturb;
    j["delta0"] = res.delta0;
    njson series = njson::array();
    for (const auto& row : res.series) {
        njson r;
        r["t"] = row.t;
        r["orbital"] = row.orbital;
        r["tau"] = row.tau;
        series.push_back(std::move(r));
    }
    j["series"] = series;

    if (!args.out_dir.empty()) {
        ensure_dir(args.out_dir);
        const auto dir = std::filesystem::path(args.out_dir);
        write_snapshot((dir / "final.snap").string(), res.run.xi, "stability-final", args.t_end);
        std::ofstream rf(dir / "series.json", std::ios::binary);
        if (!rf) throw IoError("cannot write series in '" + args.out_dir + "'");
        rf << j.dump(2) << "\n";
    }

    if (args.format == "json") {
        out << j.dump(2) << "\n";
    } else {
        out << "t,orbital,tau\n";
        for (const auto& row : res.series)
            out << format_double(row.t) << "," << format_double(row.orbital) << ","
                << format_double(row.tau) << "\n";
    }
    return 0;
}

struct WanArgs {
    double a = 1.2;
    std::vector<double> times{0.0, 50.0, 100.0, 200.0};
    std::string format = "json";
};

int run_wan(const WanArgs& args, std::ostream& out) {
    const WanReport rep = wan_counterexample(args.a, args.times);
    std::vector<double> ts, cm;
    for (const auto& p : rep.points) {
        ts.push_back(p.t);
        cm.push_back(p.center_matched);
    }
    if (args.format == "json") {
        njson j;
        j["a"] = rep.a;
        j["speed"] = rep.speed;
        j["reference_speed"] = rep.reference_speed;
        j["t0"] = rep.t0;
        j["slope"] = rep.slope;
        j["fitted_slope"] = fitted_slope(ts, cm);
        j["saturation"] = rep.saturation;
        njson points = njson::array();
        for (const auto& p : rep.points) {
            njson row;
            row["t"] = p.t;
            row["center_matched"] = p.center_matched;
            row["infimum"] = p.infimum;
            row["tau_inf"] = p.tau_inf;
            row["orbital"] = p.orbital;
            points.push_back(std::move(row));
        }
        j["points"] = points;
        out << j.dump(2) << "\n";
    } else {
        out << "t,center_matched,infimum,tau_inf,orbital\n";
        for (const auto& p : rep.points)
            out << format_double(p.t) << "," << format_double(p.center_matched) << ","
                << format_double(p.infimum) << "," << format_double(p.tau_inf) << ","
                << format_double(p.orbital) << "\n";
    }
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Axisymmetric vortex ring toolkit: kernels, stream solves, conserved "
                 "functionals, constrained maximization, and evolution experiments"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON configuration file mirroring the long flag names");
    app.require_subcommand(0, 1);

    std::function<int()> action;

    auto hill_args = std::make_shared<HillArgs>();
    {
        CLI::App* sub = app.add_subcommand("hill", "Closed-form quantities of the spherical vortex");
        sub->configurable();
        sub->add_option("--lambda", hill_args->lambda, "Vorticity strength")->capture_default_str();
        sub->add_option("--a", hill_args->a, "Core radius")->capture_default_str();
        sub->add_option("--c", hill_args->c, "Axial center")->capture_default_str();
        add_format_option(sub, hill_args->format);
        sub->add_option("--snapshot", hill_args->snapshot, "Also write the gridded field here");
        add_grid_options(sub, hill_args->grid);
        sub->callback([&action, hill_args, &out] {
            action = [hill_args, &out] { return run_hill(*hill_args, out); };
        });
    }

    auto kt_args = std::make_shared<KernelTableArgs>();
    {
        CLI::App* sub = app.add_subcommand("kernel-table", "Tabulate the kernel profile F(s)");
        sub->configurable();
        sub->add_option("--s-min", kt_args->s_min, "Smallest s")->capture_default_str();
        sub->add_option("--s-max", kt_args->s_max, "Largest s")->capture_default_str();
        sub->add_option("--points", kt_args->points, "Number of log-spaced samples")
            ->capture_default_str();
        sub->add_option("--tol", kt_args->tol, "Quadrature tolerance")->capture_default_str();
        add_format_option(sub, kt_args->format);
        sub->callback([&action, kt_args, &out] {
            action = [kt_args, &out] { return run_kernel_table(*kt_args, out); };
        });
    }

    auto stream_args = std::make_shared<StreamArgs>();
    {
        CLI::App* sub = app.add_subcommand("stream", "Solve the stream function of a vorticity snapshot");
        sub->configurable();
        sub->add_option("--input", stream_args->input, "Vorticity snapshot")->required();
        sub->add_option("--out", stream_args->psi_out, "Write the stream function snapshot here");
        sub->add_flag("--residual", stream_args->residual,
                      "Report the interior elliptic residual against the input");
        sub->add_option("--threads", stream_args->threads, "Worker cap")->capture_default_str();
        add_format_option(sub, stream_args->format);
        sub->callback([&action, stream_args, &out] {
            action = [stream_args, &out] { return run_stream(*stream_args, out); };
        });
    }

    auto compare_args = std::make_shared<CompareArgs>();
    {
        CLI::App* sub = app.add_subcommand("compare", "Distances between two field snapshots");
        sub->configurable();
        sub->add_option("--a", compare_args->a, "First snapshot")->required();
        sub->add_option("--b", compare_args->b, "Second snapshot")->required();
        sub->add_flag("--orbital", compare_args->orbital, "Also minimize over axial shifts");
        sub->add_flag("--wan", compare_args->wan, "Also report the moment-augmented metric");
        add_format_option(sub, compare_args->format);
        sub->callback([&action, compare_args, &out] {
            action = [compare_args, &out] { return run_compare(*compare_args, out); };
        });
    }

    auto max_args = std::make_shared<MaximizeArgs>();
    {
        CLI::App* sub = app.add_subcommand(
            "maximize", "Constrained kinetic-energy maximization (steady ring endpoint)");
        sub->configurable();
        sub->add_option("--mu", max_args->mu, "Impulse target")->required();
        sub->add_option("--nu", max_args->nu, "Circulation budget")->required();
        sub->add_option("--lambda", max_args->lambda, "Strength cap")->required();
        add_grid_options(sub, max_args->grid);
        sub->add_option("--seed", max_args->seed_file, "Seed field snapshot");
        sub->add_option("--max-iters", max_args->max_iters, "Iteration cap")->capture_default_str();
        sub->add_option("--set-tol", max_args->set_tol, "Relative set-change tolerance")
            ->capture_default_str();
        sub->add_option("--symmetrize-every", max_args->symmetrize_every,
                        "Axial symmetrization cadence (0: never)")
            ->capture_default_str();
        sub->add_option("--threads", max_args->threads, "Worker cap")->capture_default_str();
        sub->add_option("--out", max_args->out_dir, "Directory for maximizer.snap and report.json");
        add_format_option(sub, max_args->format);
        sub->callback([&action, max_args, &out] {
            action = [max_args, &out] { return run_maximize(*max_args, out); };
        });
    }

    auto evolve_args = std::make_shared<EvolveArgs>();
    {
        CLI::App* sub = app.add_subcommand("evolve", "Semi-Lagrangian transport of a vorticity field");
        sub->configurable();
        sub->add_option("--init", evolve_args->init,
                        "Initial data: snapshot path or hill:lambda,a[,c]")
            ->required();
        sub->add_option("--t-end", evolve_args->t_end, "Final time")->capture_default_str();
        sub->add_option("--cfl", evolve_args->cfl, "Advective step fraction")->capture_default_str();
        sub->add_option("--resolve-every", evolve_args->resolve_every,
                        "Steps between stream refreshes")
            ->capture_default_str();
        sub->add_option("--diag-every", evolve_args->diag_every,
                        "Diagnostic sampling interval (0: endpoints only)")
            ->capture_default_str();
        sub->add_option("--band", evolve_args->bands, "Band-mass diagnostic 'low,high' (repeatable)");
        add_grid_options(sub, evolve_args->grid);
        sub->add_option("--threads", evolve_args->threads, "Worker cap")->capture_default_str();
        sub->add_option("--out", evolve_args->out_dir,
                        "Directory for initial.snap, final.snap and log.csv");
        add_format_option(sub, evolve_args->format);
        sub->callback([&action, evolve_args, &out] {
            action = [evolve_args, &out] { return run_evolve(*evolve_args, out); };
        });
    }

    auto stab_args = std::make_shared<StabilityArgs>();
    {
        CLI::App* sub = app.add_subcommand(
            "stability", "Perturbed spherical vortex against the steady reference");
        sub->configurable();
        sub->add_option("--perturb", stab_args->perturb, "Perturbation: radius:DELTA or notch:DELTA")
            ->capture_default_str();
        sub->add_option("--t-end", stab_args->t_end, "Final time")->capture_default_str();
        sub->add_option("--diag-every", stab_args->diag_every, "Distance sampling interval")
            ->capture_default_str();
        sub->add_option("--cfl", stab_args->cfl, "Advective step fraction")->capture_default_str();
        add_grid_options(sub, stab_args->grid);
        sub->add_option("--threads", stab_args->threads, "Worker cap")->capture_default_str();
        sub->add_option("--out", stab_args->out_dir, "Directory for final.snap and series.json");
        add_format_option(sub, stab_args->format);
        sub->callback([&action, stab_args, &out] {
            action = [stab_args, &out] { return run_stability(*stab_args, out); };
        });
    }

    auto wan_args = std::make_shared<WanArgs>();
    {
        CLI::App* sub = app.add_subcommand(
            "wan", "Moment-augmented distance growth for mismatched spherical patches");
        sub->configurable();
        sub->add_option("--a", wan_args->a, "Perturbed patch radius")->capture_default_str();
        sub->add_option("--t", wan_args->times, "Sample times")->delimiter(',')->expected(1, -1);
        add_format_option(sub, wan_args->format);
        sub->callback([&action, wan_args, &out] {
            action = [wan_args, &out] { return run_wan(*wan_args, out); };
        });
    }

    auto verify_opts = std::make_shared<AcceptanceOptions>();
    {
        CLI::App* sub = app.add_subcommand("verify", "Run the acceptance suite");
        sub->configurable();
        sub->add_option("--only", verify_opts->only, "Criteria to run (repeatable)")
            ->check(CLI::Range(1, 12));
        sub->add_option("--out", verify_opts->work_dir, "Artifact directory")
            ->capture_default_str();
        sub->add_option("--threads", verify_opts->threads, "Worker cap")->capture_default_str();
        sub->callback([&action, verify_opts, &out] {
            action = [verify_opts, &out] {
                const int failures = run_acceptance(*verify_opts, out);
                return failures == 0 ? 0 : 3;
            };
        });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    if (!action) {
        err << app.help();
        return 2;
    }

    try {
        return action();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace vring
