#include "doctest.h"

#include "vring/cli.hpp"
#include "vring/hill.hpp"
#include "vring/snapshot.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace vring;
namespace fs = std::filesystem;

namespace {

struct Run {
    int rc;
    std::string out;
    std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int rc = cli_main(args, out, err);
    return {rc, out.str(), err.str()};
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "vring-cli-tests";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("no arguments prints help and exits 2") {
    const Run r = run_cli({});
    CHECK(r.rc == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("parse errors exit 2") {
    CHECK(run_cli({"--no-such-flag"}).rc == 2);
    CHECK(run_cli({"hill", "--no-such-flag"}).rc == 2);
    CHECK(run_cli({"stream"}).rc == 2);                        // missing required --input
    CHECK(run_cli({"hill", "--format", "xml"}).rc == 2);       // not in the member set
    CHECK(run_cli({"verify", "--only", "13"}).rc == 2);        // out of range
    CHECK(run_cli({"hill", "--grid", "64"}).rc == 2);          // malformed NRxNZ
}

TEST_CASE("help exits 0") {
    const Run top = run_cli({"--help"});
    CHECK(top.rc == 0);
    CHECK(top.out.find("hill") != std::string::npos);
    CHECK(run_cli({"hill", "--help"}).rc == 0);
}

TEST_CASE("domain failures exit 1") {
    CHECK(run_cli({"hill", "--a", "-1"}).rc == 1);
    CHECK(run_cli({"stream", "--input", "/nonexistent/field.snap"}).rc == 1);
    CHECK(run_cli({"wan", "--a", "1.0"}).rc == 1); // radii must differ
}

TEST_CASE("closed-form quantities as json and csv") {
    const Run j = run_cli({"hill", "--lambda", "2", "--a", "1.5"});
    REQUIRE(j.rc == 0);
    const nlohmann::json rec = nlohmann::json::parse(j.out);
    const HillQuantities ref = hill_quantities(HillVortex{2.0, 1.5, 0.0});
    CHECK(rec.at("circulation").get<double>() == doctest::Approx(ref.circulation).epsilon(1e-14));
    CHECK(rec.at("impulse").get<double>() == doctest::Approx(ref.impulse).epsilon(1e-14));
    CHECK(rec.at("energy").get<double>() == doctest::Approx(ref.energy).epsilon(1e-14));
    CHECK(rec.at("speed").get<double>() == doctest::Approx(0.6).epsilon(1e-14));

    const Run c = run_cli({"hill", "--lambda", "2", "--a", "1.5", "--format", "csv"});
    REQUIRE(c.rc == 0);
    const std::size_t pos = c.out.find("speed,");
    REQUIRE(pos != std::string::npos);
    const std::size_t eol = c.out.find('\n', pos);
    CHECK(std::stod(c.out.substr(pos + 6, eol - pos - 6)) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("hill snapshot written and readable") {
    const fs::path snap = scratch_dir() / "ball.snap";
    const Run r = run_cli({"hill", "--a", "0.8", "--snapshot", snap.string(), "--grid", "32x64",
                           "--rmax", "2", "--zmax", "2"});
    REQUIRE(r.rc == 0);
    const FieldSnapshot s = read_snapshot(snap.string());
    CHECK(s.vorticity().grid.nr == 32);
    CHECK(s.vorticity().grid.nz == 64);
}

TEST_CASE("kernel table emits the requested rows") {
    const Run r = run_cli({"kernel-table", "--s-min", "0.1", "--s-max", "10", "--points", "5"});
    REQUIRE(r.rc == 0);
    int lines = 0;
    for (char ch : r.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 6); // header plus five samples
    CHECK(r.out.rfind("s,F,", 0) == 0);
}

TEST_CASE("compare on shifted snapshots reports the orbital minimum") {
    const AxiGrid g(32, 64, 2.0, -2.0, 2.0);
    const fs::path pa = scratch_dir() / "a.snap";
    const fs::path pb = scratch_dir() / "b.snap";
    write_snapshot(pa.string(), hill_field(HillVortex{1.0, 0.8, 0.25}, g), "a", 0.0);
    write_snapshot(pb.string(), hill_field(HillVortex{1.0, 0.8, 0.0}, g), "b", 0.0);

    const Run r = run_cli({"compare", "--a", pa.string(), "--b", pb.string(), "--orbital", "--wan"});
    REQUIRE(r.rc == 0);
    const nlohmann::json rec = nlohmann::json::parse(r.out);
    CHECK(rec.at("l1").get<double>() > 0.0);
    CHECK(rec.at("orbital_combined").get<double>() < 0.01 * rec.at("combined").get<double>());
    CHECK(rec.at("orbital_combined_tau").get<double>() == doctest::Approx(-0.25).epsilon(1e-4));
    CHECK(rec.at("wan_metric").get<double>() > 0.0);
}

TEST_CASE("json config file feeds subcommand options") {
    const fs::path cfg = scratch_dir() / "config.json";
    {
        std::ofstream f(cfg);
        f << "{\"hill\": {\"lambda\": 2.0, \"a\": 1.0}}\n";
    }
    const Run r = run_cli({"--config", cfg.string(), "hill"});
    REQUIRE(r.rc == 0);
    const nlohmann::json rec = nlohmann::json::parse(r.out);
    CHECK(rec.at("speed").get<double>() == doctest::Approx(4.0 / 15.0).epsilon(1e-14));
    // command line wins over the config file
    const Run o = run_cli({"--config", cfg.string(), "hill", "--lambda", "3"});
    REQUIRE(o.rc == 0);
    CHECK(nlohmann::json::parse(o.out).at("speed").get<double>() ==
          doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("repeated runs are byte-identical") {
    const Run r1 = run_cli({"wan", "--a", "1.2", "--t", "0,10,20"});
    const Run r2 = run_cli({"wan", "--a", "1.2", "--t", "0,10,20"});
    REQUIRE(r1.rc == 0);
    CHECK(r1.out == r2.out);
}

TEST_CASE("acceptance subset through the cli") {
    const Run r = run_cli({"verify", "--only", "8"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("[PASS] 08") != std::string::npos);
}

} // TEST_SUITE
