#include "doctest.h"

#include "vring/functionals.hpp"
#include "vring/hill.hpp"
#include "vring/kernel.hpp"
#include "vring/stream.hpp"

#include <cmath>

using namespace vring;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

TEST_SUITE("functionals") {

TEST_CASE("uniform field integrals match the discrete closed forms") {
    const AxiGrid g(32, 20, 2.0, -1.0, 3.0);
    const double c = 0.35;
    VorticityField xi = VorticityField::zeros(g, 1.0);
    for (double& v : xi.values) v = c;

    const QuantityRecord q = quantities(xi);
    const double n = g.nr, hr = g.hr(), hz = g.hz(), depth = g.z_max - g.z_min;
    // sum of r_i hr = r_max^2 / 2 and sum of r_i^3 hr = hr^4 (n^4/4 - n^2/8)
    const double sum_r = g.r_max * g.r_max / 2.0;
    const double sum_r3 = std::pow(hr, 4) * (std::pow(n, 4) / 4.0 - n * n / 8.0);
    CHECK(q.l1 == doctest::Approx(c * 2.0 * kPi * sum_r * depth).epsilon(1e-13));
    CHECK(q.circulation == doctest::Approx(c * 2.0 * kPi * sum_r * depth).epsilon(1e-13));
    CHECK(q.l2 == doctest::Approx(std::sqrt(c * c * 2.0 * kPi * sum_r * depth)).epsilon(1e-13));
    CHECK(q.impulse == doctest::Approx(0.5 * c * 2.0 * kPi * sum_r3 * depth).epsilon(1e-13));
    CHECK(q.strength == c);
    // z centroid of a z-uniform field is the box midpoint
    CHECK(q.z_moment / (2.0 * q.impulse) ==
          doctest::Approx(0.5 * (g.z_min + g.z_max)).epsilon(1e-12));
    CHECK(std::isnan(q.energy)); // no stream function supplied
    CHECK(hz > 0.0);
}

TEST_CASE("gridded spherical vortex reproduces its closed-form quantities") {
    const HillVortex h{1.0, 1.0, 0.0};
    const AxiGrid g(64, 128, 2.0, -2.0, 2.0);
    const VorticityField xi = hill_field(h, g);
    const ScalarField psi = stream_solve(xi, KernelEval::with_table());
    const QuantityRecord q = quantities(xi, psi);
    const HillQuantities ref = hill_quantities(h);
    CHECK(q.circulation == doctest::Approx(ref.circulation).epsilon(0.01));
    CHECK(q.impulse == doctest::Approx(ref.impulse).epsilon(0.01));
    CHECK(q.energy == doctest::Approx(ref.energy).epsilon(0.03));
    CHECK(q.l1 == doctest::Approx(ref.circulation).epsilon(0.01)); // nonnegative field
    CHECK(kinetic_energy(xi, psi) == q.energy);
    CHECK(q.z_moment / (2.0 * q.impulse) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("band mass uses strict bounds") {
    const AxiGrid g(4, 4, 1.0, 0.0, 1.0);
    VorticityField xi = VorticityField::zeros(g, 1.0);
    xi.at(1, 0) = 0.2;
    xi.at(1, 1) = 0.5;
    xi.at(2, 2) = 0.8;
    const double w1 = 2.0 * kPi * g.r(1) * g.hr() * g.hz();
    const double w2 = 2.0 * kPi * g.r(2) * g.hr() * g.hz();
    CHECK(band_mass(xi, 0.4, 0.9) == doctest::Approx(0.5 * w1 + 0.8 * w2).epsilon(1e-14));
    CHECK(band_mass(xi, 0.5, 0.9) == doctest::Approx(0.8 * w2).epsilon(1e-14)); // 0.5 excluded
    CHECK(band_mass(xi, 0.9, 1.0) == 0.0);
}

TEST_CASE("distances are symmetric and vanish on equal fields") {
    const AxiGrid g(16, 24, 1.5, -1.0, 1.0);
    const VorticityField a = hill_field(HillVortex{1.0, 0.7, 0.0}, g);
    const VorticityField b = hill_field(HillVortex{1.0, 0.9, 0.1}, g);
    const DistanceRecord dab = weighted_distance(a, b);
    const DistanceRecord dba = weighted_distance(b, a);
    CHECK(dab.l1 == dba.l1);
    CHECK(dab.l2 == dba.l2);
    CHECK(dab.w1 == dba.w1);
    CHECK(dab.combined() == dab.l1 + dab.l2 + dab.w1);
    CHECK(dab.weighted_l1() == dab.l1 + dab.w1);
    CHECK(weighted_symmetric_difference(a, b) ==
          doctest::Approx(dab.weighted_l1()).epsilon(1e-12));

    const DistanceRecord self = weighted_distance(a, a);
    CHECK(self.l1 == 0.0);
    CHECK(self.l2 == 0.0);
    CHECK(self.w1 == 0.0);
}

TEST_CASE("row-internal permutations do not move the sorted reductions") {
    const AxiGrid g(8, 8, 1.0, 0.0, 1.0);
    VorticityField xi = VorticityField::zeros(g, 1.0);
    double t = 0.05;
    for (double& v : xi.values) v = (t += 0.013);
    VorticityField perm = xi;
    std::swap(perm.values[g.index(3, 1)], perm.values[g.index(3, 6)]);
    std::swap(perm.values[g.index(5, 0)], perm.values[g.index(5, 7)]);
    const QuantityRecord qa = quantities(xi);
    const QuantityRecord qb = quantities(perm);
    CHECK(qa.l1 == qb.l1);
    CHECK(qa.l2 == qb.l2);
    CHECK(qa.impulse == qb.impulse);
    CHECK(qa.circulation == qb.circulation);
}

TEST_CASE("orbital distance recovers a whole-cell translation") {
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0); // hz = 1/24, so 0.25 is 6 cells
    const VorticityField moved = hill_field(HillVortex{1.0, 1.0, 0.25}, g);
    const VorticityField still = hill_field(HillVortex{1.0, 1.0, 0.0}, g);
    const OrbitalResult orb = orbital_distance(moved, still);
    CHECK(std::abs(orb.tau + 0.25) < 1e-6);
    CHECK(orb.value < 1e-9);
    // an uncompensated comparison is far from zero
    CHECK(weighted_distance(moved, still).combined() > 0.1);

    const OrbitalResult w1 = orbital_distance(moved, still, OrbitalMetric::weighted_l1);
    CHECK(std::abs(w1.tau + 0.25) < 1e-6);
    CHECK(w1.value < 1e-9);
}

TEST_CASE("moment-augmented metric separates recentered fields") {
    const AxiGrid g(32, 64, 2.0, -2.0, 2.0);
    const VorticityField a = hill_field(HillVortex{1.0, 0.8, 0.5}, g);
    const VorticityField b = hill_field(HillVortex{1.0, 0.8, 0.0}, g);
    CHECK(wan_metric(a, a) == 0.0);
    const double d = wan_metric(a, b);
    // moment mismatch alone is 2 P (Delta c) = 2 (4 pi / 15) 0.8^5 0.5
    const double moment_gap = 2.0 * hill_quantities(HillVortex{1.0, 0.8, 0.0}).impulse * 0.5;
    CHECK(d > moment_gap * 0.9);
    CHECK(wan_metric(b, a) == doctest::Approx(d).epsilon(1e-12));
}

} // TEST_SUITE
