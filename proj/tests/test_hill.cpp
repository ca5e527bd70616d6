#include "doctest.h"

#include "vring/functionals.hpp"
#include "vring/hill.hpp"

#include <cmath>

using namespace vring;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

TEST_SUITE("hill") {

TEST_CASE("worked stream-function example") {
    // psi = (1/2) W r^2 (5/2 - (3/2) rho^2 / a^2) inside the ball with
    // W = (2/15) lambda a^2: at lambda = 1, a = 2, (r, z) = (1, 0) this is
    // (1/2)(8/15)(1)(5/2 - 3/8) = 17/30.
    const HillVortex h{1.0, 2.0, 0.0};
    CHECK(hill_stream(h, 1.0, 0.0) == doctest::Approx(17.0 / 30.0).epsilon(1e-14));
}

TEST_CASE("closed-form quantities match frozen references") {
    struct Row {
        double lambda, a, W, G, P, E;
    };
    const Row rows[] = {
        {1.0, 1.0, 0.13333333333333333, 4.188790204786391, 0.8377580409572782,
         0.079786480091169352},
        {1.0, 2.0, 0.53333333333333333, 33.510321638291128, 26.808257310632902,
         10.212669451669677},
        {3.0, 0.5, 0.1, 1.5707963267948966, 0.078539816339744831, 0.0056099868814103451},
        {2.0, 1.5, 0.6, 28.274333882308139, 12.723450247038663, 5.4529072487308554},
    };
    for (const Row& row : rows) {
        const HillVortex h{row.lambda, row.a, 0.0};
        const HillQuantities q = hill_quantities(h);
        CHECK(hill_speed(h) == doctest::Approx(row.W).epsilon(1e-13));
        CHECK(q.strength == doctest::Approx(row.lambda).epsilon(1e-13));
        CHECK(q.circulation == doctest::Approx(row.G).epsilon(1e-13));
        CHECK(q.impulse == doctest::Approx(row.P).epsilon(1e-13));
        CHECK(q.energy == doctest::Approx(row.E).epsilon(1e-13));
    }
}

TEST_CASE("vorticity indicator and stream continuity") {
    const HillVortex h{2.0, 1.5, 0.5};
    CHECK(hill_vorticity(h, 0.5, 0.5) == 2.0);
    CHECK(hill_vorticity(h, 1.0, 1.0) == 2.0);      // rho^2 = 1.25 < 2.25
    CHECK(hill_vorticity(h, 1.5, 0.5) == 0.0);      // on the boundary sphere
    CHECK(hill_vorticity(h, 2.0, 0.5) == 0.0);      // outside
    CHECK(hill_vorticity(h, 0.5, -3.0) == 0.0);

    // continuity across rho = a along a ray
    const double a = h.a, c = h.c;
    const double inner = hill_stream(h, a - 1e-9, c);
    const double outer = hill_stream(h, a + 1e-9, c);
    CHECK(std::abs(inner - outer) < 1e-7);
}

TEST_CASE("adjusted stream is a sign indicator of the ball") {
    const HillVortex h{1.0, 1.0, 0.0};
    CHECK(hill_adjusted_stream(h, 0.5, 0.0) > 0.0);
    CHECK(hill_adjusted_stream(h, 0.3, 0.8) > 0.0);   // rho^2 = 0.73
    CHECK(hill_adjusted_stream(h, 1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(hill_adjusted_stream(h, 1.5, 0.0) < 0.0);
    CHECK(hill_adjusted_stream(h, 0.5, 2.0) < 0.0);
}

TEST_CASE("radius from impulse inverts the impulse formula") {
    CHECK(hill_radius_from_impulse(0.8377580409572782, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    const HillQuantities q = hill_quantities(HillVortex{2.0, 1.5, 0.0});
    CHECK(hill_radius_from_impulse(q.impulse, 2.0) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK_THROWS_AS(hill_radius_from_impulse(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(hill_radius_from_impulse(1.0, 0.0), DomainError);
}

TEST_CASE("uniqueness regime threshold") {
    const double expect = (4.0 / 15.0) * kPi * std::pow((4.0 / 3.0) * kPi, -5.0 / 3.0);
    CHECK(uniqueness_threshold() == doctest::Approx(expect).epsilon(1e-14));
    // scale-invariant combination mu nu^(-5/3) lambda^(2/3)
    CHECK(in_uniqueness_regime(0.5 * expect, 1.0, 1.0));
    CHECK(!in_uniqueness_regime(2.0 * expect, 1.0, 1.0));
    // a Hill vortex sits exactly at the threshold for every (lambda, a)
    const HillQuantities q = hill_quantities(HillVortex{3.0, 0.7, 0.0});
    const double combo = q.impulse * std::pow(q.circulation, -5.0 / 3.0) * std::pow(3.0, 2.0 / 3.0);
    CHECK(combo == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("gridded field is a lambda indicator with the right mass") {
    const HillVortex h{2.0, 1.0, 0.25};
    const AxiGrid g(64, 128, 2.0, -2.0, 2.0);
    const VorticityField xi = hill_field(h, g);
    CHECK(xi.strength_cap == 2.0);
    double cells = 0.0;
    for (double v : xi.values) {
        CHECK((v == 0.0 || v == 2.0));
        if (v != 0.0) cells += 1.0;
    }
    // half-plane disc area (pi/2) a^2 against cell count
    const double area = cells * g.hr() * g.hz();
    CHECK(area == doctest::Approx(kPi / 2.0).epsilon(0.02));
    CHECK_NOTHROW(xi.validate());
}

TEST_CASE("cell-averaged field carries exact boundary fractions") {
    const HillVortex h{1.0, 1.0, 0.0};
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0);
    const VorticityField xi = hill_field_averaged(h, g);

    // Boundary-cell fractions frozen from an independent high-precision
    // integration of the chord width over each cell.
    CHECK(xi.at(14, 67) == doctest::Approx(0.16555487188213942).epsilon(1e-11));
    CHECK(xi.at(23, 48) == doctest::Approx(0.99305374598422403).epsilon(1e-11));
    CHECK(xi.at(0, 71) == doctest::Approx(0.99305374598422403).epsilon(1e-11));
    // cell entirely above the pole z = 1 touches the sphere in measure zero
    CHECK(xi.at(0, 72) == 0.0);
    // interior cell is exactly lambda, and far cells exactly zero
    CHECK(xi.at(11, 62) == 1.0);
    CHECK(xi.at(40, 48) == 0.0);

    // total mass equals the half-disc area (pi/2) a^2 to roundoff
    double mass = 0.0;
    for (double v : xi.values) mass += v;
    CHECK(mass * g.hr() * g.hz() == doctest::Approx(kPi / 2.0).epsilon(1e-12));

    // agrees with the point-sampled indicator away from the boundary
    const VorticityField ind = hill_field(h, g);
    const double diag = std::hypot(g.hr(), g.hz());
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double rho = std::hypot(g.r(i), g.z(j));
            if (std::abs(rho - h.a) > diag) CHECK(xi.at(i, j) == ind.at(i, j));
        }
    CHECK_NOTHROW(xi.validate());
}

TEST_CASE("cell-averaged field sharpens the gridded functionals") {
    const HillVortex h{1.0, 1.0, 0.0};
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0);
    const QuantityRecord qa = quantities(hill_field_averaged(h, g));
    const QuantityRecord qi = quantities(hill_field(h, g));
    const HillQuantities ref = hill_quantities(h);
    const double circ_avg = std::abs(qa.circulation - ref.circulation) / ref.circulation;
    const double circ_ind = std::abs(qi.circulation - ref.circulation) / ref.circulation;
    const double imp_avg = std::abs(qa.impulse - ref.impulse) / ref.impulse;
    const double imp_ind = std::abs(qi.impulse - ref.impulse) / ref.impulse;
    CHECK(circ_avg < 1.5e-3);
    CHECK(imp_avg < 1.5e-3);
    CHECK(circ_avg < circ_ind);
    CHECK(imp_avg < imp_ind);

    // scaled and translated ball keeps the exact mass identity
    const HillVortex hs{2.0, 0.8, 0.3};
    const VorticityField xs = hill_field_averaged(hs, g);
    double mass = 0.0;
    for (double v : xs.values) mass += v;
    CHECK(mass * g.hr() * g.hz() ==
          doctest::Approx(hs.lambda * kPi / 2.0 * hs.a * hs.a).epsilon(1e-12));
}

} // TEST_SUITE
