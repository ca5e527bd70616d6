#include "doctest.h"

#include "vring/functionals.hpp"
#include "vring/hill.hpp"
#include "vring/kernel.hpp"
#include "vring/rearrange.hpp"
#include "vring/stream.hpp"

#include <cmath>

using namespace vring;

namespace {

const KernelEval& shared_table() {
    static const KernelEval eval = KernelEval::with_table();
    return eval;
}

// spherical patch with a notch cut out, so rows are asymmetric
VorticityField notched_field(const AxiGrid& g) {
    VorticityField xi = hill_field(HillVortex{1.0, 1.0, 0.0}, g);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            if (std::hypot(g.r(i) - 0.6, g.z(j) - 0.4) < 0.3) xi.at(i, j) = 0.0;
    return xi;
}

} // namespace

TEST_SUITE("rearrange") {

TEST_CASE("frozen symmetric-decreasing layout") {
    // one row [0,3,1,2,0] about its middle cell becomes [0,1,3,2,0]:
    // sorted values 3,2,1,0,0 go to offsets 0,+1,-1,+2,-2 from the center
    const AxiGrid g(4, 5, 1.0, 0.0, 5.0); // z nodes at 0.5 .. 4.5
    VorticityField xi = VorticityField::zeros(g, 3.0);
    const double row[5] = {0.0, 3.0, 1.0, 2.0, 0.0};
    for (int j = 0; j < 5; ++j) xi.at(1, j) = row[j];

    const VorticityField sym = steiner_symmetrize(xi, 2.5);
    const double expect[5] = {0.0, 1.0, 3.0, 2.0, 0.0};
    for (int j = 0; j < 5; ++j) CHECK(sym.at(1, j) == expect[j]);
    for (int j = 0; j < 5; ++j) CHECK(sym.at(0, j) == 0.0);
}

TEST_CASE("off-grid offsets spill to the other side near an edge") {
    const AxiGrid g(4, 5, 1.0, 0.0, 5.0);
    VorticityField xi = VorticityField::zeros(g, 5.0);
    const double row[5] = {1.0, 2.0, 3.0, 4.0, 5.0};
    for (int j = 0; j < 5; ++j) xi.at(2, j) = row[j];
    // center snapped to the last cell: offsets 0,+1,-1,... with +1 off-grid
    const VorticityField sym = steiner_symmetrize(xi, 4.5);
    const double expect[5] = {1.0, 2.0, 3.0, 4.0, 5.0};
    for (int j = 0; j < 5; ++j) CHECK(sym.at(2, j) == expect[j]);
}

TEST_CASE("symmetrization preserves row norms bit-exactly and is idempotent") {
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0);
    const VorticityField xi = notched_field(g);
    const QuantityRecord q0 = quantities(xi);
    const VorticityField sym = steiner_symmetrize(xi, 0.1);
    const QuantityRecord q1 = quantities(sym);
    CHECK(q1.l1 == q0.l1);
    CHECK(q1.l2 == q0.l2);
    CHECK(q1.impulse == q0.impulse);
    CHECK(q1.circulation == q0.circulation);

    const VorticityField twice = steiner_symmetrize(sym, 0.1);
    for (std::size_t k = 0; k < sym.values.size(); ++k)
        CHECK(twice.values[k] == sym.values[k]);
}

TEST_CASE("symmetrization does not decrease the induced energy") {
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0);
    const VorticityField xi = notched_field(g);
    const StreamSolver solver(g, shared_table());
    const double e0 = kinetic_energy(xi, solver.solve(xi));
    const VorticityField sym = steiner_symmetrize(xi, 0.0);
    const double e1 = kinetic_energy(sym, solver.solve(sym));
    CHECK(e1 >= e0 - 1e-9 * std::max(1.0, std::abs(e0)));
}

TEST_CASE("outward shift scales values and preserves circulation") {
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0);
    const VorticityField xi = hill_field(HillVortex{1.0, 0.8, 0.0}, g);
    const QuantityRecord q0 = quantities(xi);

    SUBCASE("zero shift is the identity") {
        const VorticityField s = radial_shift(xi, 0.0);
        for (std::size_t k = 0; k < xi.values.size(); ++k)
            CHECK(s.values[k] == xi.values[k]);
    }

    SUBCASE("whole-cell shift moves ring mass exactly") {
        const double tau = 2.0 * g.hr();
        const VorticityField s = radial_shift(xi, tau);
        // value at radius r comes from r - tau scaled by (r - tau)/r
        const int i = 24;
        const double expect = xi.at(22, 48) * g.r(22) / g.r(24);
        CHECK(s.at(24, 48) == doctest::Approx(expect).epsilon(1e-14));
        const QuantityRecord q1 = quantities(s);
        CHECK(q1.circulation == doctest::Approx(q0.circulation).epsilon(1e-12));
        CHECK(q1.impulse > q0.impulse);
        CHECK(i == 24);
    }

    SUBCASE("energy strictly increases") {
        const StreamSolver solver(g, shared_table());
        const double e0 = kinetic_energy(xi, solver.solve(xi));
        const VorticityField s = radial_shift(xi, g.hr());
        const double e1 = kinetic_energy(s, solver.solve(s));
        CHECK(e1 > e0);
    }
}

TEST_CASE("impulse targeting by outward shift") {
    const AxiGrid g(48, 96, 2.0, -2.0, 2.0);
    const VorticityField xi = hill_field(HillVortex{1.0, 0.5, 0.0}, g);
    const QuantityRecord q0 = quantities(xi);

    const double target = 2.0 * q0.impulse;
    const double tau = solve_radial_shift_for_impulse(xi, target);
    CHECK(tau > 0.0);
    const QuantityRecord q1 = quantities(radial_shift(xi, tau));
    CHECK(q1.impulse == doctest::Approx(target).epsilon(1e-9));

    CHECK(solve_radial_shift_for_impulse(xi, q0.impulse) == doctest::Approx(0.0));
    CHECK_THROWS_AS(solve_radial_shift_for_impulse(xi, 0.5 * q0.impulse), DomainError);
    CHECK_THROWS_AS(solve_radial_shift_for_impulse(xi, 1e6 * q0.impulse), InfeasibleError);
}

} // TEST_SUITE
