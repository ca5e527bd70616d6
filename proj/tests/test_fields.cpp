#include "doctest.h"

#include "vring/hill.hpp"
#include "vring/kernel.hpp"
#include "vring/stream.hpp"

#include <cmath>

using namespace vring;

namespace {

const KernelEval& shared_table() {
    static const KernelEval eval = KernelEval::with_table();
    return eval;
}

} // namespace

TEST_SUITE("stream") {

TEST_CASE("self-cell weight matches the exact cell integral") {
    // References from a high-precision integration of the exact kernel
    // (elliptic-integral form) times the source volume factor over the cell;
    // the analytic weight drops an O(h^2 log h) remainder, so agreement
    // tightens quadratically under cell refinement.
    CHECK(self_cell_weight(1.0, 0.1, 0.1) ==
          doctest::Approx(0.54846702907953958).epsilon(2e-3));
    CHECK(self_cell_weight(1.0, 0.01, 0.01) ==
          doctest::Approx(0.91447736258946245).epsilon(3e-5));
    CHECK(self_cell_weight(0.7, 0.05, 0.025) ==
          doctest::Approx(0.45242653388579945).epsilon(1e-3));
}

TEST_CASE("solved stream function matches the closed form away from the patch edge") {
    const HillVortex h{1.0, 1.0, 0.0};
    const AxiGrid g(64, 128, 3.0, -3.0, 3.0);
    const VorticityField xi = hill_field(h, g);
    const StreamSolver solver(g, shared_table());
    const ScalarField psi = solver.solve(xi);

    double peak = 0.0, err = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.nz; ++j) {
            const double r = g.r(i), z = g.z(j);
            const double exact = hill_stream(h, r, z);
            peak = std::max(peak, std::abs(exact));
            if (std::abs(std::hypot(r, z) - h.a) < 2.0 * g.hr()) continue;
            err = std::max(err, std::abs(psi.at(i, j) - exact));
        }
    }
    CHECK(err / peak < 2e-2);

    SUBCASE("one-shot wrapper agrees bit for bit") {
        const ScalarField direct = stream_solve(xi, shared_table());
        for (std::size_t k = 0; k < psi.values.size(); ++k)
            CHECK(direct.values[k] == psi.values[k]);
    }

    SUBCASE("thread count does not change a single byte") {
        const ScalarField threaded = solver.solve(xi, 4);
        for (std::size_t k = 0; k < psi.values.size(); ++k)
            CHECK(threaded.values[k] == psi.values[k]);
    }

    SUBCASE("axis speed approaches the interior centerline value") {
        // u_z(0, 0) = (5/2) W = 1/3 for the unit spherical vortex
        const double uz0 = uz_on_axis(psi, g.nearest_j(0.0));
        CHECK(uz0 == doctest::Approx(1.0 / 3.0).epsilon(5e-3));
    }

    SUBCASE("solved field satisfies the vorticity equation away from jumps") {
        CHECK(elliptic_residual(psi, xi) < 5e-3);
    }

    SUBCASE("radial velocity is antisymmetric about the symmetry plane") {
        const VelocityField vel = velocity(psi);
        const int jc = g.nz / 2; // nodes jc-1 and jc mirror each other
        for (int i = 0; i < g.nr; ++i)
            CHECK(std::abs(vel.ur.at(i, jc - 1) + vel.ur.at(i, jc)) < 1e-9);
    }
}

TEST_CASE("radial velocity vanishes on the symmetry plane of the exact field") {
    // odd node count puts a plane exactly at z = 0
    const AxiGrid g(64, 129, 3.0, -3.0, 3.0);
    const ScalarField psi = hill_stream_field(HillVortex{1.0, 1.0, 0.0}, g);
    const VelocityField vel = velocity(psi);
    for (int i = 0; i < g.nr; ++i) CHECK(std::abs(vel.ur.at(i, 64)) < 1e-12);
}

TEST_CASE("discrete operator annihilates the exact stream function") {
    // The conservation-form stencil is exact on r^2, r^4 and r^2 z^2, which
    // span the closed-form interior stream function, so the residual on the
    // exact field is pure roundoff inside the ball and away from the edge.
    const HillVortex h{1.0, 1.0, 0.0};
    const AxiGrid g(64, 128, 3.0, -3.0, 3.0);
    const ScalarField psi = hill_stream_field(h, g);
    const ScalarField xi_plain = hill_field(h, g); // slices to ScalarField
    const double res = elliptic_residual(psi, xi_plain, [&](double r, double z) {
        return std::hypot(r, z) < 0.7 * h.a;
    });
    CHECK(res < 1e-8);
}

TEST_CASE("solver rejects foreign grids") {
    const AxiGrid g(8, 8, 1.0, -1.0, 1.0);
    const AxiGrid g2(8, 8, 2.0, -1.0, 1.0);
    const StreamSolver solver(g, KernelEval());
    const VorticityField xi = VorticityField::zeros(g2, 1.0);
    CHECK_THROWS_AS(solver.solve(xi), DomainError);
}

TEST_CASE("axial shift resamples linearly and clips at the boundary") {
    const AxiGrid g(4, 8, 1.0, 0.0, 8.0); // hz = 1, nodes at 0.5 .. 7.5
    VorticityField xi = VorticityField::zeros(g, 10.0);
    for (int j = 0; j < g.nz; ++j) xi.at(2, j) = static_cast<double>(j);

    SUBCASE("whole-cell shift moves values exactly") {
        const VorticityField s = shift_z(xi, 2.0);
        CHECK(s.at(2, 5) == 3.0);
        CHECK(s.at(2, 2) == 0.0);
        CHECK(s.at(2, 0) == 0.0); // sampled from outside the grid
    }
    SUBCASE("half-cell shift averages neighbours") {
        const VorticityField s = shift_z(xi, 0.5);
        CHECK(s.at(2, 4) == doctest::Approx(3.5).epsilon(1e-15));
    }
    SUBCASE("zero shift is the identity") {
        const VorticityField s = shift_z(xi, 0.0);
        for (std::size_t k = 0; k < xi.values.size(); ++k)
            CHECK(s.values[k] == xi.values[k]);
    }
}

} // TEST_SUITE
