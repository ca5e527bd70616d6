#include "doctest.h"

#include "vring/snapshot.hpp"

#include <cmath>
#include <sstream>

using namespace vring;

namespace {

VorticityField awkward_field() {
    const AxiGrid g(4, 4, 1.0, -1.0, 1.0);
    VorticityField xi = VorticityField::zeros(g, 4.0);
    xi.at(0, 0) = 0.1;
    xi.at(1, 2) = 1.0 / 3.0;
    xi.at(2, 3) = 3.141592653589793;
    xi.at(3, 1) = 5e-324; // smallest subnormal must survive the round trip
    xi.at(3, 3) = 0.30000000000000004;
    return xi;
}

} // namespace

TEST_SUITE("snapshot") {

TEST_CASE("write-read-write is byte identical") {
    const VorticityField xi = awkward_field();
    std::ostringstream first;
    write_snapshot(first, xi, "relative-vorticity", 0.125, xi.strength_cap);

    std::istringstream in(first.str());
    const FieldSnapshot snap = read_snapshot(in);
    CHECK(snap.name == "relative-vorticity");
    CHECK(snap.time == 0.125);
    REQUIRE(snap.strength_cap.has_value());
    CHECK(*snap.strength_cap == 4.0);

    const VorticityField back = snap.vorticity();
    REQUIRE(back.values.size() == xi.values.size());
    for (std::size_t k = 0; k < xi.values.size(); ++k) CHECK(back.values[k] == xi.values[k]);

    std::ostringstream second;
    write_snapshot(second, back, snap.name, snap.time, snap.strength_cap);
    CHECK(second.str() == first.str());
}

TEST_CASE("plain scalar snapshot has no cap and rejects vorticity()") {
    const AxiGrid g(4, 5, 2.0, 0.0, 1.0);
    ScalarField f = ScalarField::zeros(g);
    f.at(2, 2) = -0.75; // scalar fields may be negative
    std::ostringstream out;
    write_snapshot(out, f, "stream-function", 1.5, std::nullopt);

    std::istringstream in(out.str());
    const FieldSnapshot snap = read_snapshot(in);
    CHECK(!snap.strength_cap.has_value());
    CHECK(snap.field.at(2, 2) == -0.75);
    CHECK_THROWS_AS(snap.vorticity(), IoError);
}

TEST_CASE("malformed input raises IoError") {
    {
        std::istringstream in("");
        CHECK_THROWS_AS(read_snapshot(in), IoError);
    }
    {
        std::istringstream in("not json\n");
        CHECK_THROWS_AS(read_snapshot(in), IoError);
    }
    {
        // valid header, truncated body
        const VorticityField xi = awkward_field();
        std::ostringstream full;
        write_snapshot(full, xi, "x", 0.0, xi.strength_cap);
        const std::string text = full.str();
        std::istringstream in(text.substr(0, text.size() / 2));
        CHECK_THROWS_AS(read_snapshot(in), IoError);
    }
    CHECK_THROWS_AS(read_snapshot("/nonexistent/path/field.snap"), IoError);
}

TEST_CASE("vorticity cap violations are rejected on read") {
    const AxiGrid g(4, 4, 1.0, -1.0, 1.0);
    VorticityField xi = VorticityField::zeros(g, 1.0);
    xi.at(1, 1) = 1.0;
    std::ostringstream out;
    // claim a cap smaller than the stored values
    write_snapshot(out, static_cast<const ScalarField&>(xi), "bad", 0.0, 0.5);
    std::istringstream in(out.str());
    const FieldSnapshot snap = read_snapshot(in);
    CHECK_THROWS_AS(snap.vorticity(), DomainError);
}

} // TEST_SUITE
