#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "vring/grid.hpp"

namespace vring {

// On-disk field format: one JSON header line (grid geometry, field name,
// simulation time, optional strength cap), one CSV column header, then one
// "i,j,r,z,value" line per node in row-major order. All floating-point
// fields use shortest round-trip decimals, so write -> read -> write is
// byte-identical.
struct FieldSnapshot {
    std::string name;
    double time = 0.0;
    std::optional<double> strength_cap;
    ScalarField field;

    // Requires a strength cap in the header.
    VorticityField vorticity() const;
};

void write_snapshot(std::ostream& out, const ScalarField& field, const std::string& name,
                    double time, std::optional<double> strength_cap);
void write_snapshot(const std::string& path, const ScalarField& field, const std::string& name,
                    double time, std::optional<double> strength_cap);
void write_snapshot(const std::string& path, const VorticityField& field,
                    const std::string& name, double time);

FieldSnapshot read_snapshot(std::istream& in);
FieldSnapshot read_snapshot(const std::string& path);

} // namespace vring
