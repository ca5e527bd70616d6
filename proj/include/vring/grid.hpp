#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vring/errors.hpp"

namespace vring {

// Cell-centered grid on the half-plane rectangle (0, r_max) x (z_min, z_max):
// r_i = (i + 1/2) hr, z_j = z_min + (j + 1/2) hz. No node sits on the axis.
// Iteration order is row-major with the radial index outer, so a fixed-r row
// is contiguous in memory.
struct AxiGrid {
    int nr = 0;
    int nz = 0;
    double r_max = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;

    AxiGrid() = default;
    AxiGrid(int nr_, int nz_, double r_max_, double z_min_, double z_max_)
        : nr(nr_), nz(nz_), r_max(r_max_), z_min(z_min_), z_max(z_max_) {
        if (nr < 4 || nz < 4) throw DomainError("AxiGrid: nr and nz must be >= 4");
        if (!(r_max > 0.0)) throw DomainError("AxiGrid: r_max must be > 0");
        if (!(z_min < z_max)) throw DomainError("AxiGrid: need z_min < z_max");
    }

    double hr() const { return r_max / nr; }
    double hz() const { return (z_max - z_min) / nz; }
    double r(int i) const { return (i + 0.5) * hr(); }
    double z(int j) const { return z_min + (j + 0.5) * hz(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nz + j; }
    std::size_t size() const { return static_cast<std::size_t>(nr) * nz; }

    // Index of the cell-center plane nearest to zq (clamped to the grid).
    int nearest_j(double zq) const {
        int j = static_cast<int>(std::lround((zq - z_min) / hz() - 0.5));
        if (j < 0) j = 0;
        if (j > nz - 1) j = nz - 1;
        return j;
    }

    bool operator==(const AxiGrid&) const = default;
};

struct ScalarField {
    AxiGrid grid;
    std::vector<double> values;

    static ScalarField zeros(const AxiGrid& g) { return {g, std::vector<double>(g.size(), 0.0)}; }

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

// Bounded relative vorticity: 0 <= value <= strength_cap everywhere.
struct VorticityField : ScalarField {
    double strength_cap = 0.0;

    static VorticityField zeros(const AxiGrid& g, double cap) {
        if (!(cap > 0.0)) throw DomainError("VorticityField: strength cap must be > 0");
        VorticityField f;
        f.grid = g;
        f.values.assign(g.size(), 0.0);
        f.strength_cap = cap;
        return f;
    }

    static VorticityField from_values(const AxiGrid& g, double cap, std::vector<double> vals) {
        if (vals.size() != g.size())
            throw DomainError("VorticityField: value count does not match grid");
        VorticityField f;
        f.grid = g;
        f.values = std::move(vals);
        f.strength_cap = cap;
        f.validate();
        return f;
    }

    void validate() const {
        if (!(strength_cap > 0.0))
            throw DomainError("VorticityField: strength cap must be > 0");
        for (double v : values)
            if (!(v >= 0.0) || !(v <= strength_cap))
                throw DomainError("VorticityField: values must lie in [0, strength_cap]");
    }
};

} // namespace vring
