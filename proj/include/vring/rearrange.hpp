#pragma once

#include "vring/grid.hpp"

namespace vring {

// Axial Steiner symmetrization. Each fixed-r row is rearranged so its values
// decrease symmetrically away from the cell plane nearest z_center: walking
// the offsets 0, +1, -1, +2, -2, ... from the snapped center cell, the sorted
// row values are placed into the positions that land on the grid (off-grid
// offsets are skipped, so near an edge the surplus continues on the other
// side). Every row keeps its exact multiset of values, so row-rearrangement
// invariants survive bit-exactly, and the induced kinetic energy does not
// decrease.
VorticityField steiner_symmetrize(const VorticityField& xi, double z_center);

// Outward radial rearrangement by tau >= 0:
//   xi_tau(r, z) = ((r - tau)/r) xi(r - tau, z),  zero for r <= tau,
// with xi sampled by linear interpolation between node radii and extended by
// its first-row value down to the axis. The prefactor makes the push
// mass-preserving per cell pair (the products r*xi translate in r), so when
// tau is a whole number of radial cells circulation and impulse moments shift
// exactly and kinetic energy strictly increases for nonzero fields.
VorticityField radial_shift(const VorticityField& xi, double tau);

// Finds tau >= 0 with impulse(radial_shift(xi, tau)) = target by bisection on
// a doubling bracket. Throws DomainError if target is below the current
// impulse and InfeasibleError if the target cannot be reached before the
// support leaves the grid.
double solve_radial_shift_for_impulse(const VorticityField& xi, double target,
                                      double rel_tol = 1e-12);

} // namespace vring
