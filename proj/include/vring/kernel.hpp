#pragma once

#include <memory>
#include <vector>

#include "vring/errors.hpp"

namespace vring {

// Kernel profile F(s) = \int_0^pi cos(t) / sqrt(2(1-cos t) + s) dt, s > 0.
// The stream-function kernel between ring (r, z) and ring (r2, z2) is
//   green = sqrt(r*r2) / (2*pi) * F(s),  s = ((r-r2)^2 + (z-z2)^2) / (r*r2).
// F is strictly positive and strictly decreasing, with
//   F(s) = (1/2) ln(1/s) + ln 8 - 2 + O(s ln(1/s))  as s -> 0,
//   F(s) = (pi/2) s^(-3/2) + O(s^(-5/2))            as s -> infinity.

// Immutable monotone-cubic interpolant of F on a log-spaced s grid.
// Values come from direct quadrature at build time; evaluation never
// mutates state, so instances are safe to share across threads.
class ProfileTable {
  public:
    ProfileTable(double s_min, double s_max, int points_per_decade,
                 double abs_tol, int max_subdivisions);

    bool covers(double s) const { return s >= s_min_ && s <= s_max_; }
    double eval(double s) const;

  private:
    double s_min_, s_max_;
    double x0_, dx_; // uniform grid in x = ln s
    std::vector<double> f_;
    std::vector<double> d_; // limited slopes df/dx
};

// Evaluation policy for the kernel profile. abs_tol > 0 is the absolute
// quadrature tolerance; max_subdivisions >= 8 bounds the adaptive bisection
// depth. The optional profile table is an opt-in fast path that must agree
// with direct quadrature to 1e-6 on its covered range; outside the covered
// range evaluation falls back to quadrature.
class KernelEval {
  public:
    explicit KernelEval(double abs_tol = 1e-10, int max_subdivisions = 24);

    // Same policy plus the interpolation fast path (built eagerly here).
    static KernelEval with_table(double abs_tol = 1e-10, int max_subdivisions = 24);

    double abs_tol() const { return abs_tol_; }
    int max_subdivisions() const { return max_subdivisions_; }
    bool has_table() const { return table_ != nullptr; }
    const ProfileTable* table() const { return table_.get(); }

  private:
    double abs_tol_;
    int max_subdivisions_;
    std::shared_ptr<const ProfileTable> table_;
};

// F(s) for s > 0. Throws DomainError for s <= 0 or non-finite s, and
// AccuracyError (carrying the best estimate) if the quadrature cannot reach
// eval.abs_tol() within the subdivision budget.
double f_profile(double s, const KernelEval& eval);

// Direct quadrature regardless of any table on `eval` (table construction
// and agreement tests use this).
double f_profile_direct(double s, const KernelEval& eval);

// Small-s and large-s closed asymptotes of F (used for sandwich tests and
// the kernel-table report).
double f_small_asymptote(double s); // (1/2) ln(1/s) + ln 8 - 2
double f_large_asymptote(double s); // (pi/2) s^(-3/2)

// Stream-function kernel. Requires r >= 0, r2 >= 0, all inputs finite;
// returns exactly 0 when either radius is 0. Throws SingularityError at
// coincident points. Arguments are canonicalized (lexicographic order of
// (r, z)) before evaluation so green(p, q) == green(q, p) bit-exactly.
double green(double r, double z, double r2, double z2, const KernelEval& eval);

// Pointwise upper bound C_tau * (r*r2)^(tau+1/2) / t^(2*tau), t = distance
// between the points. The C_tau values are frozen from a sweep of
// sup_s F(s) * s^tau (tools/calibrate_kernel_bound reproduces them); between
// table nodes the larger of the bracketing constants is used, which keeps
// the bound valid because s^tau is monotone in tau at fixed s.
// Requires tau in [0.01, 1.5] (constants below 0.01 grow like 1/tau and are
// not tabulated). Returns +infinity at coincident points.
double green_upper_bound(double r, double z, double r2, double z2, double tau);

} // namespace vring
