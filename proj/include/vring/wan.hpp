#pragma once

#include <vector>

namespace vring {

// Closed-form distance-from-axis moments of balls and ball intersections,
// used to evaluate weighted L1 distances between two translating spherical
// vortex patches without any grid.

// integral of (x^2 + y^2) over the ball of radius a: (8 pi / 15) a^5.
double ball_r2_moment(double a);

// Same moment over the intersection of a radius-a ball centered at the
// origin and a radius-b ball centered at (0, 0, d), d >= 0.
double lens_r2_moment(double a, double b, double d);

// Moment of the symmetric difference of the two balls at center distance d.
double r2_symmetric_difference(double a, double b, double d);

// Divergence experiment for the moment-augmented distance: two unit-strength
// spherical vortex patches of radii a and 1 start concentric and translate
// steadily at their own speeds (2/15) a^2 and 2/15. Three series are tracked:
//
//   center_matched  w1 symmetric difference plus axial-moment mismatch with
//                   the reference recentered onto the perturbed patch. Grows
//                   exactly linearly: (8 pi/15)|a^5 - 1| (1 + (2/15) a^2 t).
//   infimum         the same quantity minimized over all relative shifts;
//                   bounded (it saturates near the sum of the two moments
//                   once the shift trade-off is lost).
//   orbital         shift-minimized w1 symmetric difference alone; constant
//                   in t.
//
// So the moment term makes the pointwise-matched distance grow without the
// underlying orbits separating, while shift-invariant distances stay bounded.
struct WanPoint {
    double t = 0.0;
    double center_matched = 0.0;
    double infimum = 0.0;
    double tau_inf = 0.0; // minimizing shift for the infimum series
    double orbital = 0.0;
};

struct WanReport {
    double a = 0.0;
    double speed = 0.0;            // (2/15) a^2
    double reference_speed = 0.0;  // 2/15
    double t0 = 0.0;               // distance at t = 0: (8 pi/15)|a^5 - 1|
    double slope = 0.0;            // d/dt of the center-matched series
    double saturation = 0.0;       // (8 pi/15)(a^5 + 1)
    std::vector<WanPoint> points;
};

// Requires 0 < |a - 1| < 1/2 so the patches are distinct but nested at t = 0.
WanReport wan_counterexample(double a, const std::vector<double>& ts);

} // namespace vring
