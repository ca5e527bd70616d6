#include "vring/wan.hpp"

#include "vring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vring {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// P(c, u) = integral_0^u (c^2 - t^2)^2 dt; odd in u.
double cap_poly(double c, double u) {
    return c * c * c * c * u - (2.0 / 3.0) * c * c * u * u * u + u * u * u * u * u / 5.0;
}

void check_radius(double a, const char* what) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError(std::string(what) + " must be finite and > 0");
}

} // namespace

double ball_r2_moment(double a) {
    check_radius(a, "ball_r2_moment: radius");
    return (8.0 * kPi / 15.0) * a * a * a * a * a;
}

double lens_r2_moment(double a, double b, double d) {
    check_radius(a, "lens_r2_moment: radius a");
    check_radius(b, "lens_r2_moment: radius b");
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("lens_r2_moment: separation must be finite and >= 0");
    if (d >= a + b) return 0.0;
    if (d <= std::abs(a - b)) return ball_r2_moment(std::min(a, b));

    // Slice the lens at the plane of the intersection circle. Below it the
    // radial extent is set by the far ball, above it by the near one.
    const double zs = (a * a - b * b + d * d) / (2.0 * d);
    const double cap_a = cap_poly(a, a) - cap_poly(a, zs);
    const double cap_b = cap_poly(b, zs - d) + cap_poly(b, b);
    return (kPi / 2.0) * (cap_a + cap_b);
}

double r2_symmetric_difference(double a, double b, double d) {
    return ball_r2_moment(a) + ball_r2_moment(b) - 2.0 * lens_r2_moment(a, b, d);
}

WanReport wan_counterexample(double a, const std::vector<double>& ts) {
    check_radius(a, "wan_counterexample: radius");
    const double gap = std::abs(a - 1.0);
    if (!(gap > 0.0) || !(gap < 0.5))
        throw DomainError("wan_counterexample: radius must satisfy 0 < |a - 1| < 1/2");

    WanReport rep;
    rep.a = a;
    rep.speed = (2.0 / 15.0) * a * a;
    rep.reference_speed = 2.0 / 15.0;
    const double m_a = ball_r2_moment(a);
    const double m_1 = ball_r2_moment(1.0);
    rep.t0 = std::abs(m_a - m_1);
    rep.slope = rep.t0 * rep.speed;
    rep.saturation = m_a + m_1;

    for (double t : ts) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("wan_counterexample: times must be finite and >= 0");
        WanPoint p;
        p.t = t;
        const double ca = rep.speed * t;           // center of the perturbed patch
        const double c1 = rep.reference_speed * t; // center of the reference

        // Shift the reference by tau and measure the moment-augmented
        // distance: w1 symmetric difference of the patches plus the mismatch
        // of axial moments m * center.
        auto dist_at = [&](double tau) {
            const double sep = std::abs(ca - (c1 + tau));
            return r2_symmetric_difference(a, 1.0, sep) + std::abs(m_a * ca - m_1 * (c1 + tau));
        };

        // Center-matched: the reference is recentered onto the perturbed
        // patch, so only the moment mismatch survives the translation.
        p.center_matched = dist_at(ca - c1);

        // True infimum over shifts: scan between the two candidate structure
        // points (centers aligned / moments matched), then refine by golden
        // section inside the best bracket.
        const double tau_center = ca - c1;
        const double tau_moment = m_a * ca / m_1 - c1;
        const double lo0 = std::min(tau_center, tau_moment) - 1.0;
        const double hi0 = std::max(tau_center, tau_moment) + 1.0;
        const int n_scan = 800;
        double best_tau = lo0, best = dist_at(lo0);
        for (int k = 1; k <= n_scan; ++k) {
            const double tau = lo0 + (hi0 - lo0) * k / n_scan;
            const double v = dist_at(tau);
            if (v < best) {
                best = v;
                best_tau = tau;
            }
        }
        const double step = (hi0 - lo0) / n_scan;
        double lo = best_tau - step, hi = best_tau + step;
        const double gr = 0.61803398874989484820458683436564;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = dist_at(x1), f2 = dist_at(x2);
        while (hi - lo > 1e-12 * std::max(1.0, std::abs(best_tau))) {
            if (f1 <= f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = dist_at(x1);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = dist_at(x2);
            }
        }
        if (f1 <= f2 && f1 < best) { best = f1; best_tau = x1; }
        if (f2 < f1 && f2 < best) { best = f2; best_tau = x2; }
        p.infimum = best;
        p.tau_inf = best_tau;

        // Orbital: drop the moment term; the minimum over shifts is attained
        // with the centers aligned.
        {
            auto orb_at = [&](double tau) {
                return r2_symmetric_difference(a, 1.0, std::abs(ca - (c1 + tau)));
            };
            double olo = tau_center - 1.0, ohi = tau_center + 1.0;
            double ox1 = ohi - gr * (ohi - olo), ox2 = olo + gr * (ohi - olo);
            double of1 = orb_at(ox1), of2 = orb_at(ox2);
            while (ohi - olo > 1e-13) {
                if (of1 <= of2) {
                    ohi = ox2; ox2 = ox1; of2 = of1;
                    ox1 = ohi - gr * (ohi - olo);
                    of1 = orb_at(ox1);
                } else {
                    olo = ox1; ox1 = ox2; of1 = of2;
                    ox2 = olo + gr * (ohi - olo);
                    of2 = orb_at(ox2);
                }
            }
            p.orbital = std::min({orb_at(tau_center), of1, of2});
        }

        rep.points.push_back(p);
    }
    return rep;
}

} // namespace vring
