#include "vring/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vring {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Integrand of F in the subtracted form
//   cos(t) * [ (4 sin^2(t/2) + s)^(-1/2) - s^(-1/2) ].
// The subtracted constant integrates to zero against cos(t) exactly, and
// removes the catastrophic cancellation of the raw form for s >> 1 where
// F ~ s^(-3/2) but the raw integrand is ~ s^(-1/2).
double profile_integrand(double theta, double s, double inv_sqrt_s) {
    const double sh = std::sin(0.5 * theta);
    return std::cos(theta) * (1.0 / std::sqrt(4.0 * sh * sh + s) - inv_sqrt_s);
}

struct QuadState {
    double s;
    double inv_sqrt_s;
    int max_depth;
    double err_sum = 0.0;
    bool depth_hit = false;
};

double adapt(QuadState& st, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = profile_integrand(lm, st.s, st.inv_sqrt_s);
    const double frm = profile_integrand(rm, st.s, st.inv_sqrt_s);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = (left + right - whole) / 15.0;
    if (std::abs(delta) <= tol || depth >= st.max_depth) {
        if (std::abs(delta) > tol) st.depth_hit = true;
        st.err_sum += std::abs(delta);
        return left + right + delta;
    }
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double simpson_segment(QuadState& st, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = profile_integrand(a, st.s, st.inv_sqrt_s);
    const double fm = profile_integrand(m, st.s, st.inv_sqrt_s);
    const double fb = profile_integrand(b, st.s, st.inv_sqrt_s);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adapt(st, a, b, fa, fm, fb, whole, tol, 0);
}

} // namespace

KernelEval::KernelEval(double abs_tol, int max_subdivisions)
    : abs_tol_(abs_tol), max_subdivisions_(max_subdivisions) {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
        throw DomainError("KernelEval: abs_tol must be positive");
    if (max_subdivisions < 8)
        throw DomainError("KernelEval: max_subdivisions must be >= 8");
}

KernelEval KernelEval::with_table(double abs_tol, int max_subdivisions) {
    KernelEval ke(abs_tol, max_subdivisions);
    const double build_tol = std::min(abs_tol, 1e-12);
    const int build_depth = std::max(max_subdivisions, 40);
    ke.table_ = std::make_shared<const ProfileTable>(1e-8, 1e8, 128, build_tol, build_depth);
    return ke;
}

double f_profile_direct(double s, const KernelEval& eval) {
    if (!std::isfinite(s) || s <= 0.0)
        throw DomainError("f_profile: s must be finite and > 0");
    QuadState st{s, 1.0 / std::sqrt(s), eval.max_subdivisions()};
    // Fixed initial breakpoints concentrate work in the boundary layer of
    // width ~sqrt(s) near theta = 0 when s is small.
    const double rs = std::sqrt(s);
    double pts[6] = {0.0, std::min(0.25, rs), std::min(1.0, 8.0 * rs), 0.5 * kPi, kPi, kPi};
    std::sort(pts, pts + 5);
    double total = 0.0;
    int segments = 0;
    for (int k = 0; k < 4; ++k)
        if (pts[k + 1] > pts[k]) ++segments;
    const double seg_tol = eval.abs_tol() / segments;
    for (int k = 0; k < 4; ++k)
        if (pts[k + 1] > pts[k]) total += simpson_segment(st, pts[k], pts[k + 1], seg_tol);
    if (st.depth_hit && st.err_sum > eval.abs_tol())
        throw AccuracyError("f_profile: quadrature did not converge to abs_tol", total, st.err_sum);
    return total;
}

double f_profile(double s, const KernelEval& eval) {
    if (eval.has_table() && s > 0.0 && std::isfinite(s) && eval.table()->covers(s))
        return eval.table()->eval(s);
    return f_profile_direct(s, eval);
}

double f_small_asymptote(double s) { return 0.5 * std::log(1.0 / s) + std::log(8.0) - 2.0; }

double f_large_asymptote(double s) { return 0.5 * kPi * std::pow(s, -1.5); }

ProfileTable::ProfileTable(double s_min, double s_max, int points_per_decade,
                           double abs_tol, int max_subdivisions)
    : s_min_(s_min), s_max_(s_max) {
    if (!(s_min > 0.0) || !(s_max > s_min))
        throw DomainError("ProfileTable: need 0 < s_min < s_max");
    if (points_per_decade < 8)
        throw DomainError("ProfileTable: need >= 8 points per decade");
    const double decades = std::log10(s_max / s_min);
    const int n = static_cast<int>(std::lround(decades * points_per_decade)) + 1;
    x0_ = std::log(s_min);
    dx_ = (std::log(s_max) - x0_) / (n - 1);
    f_.resize(n);
    KernelEval quad(abs_tol, max_subdivisions);
    for (int k = 0; k < n; ++k)
        f_[k] = f_profile_direct(std::exp(x0_ + k * dx_), quad);

    // Fritsch-Butland limited slopes: the interpolant stays monotone wherever
    // the data are (F is strictly decreasing, so everywhere).
    d_.assign(n, 0.0);
    std::vector<double> delta(n - 1);
    for (int k = 0; k + 1 < n; ++k) delta[k] = (f_[k + 1] - f_[k]) / dx_;
    d_[0] = delta[0];
    d_[n - 1] = delta[n - 2];
    for (int k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0)
            d_[k] = 0.0;
        else
            d_[k] = 2.0 * delta[k - 1] * delta[k] / (delta[k - 1] + delta[k]);
    }
}

double ProfileTable::eval(double s) const {
    const double x = std::log(s);
    int k = static_cast<int>(std::floor((x - x0_) / dx_));
    k = std::clamp(k, 0, static_cast<int>(f_.size()) - 2);
    const double t = (x - (x0_ + k * dx_)) / dx_;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * f_[k] + h10 * dx_ * d_[k] + h01 * f_[k + 1] + h11 * dx_ * d_[k + 1];
}

double green(double r, double z, double r2, double z2, const KernelEval& eval) {
    if (!std::isfinite(r) || !std::isfinite(z) || !std::isfinite(r2) || !std::isfinite(z2))
        throw DomainError("green: inputs must be finite");
    if (r < 0.0 || r2 < 0.0)
        throw DomainError("green: radii must be >= 0");
    // Canonical argument order makes the symmetry green(p,q) == green(q,p)
    // hold bit-exactly, not just mathematically.
    if (r2 < r || (r2 == r && z2 < z)) {
        std::swap(r, r2);
        std::swap(z, z2);
    }
    if (r == 0.0) return 0.0;
    const double dr = r - r2, dz = z - z2;
    const double t2 = dr * dr + dz * dz;
    if (t2 == 0.0)
        throw SingularityError("green: coincident points");
    const double s = t2 / (r * r2);
    return std::sqrt(r * r2) / (2.0 * kPi) * f_profile(s, eval);
}

namespace {

// sup_s F(s) * s^tau on tau nodes 0.01, 0.02, ..., 1.50, each multiplied by
// a 1.05 safety factor. Frozen from tools/calibrate_kernel_bound output.
constexpr int kBoundNodes = 150;
constexpr double kBoundTauStep = 0.01;
extern const double kBoundC[kBoundNodes];
const double kBoundC[kBoundNodes] = {
#include "kernel_bound_table.inc"
};

} // namespace

double green_upper_bound(double r, double z, double r2, double z2, double tau) {
    if (!std::isfinite(r) || !std::isfinite(z) || !std::isfinite(r2) || !std::isfinite(z2))
        throw DomainError("green_upper_bound: inputs must be finite");
    if (r < 0.0 || r2 < 0.0)
        throw DomainError("green_upper_bound: radii must be >= 0");
    if (!(tau >= 0.01 && tau <= 1.5))
        throw DomainError("green_upper_bound: tau must lie in [0.01, 1.5]");
    const double dr = r - r2, dz = z - z2;
    const double t2 = dr * dr + dz * dz;
    if (t2 == 0.0) return std::numeric_limits<double>::infinity();
    int lo = static_cast<int>(std::floor((tau - 0.01) / kBoundTauStep));
    lo = std::clamp(lo, 0, kBoundNodes - 1);
    const int hi = std::min(lo + 1, kBoundNodes - 1);
    const double c = std::max(kBoundC[lo], kBoundC[hi]);
    return c * std::pow(r * r2, tau + 0.5) / std::pow(t2, tau);
}

} // namespace vring
