// Sweep tool that regenerates the frozen constants in
// src/kernel_bound_table.inc: for each tau node it computes
// sup_s F(s) * s^tau by a log-spaced scan plus golden-section refinement,
// then applies a 1.05 safety factor.
//
// Usage: calibrate_kernel_bound > kernel_bound_table.inc

#include <cmath>
#include <cstdio>
#include <vector>

#include "vring/kernel.hpp"

namespace {

double objective(double s, double tau, const vring::KernelEval& ke) {
    return vring::f_profile_direct(s, ke) * std::pow(s, tau);
}

// Maximizes objective over [a, b] in log-s coordinates.
double golden_max(double a, double b, double tau, const vring::KernelEval& ke) {
    const double gr = 0.6180339887498949;
    double xa = std::log(a), xb = std::log(b);
    double x1 = xb - gr * (xb - xa);
    double x2 = xa + gr * (xb - xa);
    double f1 = objective(std::exp(x1), tau, ke);
    double f2 = objective(std::exp(x2), tau, ke);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            xa = x1;
            x1 = x2;
            f1 = f2;
            x2 = xa + gr * (xb - xa);
            f2 = objective(std::exp(x2), tau, ke);
        } else {
            xb = x2;
            x2 = x1;
            f2 = f1;
            x1 = xb - gr * (xb - xa);
            f1 = objective(std::exp(x1), tau, ke);
        }
    }
    return std::max(f1, f2);
}

} // namespace

int main() {
    const vring::KernelEval ke(1e-12, 40);
    const double s_lo = 1e-8, s_hi = 1e8;
    const int per_decade = 40;
    const int n = static_cast<int>(16 * per_decade) + 1;
    std::vector<double> s(n), f(n);
    for (int k = 0; k < n; ++k) {
        s[k] = s_lo * std::pow(10.0, static_cast<double>(k) / per_decade);
        f[k] = vring::f_profile_direct(s[k], ke);
    }
    std::printf("// Generated by tools/calibrate_kernel_bound. Each entry is\n");
    std::printf("// 1.05 * sup_s F(s) * s^tau for tau = 0.01 * (index + 1).\n");
    for (int i = 0; i < 150; ++i) {
        const double tau = 0.01 * (i + 1);
        double best = 0.0;
        int arg = 0;
        for (int k = 0; k < n; ++k) {
            const double v = f[k] * std::pow(s[k], tau);
            if (v > best) {
                best = v;
                arg = k;
            }
        }
        const double a = s[std::max(0, arg - 1)];
        const double b = s[std::min(n - 1, arg + 1)];
        best = std::max(best, golden_max(a, b, tau, ke));
        std::printf("    %.17g,%s\n", 1.05 * best, (i % 10 == 9) ? "" : "");
    }
    return 0;
}
