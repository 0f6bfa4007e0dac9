#pragma once

// Test-side oracles, independent of the closed forms they cross-check.

#include <cmath>
#include <limits>

#include "frwave/geometry.hpp"
#include "frwave/matter.hpp"

namespace frwave::testing {

namespace detail {

template <class F>
double adaptive_simpson(const F& f, double a, double m, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    if (!std::isfinite(fa + fm + fb) || !std::isfinite(whole)) return whole;
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive-Simpson integral of w(tau) = a(tau)^q over [lo, hi].
inline double simpson_block(const ScaleFactorModel& m, double q, double lo, double hi) {
    auto f = [&](double tau) { return std::pow(scale_factor(m, tau), q); };
    const double mid = 0.5 * (lo + hi);
    const double fa = f(lo), fm = f(mid), fb = f(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    if (!std::isfinite(whole)) return whole;
    const double tol = 1e-12 * (std::abs(whole) + 1e-300);
    return detail::adaptive_simpson(f, lo, mid, hi, fa, fm, fb, whole, tol, 48);
}

struct QuadratureResult {
    bool converges = false;
    double value = std::numeric_limits<double>::infinity();
};

/// Numerical verdict on A(tau0) = int_0^inf a^{(D+2-(D-2)p)/2} dtau by dyadic
/// blocks. The tail is summed geometrically once the per-doubling block
/// ratio has stabilized (Aitken-extrapolated, since the ratio approaches its
/// limit geometrically); growth or a persistent ratio >= 1 means divergence.
/// No use is made of the closed-form convergence rule.
inline QuadratureResult quadrature_a_integral(const ScaleFactorModel& m, double p) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const double q = 0.5 * (m.D + 2 - (m.D - 2) * p);
    const double u0 = std::max(1.0, 2.0 * m.tau0);

    double total = simpson_block(m, q, 0.0, u0);
    if (!std::isfinite(total)) return {false, kInf};

    double lo = u0;
    double prev_block = 0.0;
    double prev_ratio = std::numeric_limits<double>::quiet_NaN();
    int grew = 0;
    for (int it = 0; it < 200; ++it) {
        const double block = simpson_block(m, q, lo, 2.0 * lo);
        lo *= 2.0;
        total += block;
        if (!std::isfinite(total)) return {false, kInf};
        if (std::abs(block) <= 1e-14 * (1.0 + std::abs(total))) return {true, total};

        if (it > 0 && prev_block > 0.0) {
            const double ratio = block / prev_block;
            grew = ratio >= 1.0 ? grew + 1 : 0;
            if (grew >= 2) return {false, kInf};
            if (std::isfinite(prev_ratio)) {
                const double drift = ratio - prev_ratio;
                const double limit = ratio + drift;  // geometric approach, factor 1/2
                if (std::abs(drift) <= 1e-9 + 1e-6 * std::abs(1.0 - ratio) &&
                    limit < 1.0) {
                    return {true, total + block * limit / (1.0 - limit)};
                }
            }
            prev_ratio = ratio;
        }
        prev_block = block;
    }
    return {false, kInf};
}

/// Sampled verdict on the sign conditions h <= 0, dh/dtau >= 0 over a
/// log-spaced tau grid (the derivative is checked as monotonicity of the
/// samples).
inline bool sampled_assumption1(const ScaleFactorModel& m, const CouplingSpec& xi,
                                int samples = 1000) {
    double prev = -std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (int i = 0; i < samples; ++i) {
        const double tau = std::pow(10.0, -3.0 + 6.0 * i / (samples - 1.0));
        const double h = h_of_tau(m, xi, tau);
        scale = std::max(scale, std::abs(h));
        if (h > 1e-13 * scale) return false;
        if (h < prev - 1e-13 * scale) return false;
        prev = h;
    }
    return true;
}

}  // namespace frwave::testing
