#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "frwave/errors.hpp"

namespace frwave {

enum class ScaleFamily { PowerLaw, Exponential };

/// Tolerance for detecting the equation of state that degenerates the
/// power-law exponent, w = -(D-3)/(D-1).
inline constexpr double kDegenerateWTol = 1e-12;

/// Closed-form FRW background in conformal time.
///
/// PowerLaw:    a(tau) = (tau + tau0)^alpha
/// Exponential: a(tau) = exp(alpha * (tau + tau0)), alpha > 0
///
/// All operations take absolute tau >= 0 and add tau0 internally, so a run
/// always starts at tau = 0. `w` is recorded only when the model was built
/// from an equation of state.
struct ScaleFactorModel {
    ScaleFamily family = ScaleFamily::PowerLaw;
    double alpha = 0.0;
    double tau0 = 1.0;
    int D = 4;
    std::optional<double> w{};

    static ScaleFactorModel power_law(double alpha, double tau0, int D);
    static ScaleFactorModel exponential(double rate, double tau0, int D);
    static ScaleFactorModel from_w(int D, double w, double tau0);
};

/// Background quantities at one instant. H and Hdot come from the closed
/// form of the family, never from finite differencing.
struct CurvatureSample {
    double tau = 0.0;
    double a = 1.0;     ///< scale factor
    double H = 0.0;     ///< conformal Hubble rate, adot/a
    double Hdot = 0.0;  ///< dH/dtau
    double R = 0.0;     ///< scalar curvature
};

inline double degenerate_w(int D) { return -static_cast<double>(D - 3) / (D - 1); }

inline void validate_model(const ScaleFactorModel& m) {
    if (m.D < 4) throw InvalidModel("D must be >= 4");
    // The pole at tau + tau0 = 0 only exists for the power-law family; the
    // exponential family tolerates a zero offset.
    if (m.family == ScaleFamily::PowerLaw) {
        if (!(m.tau0 > 0.0)) throw InvalidModel("tau0 must be > 0");
    } else {
        if (m.tau0 < 0.0) throw InvalidModel("tau0 must be >= 0");
        if (!(m.alpha > 0.0))
            throw InvalidModel("exponential scale factor requires a positive rate");
    }
}

/// Power-law exponent for a single-component fluid with P = w rho.
/// Throws DegenerateEquationOfState on the line w = -(D-3)/(D-1), where the
/// background switches to the exponential family.
inline double alpha_from_w(int D, double w) {
    if (D < 4) throw InvalidModel("D must be >= 4");
    if (std::abs(w - degenerate_w(D)) <= kDegenerateWTol)
        throw DegenerateEquationOfState(
            "w = -(D-3)/(D-1): switch to the exponential scale-factor family");
    return 2.0 / ((D - 1) * (w + 1.0) - 2.0);
}

inline ScaleFactorModel ScaleFactorModel::power_law(double alpha, double tau0, int D) {
    ScaleFactorModel m{ScaleFamily::PowerLaw, alpha, tau0, D, std::nullopt};
    validate_model(m);
    return m;
}

inline ScaleFactorModel ScaleFactorModel::exponential(double rate, double tau0, int D) {
    ScaleFactorModel m{ScaleFamily::Exponential, rate, tau0, D, std::nullopt};
    validate_model(m);
    return m;
}

inline ScaleFactorModel ScaleFactorModel::from_w(int D, double w, double tau0) {
    ScaleFactorModel m{ScaleFamily::PowerLaw, alpha_from_w(D, w), tau0, D, w};
    validate_model(m);
    return m;
}

inline double scale_factor(const ScaleFactorModel& m, double tau) {
    const double s = tau + m.tau0;
    return m.family == ScaleFamily::PowerLaw ? std::pow(s, m.alpha)
                                             : std::exp(m.alpha * s);
}

inline CurvatureSample curvature_sample(const ScaleFactorModel& m, double tau) {
    const double s = tau + m.tau0;
    CurvatureSample c;
    c.tau = tau;
    if (m.family == ScaleFamily::PowerLaw) {
        c.a = std::pow(s, m.alpha);
        c.H = m.alpha / s;
        c.Hdot = -m.alpha / (s * s);
    } else {
        c.a = std::exp(m.alpha * s);
        c.H = m.alpha;
        c.Hdot = 0.0;
    }
    c.R = (m.D - 1) / (c.a * c.a) * (2.0 * c.Hdot + (m.D - 2) * c.H * c.H);
    return c;
}

/// Residual |2 - alpha * ((D-1)(1+w) - 2)| of the scaling relation that the
/// power-law exponent must satisfy. Zero exactly when the model solves the
/// single-fluid background system.
inline double friedmann_consistency(const ScaleFactorModel& m) {
    if (m.family != ScaleFamily::PowerLaw)
        throw MissingW("friedmann_consistency requires a power-law model built from w");
    if (!m.w) throw MissingW("model carries no equation-of-state parameter w");
    return std::abs(2.0 - m.alpha * ((m.D - 1) * (1.0 + *m.w) - 2.0));
}

/// Extension hook for backgrounds outside the two closed-form families:
/// a sampled scale factor with linear interpolation. Not consumed by the
/// solvers or the admissibility classifier, which require closed forms.
struct ScaleFactorTable {
    std::vector<double> tau;  ///< strictly increasing sample times
    std::vector<double> a;    ///< positive scale-factor samples
};

inline double scale_factor_from_table(const ScaleFactorTable& t, double tau) {
    if (t.tau.size() < 2 || t.tau.size() != t.a.size())
        throw InvalidModel("scale-factor table needs matching samples, >= 2 points");
    if (tau <= t.tau.front()) return t.a.front();
    if (tau >= t.tau.back()) return t.a.back();
    std::size_t hi = 1;
    while (t.tau[hi] < tau) ++hi;
    const double u = (tau - t.tau[hi - 1]) / (t.tau[hi] - t.tau[hi - 1]);
    return (1.0 - u) * t.a[hi - 1] + u * t.a[hi];
}

}  // namespace frwave
