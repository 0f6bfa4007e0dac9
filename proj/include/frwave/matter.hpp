#pragma once

#include <cmath>
#include <vector>

#include "frwave/errors.hpp"
#include "frwave/geometry.hpp"
#include "frwave/grid.hpp"

namespace frwave {

/// Monomial potential V(phi) = -(epsilon/(p+1)) phi^(p+1) with epsilon >= 0,
/// p > 0. Satisfies V(0) = 0 and V'(0) = 0 identically. For non-integer p
/// the potential is defined only for phi >= 0.
struct PotentialSpec {
    double epsilon = 0.0;
    double p = 3.0;
};

struct CouplingSpec {
    double xi = 0.0;  ///< nonminimal curvature coupling (any real)
};

inline void validate_potential(const PotentialSpec& s) {
    if (s.epsilon < 0.0) throw InvalidParameters("epsilon must be >= 0");
    if (!(s.p > 0.0)) throw InvalidParameters("p must be > 0");
}

namespace detail {

inline bool integer_power(double p) { return p == std::floor(p); }

inline double monomial(double base, double power) {
    if (base < 0.0 && !integer_power(power))
        throw NonIntegerPowerNegativeBase(
            "non-integer power of a negative field value");
    return std::pow(base, power);
}

}  // namespace detail

inline double potential(const PotentialSpec& s, double phi) {
    if (s.epsilon == 0.0) return 0.0;
    return -(s.epsilon / (s.p + 1.0)) * detail::monomial(phi, s.p + 1.0);
}

inline double potential_grad(const PotentialSpec& s, double phi) {
    if (s.epsilon == 0.0) return 0.0;
    return -s.epsilon * detail::monomial(phi, s.p);
}

/// Right-hand side of the original-frame field equation d2phi - lap(phi) = F:
///   F = -(D-2) H pi - xi (D-1) (2 Hdot + (D-2) H^2) phi + a^2 V'(phi),
/// evaluated pointwise with the background at `tau`.
inline std::vector<double> rhs_F(const ScaleFactorModel& m, const CouplingSpec& coupling,
                                 const PotentialSpec& pot, const std::vector<double>& phi,
                                 const std::vector<double>& pi, double tau) {
    if (phi.size() != pi.size())
        throw LatticeMismatch("phi and pi must share the grid shape");
    const CurvatureSample c = curvature_sample(m, tau);
    const double damp = -(m.D - 2) * c.H;
    const double curv = -coupling.xi * (m.D - 1) * (2.0 * c.Hdot + (m.D - 2) * c.H * c.H);
    const double a2 = c.a * c.a;

    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
        out[i] = damp * pi[i] + curv * phi[i] + a2 * potential_grad(pot, phi[i]);
    return out;
}

/// Coefficient of the transformed field in the weight-transformed equation:
///   h(tau) = [(D-2)/2 - 2 xi (D-1)] * [Hdot + ((D-2)/2) H^2].
inline double h_of_tau(const ScaleFactorModel& m, const CouplingSpec& coupling, double tau) {
    const CurvatureSample c = curvature_sample(m, tau);
    const double coeff = 0.5 * (m.D - 2) - 2.0 * coupling.xi * (m.D - 1);
    return coeff * (c.Hdot + 0.5 * (m.D - 2) * c.H * c.H);
}

/// Closed-form tau derivative of h (used by the sign checks; no finite
/// differencing).
inline double h_of_tau_deriv(const ScaleFactorModel& m, const CouplingSpec& coupling,
                             double tau) {
    if (m.family == ScaleFamily::Exponential) return 0.0;
    const double s = tau + m.tau0;
    const double coeff = 0.5 * (m.D - 2) - 2.0 * coupling.xi * (m.D - 1);
    const double c = m.alpha * coeff * (-1.0 + 0.5 * m.alpha * (m.D - 2));
    return -2.0 * c / (s * s * s);
}

/// Perturbation source of the transformed equation, excluding the epsilon
/// factor (the solver scales by epsilon explicitly):
///   P(tau, psi) = -a^{(D+2-(D-2)p)/2} psi^p.
inline std::vector<double> source_P(const ScaleFactorModel& m, const PotentialSpec& pot,
                                    double tau, const std::vector<double>& psi) {
    const double a = scale_factor(m, tau);
    const double apow = std::pow(a, 0.5 * (m.D + 2 - (m.D - 2) * pot.p));
    std::vector<double> out(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        out[i] = -apow * detail::monomial(psi[i], pot.p);
    return out;
}

/// Frame map psi = a^{(D-2)/2} phi with the chain-rule velocity
///   dpsi = a^{(D-2)/2} (dphi + ((D-2)/2) H phi).
inline FieldState to_transformed(const FieldState& st, const ScaleFactorModel& m) {
    if (st.frame != Frame::Original)
        throw FrameMismatch("state is already in the transformed frame");
    const CurvatureSample c = curvature_sample(m, st.tau);
    const double weight = std::pow(c.a, 0.5 * (m.D - 2));
    const double shift = 0.5 * (m.D - 2) * c.H;

    FieldState out;
    out.tau = st.tau;
    out.frame = Frame::Transformed;
    out.phi.resize(st.phi.size());
    out.pi.resize(st.pi.size());
    for (std::size_t i = 0; i < st.phi.size(); ++i) {
        out.phi[i] = weight * st.phi[i];
        out.pi[i] = weight * (st.pi[i] + shift * st.phi[i]);
    }
    return out;
}

/// Exact algebraic inverse of to_transformed.
inline FieldState from_transformed(const FieldState& st, const ScaleFactorModel& m) {
    if (st.frame != Frame::Transformed)
        throw FrameMismatch("state is not in the transformed frame");
    const CurvatureSample c = curvature_sample(m, st.tau);
    const double weight = std::pow(c.a, 0.5 * (m.D - 2));
    const double shift = 0.5 * (m.D - 2) * c.H;

    FieldState out;
    out.tau = st.tau;
    out.frame = Frame::Original;
    out.phi.resize(st.phi.size());
    out.pi.resize(st.pi.size());
    for (std::size_t i = 0; i < st.phi.size(); ++i) {
        out.phi[i] = st.phi[i] / weight;
        out.pi[i] = st.pi[i] / weight - shift * out.phi[i];
    }
    return out;
}

}  // namespace frwave
