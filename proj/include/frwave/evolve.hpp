#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "frwave/errors.hpp"
#include "frwave/geometry.hpp"
#include "frwave/grid.hpp"
#include "frwave/matter.hpp"

namespace frwave {

enum class RunStatus { Completed, BlowUp, Error };

/// Time-ordered sequence of stored states. Stored samples are uniformly
/// spaced by dt * sample_every; every stored state is finite unless the run
/// ended in BlowUp.
struct Trajectory {
    std::vector<FieldState> states;
    double dt = 0.0;
    int sample_every = 1;
    RunStatus status = RunStatus::Completed;
    double blowup_tau = std::numeric_limits<double>::quiet_NaN();
};

struct SolverParams {
    double cfl_safety = 0.5;
    double blowup_threshold = 1e8;
    bool dealias = false;
};

inline double cfl_time_step(const SpatialGrid& g, double cfl_safety) {
    return cfl_safety * g.dx() / std::sqrt(static_cast<double>(g.dim()));
}

namespace detail {

// Acceleration dpi/dtau = lap(u) + RHS, with RHS per frame:
//   Original:    rhs_F(phi, pi)
//   Transformed: h(tau) psi + epsilon P(tau, psi)
inline std::vector<double> acceleration(const SpatialGrid& g, const ScaleFactorModel& m,
                                        const CouplingSpec& xi, const PotentialSpec& pot,
                                        Frame frame, double tau,
                                        const std::vector<double>& u,
                                        const std::vector<double>& v) {
    std::vector<double> acc = laplacian(g, u);
    if (frame == Frame::Original) {
        const std::vector<double> F = rhs_F(m, xi, pot, u, v, tau);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += F[i];
    } else {
        const double h = h_of_tau(m, xi, tau);
        if (pot.epsilon > 0.0) {
            const std::vector<double> P = source_P(m, pot, tau, u);
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] += h * u[i] + pot.epsilon * P[i];
        } else {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += h * u[i];
        }
    }
    return acc;
}

inline void check_finite(const FieldState& s, double threshold) {
    for (double v : s.phi)
        if (!std::isfinite(v) || std::abs(v) > threshold) throw BlowUpDetected(s.tau);
    for (double v : s.pi)
        if (!std::isfinite(v) || std::abs(v) > threshold) throw BlowUpDetected(s.tau);
}

}  // namespace detail

/// One classical RK4 step of the first-order system
///   dphi/dtau = pi,   dpi/dtau = lap(phi) + RHS(tau, phi, pi).
/// Stability of the RK4 + spectral pairing requires roughly
/// dt <= cfl_safety * dx / sqrt(d_sim); the step itself accepts any dt and
/// reports divergence through BlowUpDetected.
inline FieldState step_mol(const SpatialGrid& g, const FieldState& s,
                           const ScaleFactorModel& m, const CouplingSpec& xi,
                           const PotentialSpec& pot, double dt,
                           const SolverParams& opts = {}) {
    if (!(dt > 0.0)) throw InvalidParameters("dt must be > 0");
    g.check_shape(s.phi.size());
    g.check_shape(s.pi.size());

    const std::size_t n = g.size();
    const Frame fr = s.frame;
    auto axpy = [n](const std::vector<double>& base, double c,
                    const std::vector<double>& dir) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + c * dir[i];
        return out;
    };

    // k1
    const std::vector<double>& k1_phi = s.pi;
    const auto k1_pi = detail::acceleration(g, m, xi, pot, fr, s.tau, s.phi, s.pi);
    // k2
    const auto phi2 = axpy(s.phi, 0.5 * dt, k1_phi);
    const auto pi2 = axpy(s.pi, 0.5 * dt, k1_pi);
    const auto& k2_phi = pi2;
    const auto k2_pi = detail::acceleration(g, m, xi, pot, fr, s.tau + 0.5 * dt, phi2, pi2);
    // k3
    const auto phi3 = axpy(s.phi, 0.5 * dt, k2_phi);
    const auto pi3 = axpy(s.pi, 0.5 * dt, k2_pi);
    const auto& k3_phi = pi3;
    const auto k3_pi = detail::acceleration(g, m, xi, pot, fr, s.tau + 0.5 * dt, phi3, pi3);
    // k4
    const auto phi4 = axpy(s.phi, dt, k3_phi);
    const auto pi4 = axpy(s.pi, dt, k3_pi);
    const auto& k4_phi = pi4;
    const auto k4_pi = detail::acceleration(g, m, xi, pot, fr, s.tau + dt, phi4, pi4);

    FieldState out;
    out.tau = s.tau + dt;
    out.frame = fr;
    out.phi.resize(n);
    out.pi.resize(n);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.phi[i] = s.phi[i] + w * (k1_phi[i] + 2.0 * (k2_phi[i] + k3_phi[i]) + k4_phi[i]);
        out.pi[i] = s.pi[i] + w * (k1_pi[i] + 2.0 * (k2_pi[i] + k3_pi[i]) + k4_pi[i]);
    }
    if (opts.dealias) {
        out.phi = truncate_two_thirds(g, out.phi);
        out.pi = truncate_two_thirds(g, out.pi);
    }
    detail::check_finite(out, opts.blowup_threshold);
    return out;
}

/// Method-of-lines evolution over [initial.tau, initial.tau + T].
///
/// The number of steps is rounded to a whole number of sampling intervals so
/// the stored lattice stays uniform (the horizon may exceed T by less than
/// sample_every * dt). When `support_guard_radius` is given (compactly
/// supported data), the periodic box must hold the light cone:
/// radius + horizon < L/2.
inline Trajectory evolve(const SpatialGrid& g, const FieldState& initial,
                         const ScaleFactorModel& m, const CouplingSpec& xi,
                         const PotentialSpec& pot, double T, double dt,
                         int sample_every = 1, const SolverParams& opts = {},
                         std::optional<double> support_guard_radius = std::nullopt) {
    if (!(T > 0.0)) throw InvalidParameters("T must be > 0");
    if (!(dt > 0.0)) throw InvalidParameters("dt must be > 0");
    if (sample_every < 1) throw InvalidParameters("sample_every must be >= 1");

    long long steps = std::llround(T / dt);
    if (steps < 1) steps = 1;
    const long long batches = (steps + sample_every - 1) / sample_every;
    steps = batches * sample_every;
    const double horizon = static_cast<double>(steps) * dt;

    if (support_guard_radius &&
        *support_guard_radius + horizon >= g.length() / 2.0)
        throw ValidationError("wraparound: support radius + T must be < L/2");

    Trajectory traj;
    traj.dt = dt;
    traj.sample_every = sample_every;
    traj.states.reserve(static_cast<std::size_t>(batches) + 1);
    traj.states.push_back(initial);

    FieldState cur = initial;
    try {
        detail::check_finite(cur, opts.blowup_threshold);
        for (long long i = 0; i < steps; ++i) {
            cur = step_mol(g, cur, m, xi, pot, dt, opts);
            if ((i + 1) % sample_every == 0) traj.states.push_back(cur);
        }
        traj.status = RunStatus::Completed;
    } catch (const BlowUpDetected& b) {
        traj.status = RunStatus::BlowUp;
        traj.blowup_tau = b.tau;
    }
    return traj;
}

}  // namespace frwave
