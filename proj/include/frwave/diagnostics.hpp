#pragma once

#include <cmath>
#include <vector>

#include "frwave/errors.hpp"
#include "frwave/evolve.hpp"
#include "frwave/geometry.hpp"
#include "frwave/grid.hpp"

namespace frwave {

/// All paper-level functionals of one stored instant.
struct EnergyReport {
    double tau = 0.0;
    std::vector<double> Hk;           ///< k-order linear energy, index k
    std::vector<double> energy_norm;  ///< |phi(tau,.)|_k, index k
    double l2 = 0.0;
    double linf = 0.0;
    double decay_product = 0.0;
    double support_radius = 0.0;
};

namespace detail {

/// Isotropic energy multiplier M_k(lambda) = sum_{m<=k} |lambda|^(2m).
inline double energy_multiplier(double lambda2, int k) {
    double acc = 1.0, pw = 1.0;
    for (int m = 1; m <= k; ++m) {
        pw *= lambda2;
        acc += pw;
    }
    return acc;
}

}  // namespace detail

/// k-order linear energy, evaluated spectrally:
///   H_k = 1/2 sum_lambda M_k(lambda) (|pi_hat|^2 + |lambda|^2 |phi_hat|^2) w
/// with M_k = sum_{m<=k} |lambda|^(2m). M_k is norm-equivalent to the
/// multi-index sum over |alpha| <= k with constants 1 <= c <= d_sim^k
/// (multinomial theorem); the exact multi-index version lives in the tests.
inline double linear_energy(const SpatialGrid& g, const FieldState& s, int k) {
    if (k < 0) throw InvalidParameters("k must be >= 0");
    const auto phi_hat = g.forward(s.phi);
    const auto pi_hat = g.forward(s.pi);
    const auto& l2 = g.lambda2();
    double acc = 0.0;
    for (std::size_t i = 0; i < l2.size(); ++i)
        acc += detail::energy_multiplier(l2[i], k) *
               (std::norm(pi_hat[i]) + l2[i] * std::norm(phi_hat[i]));
    const double weight = g.cell_volume() / static_cast<double>(g.size());
    return 0.5 * acc * weight;
}

/// Energy norm |phi|_k = ||phi||_{H^{k+1}} + ||pi||_{H^k}.
inline double energy_norm(const SpatialGrid& g, const FieldState& s, int k) {
    return sobolev_norm(g, s.phi, k + 1) + sobolev_norm(g, s.pi, k);
}

namespace detail {

inline FieldState state_difference(const FieldState& a, const FieldState& b) {
    FieldState d;
    d.tau = a.tau;
    d.frame = a.frame;
    d.phi.resize(a.phi.size());
    d.pi.resize(a.pi.size());
    for (std::size_t i = 0; i < a.phi.size(); ++i) {
        d.phi[i] = a.phi[i] - b.phi[i];
        d.pi[i] = a.pi[i] - b.pi[i];
    }
    return d;
}

}  // namespace detail

/// Sup over the shared time lattice of H_k^(1/2)[a-b] + ||phi_a - phi_b||_L2,
/// the contraction gap between two iterates.
inline double iterate_gap(const SpatialGrid& g, const Trajectory& a, const Trajectory& b,
                          int k) {
    if (a.states.size() != b.states.size())
        throw LatticeMismatch("trajectories store different numbers of states");
    double gap = 0.0;
    for (std::size_t n = 0; n < a.states.size(); ++n) {
        if (a.states[n].tau != b.states[n].tau)
            throw LatticeMismatch("trajectories do not share the time lattice");
        const FieldState d = detail::state_difference(a.states[n], b.states[n]);
        const double v = std::sqrt(linear_energy(g, d, k)) + l2_norm(g, d.phi);
        if (v > gap) gap = v;
    }
    return gap;
}

/// Decay-estimate monitor at one original-frame instant:
///   a^{(D-2)/2} ( ||phi||_{H^{k+1}} + ((D-2)/2) || H phi + pi ||_{H^k} ).
/// Boundedness of this quantity along a run is the testable content of the
/// global decay estimate.
inline double decay_product(const SpatialGrid& g, const FieldState& s,
                            const ScaleFactorModel& m, int k) {
    if (s.frame != Frame::Original)
        throw FrameMismatch("decay monitor is defined on original-frame states");
    const CurvatureSample c = curvature_sample(m, s.tau);
    std::vector<double> combo(s.phi.size());
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo[i] = c.H * s.phi[i] + s.pi[i];
    const double weight = std::pow(c.a, 0.5 * (m.D - 2));
    return weight * (sobolev_norm(g, s.phi, k + 1) +
                     0.5 * (m.D - 2) * sobolev_norm(g, combo, k));
}

inline std::vector<double> decay_monitor(const SpatialGrid& g, const Trajectory& traj,
                                         const ScaleFactorModel& m, int k) {
    std::vector<double> series;
    series.reserve(traj.states.size());
    for (const auto& s : traj.states) series.push_back(decay_product(g, s, m, k));
    return series;
}

/// Radius of the smallest ball around the box center outside which both
/// |phi| and |pi| stay <= threshold. Distances use the minimal image, so the
/// largest possible radius is sqrt(d_sim) * L/2.
inline double support_radius(const SpatialGrid& g, const FieldState& s, double threshold) {
    if (!(threshold > 0.0)) throw InvalidParameters("threshold must be > 0");
    g.check_shape(s.phi.size());
    const int n = g.points_per_axis();
    const double c = g.length() / 2.0;
    double r2max = 0.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        if (std::abs(s.phi[flat]) <= threshold && std::abs(s.pi[flat]) <= threshold)
            continue;
        double r2 = 0.0;
        std::size_t rem = flat;
        for (int ax = g.dim() - 1; ax >= 0; --ax) {
            const int idx = static_cast<int>(rem % n);
            rem /= n;
            const double d = periodic_delta(g.coordinate(idx), c, g.length());
            r2 += d * d;
        }
        if (r2 > r2max) r2max = r2;
    }
    return std::sqrt(r2max);
}

inline constexpr double kSupportThreshold = 1e-10;

/// Bundle of every per-instant diagnostic, as streamed to series.csv.
/// The decay product is evaluated on the original-frame view of the state
/// (transformed states are mapped back first) with k = k_max.
inline EnergyReport energy_report(const SpatialGrid& g, const FieldState& s,
                                  const ScaleFactorModel& m, int k_max,
                                  double support_threshold = kSupportThreshold) {
    EnergyReport r;
    r.tau = s.tau;
    r.Hk.reserve(k_max + 1);
    r.energy_norm.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        r.Hk.push_back(linear_energy(g, s, k));
        r.energy_norm.push_back(energy_norm(g, s, k));
    }
    r.l2 = l2_norm(g, s.phi);
    r.linf = linf_norm(s.phi);
    const FieldState original = s.frame == Frame::Original ? s : from_transformed(s, m);
    r.decay_product = decay_product(g, original, m, k_max);
    r.support_radius = support_radius(g, s, support_threshold);
    return r;
}

}  // namespace frwave
