#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "frwave/diagnostics.hpp"
#include "frwave/errors.hpp"
#include "frwave/evolve.hpp"

namespace frwave {

/// Contraction record of a successive-approximation run. gaps[l-1] holds
/// E_{l,k}, the sup-in-time energy gap between iterates l and l-1.
struct PicardTrace {
    std::vector<double> gaps;
    int k = 0;
    bool converged = false;
    int iterations = 0;
};

struct PicardOptions {
    double blowup_threshold = 1e8;
    bool keep_iterates = false;  ///< retain every iterate (tests only; memory-heavy)
};

struct PicardResult {
    Trajectory trajectory;  ///< final iterate on the stored lattice
    PicardTrace trace;
    std::vector<Trajectory> iterates;  ///< filled when keep_iterates is set
};

namespace detail {

struct ModeSeries {
    std::vector<std::complex<double>> pos;
    std::vector<std::complex<double>> vel;
};

/// Forced-oscillator solve for one Fourier mode,
///   d2 eta + lambda2 eta = source(tau),  eta(0) = f, d eta(0) = g,
/// by variation of constants on the uniform lattice tau_n = n dt. The
/// Duhamel integral uses the trapezoid rule through running cumulants of
/// cos(w s) S(s) and sin(w s) S(s); the lambda = 0 kernel limit
/// sin(w t)/w -> t is taken analytically.
inline ModeSeries duhamel_mode(double lambda2, std::complex<double> f_hat,
                               std::complex<double> g_hat,
                               const std::vector<std::complex<double>>& source,
                               double dt) {
    const std::size_t M = source.size();
    ModeSeries out;
    out.pos.resize(M);
    out.vel.resize(M);
    if (M == 0) return out;

    if (lambda2 > 0.0) {
        const double w = std::sqrt(lambda2);
        std::complex<double> cumC = 0.0;  // int_0^tau cos(w s) S(s) ds
        std::complex<double> cumS = 0.0;  // int_0^tau sin(w s) S(s) ds
        double c_prev = 1.0, s_prev = 0.0;
        for (std::size_t n = 0; n < M; ++n) {
            const double tau = static_cast<double>(n) * dt;
            const double c = std::cos(w * tau);
            const double s = std::sin(w * tau);
            if (n > 0) {
                cumC += 0.5 * dt * (c_prev * source[n - 1] + c * source[n]);
                cumS += 0.5 * dt * (s_prev * source[n - 1] + s * source[n]);
            }
            c_prev = c;
            s_prev = s;
            out.pos[n] = c * f_hat + (s / w) * g_hat + (s * cumC - c * cumS) / w;
            out.vel[n] = -w * s * f_hat + c * g_hat + (c * cumC + s * cumS);
        }
    } else {
        std::complex<double> cum0 = 0.0;  // int_0^tau S(s) ds
        std::complex<double> cum1 = 0.0;  // int_0^tau s S(s) ds
        for (std::size_t n = 0; n < M; ++n) {
            const double tau = static_cast<double>(n) * dt;
            if (n > 0) {
                const double tp = tau - dt;
                cum0 += 0.5 * dt * (source[n - 1] + source[n]);
                cum1 += 0.5 * dt * (tp * source[n - 1] + tau * source[n]);
            }
            out.pos[n] = f_hat + tau * g_hat + (tau * cum0 - cum1);
            out.vel[n] = g_hat + cum0;
        }
    }
    return out;
}

}  // namespace detail

/// Position series of the per-mode Duhamel solve (velocity omitted).
inline std::vector<std::complex<double>> duhamel_mode_solve(
    double lambda2, std::complex<double> f_hat, std::complex<double> g_hat,
    const std::vector<std::complex<double>>& source_samples, double dt) {
    if (!(dt > 0.0)) throw InvalidParameters("dt must be > 0");
    return detail::duhamel_mode(lambda2, f_hat, g_hat, source_samples, dt).pos;
}

/// Successive-approximation solver in the original frame: iterate 0 solves
/// the free wave equation from (f, g); iterate l+1 re-solves every mode with
/// the previous iterate's nonlinearity F(phi_l, pi_l) as Duhamel source.
/// Stops when the gap E_{l,k} drops to `tol` or after l_max iterations
/// (converged flag reports which). An iterate exceeding the blow-up
/// threshold ends the run with status BlowUp.
inline PicardResult picard_solve(const SpatialGrid& g, const std::vector<double>& f,
                                 const std::vector<double>& g_data,
                                 const ScaleFactorModel& m, const CouplingSpec& xi,
                                 const PotentialSpec& pot, double T, double dt,
                                 int l_max, double tol, int k = 2,
                                 const PicardOptions& opts = {}) {
    if (!(T > 0.0)) throw InvalidParameters("T must be > 0");
    if (!(dt > 0.0)) throw InvalidParameters("dt must be > 0");
    if (l_max < 1) throw InvalidParameters("l_max must be >= 1");
    g.check_shape(f.size());
    g.check_shape(g_data.size());

    long long steps = std::llround(T / dt);
    if (steps < 1) steps = 1;
    const std::size_t M = static_cast<std::size_t>(steps) + 1;
    const std::size_t modes = g.size();

    const auto f_hat = g.forward(f);
    const auto g_hat = g.forward(g_data);
    const auto& l2 = g.lambda2();

    auto assemble = [&](const std::vector<std::vector<std::complex<double>>>& pos,
                        const std::vector<std::vector<std::complex<double>>>& vel) {
        Trajectory t;
        t.dt = dt;
        t.sample_every = 1;
        t.states.resize(M);
        for (std::size_t n = 0; n < M; ++n) {
            t.states[n].tau = static_cast<double>(n) * dt;
            t.states[n].frame = Frame::Original;
            t.states[n].phi = g.backward(pos[n]);
            t.states[n].pi = g.backward(vel[n]);
        }
        return t;
    };

    // Time-major spectra of the current iterate.
    std::vector<std::vector<std::complex<double>>> pos(M), vel(M);
    for (std::size_t n = 0; n < M; ++n) {
        pos[n].resize(modes);
        vel[n].resize(modes);
    }

    // Iterate 0: homogeneous solution, mode by mode.
    {
        const std::vector<std::complex<double>> zero(M, 0.0);
        for (std::size_t j = 0; j < modes; ++j) {
            const auto series = detail::duhamel_mode(l2[j], f_hat[j], g_hat[j], zero, dt);
            for (std::size_t n = 0; n < M; ++n) {
                pos[n][j] = series.pos[n];
                vel[n][j] = series.vel[n];
            }
        }
    }

    PicardResult result;
    result.trace.k = k;
    Trajectory current = assemble(pos, vel);
    if (opts.keep_iterates) result.iterates.push_back(current);

    std::vector<std::vector<std::complex<double>>> src(M);
    for (int l = 1; l <= l_max; ++l) {
        // Source F of the previous iterate on the stored lattice.
        for (std::size_t n = 0; n < M; ++n) {
            const auto& st = current.states[n];
            src[n] = g.forward(rhs_F(m, xi, pot, st.phi, st.pi, st.tau));
        }
        std::vector<std::complex<double>> series_in(M);
        for (std::size_t j = 0; j < modes; ++j) {
            for (std::size_t n = 0; n < M; ++n) series_in[n] = src[n][j];
            const auto series = detail::duhamel_mode(l2[j], f_hat[j], g_hat[j], series_in, dt);
            for (std::size_t n = 0; n < M; ++n) {
                pos[n][j] = series.pos[n];
                vel[n][j] = series.vel[n];
            }
        }
        Trajectory next = assemble(pos, vel);

        for (const auto& st : next.states) {
            bool bad = false;
            for (double v : st.phi)
                if (!std::isfinite(v) || std::abs(v) > opts.blowup_threshold) bad = true;
            for (double v : st.pi)
                if (!std::isfinite(v) || std::abs(v) > opts.blowup_threshold) bad = true;
            if (bad) {
                next.status = RunStatus::BlowUp;
                next.blowup_tau = st.tau;
                break;
            }
        }

        result.trace.iterations = l;
        if (next.status == RunStatus::BlowUp) {
            current = std::move(next);
            if (opts.keep_iterates) result.iterates.push_back(current);
            break;
        }

        const double gap = iterate_gap(g, next, current, k);
        result.trace.gaps.push_back(gap);
        current = std::move(next);
        if (opts.keep_iterates) result.iterates.push_back(current);

        if (gap <= tol) {
            result.trace.converged = true;
            break;
        }
    }

    result.trajectory = std::move(current);
    return result;
}

}  // namespace frwave
