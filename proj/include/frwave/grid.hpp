#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "frwave/errors.hpp"

namespace frwave {

enum class Frame { Original, Transformed };

/// Field snapshot: (tau, phi, dphi/dtau) sampled on a periodic grid.
/// `frame` records whether the pair is the original field or the
/// weight-transformed one.
struct FieldState {
    double tau = 0.0;
    std::vector<double> phi;
    std::vector<double> pi;
    Frame frame = Frame::Original;
};

namespace detail {

struct FftwPlans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~FftwPlans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
    FftwPlans() = default;
    FftwPlans(const FftwPlans&) = delete;
    FftwPlans& operator=(const FftwPlans&) = delete;
};

// The FFTW planner has global state; plan creation must be serialized.
// Execution through the new-array interface is thread safe.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

/// Periodic box [0, L)^d_sim with N points per axis and the spectral
/// machinery on top of it: wavenumber lattice lambda = 2*pi*m/L for integer
/// m in [-N/2, N/2), unnormalized forward DFT and matching inverse.
///
/// Immutable after construction; transforms may be invoked concurrently.
class SpatialGrid {
public:
    SpatialGrid(int d_sim, int N, double L) : d_(d_sim), n_(N), L_(L) {
        if (d_sim < 1 || d_sim > 3) throw InvalidGrid("d_sim must be 1, 2 or 3");
        if (N < 16) throw InvalidGrid("N must be >= 16");
        if (N % 2 != 0) throw InvalidGrid("N must be even");
        if (!(L > 0.0)) throw InvalidGrid("L must be > 0");
        total_ = 1;
        for (int i = 0; i < d_; ++i) total_ *= static_cast<std::size_t>(n_);

        lambda2_.resize(total_);
        for (std::size_t flat = 0; flat < total_; ++flat) {
            double l2 = 0.0;
            std::size_t rem = flat;
            for (int ax = d_ - 1; ax >= 0; --ax) {
                const int idx = static_cast<int>(rem % n_);
                rem /= n_;
                const double lam = wavenumber(idx);
                l2 += lam * lam;
            }
            lambda2_[flat] = l2;
        }

        plans_ = std::make_shared<detail::FftwPlans>();
        std::vector<std::complex<double>> a(total_), b(total_);
        std::vector<int> dims(d_, n_);
        std::lock_guard<std::mutex> lock(detail::planner_mutex());
        plans_->fwd = fftw_plan_dft(d_, dims.data(),
                                    reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(b.data()),
                                    FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_->bwd = fftw_plan_dft(d_, dims.data(),
                                    reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(b.data()),
                                    FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plans_->fwd || !plans_->bwd) throw InvalidGrid("FFT planning failed");
    }

    int dim() const { return d_; }
    int points_per_axis() const { return n_; }
    std::size_t size() const { return total_; }
    double length() const { return L_; }
    double dx() const { return L_ / n_; }
    double cell_volume() const {
        double v = 1.0;
        for (int i = 0; i < d_; ++i) v *= dx();
        return v;
    }

    /// Integer mode number for axis index i, in [-N/2, N/2).
    int mode_number(int i) const { return i <= n_ / 2 - 1 ? i : i - n_; }
    double wavenumber(int i) const {
        return 2.0 * std::numbers::pi * mode_number(i) / L_;
    }
    /// |lambda|^2 per flattened lattice point (row-major over axes).
    const std::vector<double>& lambda2() const { return lambda2_; }

    double coordinate(int i) const { return i * dx(); }

    /// Unnormalized forward DFT: u_hat(lambda) = sum_x u(x) e^{-i lambda.x}.
    std::vector<std::complex<double>> forward(const std::vector<double>& u) const {
        check_shape(u.size());
        std::vector<std::complex<double>> in(total_), out(total_);
        for (std::size_t i = 0; i < total_; ++i) in[i] = u[i];
        fftw_execute_dft(plans_->fwd, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
        return out;
    }

    /// Inverse of forward() restricted to real fields: scales by 1/size and
    /// drops the (rounding-level) imaginary part.
    std::vector<double> backward(const std::vector<std::complex<double>>& c) const {
        check_shape(c.size());
        std::vector<std::complex<double>> in(c), out(total_);
        fftw_execute_dft(plans_->bwd, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
        std::vector<double> u(total_);
        const double scale = 1.0 / static_cast<double>(total_);
        for (std::size_t i = 0; i < total_; ++i) u[i] = out[i].real() * scale;
        return u;
    }

    void check_shape(std::size_t n) const {
        if (n != total_) throw InvalidGrid("field array does not match grid shape");
    }

private:
    int d_;
    int n_;
    double L_;
    std::size_t total_ = 0;
    std::vector<double> lambda2_;
    std::shared_ptr<detail::FftwPlans> plans_;
};

inline SpatialGrid make_grid(int d_sim, int N, double L) {
    return SpatialGrid(d_sim, N, L);
}

inline std::vector<double> laplacian(const SpatialGrid& g, const std::vector<double>& u) {
    auto spec = g.forward(u);
    const auto& l2 = g.lambda2();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= -l2[i];
    return g.backward(spec);
}

namespace detail {

inline double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace detail

/// Spectral H^k norm with multiplier (1+|lambda|^2)^k, normalized so that
/// k = 0 reproduces the grid L2 norm (sum |u|^2 dx^d)^(1/2).
inline double sobolev_norm(const SpatialGrid& g, const std::vector<double>& u, int k) {
    if (k < 0) throw InvalidParameters("Sobolev order k must be >= 0");
    const auto spec = g.forward(u);
    const auto& l2 = g.lambda2();
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        acc += detail::int_pow(1.0 + l2[i], k) * std::norm(spec[i]);
    const double weight = g.cell_volume() / static_cast<double>(g.size());
    return std::sqrt(acc * weight);
}

inline double l2_norm(const SpatialGrid& g, const std::vector<double>& u) {
    g.check_shape(u.size());
    double acc = 0.0;
    for (double v : u) acc += v * v;
    return std::sqrt(acc * g.cell_volume());
}

inline double linf_norm(const std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

/// Minimal-image displacement on the periodic axis, in [-L/2, L/2].
inline double periodic_delta(double x, double c, double L) {
    return std::remainder(x - c, L);
}

/// Smooth compactly supported initial data:
///   f(x) = amplitude * exp(-r^2 / (radius^2 - r^2)) for r < radius, else 0,
/// with r the minimal-image distance to `center`; g is identically zero.
/// f vanishes exactly outside the ball, so the support never exceeds radius.
inline std::pair<std::vector<double>, std::vector<double>> bump_initial_data(
    const SpatialGrid& g, double amplitude, double radius,
    const std::vector<double>& center) {
    if (!(radius > 0.0)) throw InvalidGrid("bump radius must be > 0");
    if (radius >= g.length() / 2.0)
        throw InvalidGrid("bump radius must be < L/2 (support would wrap)");
    if (center.size() != static_cast<std::size_t>(g.dim()))
        throw InvalidGrid("center must have d_sim components");

    std::vector<double> f(g.size(), 0.0), gz(g.size(), 0.0);
    if (amplitude == 0.0) return {f, gz};

    const int n = g.points_per_axis();
    const double r2max = radius * radius;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        double r2 = 0.0;
        std::size_t rem = flat;
        for (int ax = g.dim() - 1; ax >= 0; --ax) {
            const int idx = static_cast<int>(rem % n);
            rem /= n;
            const double d = periodic_delta(g.coordinate(idx), center[ax], g.length());
            r2 += d * d;
        }
        if (r2 < r2max) f[flat] = amplitude * std::exp(-r2 / (r2max - r2));
    }
    return {f, gz};
}

inline std::vector<double> box_center(const SpatialGrid& g) {
    return std::vector<double>(g.dim(), g.length() / 2.0);
}

/// 2/3-rule spectral truncation: zeroes every mode with any |m_axis| > N/3.
inline std::vector<double> truncate_two_thirds(const SpatialGrid& g,
                                               const std::vector<double>& u) {
    auto spec = g.forward(u);
    const int n = g.points_per_axis();
    const int cut = n / 3;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        std::size_t rem = flat;
        bool kill = false;
        for (int ax = g.dim() - 1; ax >= 0; --ax) {
            const int idx = static_cast<int>(rem % n);
            rem /= n;
            if (std::abs(g.mode_number(idx)) > cut) kill = true;
        }
        if (kill) spec[flat] = 0.0;
    }
    return g.backward(spec);
}

}  // namespace frwave
