#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>

#include "dcrab/basis.hpp"
#include "dcrab/grid.hpp"
#include "dcrab/spectrum.hpp"

namespace dcrab {

/// Two-channel pulse whose complex spectrum F[I + iQ] has a node at the
/// suppressed transition frequency delta0. Both channels share one grid and
/// the in-phase channel vanishes at the interval ends.
struct DragPulse {
    Waveform I;
    Waveform Q;
    double delta0 = 0.0;
};

namespace detail {

/// A pulse qualifies for the quadrature construction only when it is
/// time-limited; otherwise the derivative channel cannot cancel the spectrum.
inline void require_time_limited(const Waveform& f) {
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return;  // the zero pulse is trivially time-limited
    double lim = 1e-6 * peak;
    int n = f.grid.n_samples;
    if (std::abs(f.values[0]) > lim || std::abs(f.values[n - 1]) > lim)
        throw std::invalid_argument("drag_pair: pulse endpoints are not (near) zero");
}

}  // namespace detail

/// Builds the quadrature channel Q = -f'/delta0 from a sampled pulse, using
/// central differences in the interior and one-sided differences at the ends.
inline DragPulse drag_pair(const Waveform& f, double delta0) {
    if (delta0 == 0.0) throw std::invalid_argument("drag_pair: delta0 must be nonzero");
    detail::require_time_limited(f);
    const int n = f.grid.n_samples;
    const double dt = f.grid.dt();
    DragPulse p{f, Waveform(f.grid), delta0};
    auto& q = p.Q.values;
    q[0] = -(f.values[1] - f.values[0]) / (dt * delta0);
    for (int k = 1; k + 1 < n; ++k)
        q[k] = -(f.values[k + 1] - f.values[k - 1]) / (2.0 * dt * delta0);
    q[n - 1] = -(f.values[n - 1] - f.values[n - 2]) / (dt * delta0);
    return p;
}

/// One step element of a sigmoid-built pulse: amplitude times a unit rise
/// centered at `center`. The shared width sigma is passed alongside.
struct SigmoidComponent {
    double amplitude = 0.0;
    double center = 0.0;
};

/// Analytic construction for pulses assembled from sigmoid steps: the
/// derivative of each step is a Gaussian, so Q is evaluated in closed form
/// instead of by finite differences.
inline DragPulse drag_pair(const TimeGrid& grid, std::span<const SigmoidComponent> parts,
                           double sigma, double delta0) {
    if (delta0 == 0.0) throw std::invalid_argument("drag_pair: delta0 must be nonzero");
    if (!(sigma > 0.0)) throw std::invalid_argument("drag_pair: sigma must be positive");
    Waveform f(grid);
    Waveform q(grid);
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
    for (int k = 0; k < grid.n_samples; ++k) {
        double t = grid.point(k);
        double fv = 0.0;
        double dv = 0.0;
        for (const auto& c : parts) {
            fv += sigmoid_step(c.amplitude, c.center, sigma, t);
            double z = (t - c.center) / sigma;
            dv += c.amplitude * norm * std::exp(-0.5 * z * z);
        }
        f.values[k] = fv;
        q.values[k] = -dv / delta0;
    }
    detail::require_time_limited(f);
    return DragPulse{std::move(f), std::move(q), delta0};
}

/// |F[I + iQ](delta0)| relative to the spectral peak. The numerator is a
/// direct discrete integral at exactly delta0, not the nearest DFT bin, so
/// the node depth is not blurred by bin placement. Zero pulse gives 0.
inline double spectral_node_residual(const DragPulse& p) {
    if (!(p.I.grid == p.Q.grid))
        throw std::invalid_argument("spectral_node_residual: channel grids differ");
    double num = std::abs(fourier_transform_at(p.I, &p.Q, p.delta0));
    auto sp = complex_spectrum(p.I, p.Q);
    double peak = 0.0;
    for (const auto& v : sp.value) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    return num / peak;
}

}  // namespace dcrab
