#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "dcrab/grid.hpp"

namespace dcrab {

/// Piecewise-constant pulse: value u[p] on the p-th of N equal segments of
/// [tau_begin, tau_end], zero outside.
struct PwcSequence {
    std::vector<double> u;
    double tau_begin = 0.0;
    double tau_end = 0.0;

    int segments() const { return static_cast<int>(u.size()); }
    double delta_tau() const { return (tau_end - tau_begin) / segments(); }
};

/// Converts step amplitudes A_0..A_N (the jumps at the segment boundaries)
/// into segment values by accumulation: u_k = sum_{p < k+1} A_p. The pulse
/// must return to zero, so the amplitudes must sum to zero (tolerance 1e-12).
inline PwcSequence steps_to_pwc(std::span<const double> step_amplitudes, double tau_begin,
                                double tau_end) {
    if (step_amplitudes.size() < 2)
        throw std::invalid_argument("steps_to_pwc: need at least 2 step amplitudes");
    if (!(tau_end > tau_begin)) throw std::invalid_argument("steps_to_pwc: tau_end must exceed tau_begin");
    double total = std::accumulate(step_amplitudes.begin(), step_amplitudes.end(), 0.0);
    if (std::abs(total) > 1e-12)
        throw std::invalid_argument("steps_to_pwc: step amplitudes must sum to zero");
    PwcSequence seq;
    seq.tau_begin = tau_begin;
    seq.tau_end = tau_end;
    seq.u.resize(step_amplitudes.size() - 1);
    double run = 0.0;
    for (std::size_t k = 0; k + 1 < step_amplitudes.size(); ++k) {
        run += step_amplitudes[k];
        seq.u[k] = run;
    }
    return seq;
}

/// Inverse of steps_to_pwc: the jumps A_p = u_p - u_{p-1} with u_{-1} and
/// u_{N} taken as zero. Always sums to zero by construction.
inline std::vector<double> pwc_to_steps(const PwcSequence& seq) {
    std::vector<double> a(seq.u.size() + 1);
    double prev = 0.0;
    for (std::size_t p = 0; p < seq.u.size(); ++p) {
        a[p] = seq.u[p] - prev;
        prev = seq.u[p];
    }
    a[seq.u.size()] = -prev;
    return a;
}

/// Samples the pulse on a grid. Segment p covers
/// [tau_begin + p*dtau, tau_begin + (p+1)*dtau); points outside are zero.
inline Waveform pwc_waveform(const PwcSequence& seq, const TimeGrid& grid) {
    if (seq.segments() < 1) throw std::invalid_argument("pwc_waveform: empty sequence");
    Waveform w(grid);
    double dtau = seq.delta_tau();
    for (int k = 0; k < grid.n_samples; ++k) {
        double t = grid.point(k);
        if (t < seq.tau_begin || t >= seq.tau_end) continue;
        int p = static_cast<int>((t - seq.tau_begin) / dtau);
        if (p >= seq.segments()) p = seq.segments() - 1;
        w.values[k] = seq.u[p];
    }
    return w;
}

}  // namespace dcrab
