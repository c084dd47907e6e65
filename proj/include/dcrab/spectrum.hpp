#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "dcrab/grid.hpp"

namespace dcrab {

/// One-sided magnitude spectrum on the DFT bins omega_m = m * 2*pi/T.
struct Spectrum {
    std::vector<double> omega;
    std::vector<double> magnitude;
};

/// Full DFT of the samples scaled by dt. The last grid point of a waveform is
/// the periodic image of t = 0, so callers pass the first n-1 samples; then
/// the bin spacing is exactly 2*pi/t_end.
inline std::vector<std::complex<double>> dft_times_dt(std::span<const std::complex<double>> u,
                                                      double dt) {
    if (u.size() < 2) throw std::invalid_argument("dft_times_dt: need at least 2 samples");
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> in(u.begin(), u.end());
    std::vector<std::complex<double>> out;
    fft.fwd(out, in);
    for (auto& x : out) x *= dt;
    return out;
}

/// Signed frequency of DFT bin m (m in [0, n_bins)); bins above n_bins/2 wrap
/// to negative frequencies.
inline double dft_bin_frequency(int m, int n_bins, double dt) {
    double delta = 2.0 * std::numbers::pi / (n_bins * dt);
    int mm = 2 * m > n_bins ? m - n_bins : m;
    return mm * delta;
}

inline Spectrum waveform_spectrum(const Waveform& w) {
    int nb = w.grid.n_samples - 1;
    std::vector<std::complex<double>> u(nb);
    for (int k = 0; k < nb; ++k) u[k] = w.values[k];
    auto x = dft_times_dt(u, w.grid.dt());
    Spectrum s;
    int half = nb / 2;
    s.omega.resize(half + 1);
    s.magnitude.resize(half + 1);
    for (int m = 0; m <= half; ++m) {
        s.omega[m] = m * 2.0 * std::numbers::pi / w.grid.t_end;
        s.magnitude[m] = std::abs(x[m]);
    }
    return s;
}

/// Estimate of the continuous transform  integral u(t) e^{+i omega t} dt  at an
/// arbitrary frequency, using the same left-endpoint sum as the DFT so values
/// at bin frequencies agree with dft_times_dt (up to conjugation convention).
inline std::complex<double> fourier_transform_at(const Waveform& re, const Waveform* im,
                                                 double omega) {
    if (im && !(im->grid == re.grid))
        throw std::invalid_argument("fourier_transform_at: component grids differ");
    const double dt = re.grid.dt();
    std::complex<double> acc = 0.0;
    for (int k = 0; k + 1 < re.grid.n_samples; ++k) {
        std::complex<double> u(re.values[k], im ? im->values[k] : 0.0);
        double ph = omega * re.grid.point(k);
        acc += u * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return acc * dt;
}

/// Two-sided sampled transform of re + i*im with the physics sign convention
/// (e^{+i omega t}), ordered by ascending frequency.
struct TwoSidedSpectrum {
    std::vector<double> omega;
    std::vector<std::complex<double>> value;
};

inline TwoSidedSpectrum complex_spectrum(const Waveform& re, const Waveform& im) {
    if (!(re.grid == im.grid)) throw std::invalid_argument("complex_spectrum: component grids differ");
    int nb = re.grid.n_samples - 1;
    // The physics-sign transform of u equals the conjugated DFT of conj(u).
    std::vector<std::complex<double>> u(nb);
    for (int k = 0; k < nb; ++k) u[k] = std::complex<double>(re.values[k], -im.values[k]);
    auto x = dft_times_dt(u, re.grid.dt());
    TwoSidedSpectrum s;
    s.omega.resize(nb);
    s.value.resize(nb);
    for (int m = 0; m < nb; ++m) {
        int idx = (m + nb / 2 + 1) % nb;  // most negative frequency first
        s.omega[m] = dft_bin_frequency(idx, nb, re.grid.dt());
        s.value[m] = std::conj(x[idx]);
    }
    return s;
}

}  // namespace dcrab
