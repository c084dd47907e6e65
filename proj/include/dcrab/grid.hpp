#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dcrab {

/// Uniform time grid on [0, T] with n_samples points including both endpoints.
struct TimeGrid {
    double t_end = 0.0;
    int n_samples = 0;

    TimeGrid() = default;
    TimeGrid(double t_end_, int n_samples_) : t_end(t_end_), n_samples(n_samples_) {
        if (!(t_end > 0.0)) throw std::invalid_argument("TimeGrid: t_end must be positive");
        if (n_samples < 2) throw std::invalid_argument("TimeGrid: need at least 2 samples");
    }

    double dt() const { return t_end / (n_samples - 1); }
    double point(int k) const { return t_end * k / (n_samples - 1); }

    bool operator==(const TimeGrid& o) const {
        return t_end == o.t_end && n_samples == o.n_samples;
    }
};

/// Default sampling rule: at least 8 samples per period of the fastest
/// admissible frequency, and never fewer than 1000 points.
inline int default_grid_samples(double omega_max, double t_end) {
    if (!(omega_max > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("default_grid_samples: omega_max and t_end must be positive");
    double per_period = 8.0 * omega_max * t_end / (2.0 * std::numbers::pi);
    int n = static_cast<int>(std::ceil(per_period)) + 1;
    return n < 1000 ? 1000 : n;
}

/// A real control sampled on a time grid.
struct Waveform {
    TimeGrid grid;
    std::vector<double> values;

    Waveform() = default;
    explicit Waveform(const TimeGrid& g) : grid(g), values(g.n_samples, 0.0) {}
    Waveform(const TimeGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != g.n_samples)
            throw std::invalid_argument("Waveform: values size does not match grid");
    }
};

}  // namespace dcrab
