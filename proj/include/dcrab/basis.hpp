#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dcrab/grid.hpp"
#include "dcrab/rng.hpp"

namespace dcrab {

enum class BasisType { fourier, sinc, sigmoid, piecewise };

/// Width of the Gaussian kernel whose transfer function has dropped to the
/// amplitude ratio eps_cut at omega_max: sigma = sqrt(-2 ln eps_cut) / omega_max.
inline double sigmoid_width(double omega_max, double eps_cut) {
    if (!(omega_max > 0.0)) throw std::invalid_argument("sigmoid_width: omega_max must be positive");
    if (!(eps_cut > 0.0 && eps_cut < 1.0))
        throw std::invalid_argument("sigmoid_width: eps_cut must lie in (0, 1)");
    return std::sqrt(-2.0 * std::log(eps_cut)) / omega_max;
}

/// Smallest kernel width such that a single step of amplitude A completes its
/// rise no faster than A / t_rise at the steepest point.
inline double sigmoid_rise_sigma(double t_rise) {
    if (!(t_rise > 0.0)) throw std::invalid_argument("sigmoid_rise_sigma: t_rise must be positive");
    return std::sqrt(2.0 / std::numbers::pi) * t_rise;
}

/// Describes one family of basis functions. Frequencies/positions of
/// individual elements (the randomized superparameters) live in BasisElement.
struct BasisSpec {
    BasisType type = BasisType::fourier;
    double omega_max = 0.0;   // fourier, sinc, sigmoid
    double eps_cut = 0.0;     // sigmoid
    double sigma = 0.0;       // sigmoid
    int segments = 0;         // piecewise
    double tau_begin = 0.0;   // piecewise
    double tau_end = 0.0;     // piecewise

    static BasisSpec fourier(double omega_max) {
        if (!(omega_max > 0.0)) throw std::invalid_argument("fourier basis: omega_max must be positive");
        BasisSpec b;
        b.type = BasisType::fourier;
        b.omega_max = omega_max;
        return b;
    }

    static BasisSpec sinc(double omega_max) {
        if (!(omega_max > 0.0)) throw std::invalid_argument("sinc basis: omega_max must be positive");
        BasisSpec b;
        b.type = BasisType::sinc;
        b.omega_max = omega_max;
        return b;
    }

    static BasisSpec sigmoid(double omega_max, double eps_cut = 0.2) {
        BasisSpec b;
        b.type = BasisType::sigmoid;
        b.omega_max = omega_max;
        b.eps_cut = eps_cut;
        b.sigma = sigmoid_width(omega_max, eps_cut);
        return b;
    }

    static BasisSpec piecewise(int segments, double tau_begin, double tau_end) {
        if (segments < 1) throw std::invalid_argument("piecewise basis: need at least 1 segment");
        if (!(tau_end > tau_begin)) throw std::invalid_argument("piecewise basis: tau_end must exceed tau_begin");
        BasisSpec b;
        b.type = BasisType::piecewise;
        b.segments = segments;
        b.tau_begin = tau_begin;
        b.tau_end = tau_end;
        return b;
    }

    /// Optimized amplitudes per element: 2 for fourier (sin+cos), 1 otherwise.
    int params_per_element() const { return type == BasisType::fourier ? 2 : 1; }
};

inline double sinc(double x) {
    // sin(x)/x with the removable singularity handled; NOT the normalized variant.
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

inline double sigmoid_step(double amplitude, double center, double sigma, double t) {
    if (!(sigma > 0.0)) return t < center ? 0.0 : (t == center ? 0.5 * amplitude : amplitude);
    return 0.5 * amplitude * (1.0 + std::erf((t - center) / (std::numbers::sqrt2 * sigma)));
}

/// One basis function with its superparameter fixed and its optimizable
/// amplitude(s) attached. Fourier uses params = {A_sin, A_cos}.
struct BasisElement {
    BasisSpec spec;
    double s = 0.0;
    std::array<double, 2> params{0.0, 0.0};

    int param_count() const { return spec.params_per_element(); }
};

inline double element_value(const BasisElement& e, double t) {
    switch (e.spec.type) {
        case BasisType::fourier:
            return e.params[0] * std::sin(e.s * t) + e.params[1] * std::cos(e.s * t);
        case BasisType::sinc:
            return e.params[0] * sinc(e.spec.omega_max * (t - e.s));
        case BasisType::sigmoid:
            return sigmoid_step(e.params[0], e.s, e.spec.sigma, t);
        case BasisType::piecewise: {
            double half = 0.5 * (e.spec.tau_end - e.spec.tau_begin) / e.spec.segments;
            return (t >= e.s - half && t < e.s + half) ? e.params[0] : 0.0;
        }
    }
    throw std::logic_error("element_value: unknown basis type");
}

/// Draws `count` superparameters, one uniform draw per equal-width bin of the
/// admissible range, so the result is sorted and covers the range evenly.
/// fourier: frequencies in (0, omega_max]; sinc/sigmoid: positions in [0, t_end];
/// piecewise: deterministic segment centers (count must equal spec.segments).
inline std::vector<double> sample_superparameters(const BasisSpec& spec, int count, double t_end,
                                                  RandomStream& rng) {
    if (count < 1) throw std::invalid_argument("sample_superparameters: count must be >= 1");
    std::vector<double> s(count);
    switch (spec.type) {
        case BasisType::fourier: {
            double w = spec.omega_max / count;
            for (int j = 0; j < count; ++j) s[j] = w * (j + rng.uniform01_oc());
            break;
        }
        case BasisType::sinc:
        case BasisType::sigmoid: {
            if (!(t_end > 0.0)) throw std::invalid_argument("sample_superparameters: t_end must be positive");
            double w = t_end / count;
            for (int j = 0; j < count; ++j) s[j] = w * (j + rng.uniform01());
            break;
        }
        case BasisType::piecewise: {
            if (count != spec.segments)
                throw std::invalid_argument("sample_superparameters: count must equal piecewise segment count");
            double w = (spec.tau_end - spec.tau_begin) / count;
            for (int j = 0; j < count; ++j) s[j] = spec.tau_begin + w * (j + 0.5);
            break;
        }
    }
    return s;
}

/// A concrete randomized dressing: the set of basis elements searched during
/// one superiteration. For the sigmoid basis this includes the fixed f0
/// element (a step at s = 0), stored last so its amplitude is the last
/// parameter of the flattened vector.
struct Dressing {
    std::vector<BasisElement> elements;
    bool has_f0 = false;

    int param_count() const {
        int n = 0;
        for (const auto& e : elements) n += e.param_count();
        return n;
    }

    /// n_random is the number of randomized elements; the sigmoid f0 element
    /// is appended on top of that.
    static Dressing random(const BasisSpec& spec, int n_random, double t_end, RandomStream& rng) {
        auto s = sample_superparameters(spec, n_random, t_end, rng);
        Dressing d;
        d.elements.reserve(s.size() + 1);
        for (double si : s) d.elements.push_back({spec, si, {0.0, 0.0}});
        if (spec.type == BasisType::sigmoid) {
            d.elements.push_back({spec, 0.0, {0.0, 0.0}});
            d.has_f0 = true;
        }
        return d;
    }
};

/// Evaluates the dressing with the given flattened amplitude vector on top of
/// a base waveform. Parameter order follows the element order, with the
/// fourier sin amplitude preceding the cos amplitude within an element.
inline Waveform assemble_waveform(const Waveform& base, const Dressing& dressing,
                                  std::span<const double> params, const TimeGrid& grid) {
    if (!(base.grid == grid)) throw std::invalid_argument("assemble_waveform: base waveform grid mismatch");
    if (static_cast<int>(params.size()) != dressing.param_count())
        throw std::invalid_argument("assemble_waveform: parameter count mismatch");
    Waveform out = base;
    std::size_t p = 0;
    for (const auto& e : dressing.elements) {
        BasisElement cur = e;
        cur.params[0] = params[p];
        if (cur.param_count() == 2) cur.params[1] = params[p + 1];
        p += cur.param_count();
        for (int k = 0; k < grid.n_samples; ++k) out.values[k] += element_value(cur, grid.point(k));
    }
    return out;
}

/// Basis matrix of a dressing on a grid: column j holds the response of the
/// j-th flattened parameter at unit amplitude. Built once per superiteration;
/// assembling a candidate waveform is then a single matrix-vector product.
class DressingMatrix {
  public:
    DressingMatrix(const Dressing& dressing, const TimeGrid& grid)
        : grid_(grid), columns_(grid.n_samples, dressing.param_count()) {
        int col = 0;
        for (const auto& e : dressing.elements) {
            for (int j = 0; j < e.param_count(); ++j, ++col) {
                BasisElement unit = e;
                unit.params = {0.0, 0.0};
                unit.params[j] = 1.0;
                // Guard: a degenerate sigmoid width would make the step
                // evaluation singular; clamp relative to the grid extent.
                if (unit.spec.type == BasisType::sigmoid)
                    unit.spec.sigma = std::max(unit.spec.sigma, 1e-12 * grid.t_end);
                for (int k = 0; k < grid.n_samples; ++k)
                    columns_(k, col) = element_value(unit, grid.point(k));
            }
        }
    }

    int param_count() const { return static_cast<int>(columns_.cols()); }
    const TimeGrid& grid() const { return grid_; }

    /// out = base + B * params. out may alias base.
    void assemble(const Waveform& base, std::span<const double> params, Waveform& out) const {
        if (!(base.grid == grid_)) throw std::invalid_argument("DressingMatrix: base grid mismatch");
        if (static_cast<int>(params.size()) != param_count())
            throw std::invalid_argument("DressingMatrix: parameter count mismatch");
        if (&out != &base) out = base;
        Eigen::Map<Eigen::VectorXd> v(out.values.data(), out.values.size());
        Eigen::Map<const Eigen::VectorXd> p(params.data(), params.size());
        v.noalias() += columns_ * p;
    }

  private:
    TimeGrid grid_;
    Eigen::MatrixXd columns_;
};

/// Large-N spectral magnitude bound for a sigmoid-basis pulse confined to
/// [tau_begin, tau_end] with per-sample magnitude <= a_max.
inline double sigmoid_envelope(double a_max, double tau_begin, double tau_end, double sigma,
                               double omega) {
    if (!(tau_end > tau_begin)) throw std::invalid_argument("sigmoid_envelope: tau_end must exceed tau_begin");
    return a_max * (tau_end - tau_begin) * std::exp(-0.5 * sigma * sigma * omega * omega);
}

/// Finite-N envelope: the large-N bound times a factor that interpolates from
/// sin(k)/k at low frequency to 1/|k| once k = (tau_end-tau_begin) w / (2N)
/// passes pi/2.
inline double sigmoid_envelope(double a_max, double tau_begin, double tau_end, double sigma,
                               int n_elements, double omega) {
    if (n_elements < 1) throw std::invalid_argument("sigmoid_envelope: n_elements must be >= 1");
    double k = (tau_end - tau_begin) * omega / (2.0 * n_elements);
    double factor = std::abs(k) < 0.5 * std::numbers::pi ? std::abs(sinc(k)) : 1.0 / std::abs(k);
    return sigmoid_envelope(a_max, tau_begin, tau_end, sigma, omega) * factor;
}

}  // namespace dcrab
