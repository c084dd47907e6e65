#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dcrab/basis.hpp"
#include "dcrab/grid.hpp"
#include "dcrab/nelder_mead.hpp"
#include "dcrab/rng.hpp"

namespace dcrab {

/// Number of random superparameter draws that realises n_opt optimisation
/// parameters for the given basis. Fourier elements carry two amplitudes, so
/// n_opt must be even; a sigmoid dressing reserves one parameter for the
/// deterministic offset element appended after the random draws.
inline int derive_ns(BasisType type, int n_opt) {
    switch (type) {
        case BasisType::fourier:
            if (n_opt < 2 || n_opt % 2 != 0)
                throw std::invalid_argument("derive_ns: fourier needs even n_opt >= 2");
            return n_opt / 2;
        case BasisType::sinc:
            if (n_opt < 1) throw std::invalid_argument("derive_ns: sinc needs n_opt >= 1");
            return n_opt;
        case BasisType::sigmoid:
            if (n_opt < 2) throw std::invalid_argument("derive_ns: sigmoid needs n_opt >= 2");
            return n_opt - 1;
        case BasisType::piecewise:
            if (n_opt < 1) throw std::invalid_argument("derive_ns: piecewise needs n_opt >= 1");
            return n_opt;
    }
    throw std::invalid_argument("derive_ns: unknown basis type");
}

struct ChannelConfig {
    BasisSpec basis;
    int n_opt = 0;
    double initial_step = 1.0;
};

struct DcrabConfig {
    std::vector<ChannelConfig> channels;
    int max_evals = 25000;
    double fom_goal = 1e-8;
    int max_superiterations = 50;
    double si_spread_tol = 1e-6;
    int si_eval_cap = 0;  // 0 means max_evals / 10

    int total_params() const {
        int p = 0;
        for (const auto& ch : channels) p += ch.n_opt;
        return p;
    }

    int superiteration_cap() const { return si_eval_cap > 0 ? si_eval_cap : max_evals / 10; }

    void validate() const {
        if (channels.empty()) throw std::invalid_argument("DcrabConfig: no channels");
        for (const auto& ch : channels) {
            derive_ns(ch.basis.type, ch.n_opt);  // throws on a bad n_opt
            if (!(ch.initial_step > 0.0))
                throw std::invalid_argument("DcrabConfig: initial_step must be positive");
            if (ch.basis.type == BasisType::piecewise && ch.basis.segments != ch.n_opt)
                throw std::invalid_argument("DcrabConfig: piecewise needs segments == n_opt");
        }
        const int p = total_params();
        if (max_evals < p + 1)
            throw std::invalid_argument("DcrabConfig: max_evals below one simplex");
        if (superiteration_cap() < p + 1)
            throw std::invalid_argument("DcrabConfig: superiteration cap below one simplex");
        if (!(fom_goal >= 0.0)) throw std::invalid_argument("DcrabConfig: fom_goal must be >= 0");
        if (max_superiterations < 1)
            throw std::invalid_argument("DcrabConfig: max_superiterations must be >= 1");
    }
};

struct TracePoint {
    int eval = 0;  // 1-based evaluation index
    double fom = 0.0;
};

/// Outcome of one optimisation run. `improvements` holds the change points of
/// the best-so-far curve (first evaluation always included), which
/// reconstructs the full curve losslessly via best_at().
struct RunRecord {
    std::vector<TracePoint> improvements;
    int evals_used = 0;
    double final_fom = 1.0;
    int superiterations = 0;
    std::uint64_t seed = 0;
    std::vector<Waveform> final_pulses;
    bool failed = false;
    std::string error;

    double best_at(int eval_index) const {
        if (eval_index < 1 || improvements.empty() || eval_index < improvements.front().eval)
            throw std::out_of_range("best_at: before first recorded evaluation");
        double best = improvements.front().fom;
        for (const auto& tp : improvements) {
            if (tp.eval > eval_index) break;
            best = tp.fom;
        }
        return best;
    }

    std::optional<int> converged_at(double threshold) const {
        for (const auto& tp : improvements)
            if (tp.fom <= threshold) return tp.eval;
        return std::nullopt;
    }
};

using FigureOfMerit = std::function<double(std::span<const Waveform>)>;

/// Superiteration loop: each round draws fresh superparameters per channel,
/// runs the simplex search over all channels' dressing amplitudes jointly
/// (started from zero, so the incumbent pulse is a vertex of every search),
/// and freezes the best dressing found into the incumbent. Stops once the
/// goal, the evaluation budget, or the superiteration limit is reached.
inline RunRecord run_dcrab(const FigureOfMerit& fom, const DcrabConfig& config,
                           const TimeGrid& grid, std::uint64_t seed) {
    config.validate();
    const int n_channels = static_cast<int>(config.channels.size());
    const int n_params = config.total_params();

    RunRecord rec;
    rec.seed = seed;
    RandomStream rng(seed);

    std::vector<Waveform> incumbent(n_channels, Waveform(grid));
    std::vector<Waveform> work(n_channels, Waveform(grid));

    auto record_eval = [&](double value) {
        ++rec.evals_used;
        if (rec.improvements.empty() || value < rec.improvements.back().fom)
            rec.improvements.push_back({rec.evals_used, value});
    };

    try {
        for (int si = 0; si < config.max_superiterations; ++si) {
            const int remaining = config.max_evals - rec.evals_used;
            if (remaining < n_params + 1) break;

            std::vector<Dressing> dressings;
            std::vector<DressingMatrix> matrices;
            dressings.reserve(n_channels);
            matrices.reserve(n_channels);
            for (const auto& ch : config.channels) {
                dressings.push_back(
                    Dressing::random(ch.basis, derive_ns(ch.basis.type, ch.n_opt), grid.t_end, rng));
                matrices.emplace_back(dressings.back(), grid);
            }

            auto objective = [&](std::span<const double> p) {
                std::size_t off = 0;
                for (int c = 0; c < n_channels; ++c) {
                    const std::size_t np = static_cast<std::size_t>(config.channels[c].n_opt);
                    matrices[c].assemble(incumbent[c], p.subspan(off, np), work[c]);
                    off += np;
                }
                double value = fom(work);
                record_eval(value);
                return value;
            };

            std::vector<double> x0(n_params, 0.0);
            std::vector<double> steps;
            steps.reserve(n_params);
            for (const auto& ch : config.channels)
                steps.insert(steps.end(), ch.n_opt, ch.initial_step);

            NelderMeadOptions opts;
            opts.value_spread_tol = config.si_spread_tol;
            opts.max_evals = std::min(config.superiteration_cap(), remaining);
            opts.target_value = config.fom_goal;
            NelderMeadResult nm = nelder_mead(objective, x0, steps, opts);

            std::span<const double> best(nm.best_x);
            std::size_t off = 0;
            for (int c = 0; c < n_channels; ++c) {
                const std::size_t np = static_cast<std::size_t>(config.channels[c].n_opt);
                matrices[c].assemble(incumbent[c], best.subspan(off, np), incumbent[c]);
                off += np;
            }
            rec.superiterations = si + 1;

            if (nm.reached_target) break;
            if (rec.evals_used >= config.max_evals) break;
        }
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }

    rec.final_fom =
        rec.improvements.empty() ? 1.0 : rec.improvements.back().fom;
    rec.final_pulses = std::move(incumbent);
    return rec;
}

}  // namespace dcrab
