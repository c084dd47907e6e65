#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dcrab/dcrab.hpp"
#include "dcrab/spectrum.hpp"

namespace dcrab {

/// Fraction of records whose best-so-far value crosses the threshold within
/// the first max_evals evaluations.
inline double convergence_probability(std::span<const RunRecord> records, double threshold,
                                      int max_evals) {
    if (records.empty()) throw std::invalid_argument("convergence_probability: no records");
    long converged = 0;
    for (const auto& rec : records) {
        auto c = rec.converged_at(threshold);
        if (c && *c <= max_evals) ++converged;
    }
    return static_cast<double>(converged) / static_cast<double>(records.size());
}

/// Median first-crossing evaluation index over the converged records, taking
/// the lower of the two central order statistics for even counts. Absent when
/// nothing converged.
inline std::optional<int> convergence_period(std::span<const RunRecord> records,
                                             double threshold) {
    std::vector<int> crossings;
    for (const auto& rec : records) {
        auto c = rec.converged_at(threshold);
        if (c) crossings.push_back(*c);
    }
    if (crossings.empty()) return std::nullopt;
    std::sort(crossings.begin(), crossings.end());
    return crossings[(crossings.size() - 1) / 2];
}

struct PercentileTraces {
    std::vector<double> percentiles;
    // values[p][e] is the percentile of best-so-far FoM at evaluation e+1
    std::vector<std::vector<double>> values;
};

/// Pointwise nearest-rank percentiles of the best-so-far curves, each curve
/// carried forward at its final value up to max_evals.
inline PercentileTraces percentile_traces(std::span<const RunRecord> records, int max_evals,
                                          std::vector<double> percentiles = {16.0, 50.0, 84.0}) {
    if (records.empty()) throw std::invalid_argument("percentile_traces: no records");
    if (max_evals < 1) throw std::invalid_argument("percentile_traces: max_evals must be >= 1");
    const std::size_t n = records.size();
    for (const auto& rec : records)
        if (rec.improvements.empty())
            throw std::invalid_argument("percentile_traces: record without evaluations");

    PercentileTraces out;
    out.percentiles = std::move(percentiles);
    out.values.assign(out.percentiles.size(), std::vector<double>(max_evals));

    std::vector<std::size_t> cursor(n, 0);  // next improvement to apply, per record
    std::vector<double> current(n);
    std::vector<double> column(n);
    for (std::size_t r = 0; r < n; ++r) current[r] = records[r].improvements.front().fom;

    for (int e = 1; e <= max_evals; ++e) {
        for (std::size_t r = 0; r < n; ++r) {
            const auto& imp = records[r].improvements;
            while (cursor[r] < imp.size() && imp[cursor[r]].eval <= e)
                current[r] = imp[cursor[r]++].fom;
            column[r] = current[r];
        }
        std::sort(column.begin(), column.end());
        for (std::size_t p = 0; p < out.percentiles.size(); ++p) {
            double rank = std::ceil(out.percentiles[p] / 100.0 * static_cast<double>(n));
            std::size_t idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(n)));
            out.values[p][e - 1] = column[idx - 1];
        }
    }
    return out;
}

struct Histogram {
    int bin_width = 0;
    std::vector<long> counts;  // counts[k] covers eval indices [k*w+1, (k+1)*w]
};

/// Distribution of first-crossing evaluation indices among converged records.
inline Histogram convergence_histogram(std::span<const RunRecord> records, double threshold,
                                       int max_evals, int bin_width = 1250) {
    if (bin_width < 1) throw std::invalid_argument("convergence_histogram: bad bin width");
    Histogram h;
    h.bin_width = bin_width;
    h.counts.assign((max_evals + bin_width - 1) / bin_width, 0);
    for (const auto& rec : records) {
        auto c = rec.converged_at(threshold);
        if (c && *c <= max_evals) ++h.counts[(*c - 1) / bin_width];
    }
    return h;
}

struct DecadeHistogram {
    int exp_lo = -16;
    // counts[i] covers final FoM in [10^(exp_lo+i), 10^(exp_lo+i+1)); the
    // lowest bin also absorbs anything smaller, the highest bin holds 1.0
    std::vector<long> counts;
};

inline DecadeHistogram final_fom_histogram(std::span<const RunRecord> records) {
    DecadeHistogram h;
    const int n_bins = -h.exp_lo + 1;  // decades up to [1, 10)
    h.counts.assign(n_bins, 0);
    for (const auto& rec : records) {
        int e = h.exp_lo;
        if (rec.final_fom > 0.0)
            e = static_cast<int>(std::clamp(std::floor(std::log10(rec.final_fom)),
                                            static_cast<double>(h.exp_lo), 0.0));
        ++h.counts[e - h.exp_lo];
    }
    return h;
}

/// Mean one-sided magnitude spectrum of the converged final pulses, per
/// channel. Empty when nothing converged.
inline std::vector<Spectrum> average_converged_spectra(std::span<const RunRecord> records,
                                                       double threshold) {
    std::vector<Spectrum> mean;
    long converged = 0;
    for (const auto& rec : records) {
        auto c = rec.converged_at(threshold);
        if (!c) continue;
        ++converged;
        for (std::size_t ch = 0; ch < rec.final_pulses.size(); ++ch) {
            Spectrum s = waveform_spectrum(rec.final_pulses[ch]);
            if (mean.size() <= ch) {
                mean.push_back(std::move(s));
                continue;
            }
            if (s.magnitude.size() != mean[ch].magnitude.size())
                throw std::invalid_argument("average_converged_spectra: mixed grids");
            for (std::size_t k = 0; k < s.magnitude.size(); ++k)
                mean[ch].magnitude[k] += s.magnitude[k];
        }
    }
    for (auto& s : mean)
        for (double& m : s.magnitude) m /= static_cast<double>(converged);
    return mean;
}

/// Mean converged final pulse per channel. Each record's pulses enter with a
/// joint sign chosen to align with the first converged record, since the
/// problems here are invariant under global sign flips of all controls.
inline std::vector<Waveform> average_converged_pulses(std::span<const RunRecord> records,
                                                      double threshold) {
    std::vector<Waveform> mean;
    long converged = 0;
    for (const auto& rec : records) {
        auto c = rec.converged_at(threshold);
        if (!c) continue;
        ++converged;
        if (converged == 1) {
            mean = rec.final_pulses;
            continue;
        }
        double dot = 0.0;
        for (std::size_t ch = 0; ch < rec.final_pulses.size(); ++ch) {
            if (rec.final_pulses[ch].values.size() != mean[ch].values.size())
                throw std::invalid_argument("average_converged_pulses: mixed grids");
            for (std::size_t k = 0; k < mean[ch].values.size(); ++k)
                dot += mean[ch].values[k] * rec.final_pulses[ch].values[k];
        }
        const double sign = dot < 0.0 ? -1.0 : 1.0;
        for (std::size_t ch = 0; ch < rec.final_pulses.size(); ++ch)
            for (std::size_t k = 0; k < mean[ch].values.size(); ++k)
                mean[ch].values[k] += sign * rec.final_pulses[ch].values[k];
    }
    for (auto& w : mean)
        for (double& v : w.values) v /= static_cast<double>(converged);
    return mean;
}

}  // namespace dcrab
