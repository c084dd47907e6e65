#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace dcrab {

struct NelderMeadOptions {
    double value_spread_tol = 1e-6;
    int max_evals = 1000;
    double target_value = -std::numeric_limits<double>::infinity();
};

struct NelderMeadResult {
    std::vector<double> best_x;
    double best_value = std::numeric_limits<double>::infinity();
    int evals_used = 0;
    std::vector<double> values;  // every objective value, in evaluation order
    bool reached_target = false;
};

/// Derivative-free simplex search with the standard coefficients
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). The initial
/// simplex is x0 plus one vertex displaced by step[i] along each axis; x0 is
/// evaluated first. Stops on relative value spread, the evaluation cap, or a
/// target value; the best point seen is returned in all cases.
inline NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                                    std::span<const double> x0, std::span<const double> step,
                                    const NelderMeadOptions& options) {
    const int n = static_cast<int>(x0.size());
    if (n < 1) throw std::invalid_argument("nelder_mead: need at least one dimension");
    if (static_cast<int>(step.size()) != n)
        throw std::invalid_argument("nelder_mead: step size must match dimension");
    if (options.max_evals < n + 1)
        throw std::invalid_argument("nelder_mead: eval cap too small to build a simplex");

    NelderMeadResult res;
    bool stop = false;

    auto eval = [&](const std::vector<double>& x) -> double {
        double f = objective(x);
        ++res.evals_used;
        res.values.push_back(f);
        if (f < res.best_value) {
            res.best_value = f;
            res.best_x = x;
        }
        if (f <= options.target_value) {
            res.reached_target = true;
            stop = true;
        }
        if (res.evals_used >= options.max_evals) stop = true;
        return f;
    };

    struct Vertex {
        std::vector<double> x;
        double f;
        long seq;  // insertion order; breaks value ties deterministically
    };
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    long seq = 0;

    std::vector<double> base(x0.begin(), x0.end());
    simplex.push_back({base, eval(base), seq++});
    for (int i = 0; i < n && !stop; ++i) {
        std::vector<double> v = base;
        v[i] += step[i];
        simplex.push_back({v, eval(v), seq++});
    }

    auto order = [&]() {
        std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) {
            if (a.f != b.f) return a.f < b.f;
            return a.seq < b.seq;
        });
    };

    while (!stop && static_cast<int>(simplex.size()) == n + 1) {
        order();
        double fl = simplex.front().f, fh = simplex.back().f;
        if (fh - fl <= options.value_spread_tol * std::max(std::abs(fl), std::abs(fh))) break;
        if (res.evals_used >= options.max_evals) break;

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < n; ++d) centroid[d] += simplex[i].x[d] / n;
        const std::vector<double>& worst = simplex[n].x;

        auto along = [&](double coef) {
            std::vector<double> x(n);
            for (int d = 0; d < n; ++d) x[d] = centroid[d] + coef * (centroid[d] - worst[d]);
            return x;
        };

        auto replace_worst = [&](std::vector<double> x, double f) {
            simplex[n] = {std::move(x), f, seq++};
        };

        std::vector<double> xr = along(1.0);
        double fr = eval(xr);
        if (stop) break;

        if (fr < fl) {
            std::vector<double> xe = along(2.0);
            double fe = eval(xe);
            if (fe < fr)
                replace_worst(std::move(xe), fe);
            else
                replace_worst(std::move(xr), fr);
            if (stop) break;
        } else if (fr < simplex[n - 1].f) {
            replace_worst(std::move(xr), fr);
        } else {
            bool shrink = false;
            if (fr < simplex[n].f) {
                std::vector<double> xc = along(0.5);  // outside contraction
                double fc = eval(xc);
                if (stop) break;
                if (fc <= fr)
                    replace_worst(std::move(xc), fc);
                else
                    shrink = true;
            } else {
                std::vector<double> xc = along(-0.5);  // inside contraction
                double fc = eval(xc);
                if (stop) break;
                if (fc < simplex[n].f)
                    replace_worst(std::move(xc), fc);
                else
                    shrink = true;
            }
            if (shrink) {
                for (int i = 1; i <= n && !stop; ++i) {
                    for (int d = 0; d < n; ++d)
                        simplex[i].x[d] = simplex[0].x[d] + 0.5 * (simplex[i].x[d] - simplex[0].x[d]);
                    simplex[i].f = eval(simplex[i].x);
                    simplex[i].seq = seq++;
                }
            }
        }
    }
    return res;
}

}  // namespace dcrab
