#include <algorithm>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "dcrab/nelder_mead.hpp"

using dcrab::nelder_mead;
using dcrab::NelderMeadOptions;
using dcrab::NelderMeadResult;

TEST_CASE("one-dimensional quadratic reaches the minimum") {
    auto f = [](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); };
    std::vector<double> x0{0.0}, step{1.0};
    NelderMeadOptions opts;
    opts.max_evals = 200;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);
    REQUIRE(std::abs(res.best_x[0] - 3.0) <= 1e-4);
    REQUIRE(res.evals_used <= 200);
}

TEST_CASE("two-dimensional quadratic converges below 1e-8") {
    auto f = [](std::span<const double> x) { return x[0] * x[0] + 2.0 * x[1] * x[1]; };
    std::vector<double> x0{1.0, 1.0}, step{0.5, 0.5};
    NelderMeadOptions opts;
    opts.max_evals = 500;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);
    REQUIRE(res.best_value <= 1e-8);
    REQUIRE(res.evals_used <= 500);
}

TEST_CASE("exact value ties terminate by zero spread") {
    // From (1,1) with step exactly 1.0 the simplex reaches three vertices
    // that tie at 0.75 in exact binary arithmetic, so the spread rule fires
    // away from the minimum. Any other step scale converges; see above.
    auto f = [](std::span<const double> x) { return x[0] * x[0] + 2.0 * x[1] * x[1]; };
    std::vector<double> x0{1.0, 1.0}, step{1.0, 1.0};
    NelderMeadOptions opts;
    opts.max_evals = 500;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);
    REQUIRE(res.best_value == 0.75);
    REQUIRE(res.evals_used == 9);
}

TEST_CASE("constant objective stops after the first simplex") {
    int calls = 0;
    auto f = [&](std::span<const double>) {
        ++calls;
        return 7.5;
    };
    std::vector<double> x0{0.0, 0.0, 0.0}, step{1.0, 1.0, 1.0};
    NelderMeadOptions opts;
    opts.max_evals = 1000;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);
    REQUIRE(calls == 4);  // n + 1 vertices, no further probes
    REQUIRE(res.evals_used == 4);
    REQUIRE(res.best_value == 7.5);
}

TEST_CASE("eval cap below simplex size is rejected") {
    auto f = [](std::span<const double> x) { return x[0] * x[0]; };
    std::vector<double> x0{1.0, 1.0}, step{1.0, 1.0};
    NelderMeadOptions opts;
    opts.max_evals = 2;  // needs 3
    REQUIRE_THROWS_AS(nelder_mead(f, x0, step, opts), std::invalid_argument);
}

TEST_CASE("mismatched step size is rejected") {
    auto f = [](std::span<const double> x) { return x[0]; };
    std::vector<double> x0{1.0, 1.0}, step{1.0};
    REQUIRE_THROWS_AS(nelder_mead(f, x0, step, NelderMeadOptions{}), std::invalid_argument);
}

TEST_CASE("trace records every evaluation in order") {
    std::vector<double> seen;
    auto f = [&](std::span<const double> x) {
        double v = std::cos(x[0]) + 0.1 * x[0] * x[0] + x[1] * x[1];
        seen.push_back(v);
        return v;
    };
    std::vector<double> x0{2.0, -1.0}, step{0.7, 0.7};
    NelderMeadOptions opts;
    opts.max_evals = 120;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);

    REQUIRE(res.values == seen);
    REQUIRE(static_cast<int>(res.values.size()) == res.evals_used);
    REQUIRE(res.evals_used <= opts.max_evals);
    REQUIRE(res.values.front() == f(std::vector<double>{2.0, -1.0}));
    REQUIRE(res.best_value == *std::min_element(seen.begin(), seen.end()));
}

TEST_CASE("target value stops the search at the first hit") {
    auto f = [](std::span<const double> x) { return x[0] * x[0]; };
    std::vector<double> x0{4.0}, step{1.0};
    NelderMeadOptions opts;
    opts.max_evals = 500;
    opts.target_value = 1e-2;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);
    REQUIRE(res.reached_target);
    REQUIRE(res.best_value <= 1e-2);
    // every earlier evaluation was above the target
    for (std::size_t i = 0; i + 1 < res.values.size(); ++i) REQUIRE(res.values[i] > 1e-2);
}

TEST_CASE("target met by the start vector returns after one evaluation") {
    auto f = [](std::span<const double> x) { return x[0] * x[0]; };
    std::vector<double> x0{0.0}, step{1.0};
    NelderMeadOptions opts;
    opts.max_evals = 100;
    opts.target_value = 0.5;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);
    REQUIRE(res.evals_used == 1);
    REQUIRE(res.best_value == 0.0);
    REQUIRE(res.best_x == std::vector<double>{0.0});
}

TEST_CASE("eval cap is honoured exactly on a hard objective") {
    // Rosenbrock keeps the simplex moving, so the cap is the only stop.
    auto f = [](std::span<const double> x) {
        double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    std::vector<double> x0{-1.2, 1.0}, step{0.5, 0.5};
    for (int cap : {3, 10, 57, 200}) {
        NelderMeadOptions opts;
        opts.max_evals = cap;
        NelderMeadResult res = nelder_mead(f, x0, step, opts);
        REQUIRE(res.evals_used <= cap);
        REQUIRE(static_cast<int>(res.values.size()) == res.evals_used);
    }
}

TEST_CASE("descends on a coupled four-dimensional bowl") {
    auto f = [](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double d = x[i] - static_cast<double>(i);
            s += (i + 1.0) * d * d;
        }
        s += 0.3 * x[0] * x[2];
        return s;
    };
    std::vector<double> x0(4, 0.5), step(4, 1.0);
    NelderMeadOptions opts;
    opts.max_evals = 2000;
    opts.value_spread_tol = 1e-12;
    NelderMeadResult res = nelder_mead(f, x0, step, opts);
    REQUIRE(res.best_value < f(std::vector<double>(4, 0.5)) * 1e-6);
}
