#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dcrab/rng.hpp"

using namespace dcrab;

TEST_CASE("splitmix64 matches the reference sequence") {
    // First outputs of the reference splitmix64 generator seeded with 0.
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(1) == 0x910A2DEC89025CC1ULL);
}

TEST_CASE("derive_seed separates runs") {
    auto a = derive_seed(42, 0);
    auto b = derive_seed(42, 1);
    auto c = derive_seed(43, 0);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(derive_seed(42, 0) == a);
}

TEST_CASE("RandomStream is deterministic per seed") {
    RandomStream a(123), b(123), c(124);
    bool all_equal = true;
    bool any_differs = false;
    for (int i = 0; i < 1000; ++i) {
        double x = a.uniform01();
        all_equal = all_equal && x == b.uniform01();
        any_differs = any_differs || x != c.uniform01();
    }
    CHECK(all_equal);
    CHECK(any_differs);

    RandomStream d(5), e(5);
    for (int i = 0; i < 100; ++i) CHECK(d.normal() == e.normal());
}

TEST_CASE("uniform01 ranges") {
    RandomStream r(2024);
    double lo = 1.0, hi = 0.0, lo_oc = 1.0;
    for (int i = 0; i < 100000; ++i) {
        double x = r.uniform01();
        double y = r.uniform01_oc();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        REQUIRE(y > 0.0);
        REQUIRE(y <= 1.0);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        lo_oc = std::min(lo_oc, y);
    }
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
    CHECK(lo_oc < 1e-3);
}

TEST_CASE("normal moments") {
    RandomStream r(99);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = r.normal();
        sum += x;
        sum2 += x * x;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}
