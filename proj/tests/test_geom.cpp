#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bellsim/geom.hpp"

using namespace bellsim;

TEST_CASE("sgn follows the x >= 0 convention", "[geom]") {
    CHECK(sgn(0.0) == +1);
    CHECK(sgn(-0.0) == +1);
    CHECK(sgn(-0.3) == -1);
    CHECK(sgn(2.5) == +1);
    CHECK(sgn(std::numeric_limits<double>::min()) == +1);
    CHECK_THROWS_AS(sgn(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(sgn(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("sgn is idempotent under output re-application", "[geom]") {
    RngStream rng(11, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = 4.0 * rng.next_double() - 2.0;
        CHECK(sgn(static_cast<double>(sgn(x)) * 1.0) == sgn(x));
    }
}

TEST_CASE("dot product basics", "[geom]") {
    const UnitVector3 z{0, 0, 1};
    CHECK(dot(z, z) == 1.0);
    CHECK(dot(z, UnitVector3{1, 0, 0}) == 0.0);
    const double th = 60.0 * kPi / 180.0;
    CHECK(dot(z, UnitVector3::polar(th)) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("normalized construction and invariants", "[geom]") {
    const auto v = UnitVector3::normalized(3, 4, 0);
    CHECK(v.is_unit());
    CHECK(v.x == Catch::Approx(0.6));
    CHECK_THROWS_AS(UnitVector3::normalized(0, 0, 0), std::invalid_argument);
}

TEST_CASE("sphere sampler draws unit vectors deterministically", "[geom]") {
    RngStream rng(42, 5);
    for (int i = 0; i < 1000; ++i) {
        const auto v = sample_unit_vector(rng);
        REQUIRE(v.is_unit(1e-12));
    }
    RngStream r1(42, 5), r2(42, 5);
    for (int i = 0; i < 100; ++i) {
        const auto a = sample_unit_vector(r1);
        const auto b = sample_unit_vector(r2);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
        CHECK(a.z == b.z);
    }
    // distinct streams diverge
    RngStream r3(42, 6);
    const auto a = sample_unit_vector(r1);
    const auto b = sample_unit_vector(r3);
    CHECK((a.x != b.x || a.y != b.y || a.z != b.z));
}

namespace {

// First/second moment and Kolmogorov-Smirnov checks for a uniform sphere
// sample delivered through `draw`.
template <class Draw>
void check_uniform_on_sphere(Draw draw) {
    const int n = 1000000;
    double sx = 0, sy = 0, sz = 0, szz = 0;
    std::vector<double> proj;
    proj.reserve(n);
    const UnitVector3 w = UnitVector3::normalized(1, 2, -1);
    for (int i = 0; i < n; ++i) {
        const UnitVector3 v = draw(i);
        sx += v.x;
        sy += v.y;
        sz += v.z;
        szz += v.z * v.z;
        proj.push_back(dot(w, v));
    }
    const double mean_norm = std::sqrt(sx * sx + sy * sy + sz * sz) / n;
    CHECK(mean_norm < 0.005);
    CHECK(szz / n == Catch::Approx(1.0 / 3.0).margin(0.005));

    // w . v is uniform on [-1, 1]
    std::sort(proj.begin(), proj.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = (proj[static_cast<std::size_t>(i)] + 1.0) / 2.0;
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i + 1) / n));
    }
    CHECK(ks < 0.002);
}

}  // namespace

TEST_CASE("sphere sampler moment and KS tests", "[geom]") {
    check_uniform_on_sphere([](int i) {
        RngStream rng(123, static_cast<std::uint64_t>(i));
        return sample_unit_vector(rng);
    });
}

TEST_CASE("rotation sampler yields proper rotations", "[geom]") {
    RngStream rng(7, 3);
    for (int i = 0; i < 1000; ++i) {
        const Rotation3 r = sample_rotation(rng);
        REQUIRE(r.orthogonality_defect() <= 1e-12);
        REQUIRE(std::abs(r.determinant() - 1.0) <= 1e-12);
    }
}

TEST_CASE("rotation sampler preserves dot products", "[geom]") {
    RngStream rng(99, 0);
    for (int i = 0; i < 1000; ++i) {
        const Rotation3 r = sample_rotation(rng);
        const UnitVector3 u = sample_unit_vector(rng);
        const UnitVector3 v = sample_unit_vector(rng);
        CHECK(dot(r.apply(u), r.apply(v)) == Catch::Approx(dot(u, v)).margin(1e-10));
    }
}

TEST_CASE("Haar pushforward of a fixed vector is uniform", "[geom]") {
    const UnitVector3 z{0, 0, 1};
    check_uniform_on_sphere([&](int i) {
        RngStream rng(321, static_cast<std::uint64_t>(i));
        return sample_rotation(rng).apply(z);
    });
}

TEST_CASE("RngStream is reproducible per (seed, stream)", "[geom]") {
    RngStream a(1234, 56), b(1234, 56);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
    RngStream c(1234, 57);
    int diff = 0;
    for (int i = 0; i < 64; ++i) diff += a.next_u64() != c.next_u64();
    CHECK(diff > 0);
}
