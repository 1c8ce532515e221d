#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "bellsim/harness.hpp"
#include "bellsim/protocols.hpp"

using namespace bellsim;

TEST_CASE("one-bit protocol: hand-evaluated rounds", "[protocols]") {
    SharedRandomness sr;
    sr.lambda1 = UnitVector3{0, 0, 1};
    sr.lambda2 = UnitVector3{1, 0, 0};
    const UnitVector3 z{0, 0, 1};

    // a = b = z: alpha = -sgn(1) = -1, c = sgn(1)sgn(0) = +1, beta = sgn(1) = +1
    auto rec = toner_bacon_round(z, z, sr);
    CHECK(rec.alpha == -1);
    CHECK(rec.beta == +1);
    CHECK(rec.transcript_size == 1);
    CHECK(rec.transcript[0] == +1);

    // a = z, b = x, l1 = -z, l2 = y
    sr.lambda1 = UnitVector3{0, 0, -1};
    sr.lambda2 = UnitVector3{0, 1, 0};
    rec = toner_bacon_round(z, UnitVector3{1, 0, 0}, sr);
    CHECK(rec.alpha == +1);
    CHECK(rec.transcript[0] == -1);
    CHECK(rec.beta == +1);
}

TEST_CASE("one-bit protocol: perfect anticorrelation at a = b, per round", "[protocols]") {
    RngStream seeder(404, 0);
    for (int i = 0; i < 100000; ++i) {
        RngStream rng(404, static_cast<std::uint64_t>(i) + 1);
        const UnitVector3 a = sample_unit_vector(rng);
        const SharedRandomness sr = SharedRandomness::draw(rng);
        const auto rec = toner_bacon_round(a, a, sr);
        REQUIRE(rec.alpha * rec.beta == -1);
    }
    (void)seeder;
}

TEST_CASE("local baseline: hand-evaluated round and empty transcript", "[protocols]") {
    const UnitVector3 z{0, 0, 1};
    const auto rec = bell_local_round(z, z, z);
    CHECK(rec.alpha == -1);
    CHECK(rec.beta == +1);
    CHECK(rec.transcript_size == 0);
}

TEST_CASE("randomize_inputs preserves the dot product", "[protocols]") {
    const UnitVector3 a{0, 0, 1};
    const UnitVector3 b = UnitVector3::polar(kPi / 5.0);

    auto [ia, ib] = randomize_inputs(a, b, Rotation3{});
    CHECK(ia.z == 1.0);
    CHECK(ib.x == b.x);

    RngStream rng(15, 0);
    for (int i = 0; i < 1000; ++i) {
        const Rotation3 r = sample_rotation(rng);
        auto [ra, rb] = randomize_inputs(a, b, r);
        REQUIRE(dot(ra, rb) == Catch::Approx(dot(a, b)).margin(1e-10));
    }
}

TEST_CASE("randomization wrapper does not change the correlator", "[protocols]") {
    for (double deg : {45.0, 60.0, 120.0}) {
        const double theta = deg * kPi / 180.0;
        const UnitVector3 a{0, 0, 1};
        const UnitVector3 b = UnitVector3::polar(theta);
        ScenarioConfig plain{Protocol::toner_bacon, {}, 1000000, 21, false};
        ScenarioConfig wrapped{Protocol::toner_bacon, {}, 1000000, 22, true};
        const auto e0 = estimate_correlator(plain, a, b);
        const auto e1 = estimate_correlator(wrapped, a, b);
        const double sigma = std::sqrt(e0.stderror * e0.stderror + e1.stderror * e1.stderror);
        CHECK(std::abs(e0.mean - e1.mean) <= 5.0 * sigma);
    }
}

TEST_CASE("sign symmetry: negating a and flipping alpha is invisible", "[protocols]") {
    // joint distribution of (alpha, beta, c) over 8 cells
    const UnitVector3 a = UnitVector3::normalized(1, 1, 1);
    const UnitVector3 b = UnitVector3::polar(2.0 * kPi / 5.0);
    const int n = 1000000;
    std::array<std::int64_t, 8> base{}, flipped{};
    for (int i = 0; i < n; ++i) {
        RngStream r1(61, static_cast<std::uint64_t>(i));
        const auto rec1 = toner_bacon_round(a, b, SharedRandomness::draw(r1));
        RngStream r2(62, static_cast<std::uint64_t>(i));
        auto rec2 = toner_bacon_round(-a, b, SharedRandomness::draw(r2));
        rec2.alpha = -rec2.alpha;
        auto idx = [](const RoundRecord& r) {
            return (r.alpha == +1 ? 0 : 4) + (r.beta == +1 ? 0 : 2)
                 + (r.transcript[0] == +1 ? 0 : 1);
        };
        ++base[static_cast<std::size_t>(idx(rec1))];
        ++flipped[static_cast<std::size_t>(idx(rec2))];
    }
    for (int cell = 0; cell < 8; ++cell) {
        const double f1 = static_cast<double>(base[static_cast<std::size_t>(cell)]) / n;
        const double f2 = static_cast<double>(flipped[static_cast<std::size_t>(cell)]) / n;
        const double pooled = (f1 + f2) / 2.0;
        const double se = std::sqrt(2.0 * pooled * (1.0 - pooled) / n);
        REQUIRE(std::abs(f1 - f2) <= 5.0 * std::max(se, 1e-9));
    }
}

TEST_CASE("maximally entangled states via input reflection", "[protocols]") {
    // triplet (|01> + |10>)/sqrt(2) is (sigma_z x I) applied to the singlet,
    // so it is simulated by rotating b half a turn about z first
    TwoQubitPureState triplet;
    const double r = 1.0 / std::sqrt(2.0);
    triplet.amp = {cplx{0, 0}, cplx{r, 0}, cplx{r, 0}, cplx{0, 0}};

    const UnitVector3 a = UnitVector3::normalized(1, 0, 2);
    const UnitVector3 b = UnitVector3::normalized(-1, 1, 1);
    const UnitVector3 b_reflected{-b.x, -b.y, b.z};

    double oracle = 0.0;
    for (int alpha : {+1, -1})
        for (int beta : {+1, -1})
            oracle += alpha * beta * joint_prob(triplet, a, b, alpha, beta);

    ScenarioConfig cfg{Protocol::toner_bacon, {}, 1000000, 33, false};
    const auto est = estimate_correlator(cfg, a, b_reflected);
    CHECK(std::abs(est.mean - oracle) <= 5.0 * est.stderror);
}

TEST_CASE("classical teleportation: hand-evaluated round", "[protocols]") {
    SharedRandomness sr;
    sr.lambda1 = UnitVector3{0, 0, 1};
    sr.lambda2 = UnitVector3{1, 0, 0};
    const UnitVector3 z{0, 0, 1};
    const auto rec = classical_teleportation_round(z, z, sr);
    CHECK(rec.transcript_size == 2);
    CHECK(rec.transcript[0] == +1);
    CHECK(rec.transcript[1] == +1);  // sgn(0) = +1
    CHECK(rec.beta == +1);
    CHECK(rec.alpha == +1);  // sentinel: Alice has no output here
}

TEST_CASE("partial entanglement on a product state", "[protocols]") {
    // |00> with a = z: Alice's outcome is +1 with certainty and Bob sees a
    // teleported +z spin
    const auto st = TwoQubitPureState::product00();
    const UnitVector3 a{0, 0, 1};
    const UnitVector3 b = UnitVector3::polar(kPi / 3.0);
    const int n = 200000;
    std::int64_t beta_sum = 0;
    for (int i = 0; i < n; ++i) {
        RngStream rng(73, static_cast<std::uint64_t>(i));
        const SharedRandomness sr = SharedRandomness::draw(rng);
        const auto rec = partial_entanglement_round(st, a, b, sr, rng);
        REQUIRE(rec.alpha == +1);
        REQUIRE(rec.transcript_size == 2);
        beta_sum += rec.beta;
    }
    const double mean = static_cast<double>(beta_sum) / n;
    const double se = std::sqrt((1.0 - b.z * b.z) / n);
    CHECK(std::abs(mean - b.z) <= 5.0 * se);
}
