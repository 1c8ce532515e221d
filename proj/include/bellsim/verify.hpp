#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bellsim/harness.hpp"

namespace bellsim {

// One statistical gate: |value - oracle| must be within tolerance.
struct GateResult {
    int criterion{0};
    std::string name;
    double value{0.0};
    double oracle{0.0};
    double tolerance{0.0};
    bool pass{false};
};

enum class Suite { quick, full };

inline Suite parse_suite(const std::string& s) {
    if (s == "quick") return Suite::quick;
    if (s == "full") return Suite::full;
    throw std::invalid_argument("unknown suite: " + s);
}

namespace detail {

inline GateResult gate(int criterion, std::string name, double value, double oracle,
                       double tol) {
    GateResult g;
    g.criterion = criterion;
    g.name = std::move(name);
    g.value = value;
    g.oracle = oracle;
    g.tolerance = tol;
    g.pass = std::abs(value - oracle) <= tol;
    return g;
}

}  // namespace detail

// The statistical verification gates. Absolute tolerances are quoted for
// n = 10^6 and scaled as 1/sqrt(n) for smaller suites.
inline std::vector<GateResult> run_verification(Suite suite, std::uint64_t seed) {
    using detail::gate;
    std::vector<GateResult> gates;
    const std::uint64_t n = suite == Suite::full ? 1000000u : 100000u;
    const double scale = std::sqrt(1e6 / static_cast<double>(n));

    ScenarioConfig tb{Protocol::toner_bacon, {}, n, seed, false};
    ScenarioConfig local{Protocol::bell_local, {}, n, seed, false};
    const UnitVector3 zhat{0, 0, 1};

    // 1. correlator curve matches -cos(theta)
    for (double deg : {0.0, 30.0, 45.0, 60.0, 90.0, 120.0, 150.0, 180.0}) {
        const double theta = deg * kPi / 180.0;
        const auto est = estimate_correlator(tb, zhat, UnitVector3::polar(theta));
        gates.push_back(gate(1, "correlator theta=" + std::to_string(static_cast<int>(deg)),
                             est.mean, -std::cos(theta), 0.005 * scale));
    }

    // 2. perfect anticorrelation at a = b, per round
    {
        struct Acc {
            std::uint64_t violations{0};
            void merge(const Acc& o) { violations += o.violations; }
        };
        auto acc = reduce_rounds<Acc>(n, [&](Acc& a, std::uint64_t i) {
            const auto rec = run_round(tb, zhat, zhat, i);
            if (rec.alpha * rec.beta != -1) ++a.violations;
        });
        gates.push_back(gate(2, "anticorrelation violations at a=b",
                             static_cast<double>(acc.violations), 0.0, 0.0));
    }

    // 3. zero marginals at three representative pairs
    {
        const UnitVector3 pairs[3][2] = {
            {zhat, zhat},
            {zhat, UnitVector3::polar(kPi / 3.0)},
            {{1, 0, 0}, UnitVector3::normalized(0, 1, 1)}};
        for (int p = 0; p < 3; ++p) {
            const auto m = collect_moments(tb, pairs[p][0], pairs[p][1]);
            gates.push_back(gate(3, "mean alpha, pair " + std::to_string(p + 1),
                                 m.alpha_result().mean, 0.0, 0.005 * scale));
            gates.push_back(gate(3, "mean beta, pair " + std::to_string(p + 1),
                                 m.beta_result().mean, 0.0, 0.005 * scale));
        }
    }

    // 4. CHSH at the optimal coplanar settings
    {
        const auto s = ChshSettings::optimal();
        auto estimated_S = [&](const ScenarioConfig& cfg) {
            return std::abs(estimate_correlator(cfg, s.a, s.b).mean
                          - estimate_correlator(cfg, s.a, s.b2).mean
                          + estimate_correlator(cfg, s.a2, s.b).mean
                          + estimate_correlator(cfg, s.a2, s.b2).mean);
        };
        gates.push_back(gate(4, "CHSH S, one-bit protocol", estimated_S(tb),
                             2.0 * std::sqrt(2.0), 0.02 * scale));
        gates.push_back(gate(4, "CHSH S, local baseline", estimated_S(local), 2.0,
                             0.02 * scale));
    }

    // 5. teleportation mean matches a.b
    {
        ScenarioConfig tp{Protocol::teleport, {}, n, seed, false};
        for (double d : {1.0, 0.5, 0.0, -0.5, -1.0}) {
            const auto est = estimate_teleportation(tp, zhat, UnitVector3::polar(std::acos(d)));
            gates.push_back(gate(5, "teleportation a.b=" + std::to_string(d), est.mean, d,
                                 0.005 * scale));
        }
    }

    // 6. partial entanglement joint cells vs the quantum oracle
    {
        ScenarioConfig pe{Protocol::partial_entanglement, {}, n, seed, false};
        const TwoQubitPureState states[3] = {TwoQubitPureState::singlet(),
                                             TwoQubitPureState::product00(),
                                             TwoQubitPureState::schmidt(kPi / 8.0)};
        const char* state_names[3] = {"singlet", "|00>", "schmidt(pi/8)"};
        const UnitVector3 pairs[3][2] = {
            {zhat, zhat}, {zhat, UnitVector3::polar(kPi / 3.0)}, {{1, 0, 0}, zhat}};
        for (int s = 0; s < 3; ++s) {
            for (int p = 0; p < 3; ++p) {
                const auto cmp = compare_joint_distribution(pe, states[s], pairs[p][0],
                                                            pairs[p][1]);
                gates.push_back(gate(6, std::string("joint cells max|z|, ") + state_names[s]
                                            + ", pair " + std::to_string(p + 1),
                                     cmp.max_abs_z(), 0.0, 5.0));
            }
        }
    }

    // 7. communication entropy: quadrature and empirical estimate
    {
        const double quad = entropy_integral();
        gates.push_back(gate(7, "entropy integral (quadrature)", quad,
                             kEntropyIntegralReference, 1e-4));
        const auto stats = channel_statistics(tb, n);
        gates.push_back(gate(7, "mean conditional entropy", stats.mean_conditional_entropy(),
                             quad, 0.01 * scale));

        // 8. transcript opacity
        gates.push_back(gate(8, "P(c=-1)", stats.minus_frequency(), 0.5, 0.005 * scale));
        gates.push_back(gate(8, "I(c; alpha)", mutual_information_transcript(tb, n), 0.0,
                             1e-4 * scale * scale));
    }

    // 9. reduced-integrand estimate agrees with the protocol correlator
    for (double deg : {0.0, 45.0, 60.0, 90.0, 135.0}) {
        const double theta = deg * kPi / 180.0;
        const UnitVector3 b = UnitVector3::polar(theta);
        const auto direct = estimate_correlator(tb, zhat, b);
        const auto reduced = eq2_estimate(zhat, b, n, seed + 1);
        const double sigma = std::sqrt(direct.stderror * direct.stderror
                                       + reduced.stderror * reduced.stderror);
        gates.push_back(gate(9, "reduced-form gap theta=" + std::to_string(static_cast<int>(deg)),
                             direct.mean - reduced.mean, 0.0, 5.0 * sigma));
    }

    // 10. rotational invariance: equal dot products give equal correlators
    {
        const UnitVector3 pairs[3][2] = {
            {zhat, UnitVector3::polar(kPi / 3.0)},
            {{1, 0, 0}, UnitVector3{0.5, std::sqrt(3.0) / 2.0, 0.0}},
            {{0, 1, 0}, UnitVector3{0.0, 0.5, std::sqrt(3.0) / 2.0}}};
        EstimatorResult est[3];
        for (int p = 0; p < 3; ++p) {
            ScenarioConfig cfg = tb;
            cfg.seed = seed + 100 + static_cast<std::uint64_t>(p);
            est[p] = estimate_correlator(cfg, pairs[p][0], pairs[p][1]);
        }
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3;
            const double sigma = std::sqrt(est[i].stderror * est[i].stderror
                                           + est[j].stderror * est[j].stderror);
            gates.push_back(gate(10, "invariance pair " + std::to_string(i + 1) + " vs "
                                         + std::to_string(j + 1),
                                 est[i].mean - est[j].mean, 0.0, 5.0 * sigma));
        }
    }

    return gates;
}

inline bool all_pass(const std::vector<GateResult>& gates) {
    for (const auto& g : gates)
        if (!g.pass) return false;
    return true;
}

}  // namespace bellsim
