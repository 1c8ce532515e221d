#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bellsim/geom.hpp"
#include "bellsim/protocols.hpp"
#include "bellsim/quantum.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

enum class Protocol { toner_bacon, bell_local, teleport, partial_entanglement };

inline Protocol parse_protocol(const std::string& name) {
    if (name == "toner-bacon" || name == "toner_bacon") return Protocol::toner_bacon;
    if (name == "bell-local" || name == "bell_local") return Protocol::bell_local;
    if (name == "teleport") return Protocol::teleport;
    if (name == "partial" || name == "partial-entanglement") return Protocol::partial_entanglement;
    throw std::invalid_argument("unknown protocol: " + name);
}

inline std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::toner_bacon: return "toner-bacon";
        case Protocol::bell_local: return "bell-local";
        case Protocol::teleport: return "teleport";
        case Protocol::partial_entanglement: return "partial";
    }
    return "?";
}

struct EstimatorResult {
    double mean{0.0};
    double stderror{0.0};
    std::uint64_t n{0};
};

struct ScenarioConfig {
    Protocol protocol{Protocol::toner_bacon};
    TwoQubitPureState state{};  // used by partial_entanglement only
    std::uint64_t n{1000000};
    std::uint64_t seed{0};
    bool randomize{false};
};

// Worker count: BELLSIM_THREADS if set, else hardware parallelism.
inline unsigned thread_count() {
    if (const char* env = std::getenv("BELLSIM_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Run fn(acc, round_index) for rounds [0, n) across workers and merge the
// per-worker accumulators. Accumulators hold integer tallies only, so the
// merged result is independent of the split.
template <class Acc, class RoundFn>
Acc reduce_rounds(std::uint64_t n, RoundFn fn) {
    const unsigned workers = n < 4096 ? 1u : std::min<std::uint64_t>(thread_count(), n);
    std::vector<Acc> parts(workers);
    if (workers == 1) {
        for (std::uint64_t i = 0; i < n; ++i) fn(parts[0], i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = n * w / workers;
            const std::uint64_t hi = n * (w + 1) / workers;
            pool.emplace_back([&fn, &parts, w, lo, hi] {
                for (std::uint64_t i = lo; i < hi; ++i) fn(parts[w], i);
            });
        }
        for (auto& t : pool) t.join();
    }
    Acc total{};
    for (const auto& p : parts) total.merge(p);
    return total;
}

namespace detail {

// Mean and standard error from exact integer sums of a +/-s valued sample.
inline EstimatorResult result_from_sums(std::int64_t sum, std::int64_t sum_sq,
                                        std::uint64_t n) {
    EstimatorResult r;
    r.n = n;
    if (n == 0) return r;
    const double nd = static_cast<double>(n);
    r.mean = static_cast<double>(sum) / nd;
    if (n > 1) {
        const double var = (static_cast<double>(sum_sq) - nd * r.mean * r.mean) / (nd - 1.0);
        r.stderror = std::sqrt(std::max(0.0, var) / nd);
    }
    return r;
}

struct MomentAcc {
    std::int64_t sum_alpha{0};
    std::int64_t sum_beta{0};
    std::int64_t sum_ab{0};
    std::uint64_t n{0};

    void add(const RoundRecord& rec) {
        sum_alpha += rec.alpha;
        sum_beta += rec.beta;
        sum_ab += rec.alpha * rec.beta;
        ++n;
    }
    void merge(const MomentAcc& o) {
        sum_alpha += o.sum_alpha;
        sum_beta += o.sum_beta;
        sum_ab += o.sum_ab;
        n += o.n;
    }
};

}  // namespace detail

// First and second moments of (alpha, beta) over n protocol rounds.
struct RoundMoments {
    std::int64_t sum_alpha{0};
    std::int64_t sum_beta{0};
    std::int64_t sum_ab{0};
    std::uint64_t n{0};

    EstimatorResult alpha_result() const {
        return detail::result_from_sums(sum_alpha, static_cast<std::int64_t>(n), n);
    }
    EstimatorResult beta_result() const {
        return detail::result_from_sums(sum_beta, static_cast<std::int64_t>(n), n);
    }
    EstimatorResult correlator_result() const {
        return detail::result_from_sums(sum_ab, static_cast<std::int64_t>(n), n);
    }
};

// Execute one round of the configured protocol on substream `round`.
inline RoundRecord run_round(const ScenarioConfig& cfg, const UnitVector3& a,
                             const UnitVector3& b, std::uint64_t round) {
    RngStream rng(cfg.seed, round);
    switch (cfg.protocol) {
        case Protocol::toner_bacon: {
            SharedRandomness sr = SharedRandomness::draw(rng, cfg.randomize);
            if (sr.rotation) {
                auto [ra, rb] = randomize_inputs(a, b, *sr.rotation);
                return toner_bacon_round(ra, rb, sr);
            }
            return toner_bacon_round(a, b, sr);
        }
        case Protocol::bell_local: {
            const UnitVector3 lambda = sample_unit_vector(rng);
            if (cfg.randomize) {
                const Rotation3 r = sample_rotation(rng);
                auto [ra, rb] = randomize_inputs(a, b, r);
                return bell_local_round(ra, rb, lambda);
            }
            return bell_local_round(a, b, lambda);
        }
        case Protocol::teleport: {
            SharedRandomness sr = SharedRandomness::draw(rng, cfg.randomize);
            if (sr.rotation) {
                auto [ra, rb] = randomize_inputs(a, b, *sr.rotation);
                return classical_teleportation_round(ra, rb, sr);
            }
            return classical_teleportation_round(a, b, sr);
        }
        case Protocol::partial_entanglement: {
            SharedRandomness sr = SharedRandomness::draw(rng, false);
            return partial_entanglement_round(cfg.state, a, b, sr, rng);
        }
    }
    throw std::logic_error("run_round: unreachable");
}

inline RoundMoments collect_moments(const ScenarioConfig& cfg, const UnitVector3& a,
                                    const UnitVector3& b) {
    auto acc = reduce_rounds<detail::MomentAcc>(cfg.n, [&](detail::MomentAcc& m, std::uint64_t i) {
        m.add(run_round(cfg, a, b, i));
    });
    return {acc.sum_alpha, acc.sum_beta, acc.sum_ab, acc.n};
}

// Monte Carlo estimate of <alpha beta>.
inline EstimatorResult estimate_correlator(const ScenarioConfig& cfg, const UnitVector3& a,
                                           const UnitVector3& b) {
    if (cfg.protocol != Protocol::toner_bacon && cfg.protocol != Protocol::bell_local)
        throw std::invalid_argument("estimate_correlator: protocol must be toner-bacon or bell-local");
    return collect_moments(cfg, a, b).correlator_result();
}

// Analytic correlator of the single-lambda baseline at angle theta.
inline double bell_local_correlator(double theta) {
    return -1.0 + 2.0 * theta / kPi;
}

struct SweepPoint {
    double theta{0.0};
    EstimatorResult estimate{};
    double oracle{0.0};
};

// Estimate the correlator at each angle, paired with the analytic curve
// (-cos theta for the one-bit protocol, the linear baseline otherwise).
inline std::vector<SweepPoint> sweep_correlator(const ScenarioConfig& cfg,
                                                const std::vector<double>& angles) {
    std::vector<SweepPoint> out;
    out.reserve(angles.size());
    const UnitVector3 a{0.0, 0.0, 1.0};
    for (double theta : angles) {
        if (theta < 0.0 || theta > kPi + 1e-12)
            throw std::invalid_argument("sweep_correlator: angle outside [0, pi]");
        SweepPoint p;
        p.theta = theta;
        p.estimate = estimate_correlator(cfg, a, UnitVector3::polar(theta));
        p.oracle = cfg.protocol == Protocol::bell_local ? bell_local_correlator(theta)
                                                        : -std::cos(theta);
        out.push_back(p);
    }
    return out;
}

// Monte Carlo estimate of <beta> in the classical teleportation protocol.
inline EstimatorResult estimate_teleportation(const ScenarioConfig& cfg, const UnitVector3& a,
                                              const UnitVector3& b) {
    if (cfg.protocol != Protocol::teleport)
        throw std::invalid_argument("estimate_teleportation: protocol must be teleport");
    return collect_moments(cfg, a, b).beta_result();
}

struct CellComparison {
    int alpha{+1};
    int beta{+1};
    std::uint64_t count{0};
    double empirical{0.0};
    double oracle{0.0};
    double z{0.0};
};

struct JointComparison {
    std::array<CellComparison, 4> cells{};
    std::uint64_t n{0};

    double max_abs_z() const {
        double worst = 0.0;
        for (const auto& c : cells) worst = std::max(worst, std::abs(c.z));
        return worst;
    }
    bool within(double z_max) const { return max_abs_z() <= z_max; }
};

namespace detail {

struct CellAcc {
    std::array<std::uint64_t, 4> count{};
    void add(const RoundRecord& rec) {
        const int i = (rec.alpha == +1 ? 0 : 2) + (rec.beta == +1 ? 0 : 1);
        ++count[static_cast<std::size_t>(i)];
    }
    void merge(const CellAcc& o) {
        for (std::size_t i = 0; i < 4; ++i) count[i] += o.count[i];
    }
};

inline bool is_singlet(const TwoQubitPureState& state) {
    const TwoQubitPureState s = TwoQubitPureState::singlet();
    cplx overlap{0, 0};
    for (int i = 0; i < 4; ++i) overlap += std::conj(s.amp[i]) * state.amp[i];
    return std::norm(overlap) > 1.0 - 1e-9;
}

}  // namespace detail

// Empirical (alpha, beta) cell frequencies of the protocol versus the exact
// quantum probabilities, with binomial z-scores.
inline JointComparison compare_joint_distribution(const ScenarioConfig& cfg,
                                                  const TwoQubitPureState& state,
                                                  const UnitVector3& a, const UnitVector3& b) {
    if (cfg.protocol == Protocol::toner_bacon) {
        if (!detail::is_singlet(state))
            throw std::invalid_argument("compare_joint_distribution: toner-bacon simulates the singlet only");
    } else if (cfg.protocol != Protocol::partial_entanglement) {
        throw std::invalid_argument("compare_joint_distribution: protocol must be toner-bacon or partial");
    }

    ScenarioConfig run_cfg = cfg;
    run_cfg.state = state;
    auto acc = reduce_rounds<detail::CellAcc>(cfg.n, [&](detail::CellAcc& c, std::uint64_t i) {
        c.add(run_round(run_cfg, a, b, i));
    });

    JointComparison cmp;
    cmp.n = cfg.n;
    const double nd = static_cast<double>(cfg.n);
    int idx = 0;
    for (int alpha : {+1, -1}) {
        for (int beta : {+1, -1}) {
            CellComparison cell;
            cell.alpha = alpha;
            cell.beta = beta;
            cell.count = acc.count[static_cast<std::size_t>(idx)];
            cell.empirical = static_cast<double>(cell.count) / nd;
            cell.oracle = joint_prob(state, a, b, alpha, beta);
            const double se = std::sqrt(cell.oracle * (1.0 - cell.oracle) / nd);
            if (se > 0.0) {
                cell.z = (cell.empirical - cell.oracle) / se;
            } else {
                // degenerate cell: any observation off the certain value is a failure
                cell.z = cell.empirical == cell.oracle ? 0.0
                                                       : std::numeric_limits<double>::infinity();
            }
            cmp.cells[static_cast<std::size_t>(idx)] = cell;
            ++idx;
        }
    }
    return cmp;
}

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline constexpr int kEtaBins = 50;  // bins of width pi/50 over [0, pi]

// Transcript statistics of the one-bit protocol with Alice's axis drawn
// uniformly per round, binned by eta = angle(lambda1, lambda2).
struct ChannelStats {
    std::array<std::uint64_t, kEtaBins> bin_count{};
    std::array<std::uint64_t, kEtaBins> bin_minus{};
    std::uint64_t n{0};
    std::uint64_t minus_total{0};

    double minus_frequency() const {
        return n ? static_cast<double>(minus_total) / static_cast<double>(n) : 0.0;
    }
    double bin_frequency(int i) const {
        const auto c = bin_count[static_cast<std::size_t>(i)];
        return c ? static_cast<double>(bin_minus[static_cast<std::size_t>(i)])
                       / static_cast<double>(c)
                 : 0.0;
    }
    static double bin_center(int i) { return (static_cast<double>(i) + 0.5) * kPi / kEtaBins; }

    // Average over rounds of H(empirical c = -1 frequency in the round's
    // eta bin); converges to the integral of sin(eta)/2 * H(eta/pi).
    double mean_conditional_entropy() const {
        if (n == 0) return 0.0;
        double h = 0.0;
        for (int i = 0; i < kEtaBins; ++i) {
            const auto c = bin_count[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            h += static_cast<double>(c) / static_cast<double>(n)
               * binary_entropy(bin_frequency(i));
        }
        return h;
    }
};

namespace detail {

struct ChannelAcc {
    std::array<std::uint64_t, kEtaBins> bin_count{};
    std::array<std::uint64_t, kEtaBins> bin_minus{};
    std::uint64_t minus_total{0};

    void merge(const ChannelAcc& o) {
        for (int i = 0; i < kEtaBins; ++i) {
            bin_count[static_cast<std::size_t>(i)] += o.bin_count[static_cast<std::size_t>(i)];
            bin_minus[static_cast<std::size_t>(i)] += o.bin_minus[static_cast<std::size_t>(i)];
        }
        minus_total += o.minus_total;
    }
};

}  // namespace detail

inline ChannelStats channel_statistics(const ScenarioConfig& cfg, std::uint64_t n) {
    if (cfg.protocol != Protocol::toner_bacon)
        throw std::invalid_argument("channel_statistics: protocol must be toner-bacon");
    auto acc = reduce_rounds<detail::ChannelAcc>(n, [&](detail::ChannelAcc& c, std::uint64_t i) {
        RngStream rng(cfg.seed, i);
        const UnitVector3 a = sample_unit_vector(rng);
        const SharedRandomness sr = SharedRandomness::draw(rng, false);
        const int bit = sgn(dot(a, sr.lambda1)) * sgn(dot(a, sr.lambda2));
        const double eta = std::acos(std::clamp(dot(sr.lambda1, sr.lambda2), -1.0, 1.0));
        const int bin = std::min(kEtaBins - 1, static_cast<int>(eta / (kPi / kEtaBins)));
        ++c.bin_count[static_cast<std::size_t>(bin)];
        if (bit == -1) {
            ++c.bin_minus[static_cast<std::size_t>(bin)];
            ++c.minus_total;
        }
    });
    ChannelStats stats;
    stats.bin_count = acc.bin_count;
    stats.bin_minus = acc.bin_minus;
    stats.minus_total = acc.minus_total;
    stats.n = n;
    return stats;
}

// Reference value of the frozen communication-cost integral, computed once
// with independent adaptive quadrature: 0.85045412 bits.
inline constexpr double kEntropyIntegralReference = 0.85045412;

// Deterministic quadrature of the compressed-communication integral
// int_0^{pi/2} sin(eta) H(eta/pi) d eta, refined to convergence.
inline double entropy_integral(int points = 1000) {
    if (points < 10) throw std::invalid_argument("entropy_integral: need at least 10 points");
    auto integrand = [](double eta) { return std::sin(eta) * binary_entropy(eta / kPi); };
    auto simpson = [&](int panels) {
        const double h = (kPi / 2.0) / panels;
        double s = integrand(0.0) + integrand(kPi / 2.0);
        for (int i = 1; i < panels; ++i)
            s += integrand(i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    int panels = points + (points % 2);
    double prev = simpson(panels);
    for (int iter = 0; iter < 20; ++iter) {
        panels *= 2;
        const double next = simpson(panels);
        if (std::abs(next - prev) < 1e-9) return next;
        prev = next;
    }
    return prev;
}

namespace detail {

struct TableAcc {
    std::array<std::uint64_t, 4> count{};  // (c, alpha) in {-1,+1}^2
    void merge(const TableAcc& o) {
        for (std::size_t i = 0; i < 4; ++i) count[i] += o.count[i];
    }
};

}  // namespace detail

// Plug-in mutual information I(c; alpha) in bits from the 2x2 empirical
// table, with Alice's axis uniform per round.
inline double mutual_information_transcript(const ScenarioConfig& cfg, std::uint64_t n) {
    if (cfg.protocol != Protocol::toner_bacon)
        throw std::invalid_argument("mutual_information_transcript: protocol must be toner-bacon");
    auto acc = reduce_rounds<detail::TableAcc>(n, [&](detail::TableAcc& t, std::uint64_t i) {
        RngStream rng(cfg.seed, i);
        const UnitVector3 a = sample_unit_vector(rng);
        const SharedRandomness sr = SharedRandomness::draw(rng, false);
        const UnitVector3 b = sample_unit_vector(rng);  // irrelevant to (c, alpha)
        const RoundRecord rec = toner_bacon_round(a, b, sr);
        const int idx = (rec.transcript[0] == +1 ? 0 : 2) + (rec.alpha == +1 ? 0 : 1);
        ++t.count[static_cast<std::size_t>(idx)];
    });
    if (n == 0) return 0.0;
    const double nd = static_cast<double>(n);
    const double pc[2] = {static_cast<double>(acc.count[0] + acc.count[1]) / nd,
                          static_cast<double>(acc.count[2] + acc.count[3]) / nd};
    const double pa[2] = {static_cast<double>(acc.count[0] + acc.count[2]) / nd,
                          static_cast<double>(acc.count[1] + acc.count[3]) / nd};
    double mi = 0.0;
    for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < 2; ++a) {
            const double p = static_cast<double>(acc.count[static_cast<std::size_t>(2 * c + a)]) / nd;
            if (p > 0.0 && pc[c] > 0.0 && pa[a] > 0.0)
                mi += p * std::log2(p / (pc[c] * pa[a]));
        }
    }
    return std::max(0.0, mi);
}

// Monte Carlo estimate of the reduced correlator integrand
// 2 sgn(a.l1) sgn(b.(l2 - l1)) over independent uniform l1, l2.
inline EstimatorResult eq2_estimate(const UnitVector3& a, const UnitVector3& b,
                                    std::uint64_t n, std::uint64_t seed) {
    struct Acc {
        std::int64_t sum{0};
        std::uint64_t n{0};
        void merge(const Acc& o) { sum += o.sum; n += o.n; }
    };
    auto acc = reduce_rounds<Acc>(n, [&](Acc& s, std::uint64_t i) {
        RngStream rng(seed, i);
        const UnitVector3 l1 = sample_unit_vector(rng);
        const UnitVector3 l2 = sample_unit_vector(rng);
        const UnitVector3 d{l2.x - l1.x, l2.y - l1.y, l2.z - l1.z};
        s.sum += 2 * sgn(dot(a, l1)) * sgn(b.x * d.x + b.y * d.y + b.z * d.z);
        ++s.n;
    });
    return detail::result_from_sums(acc.sum, static_cast<std::int64_t>(4 * n), n);
}

}  // namespace bellsim
