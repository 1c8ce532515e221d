// bellsim: Monte Carlo driver for classical simulations of Bell-pair
// correlations (one bit of communication) and classical teleportation
// (two bits), checked against exact quantum oracles.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bellsim/harness.hpp"
#include "bellsim/output.hpp"
#include "bellsim/verify.hpp"

namespace {

using namespace bellsim;

struct RecordSink {
    std::string format = "json";
    bool header_written = false;
    bool any_gate_failed = false;

    void emit(OutputRecord rec) {
        if (rec.pass && !*rec.pass) any_gate_failed = true;
        if (format == "csv") {
            if (!header_written) {
                write_csv_header(std::cout);
                header_written = true;
            }
            write_csv_line(std::cout, rec);
        } else {
            write_json_line(std::cout, rec);
        }
    }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

UnitVector3 parse_axis(const std::vector<double>& v, const char* flag) {
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (std::abs(norm - 1.0) > 1e-6)
        std::cerr << "warning: " << flag << " has norm " << norm
                  << "; normalizing\n";
    return UnitVector3::normalized(v[0], v[1], v[2]);
}

TwoQubitPureState parse_state(const std::vector<double>& v) {
    TwoQubitPureState st;
    if (v.size() == 4) {
        for (int i = 0; i < 4; ++i) st.amp[i] = cplx{v[static_cast<std::size_t>(i)], 0.0};
    } else if (v.size() == 8) {
        for (int i = 0; i < 4; ++i)
            st.amp[i] = cplx{v[static_cast<std::size_t>(2 * i)],
                             v[static_cast<std::size_t>(2 * i + 1)]};
    } else {
        throw CLI::ValidationError("--state expects 4 real or 8 interleaved re/im amplitudes");
    }
    double nrm = std::sqrt(st.norm_sq());
    if (nrm <= 0.0) throw CLI::ValidationError("--state: zero vector");
    if (std::abs(nrm - 1.0) > 1e-6)
        std::cerr << "warning: state norm " << nrm << "; normalizing\n";
    for (auto& a : st.amp) a /= nrm;
    return st;
}

struct SimulateArgs {
    std::string protocol;
    double angle_deg = -1.0;
    std::vector<double> axis_a, axis_b, state_amps;
    std::uint64_t n = 1000000;
    std::uint64_t seed = 0;
    bool randomize = false;
};

int run_simulate(const SimulateArgs& args, RecordSink& sink) {
    const Protocol proto = parse_protocol(args.protocol);

    UnitVector3 a{0, 0, 1}, b{0, 0, 1};
    const bool have_axes = !args.axis_a.empty() || !args.axis_b.empty();
    if (args.angle_deg >= 0.0 && have_axes)
        throw CLI::ValidationError("give either --angle or --axis-a/--axis-b, not both");
    if (args.angle_deg >= 0.0) {
        b = UnitVector3::polar(args.angle_deg * kPi / 180.0);
    } else if (have_axes) {
        if (args.axis_a.empty() || args.axis_b.empty())
            throw CLI::ValidationError("--axis-a and --axis-b must be given together");
        a = parse_axis(args.axis_a, "--axis-a");
        b = parse_axis(args.axis_b, "--axis-b");
    } else {
        throw CLI::ValidationError("one of --angle or --axis-a/--axis-b is required");
    }

    ScenarioConfig cfg{proto, {}, args.n, args.seed, args.randomize};
    const auto t0 = std::chrono::steady_clock::now();

    auto make_record = [&](const std::string& label, double value) {
        OutputRecord rec;
        rec.scenario = "simulate";
        rec.label = label;
        rec.protocol = protocol_name(proto);
        rec.seed = args.seed;
        rec.n = args.n;
        rec.value = value;
        return rec;
    };

    switch (proto) {
        case Protocol::toner_bacon:
        case Protocol::bell_local: {
            const auto est = estimate_correlator(cfg, a, b);
            const double theta = std::acos(std::clamp(dot(a, b), -1.0, 1.0));
            const double quantum = singlet_correlator(a, b);
            const double oracle = proto == Protocol::bell_local
                                      ? bell_local_correlator(theta)
                                      : quantum;
            OutputRecord rec = make_record("correlator", est.mean);
            rec.stderror = est.stderror;
            rec.oracle = oracle;
            rec.tolerance = 5.0 * est.stderror;
            rec.pass = std::abs(est.mean - oracle) <= *rec.tolerance;
            rec.wall_time_s = elapsed_s(t0);
            sink.emit(rec);
            if (proto == Protocol::bell_local) {
                OutputRecord ref = make_record("quantum-reference", quantum);
                sink.emit(ref);
            }
            break;
        }
        case Protocol::teleport: {
            const auto est = estimate_teleportation(cfg, a, b);
            OutputRecord rec = make_record("mean beta", est.mean);
            rec.stderror = est.stderror;
            rec.oracle = dot(a, b);
            rec.tolerance = 5.0 * est.stderror;
            rec.pass = std::abs(est.mean - *rec.oracle) <= *rec.tolerance;
            rec.wall_time_s = elapsed_s(t0);
            sink.emit(rec);
            break;
        }
        case Protocol::partial_entanglement: {
            const TwoQubitPureState state = args.state_amps.empty()
                                                ? TwoQubitPureState::singlet()
                                                : parse_state(args.state_amps);
            const auto cmp = compare_joint_distribution(cfg, state, a, b);
            const double wall = elapsed_s(t0);
            for (const auto& cell : cmp.cells) {
                OutputRecord rec = make_record(
                    "cell alpha=" + std::to_string(cell.alpha)
                        + " beta=" + std::to_string(cell.beta),
                    cell.empirical);
                rec.oracle = cell.oracle;
                rec.z = cell.z;
                rec.tolerance = 5.0;
                rec.pass = std::abs(cell.z) <= 5.0;
                rec.wall_time_s = wall;
                sink.emit(rec);
            }
            break;
        }
    }
    return 0;
}

struct ChshArgs {
    std::string protocol = "toner-bacon";
    std::string preset = "optimal";
    std::uint64_t n = 1000000;
    std::uint64_t seed = 0;
};

int run_chsh(const ChshArgs& args, RecordSink& sink) {
    const Protocol proto = parse_protocol(args.protocol);
    if (proto != Protocol::toner_bacon && proto != Protocol::bell_local)
        throw CLI::ValidationError("chsh: protocol must be toner-bacon or bell-local");
    if (args.preset != "optimal")
        throw CLI::ValidationError("chsh: the only preset is 'optimal'");

    const auto s = ChshSettings::optimal();
    ScenarioConfig cfg{proto, {}, args.n, args.seed, false};
    const auto t0 = std::chrono::steady_clock::now();

    const EstimatorResult e1 = estimate_correlator(cfg, s.a, s.b);
    const EstimatorResult e2 = estimate_correlator(cfg, s.a, s.b2);
    const EstimatorResult e3 = estimate_correlator(cfg, s.a2, s.b);
    const EstimatorResult e4 = estimate_correlator(cfg, s.a2, s.b2);
    const double S = std::abs(e1.mean - e2.mean + e3.mean + e4.mean);
    const double se = std::sqrt(e1.stderror * e1.stderror + e2.stderror * e2.stderror
                                + e3.stderror * e3.stderror + e4.stderror * e4.stderror);
    const double oracle = proto == Protocol::toner_bacon ? 2.0 * std::sqrt(2.0) : 2.0;

    OutputRecord rec;
    rec.scenario = "chsh";
    rec.label = "S";
    rec.protocol = protocol_name(proto);
    rec.seed = args.seed;
    rec.n = args.n;
    rec.value = S;
    rec.stderror = se;
    rec.oracle = oracle;
    rec.tolerance = 5.0 * se;
    rec.pass = std::abs(S - oracle) <= *rec.tolerance;
    rec.wall_time_s = elapsed_s(t0);
    sink.emit(rec);

    OutputRecord classical;
    classical.scenario = "chsh";
    classical.label = "classical-bound";
    classical.seed = args.seed;
    classical.n = args.n;
    classical.value = 2.0;
    sink.emit(classical);

    OutputRecord tsirelson = classical;
    tsirelson.label = "tsirelson-bound";
    tsirelson.value = 2.0 * std::sqrt(2.0);
    sink.emit(tsirelson);
    return 0;
}

struct EntropyArgs {
    std::uint64_t n = 1000000;
    std::uint64_t seed = 0;
    int points = 1000;
};

int run_entropy(const EntropyArgs& args, RecordSink& sink) {
    const auto t0 = std::chrono::steady_clock::now();
    const double quad = entropy_integral(args.points);

    OutputRecord qrec;
    qrec.scenario = "entropy";
    qrec.label = "integral-quadrature";
    qrec.seed = args.seed;
    qrec.n = 0;
    qrec.value = quad;
    qrec.oracle = kEntropyIntegralReference;
    qrec.tolerance = 1e-4;
    qrec.pass = std::abs(quad - kEntropyIntegralReference) <= 1e-4;
    sink.emit(qrec);

    if (args.n == 0) return 0;  // quadrature-only mode

    ScenarioConfig cfg{Protocol::toner_bacon, {}, args.n, args.seed, false};
    const double scale = std::sqrt(1e6 / static_cast<double>(args.n));
    const auto stats = channel_statistics(cfg, args.n);
    const double mi = mutual_information_transcript(cfg, args.n);
    const double wall = elapsed_s(t0);

    OutputRecord rec;
    rec.scenario = "entropy";
    rec.protocol = "toner-bacon";
    rec.seed = args.seed;
    rec.n = args.n;
    rec.wall_time_s = wall;

    rec.label = "mean-conditional-entropy";
    rec.value = stats.mean_conditional_entropy();
    rec.oracle = quad;
    rec.tolerance = 0.01 * scale;
    rec.pass = std::abs(rec.value - quad) <= *rec.tolerance;
    sink.emit(rec);

    rec.label = "p-minus";
    rec.value = stats.minus_frequency();
    rec.oracle = 0.5;
    rec.tolerance = 0.005 * scale;
    rec.pass = std::abs(rec.value - 0.5) <= *rec.tolerance;
    sink.emit(rec);

    rec.label = "mutual-information";
    rec.value = mi;
    rec.oracle = 0.0;
    rec.tolerance = 1e-4 * scale * scale;
    rec.pass = mi <= *rec.tolerance;
    sink.emit(rec);
    return 0;
}

struct VerifyArgs {
    std::string suite = "quick";
    std::uint64_t seed = 7;
};

int run_verify(const VerifyArgs& args, RecordSink& sink) {
    const auto gates = run_verification(parse_suite(args.suite), args.seed);
    const std::uint64_t n = args.suite == "full" ? 1000000u : 100000u;
    for (const auto& g : gates) {
        OutputRecord rec;
        rec.scenario = "verify";
        rec.label = "criterion " + std::to_string(g.criterion) + ": " + g.name;
        rec.seed = args.seed;
        rec.n = n;
        rec.value = g.value;
        rec.oracle = g.oracle;
        rec.tolerance = g.tolerance;
        rec.pass = g.pass;
        sink.emit(rec);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical simulation of Bell correlations and teleportation"};
    app.require_subcommand(1);
    app.set_config("--config");

    RecordSink sink;
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", sink.format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
    };

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Estimate one scenario");
    c_sim->add_option("--protocol", sim.protocol, "toner-bacon|bell-local|teleport|partial")
        ->required();
    c_sim->add_option("--angle", sim.angle_deg, "Angle between axes, degrees");
    c_sim->add_option("--axis-a", sim.axis_a, "Alice axis (3 components)")->expected(3);
    c_sim->add_option("--axis-b", sim.axis_b, "Bob axis (3 components)")->expected(3);
    c_sim->add_option("--state", sim.state_amps,
                      "State amplitudes, 4 real or 8 interleaved re/im")
        ->expected(4, 8);
    c_sim->add_option("--n", sim.n, "Rounds")->capture_default_str();
    c_sim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    c_sim->add_flag("--randomize", sim.randomize, "Apply the input-randomization wrapper");
    add_format(c_sim);

    ChshArgs chsh;
    auto* c_chsh = app.add_subcommand("chsh", "Estimate the CHSH value");
    c_chsh->add_option("--protocol", chsh.protocol, "toner-bacon|bell-local")
        ->capture_default_str();
    c_chsh->add_option("--preset", chsh.preset, "Settings preset")->capture_default_str();
    c_chsh->add_option("--n", chsh.n, "Rounds per setting")->capture_default_str();
    c_chsh->add_option("--seed", chsh.seed, "RNG seed")->capture_default_str();
    add_format(c_chsh);

    EntropyArgs ent;
    auto* c_ent = app.add_subcommand("entropy", "Communication cost statistics");
    c_ent->add_option("--n", ent.n, "Rounds (0 = quadrature only)")->capture_default_str();
    c_ent->add_option("--seed", ent.seed, "RNG seed")->capture_default_str();
    c_ent->add_option("--points", ent.points, "Initial quadrature points")
        ->capture_default_str();
    add_format(c_ent);

    VerifyArgs ver;
    auto* c_ver = app.add_subcommand("verify", "Run every statistical gate");
    c_ver->add_option("--suite", ver.suite, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}))
        ->capture_default_str();
    c_ver->add_option("--seed", ver.seed, "RNG seed")->capture_default_str();
    add_format(c_ver);

    try {
        app.parse(argc, argv);
        if (c_sim->parsed()) run_simulate(sim, sink);
        if (c_chsh->parsed()) run_chsh(chsh, sink);
        if (c_ent->parsed()) run_entropy(ent, sink);
        if (c_ver->parsed()) run_verify(ver, sink);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return sink.any_gate_failed ? 2 : 0;
}
