// Command-line front door: ensemble benchmarks, single optimizations, and
// pulse-analysis utilities (spectrum, envelope table, drag construction).
//
// Exit codes: 0 success, 1 configuration or input error, 2 runtime error
// (failed optimization, ensemble failure cap, unwritable output).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcrab/bench.hpp"
#include "dcrab/dcrab.hpp"
#include "dcrab/drag.hpp"
#include "dcrab/io.hpp"

namespace fs = std::filesystem;

namespace {

/// Shared problem/run configuration flags for `bench` and `optimize`.
/// CLI11 option handles are kept so explicit flags can override config-file
/// values while unset flags leave them alone.
struct ConfigFlags {
    std::string problem = "ising";
    int qubits = 2;
    std::string basis = "fourier";
    double t_final = 0.0;
    double omega_max = 0.0;
    int n_opt = 0;
    int repeats = 0;
    double threshold = 0.0;
    int max_evals = 0;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string config_file;

    CLI::Option* o_problem = nullptr;
    CLI::Option* o_qubits = nullptr;
    CLI::Option* o_basis = nullptr;
    CLI::Option* o_t = nullptr;
    CLI::Option* o_omega = nullptr;
    CLI::Option* o_nopt = nullptr;
    CLI::Option* o_repeats = nullptr;
    CLI::Option* o_threshold = nullptr;
    CLI::Option* o_maxevals = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_workers = nullptr;

    void attach(CLI::App& cmd) {
        o_problem = cmd.add_option("--problem", problem, "Problem family")
                        ->check(CLI::IsMember({"ising", "qutrit"}));
        o_qubits = cmd.add_option("--qubits", qubits, "Chain length for the ising problem");
        o_basis = cmd.add_option("--basis", basis, "Dressing basis")
                      ->check(CLI::IsMember({"fourier", "sinc", "sigmoid", "pwc"}));
        o_t = cmd.add_option("--T", t_final, "Pulse duration");
        o_omega = cmd.add_option("--omega-max", omega_max, "Bandwidth cutoff");
        o_nopt = cmd.add_option("--n-opt", n_opt, "Basis elements per superiteration");
        o_repeats = cmd.add_option("--repeats", repeats, "Ensemble size");
        o_threshold = cmd.add_option("--threshold", threshold, "Convergence threshold");
        o_maxevals = cmd.add_option("--max-evals", max_evals, "Evaluation budget per run");
        o_seed = cmd.add_option("--seed", seed, "Master seed");
        o_workers = cmd.add_option("--workers", workers, "Worker thread count");
        cmd.add_option("--config", config_file, "JSON config file (flags override it)");
    }

    dcrab::BenchmarkConfig assemble() const {
        dcrab::json file;
        if (!config_file.empty()) file = dcrab::load_json_file(config_file);

        std::string prob = o_problem->count()      ? problem
                           : file.contains("problem") ? file["problem"].get<std::string>()
                                                      : "ising";
        std::string bas = o_basis->count()       ? basis
                          : file.contains("basis") ? file["basis"].get<std::string>()
                                                   : "fourier";
        int nq = o_qubits->count()          ? qubits
                 : file.contains("n_qubits") ? file["n_qubits"].get<int>()
                                             : 2;

        dcrab::ProblemKind pk = dcrab::problem_from_name(prob);
        dcrab::BasisType bt = dcrab::basis_from_name(bas);
        dcrab::BenchmarkConfig cfg = pk == dcrab::ProblemKind::ising
                                         ? dcrab::BenchmarkConfig::ising_defaults(nq, bt)
                                         : dcrab::BenchmarkConfig::qutrit_defaults(bt);
        if (!file.is_null()) dcrab::apply_benchmark_config_json(cfg, file);

        if (o_t->count()) cfg.t_final = t_final;
        if (o_omega->count()) cfg.omega_max = omega_max;
        if (o_nopt->count()) cfg.n_opt = n_opt;
        if (o_repeats->count()) cfg.repeats = repeats;
        if (o_threshold->count()) cfg.threshold = threshold;
        if (o_maxevals->count()) cfg.max_evals = max_evals;
        if (o_seed->count()) cfg.master_seed = seed;
        if (o_workers->count()) cfg.workers = workers;
        cfg.validate();
        return cfg;
    }
};

std::vector<std::string> channel_names(const dcrab::BenchmarkConfig& cfg) {
    if (cfg.problem == dcrab::ProblemKind::qutrit) return {"x", "y"};
    return {"c"};
}

int run_bench(const ConfigFlags& flags, const std::string& out_dir, bool long_run,
              bool keep_runs) {
    dcrab::BenchmarkConfig cfg = flags.assemble();
    if (cfg.problem == dcrab::ProblemKind::ising && cfg.n_qubits >= 4 && !long_run)
        throw std::invalid_argument(
            "ising chains with 4+ qubits are multi-hour ensembles; pass --long to confirm");

    fs::create_directories(out_dir);
    dcrab::EnsembleResult res = dcrab::run_ensemble(cfg);
    const auto& s = res.summary;

    fs::path dir(out_dir);
    dcrab::write_json_file(dir / "summary.json", dcrab::ensemble_summary_json(cfg, s));
    dcrab::write_traces_csv(dir / "traces.csv", s.traces);
    dcrab::write_histogram_csv(dir / "hist_conv.csv", s.hist_conv);
    dcrab::write_histogram_csv(dir / "hist_final.csv", s.hist_final);
    auto names = channel_names(cfg);
    for (size_t c = 0; c < s.avg_spectra.size(); ++c)
        dcrab::write_spectrum_csv(dir / ("avg_spectrum_" + names[c] + ".csv"), s.avg_spectra[c]);
    if (keep_runs) {
        fs::create_directories(dir / "runs");
        dcrab::json echo = dcrab::benchmark_config_json(cfg);
        for (size_t r = 0; r < res.records.size(); ++r)
            dcrab::write_json_file(dir / "runs" / ("run_" + std::to_string(r) + ".json"),
                                   dcrab::run_record_json(res.records[r], echo));
    }

    std::printf("P_c = %.17g\n", s.p_c);
    if (s.nu_c)
        std::printf("nu_c = %d\n", *s.nu_c);
    else
        std::printf("nu_c = -\n");
    std::printf("repeats = %d, failures = %d\n", s.repeats, s.failures);
    return 0;
}

int run_optimize(const ConfigFlags& flags, const std::string& out_dir,
                 const std::string& instance_file) {
    dcrab::BenchmarkConfig cfg = flags.assemble();

    dcrab::json instance_echo;
    dcrab::FigureOfMerit fom;
    // run index 0 of the ensemble, so `optimize` reproduces its first run
    if (!instance_file.empty()) {
        dcrab::json j = dcrab::load_json_file(instance_file);
        if (j.contains("N")) {
            dcrab::IsingInstance inst = dcrab::ising_instance_from_json(j);
            cfg.problem = dcrab::ProblemKind::ising;
            cfg.n_qubits = inst.n_qubits;
            cfg.t_final = inst.duration;
            instance_echo = dcrab::ising_instance_json(inst);
            fom = dcrab::IsingProblem(std::move(inst), cfg.grid());
        } else {
            dcrab::QutritInstance inst = dcrab::qutrit_instance_from_json(j);
            cfg.problem = dcrab::ProblemKind::qutrit;
            cfg.t_final = inst.duration;
            instance_echo = dcrab::qutrit_instance_json(inst);
            fom = dcrab::QutritProblem(inst, cfg.grid());
        }
        cfg.validate();
    } else if (cfg.problem == dcrab::ProblemKind::ising) {
        dcrab::IsingInstance inst = dcrab::ising_instance_for_run(cfg, 0);
        instance_echo = dcrab::ising_instance_json(inst);
        fom = dcrab::IsingProblem(std::move(inst), cfg.grid());
    } else {
        dcrab::QutritInstance inst;
        inst.duration = cfg.t_final;
        instance_echo = dcrab::qutrit_instance_json(inst);
        fom = dcrab::QutritProblem(inst, cfg.grid());
    }

    std::uint64_t run_seed = dcrab::derive_seed(dcrab::derive_seed(cfg.master_seed, 0), 1);
    dcrab::RunRecord rec = dcrab::run_dcrab(fom, cfg.dcrab(), cfg.grid(), run_seed);

    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    dcrab::write_json_file(dir / "run.json",
                           dcrab::run_record_json(rec, dcrab::benchmark_config_json(cfg)));
    dcrab::write_json_file(dir / "instance.json", instance_echo);
    if (rec.failed) {
        std::cerr << "optimization failed: " << rec.error << "\n";
        return 2;
    }
    if (cfg.problem == dcrab::ProblemKind::qutrit) {
        std::vector<std::string> names = {"x", "y"};
        dcrab::write_pulse_csv(dir / "pulse.csv", rec.final_pulses, names);
    } else {
        dcrab::write_pulse_csv(dir / "pulse.csv", rec.final_pulses);
    }
    std::printf("final_fom = %.17g after %d evals, %d superiterations\n", rec.final_fom,
                rec.evals_used, rec.superiterations);
    return 0;
}

int run_spectrum(const std::string& in_file, const std::string& out_dir) {
    dcrab::PulseFile pf = dcrab::read_pulse_csv(in_file);
    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    for (size_t c = 0; c < pf.channels.size(); ++c) {
        dcrab::Spectrum sp = dcrab::waveform_spectrum(pf.channels[c]);
        std::string name = pf.names.empty() ? "spectrum.csv" : "spectrum_" + pf.names[c] + ".csv";
        dcrab::write_spectrum_csv(dir / name, sp);
        std::printf("wrote %s (%zu bins)\n", (dir / name).string().c_str(), sp.omega.size());
    }
    return 0;
}

int run_envelope(double omega_max, double t_final, double a_max, double eps_cut, int n_elements,
                 double omega_hi, int points, const std::string& out_dir) {
    double sigma = dcrab::sigmoid_width(omega_max, eps_cut);
    if (omega_hi <= 0.0) omega_hi = 3.0 * omega_max;
    if (points < 2) throw std::invalid_argument("envelope: need at least 2 table points");

    fs::create_directories(out_dir);
    auto out = dcrab::detail::open_out(fs::path(out_dir) / "envelope.csv");
    out << "omega,bound\n";
    for (int i = 0; i < points; ++i) {
        double w = omega_hi * i / (points - 1);
        double bound = n_elements > 0
                           ? dcrab::sigmoid_envelope(a_max, 0.0, t_final, sigma, n_elements, w)
                           : dcrab::sigmoid_envelope(a_max, 0.0, t_final, sigma, w);
        out << dcrab::detail::fmt(w) << ',' << dcrab::detail::fmt(bound) << "\n";
    }
    std::printf("wrote %s (sigma = %.17g)\n",
                (fs::path(out_dir) / "envelope.csv").string().c_str(), sigma);
    return 0;
}

int run_drag(const std::string& in_file, double delta0, const std::string& out_prefix,
             const std::string& params_file) {
    if (delta0 == 0.0) throw std::invalid_argument("drag: --delta0 must be nonzero");
    dcrab::DragPulse pulse;
    if (!params_file.empty()) {
        dcrab::json p = dcrab::load_json_file(params_file);
        double sigma = p.at("sigma").get<double>();
        auto amps = p.at("amplitudes").get<std::vector<double>>();
        auto centers = p.at("centers").get<std::vector<double>>();
        if (amps.size() != centers.size())
            throw std::invalid_argument("sigmoid params: amplitudes/centers length mismatch");
        std::vector<dcrab::SigmoidComponent> parts(amps.size());
        for (size_t i = 0; i < amps.size(); ++i) parts[i] = {amps[i], centers[i]};

        dcrab::TimeGrid grid{1.0, 2};
        if (!in_file.empty()) {
            grid = dcrab::read_pulse_csv(in_file).grid;
        } else {
            double t_end = p.at("T").get<double>();
            int n = p.value("n_samples", 0);
            if (n <= 0) n = dcrab::default_grid_samples(std::abs(delta0), t_end);
            grid = dcrab::TimeGrid{t_end, n};
        }
        pulse = dcrab::drag_pair(grid, parts, sigma, delta0);
    } else {
        if (in_file.empty())
            throw std::invalid_argument("drag: need --in or --sigmoid-params");
        dcrab::PulseFile pf = dcrab::read_pulse_csv(in_file);
        if (pf.channels.size() != 1)
            throw std::invalid_argument("drag: input must be a single-channel pulse file");
        pulse = dcrab::drag_pair(pf.channels[0], delta0);
    }

    auto parent = fs::path(out_prefix).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    dcrab::write_pulse_csv(out_prefix + "_I.csv", std::span(&pulse.I, 1));
    dcrab::write_pulse_csv(out_prefix + "_Q.csv", std::span(&pulse.Q, 1));
    dcrab::write_spectrum_csv(out_prefix + "_spectrum.csv",
                              dcrab::complex_spectrum(pulse.I, pulse.Q));
    std::printf("spectral node residual at omega = %.17g: %.17g\n", delta0,
                dcrab::spectral_node_residual(pulse));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dressed chopped random basis pulse optimization toolkit"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    bool long_run = false;
    bool keep_runs = false;

    auto* bench = app.add_subcommand("bench", "Run a seeded ensemble benchmark");
    ConfigFlags bench_flags;
    bench_flags.attach(*bench);
    bench->add_option("--out", out_dir, "Output directory");
    bench->add_flag("--long", long_run, "Confirm a multi-hour ensemble");
    bench->add_flag("--keep-runs", keep_runs, "Also write runs/run_<r>.json");

    auto* optimize = app.add_subcommand("optimize", "Run a single optimization");
    ConfigFlags opt_flags;
    opt_flags.attach(*optimize);
    std::string instance_file;
    optimize->add_option("--out", out_dir, "Output directory");
    optimize->add_option("--instance", instance_file, "Problem instance JSON to replay");

    auto* spectrum = app.add_subcommand("spectrum", "Magnitude spectrum of a pulse file");
    std::string in_file;
    spectrum->add_option("--in", in_file, "Pulse CSV")->required();
    spectrum->add_option("--out", out_dir, "Output directory");

    auto* envelope = app.add_subcommand("envelope", "Sigmoid-basis spectral bound table");
    double env_omega_max = 0.0, env_t = 0.0, env_a_max = 1.0, env_eps = 0.2, env_hi = 0.0;
    int env_n = 0, env_points = 601;
    envelope->add_option("--omega-max", env_omega_max, "Bandwidth cutoff")->required();
    envelope->add_option("--T", env_t, "Pulse duration")->required();
    envelope->add_option("--a-max", env_a_max, "Per-sample amplitude bound");
    envelope->add_option("--eps-cut", env_eps, "Transfer cutoff ratio");
    envelope->add_option("--n-elements", env_n, "Element count for the finite-N factor");
    envelope->add_option("--omega-hi", env_hi, "Table upper frequency (default 3*omega_max)");
    envelope->add_option("--points", env_points, "Table rows");
    envelope->add_option("--out", out_dir, "Output directory");

    auto* drag = app.add_subcommand("drag", "Build a quadrature pair with a spectral node");
    std::string drag_in, drag_prefix, drag_params;
    double delta0 = 0.0;
    drag->add_option("--in", drag_in, "Single-channel pulse CSV");
    drag->add_option("--delta0", delta0, "Suppressed transition frequency")->required();
    drag->add_option("--out-prefix", drag_prefix, "Output file prefix")->required();
    drag->add_option("--sigmoid-params", drag_params,
                     "JSON {sigma, amplitudes, centers[, T, n_samples]} for the analytic path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(bench)) return run_bench(bench_flags, out_dir, long_run, keep_runs);
        if (app.got_subcommand(optimize)) return run_optimize(opt_flags, out_dir, instance_file);
        if (app.got_subcommand(spectrum)) return run_spectrum(in_file, out_dir);
        if (app.got_subcommand(envelope))
            return run_envelope(env_omega_max, env_t, env_a_max, env_eps, env_n, env_hi,
                                env_points, out_dir);
        if (app.got_subcommand(drag)) return run_drag(drag_in, delta0, drag_prefix, drag_params);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
