#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dcrab/bench.hpp"
#include "dcrab/dcrab.hpp"
#include "dcrab/dynamics.hpp"
#include "dcrab/grid.hpp"
#include "dcrab/spectrum.hpp"

namespace dcrab {

using json = nlohmann::json;

namespace detail {

/// %.17g loses nothing for IEEE doubles, so CSV files round-trip exactly.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        std::string tok = line.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!tok.empty() && tok.back() == '\r') tok.pop_back();
        out.push_back(std::move(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// name <-> enum maps shared by the CLI and the JSON config reader

inline std::string_view basis_name(BasisType b) {
    switch (b) {
        case BasisType::fourier: return "fourier";
        case BasisType::sinc: return "sinc";
        case BasisType::sigmoid: return "sigmoid";
        case BasisType::piecewise: return "pwc";
    }
    throw std::invalid_argument("basis_name: unknown basis");
}

inline BasisType basis_from_name(std::string_view name) {
    if (name == "fourier") return BasisType::fourier;
    if (name == "sinc") return BasisType::sinc;
    if (name == "sigmoid") return BasisType::sigmoid;
    if (name == "pwc") return BasisType::piecewise;
    throw std::invalid_argument("unknown basis name: " + std::string(name) +
                                " (expected fourier, sinc, sigmoid, or pwc)");
}

inline std::string_view problem_name(ProblemKind p) {
    return p == ProblemKind::ising ? "ising" : "qutrit";
}

inline ProblemKind problem_from_name(std::string_view name) {
    if (name == "ising") return ProblemKind::ising;
    if (name == "qutrit") return ProblemKind::qutrit;
    throw std::invalid_argument("unknown problem name: " + std::string(name) +
                                " (expected ising or qutrit)");
}

// ---------------------------------------------------------------------------
// pulse CSV: header "t,value" for one channel, "t,value_<name>,..." for more

struct PulseFile {
    TimeGrid grid{1.0, 2};
    std::vector<Waveform> channels;
    std::vector<std::string> names;  // empty for a single anonymous channel
};

inline void write_pulse_csv(const std::filesystem::path& path, std::span<const Waveform> channels,
                            std::span<const std::string> names = {}) {
    if (channels.empty()) throw std::invalid_argument("write_pulse_csv: no channels");
    for (const auto& c : channels)
        if (!(c.grid == channels[0].grid))
            throw std::invalid_argument("write_pulse_csv: channel grids differ");
    if (!names.empty() && names.size() != channels.size())
        throw std::invalid_argument("write_pulse_csv: name count mismatch");
    if (names.empty() && channels.size() > 1)
        throw std::invalid_argument("write_pulse_csv: multi-channel files need channel names");

    auto out = detail::open_out(path);
    out << "t";
    if (names.empty()) {
        out << ",value";
    } else {
        for (const auto& n : names) out << ",value_" << n;
    }
    out << "\n";
    const auto& grid = channels[0].grid;
    for (int k = 0; k < grid.n_samples; ++k) {
        out << detail::fmt(grid.point(k));
        for (const auto& c : channels) out << ',' << detail::fmt(c.values[k]);
        out << "\n";
    }
}

inline PulseFile read_pulse_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open pulse file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty pulse file: " + path.string());

    auto header = detail::split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw std::invalid_argument("pulse file header must start with 't': " + path.string());
    std::vector<std::string> names;
    if (header.size() == 2 && header[1] == "value") {
        // single anonymous channel
    } else {
        for (size_t i = 1; i < header.size(); ++i) {
            if (header[i].rfind("value_", 0) != 0)
                throw std::invalid_argument("pulse file column '" + header[i] +
                                            "' is not 'value' or 'value_<name>'");
            names.push_back(header[i].substr(6));
        }
    }
    const size_t n_channels = header.size() - 1;

    std::vector<double> times;
    std::vector<std::vector<double>> cols(n_channels);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto tok = detail::split_csv_line(line);
        if (tok.size() != header.size())
            throw std::invalid_argument("pulse file row width mismatch: " + path.string());
        times.push_back(std::stod(tok[0]));
        for (size_t c = 0; c < n_channels; ++c) cols[c].push_back(std::stod(tok[c + 1]));
    }
    if (times.size() < 2) throw std::invalid_argument("pulse file needs at least 2 rows");

    int n = static_cast<int>(times.size());
    TimeGrid grid{times.back(), n};
    double dt = grid.dt();
    for (int k = 0; k < n; ++k)
        if (std::abs(times[k] - grid.point(k)) > 1e-6 * dt)
            throw std::invalid_argument("pulse file time column is not a uniform grid from 0");

    PulseFile pf{grid, {}, std::move(names)};
    for (auto& col : cols) pf.channels.emplace_back(grid, std::move(col));
    return pf;
}

// ---------------------------------------------------------------------------
// spectrum CSV: "omega,magnitude" (one-sided or two-sided)

inline void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s) {
    auto out = detail::open_out(path);
    out << "omega,magnitude\n";
    for (size_t i = 0; i < s.omega.size(); ++i)
        out << detail::fmt(s.omega[i]) << ',' << detail::fmt(s.magnitude[i]) << "\n";
}

inline void write_spectrum_csv(const std::filesystem::path& path, const TwoSidedSpectrum& s) {
    auto out = detail::open_out(path);
    out << "omega,magnitude\n";
    for (size_t i = 0; i < s.omega.size(); ++i)
        out << detail::fmt(s.omega[i]) << ',' << detail::fmt(std::abs(s.value[i])) << "\n";
}

// ---------------------------------------------------------------------------
// problem instances

inline json ising_instance_json(const IsingInstance& inst) {
    json j;
    j["N"] = inst.n_qubits;
    j["alpha"] = std::vector<double>(inst.alpha.begin(), inst.alpha.end());
    j["beta"] = std::vector<double>(inst.beta.begin(), inst.beta.end());
    std::vector<double> re(inst.psi0.size()), im(inst.psi0.size());
    for (int i = 0; i < inst.psi0.size(); ++i) {
        re[i] = inst.psi0[i].real();
        im[i] = inst.psi0[i].imag();
    }
    j["psi0_re"] = re;
    j["psi0_im"] = im;
    for (int i = 0; i < inst.psit.size(); ++i) {
        re[i] = inst.psit[i].real();
        im[i] = inst.psit[i].imag();
    }
    j["psit_re"] = re;
    j["psit_im"] = im;
    j["T"] = inst.duration;
    return j;
}

inline IsingInstance ising_instance_from_json(const json& j) {
    IsingInstance inst;
    inst.n_qubits = j.at("N").get<int>();
    auto alpha = j.at("alpha").get<std::vector<double>>();
    auto beta = j.at("beta").get<std::vector<double>>();
    inst.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), alpha.size());
    inst.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size());
    auto re0 = j.at("psi0_re").get<std::vector<double>>();
    auto im0 = j.at("psi0_im").get<std::vector<double>>();
    auto ret = j.at("psit_re").get<std::vector<double>>();
    auto imt = j.at("psit_im").get<std::vector<double>>();
    if (re0.size() != im0.size() || ret.size() != imt.size() || re0.size() != ret.size())
        throw std::invalid_argument("ising instance: state component lengths differ");
    inst.psi0.resize(re0.size());
    inst.psit.resize(ret.size());
    for (size_t i = 0; i < re0.size(); ++i) {
        inst.psi0[i] = {re0[i], im0[i]};
        inst.psit[i] = {ret[i], imt[i]};
    }
    inst.duration = j.at("T").get<double>();
    return inst;
}

inline json qutrit_instance_json(const QutritInstance& inst) {
    return json{{"Delta", inst.anharmonicity}, {"T", inst.duration}};
}

inline QutritInstance qutrit_instance_from_json(const json& j) {
    QutritInstance inst;
    inst.anharmonicity = j.at("Delta").get<double>();
    inst.duration = j.at("T").get<double>();
    return inst;
}

// ---------------------------------------------------------------------------
// benchmark config: JSON keys mirror the struct fields; flags override file

inline json benchmark_config_json(const BenchmarkConfig& c) {
    json j;
    j["problem"] = problem_name(c.problem);
    j["n_qubits"] = c.n_qubits;
    j["basis"] = basis_name(c.basis);
    j["t_final"] = c.t_final;
    j["omega_max"] = c.omega_max;
    j["n_opt"] = c.n_opt;
    j["initial_step"] = c.initial_step;
    j["grid_samples"] = c.grid_samples;
    j["repeats"] = c.repeats;
    j["threshold"] = c.threshold;
    j["max_evals"] = c.max_evals;
    j["fom_goal"] = c.fom_goal;
    j["max_superiterations"] = c.max_superiterations;
    j["master_seed"] = c.master_seed;
    // workers is execution machinery with no effect on results, so it is
    // accepted from config files but kept out of result artifacts; echoing
    // it would break byte-identity across worker counts.
    return j;
}

inline void apply_benchmark_config_json(BenchmarkConfig& c, const json& j) {
    // A misspelled key would otherwise be ignored and the run would proceed
    // with defaults, which is far harder to notice than an error up front.
    static constexpr std::string_view known[] = {
        "problem", "n_qubits", "basis", "t_final", "omega_max", "n_opt",
        "initial_step", "grid_samples", "repeats", "threshold", "max_evals",
        "fom_goal", "max_superiterations", "master_seed", "workers"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw std::invalid_argument("unknown config key: " + key);
    }
    if (j.contains("problem")) c.problem = problem_from_name(j["problem"].get<std::string>());
    if (j.contains("n_qubits")) c.n_qubits = j["n_qubits"].get<int>();
    if (j.contains("basis")) c.basis = basis_from_name(j["basis"].get<std::string>());
    if (j.contains("t_final")) c.t_final = j["t_final"].get<double>();
    if (j.contains("omega_max")) c.omega_max = j["omega_max"].get<double>();
    if (j.contains("n_opt")) c.n_opt = j["n_opt"].get<int>();
    if (j.contains("initial_step")) c.initial_step = j["initial_step"].get<double>();
    if (j.contains("grid_samples")) c.grid_samples = j["grid_samples"].get<int>();
    if (j.contains("repeats")) c.repeats = j["repeats"].get<int>();
    if (j.contains("threshold")) c.threshold = j["threshold"].get<double>();
    if (j.contains("max_evals")) c.max_evals = j["max_evals"].get<int>();
    if (j.contains("fom_goal")) c.fom_goal = j["fom_goal"].get<double>();
    if (j.contains("max_superiterations"))
        c.max_superiterations = j["max_superiterations"].get<int>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
}

// ---------------------------------------------------------------------------
// run records and ensemble summaries

inline json run_record_json(const RunRecord& r, json config_echo) {
    json trace = json::array();
    for (const auto& p : r.improvements) trace.push_back({p.eval, p.fom});
    json j;
    j["seed"] = r.seed;
    j["config_echo"] = std::move(config_echo);
    j["trace"] = std::move(trace);
    j["final_fom"] = r.final_fom;
    j["superiterations"] = r.superiterations;
    if (r.failed) {
        j["failed"] = true;
        j["error"] = r.error;
    }
    return j;
}

inline json ensemble_summary_json(const BenchmarkConfig& c, const EnsembleSummary& s) {
    json j;
    j["config"] = benchmark_config_json(c);
    j["p_c"] = s.p_c;
    if (s.nu_c)
        j["nu_c"] = *s.nu_c;
    else
        j["nu_c"] = nullptr;
    j["repeats"] = s.repeats;
    j["failures"] = s.failures;
    return j;
}

inline void write_traces_csv(const std::filesystem::path& path, const PercentileTraces& t) {
    auto out = detail::open_out(path);
    out << "eval";
    for (int p : t.percentiles) out << ",p" << p;
    out << "\n";
    if (t.values.empty()) return;
    size_t n = t.values[0].size();
    for (size_t e = 0; e < n; ++e) {
        out << (e + 1);
        for (const auto& row : t.values) out << ',' << detail::fmt(row[e]);
        out << "\n";
    }
}

/// Bin b of the convergence histogram holds crossing evals in
/// [b*width + 1, (b+1)*width].
inline void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
    auto out = detail::open_out(path);
    out << "lo,hi,count\n";
    for (size_t b = 0; b < h.counts.size(); ++b)
        out << (b * h.bin_width + 1) << ',' << ((b + 1) * h.bin_width) << ',' << h.counts[b]
            << "\n";
}

/// Decade bins; the bottom bin absorbs everything at or below its floor,
/// including exact zeros, so its lower edge is written as 0.
inline void write_histogram_csv(const std::filesystem::path& path, const DecadeHistogram& h) {
    auto out = detail::open_out(path);
    out << "lo,hi,count\n";
    for (size_t b = 0; b < h.counts.size(); ++b) {
        int e = h.exp_lo + static_cast<int>(b);
        double lo = b == 0 ? 0.0 : std::pow(10.0, e);
        double hi = std::pow(10.0, e + 1);
        out << detail::fmt(lo) << ',' << detail::fmt(hi) << ',' << h.counts[b] << "\n";
    }
}

inline json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open JSON file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("bad JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    auto out = detail::open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace dcrab
