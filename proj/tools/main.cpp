// afdmsim - AFDM link-level simulator CLI
//
// Subcommands:
//   run            BER sweep over an SNR grid, writes the run CSV
//   trace          per-iteration MSE trace at one SNR, writes the trace CSV
//   calibrate-eta  grid search for the SFD variance scaling
//   flops          analytical FLOP counts for all four detectors
//
// A JSON file given via --config supplies defaults for any flag (keys named
// like the long flags, without the leading dashes); explicit flags override.

#include "afdm/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct Options {
    afdm::SimConfig sim;
    std::string snr_spec = "6:2:18";
    std::string detectors = "mmse,mrc-dfe,sfd";
    std::string grid = "0.1:0.1:2.0";
    std::string out;
    std::string config_path;  // consumed by the pre-pass
};

std::vector<afdm::DetectorKind> parse_detectors(const std::string& csv) {
    std::vector<afdm::DetectorKind> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        const auto k = afdm::detector_from_string(tok);
        if (!k || *k == afdm::DetectorKind::mf_mp)
            throw std::invalid_argument("unknown detector '" + tok +
                                        "' (expected mmse, mrc-dfe, sfd)");
        out.push_back(*k);
    }
    if (out.empty()) throw std::invalid_argument("empty detector list");
    return out;
}

std::string json_number_or_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const json& e : v) {
            if (!s.empty()) s += ',';
            s += afdm::format_double(e.get<double>());
        }
        return s;
    }
    return afdm::format_double(v.get<double>());
}

void load_config_file(const std::string& path, Options& opt) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file '" + path + "'");
    json j;
    f >> j;
    if (j.contains("n")) opt.sim.n = j["n"].get<int>();
    if (j.contains("paths")) opt.sim.paths = j["paths"].get<int>();
    if (j.contains("lmax")) opt.sim.l_max = j["lmax"].get<int>();
    if (j.contains("alpha-max")) opt.sim.alpha_max = j["alpha-max"].get<double>();
    if (j.contains("xi")) opt.sim.xi_nu = j["xi"].get<int>();
    if (j.contains("snr-db")) opt.snr_spec = json_number_or_string(j["snr-db"]);
    if (j.contains("frames")) opt.sim.frames = j["frames"].get<int>();
    if (j.contains("detectors")) {
        const json& d = j["detectors"];
        if (d.is_array()) {
            std::string s;
            for (const json& e : d) {
                if (!s.empty()) s += ',';
                s += e.get<std::string>();
            }
            opt.detectors = s;
        } else {
            opt.detectors = d.get<std::string>();
        }
    }
    if (j.contains("eta")) opt.sim.eta = j["eta"].get<double>();
    if (j.contains("t-error")) opt.sim.t_error = j["t-error"].get<double>();
    if (j.contains("max-iter")) opt.sim.t_max_iter = j["max-iter"].get<int>();
    if (j.contains("seed")) opt.sim.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("integer-doppler")) opt.sim.integer_doppler = j["integer-doppler"].get<bool>();
    if (j.contains("threads")) opt.sim.threads = j["threads"].get<int>();
    if (j.contains("grid")) opt.grid = json_number_or_string(j["grid"]);
    if (j.contains("out")) opt.out = j["out"].get<std::string>();
}

void add_scenario_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--n", opt.sim.n, "subcarrier count");
    cmd->add_option("--paths", opt.sim.paths, "channel paths P");
    cmd->add_option("--lmax", opt.sim.l_max, "maximum path delay, samples");
    cmd->add_option("--alpha-max", opt.sim.alpha_max, "maximum normalized Doppler");
    cmd->add_option("--xi", opt.sim.xi_nu, "fractional-Doppler guard half-width");
    cmd->add_option("--frames", opt.sim.frames, "Monte Carlo frames per SNR point");
    cmd->add_option("--eta", opt.sim.eta, "SFD variance scaling");
    cmd->add_option("--t-error", opt.sim.t_error, "relative convergence tolerance");
    cmd->add_option("--max-iter", opt.sim.t_max_iter, "iteration cap");
    cmd->add_option("--seed", opt.sim.seed, "master seed");
    cmd->add_flag("--integer-doppler", opt.sim.integer_doppler,
                  "draw integer Dopplers instead of continuous ones");
    cmd->add_option("--threads", opt.sim.threads, "worker threads (0 = hardware)");
    cmd->add_option("--config", opt.config_path, "JSON config file (flags override file values)")
        ->check(CLI::ExistingFile);
}

double single_snr(const std::string& spec) {
    const std::vector<double> v = afdm::parse_snr_spec(spec);
    if (v.size() != 1) throw std::invalid_argument("expected a single --snr-db value");
    return v.front();
}

void print_run_summary(const afdm::SimResult& res) {
    for (const afdm::SimCell& c : res.cells)
        std::printf("snr=%-5g det=%-7s ber=%-12.6g iters=%-7.3f flops=%.6g\n", c.snr_db,
                    afdm::to_string(c.detector), c.ber, c.mean_iterations, c.mean_flops);
}

int run_main(int argc, char** argv) {
    Options opt;

    // pre-pass so file values become defaults and flags override them
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) load_config_file(argv[i + 1], opt);
        else if (a.rfind("--config=", 0) == 0) load_config_file(a.substr(9), opt);
    }

    CLI::App app{"AFDM link-level simulator"};
    app.require_subcommand(1);

    std::string snr_flag = opt.snr_spec;
    std::string det_flag = opt.detectors;
    std::string grid_flag = opt.grid;
    std::string out_flag = opt.out;

    CLI::App* run = app.add_subcommand("run", "BER sweep over an SNR grid");
    add_scenario_flags(run, opt);
    run->add_option("--snr-db", snr_flag, "SNR grid: start:step:stop or comma list (dB)");
    run->add_option("--detectors", det_flag, "comma list of mmse,mrc-dfe,sfd");
    run->add_option("--out", out_flag, "output CSV path");

    CLI::App* trace = app.add_subcommand("trace", "per-iteration MSE trace at one SNR");
    add_scenario_flags(trace, opt);
    trace->add_option("--snr-db", snr_flag, "single SNR value (dB)");
    trace->add_option("--detectors", det_flag, "must include mrc-dfe and sfd");
    trace->add_option("--out", out_flag, "output CSV path");

    CLI::App* cal = app.add_subcommand("calibrate-eta", "grid search for the SFD eta");
    add_scenario_flags(cal, opt);
    cal->add_option("--snr-db", snr_flag, "single SNR value (dB)");
    cal->add_option("--grid", grid_flag, "eta grid: start:step:stop or comma list");
    cal->add_option("--out", out_flag, "grid CSV path");

    CLI::App* flops = app.add_subcommand("flops", "analytical FLOP counts (all detectors)");
    int fl_n = 512, fl_l = 20, fl_iters = 1;
    flops->add_option("--n", fl_n, "subcarrier count");
    flops->add_option("--l", fl_l, "banded bandwidth L");
    flops->add_option("--iters", fl_iters, "iteration count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 1;
    }

    if (*run) {
        opt.sim.snr_db = afdm::parse_snr_spec(snr_flag);
        opt.sim.detectors = parse_detectors(det_flag);
        const std::string path = out_flag.empty() ? "run.csv" : out_flag;
        const afdm::SimResult res = afdm::run_sweep(opt.sim, path);
        print_run_summary(res);
        std::printf("wrote %s\n", path.c_str());
    } else if (*trace) {
        opt.sim.detectors = parse_detectors(det_flag);
        const double snr = single_snr(snr_flag);
        const afdm::SimResult res = afdm::trace_convergence(opt.sim, snr);
        const std::string path = out_flag.empty() ? "trace.csv" : out_flag;
        afdm::write_file(path, afdm::trace_to_csv(res));
        for (const afdm::SimCell& c : res.cells)
            std::printf("det=%-7s terminal_mse=%.6g\n", afdm::to_string(c.detector),
                        c.mse_trace.empty() ? 0.0 : c.mse_trace.back());
        std::printf("wrote %s\n", path.c_str());
    } else if (*cal) {
        const double snr = single_snr(snr_flag);
        const std::vector<double> grid = afdm::parse_snr_spec(grid_flag);
        std::vector<std::pair<double, double>> pairs;
        const double eta = afdm::calibrate_eta(opt.sim, snr, grid, &pairs);
        std::ostringstream os;
        os << "eta,ber\n";
        for (const auto& [e, b] : pairs)
            os << afdm::format_double(e) << ',' << afdm::format_double(b) << '\n';
        const std::string path = out_flag.empty() ? "eta_grid.csv" : out_flag;
        afdm::write_file(path, os.str());
        std::printf("eta=%s\n", afdm::format_double(eta).c_str());
        std::printf("wrote %s\n", path.c_str());
    } else if (*flops) {
        using afdm::DetectorKind;
        for (DetectorKind k : {DetectorKind::mmse, DetectorKind::mf_mp, DetectorKind::mrc_dfe,
                               DetectorKind::sfd})
            std::printf("%s %llu\n", afdm::to_string(k),
                        static_cast<unsigned long long>(afdm::flops_model(
                            k, static_cast<std::uint64_t>(fl_n), static_cast<std::uint64_t>(fl_l),
                            static_cast<std::uint64_t>(fl_iters))));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
