// sim.hpp - Monte Carlo harness: frame pipeline, BER/MSE aggregation,
// eta calibration, convergence traces, CSV emission.
//
// Frames are independent work units. Each one derives its own RNG streams
// from (seed, frame index), per-frame results land in an indexed slot, and
// aggregation reduces those slots in index order, so results are identical
// for any thread count.

#pragma once

#include "afdm/channel.hpp"
#include "afdm/detector.hpp"
#include "afdm/modem.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace afdm {

struct SimConfig {
    int n = 512;
    int paths = 4;
    int l_max = 3;
    double alpha_max = 2.0;
    int xi_nu = 2;
    std::vector<double> snr_db;
    int frames = 1000;
    std::vector<DetectorKind> detectors{DetectorKind::mmse, DetectorKind::mrc_dfe,
                                        DetectorKind::sfd};
    double eta = 0.5;
    double t_error = 0.01;
    int t_max_iter = 20;
    std::uint64_t seed = 0;
    bool integer_doppler = false;
    bool trace_mse = false;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
    AfdmConfig afdm() const;  // canonical modem config for this scenario
};

struct DetectorFrameStats {
    std::uint64_t bit_errors = 0;
    int iterations = 0;
    std::uint64_t flops = 0;
    std::vector<double> mse_trace;
};

struct FrameStats {
    std::vector<DetectorFrameStats> per_detector;  // parallel to cfg.detectors
};

struct SimCell {
    double snr_db = 0.0;
    DetectorKind detector = DetectorKind::sfd;
    std::uint64_t frames = 0;
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double mean_iterations = 0.0;
    double mean_flops = 0.0;
    double eta_used = 0.0;
    std::vector<double> mse_trace;  // per-iteration mean, trace runs only
};

struct SimResult {
    std::vector<SimCell> cells;
};

/// One Monte Carlo trial: bits -> QPSK -> IDAFT -> CPP -> fresh channel ->
/// AWGN -> CPP removal -> DAFT -> every requested detector -> hard demap.
/// Deterministic in (cfg.seed, frame_index).
FrameStats run_frame(const SimConfig& cfg, double snr_db, std::uint64_t frame_index);

/// Same pipeline with a caller-supplied channel realization (used by the
/// AWGN sanity tests, which need a pinned unit-gain path).
FrameStats run_frame_on_channel(const SimConfig& cfg, double snr_db, std::uint64_t frame_index,
                                const ChannelRealization& ch);

/// Frames x SNR points x detectors. Writes the run CSV when csv_path is
/// non-empty. Aggregation is order-independent across worker threads.
SimResult run_sweep(const SimConfig& cfg, const std::string& csv_path = "");

/// Reduced sweep (frames/10, minimum 200) of the SFD per grid value;
/// returns the eta minimizing BER, ties resolving to the smaller eta.
/// grid_ber, when given, receives (eta, ber) pairs.
double calibrate_eta(const SimConfig& cfg, double snr_db, const std::vector<double>& grid,
                     std::vector<std::pair<double, double>>* grid_ber = nullptr);

/// Per-iteration mean MSE of the iterative detectors at one SNR, run to
/// t_max_iter with the convergence check disabled so traces align.
SimResult trace_convergence(const SimConfig& cfg, double snr_db);

// CSV serialization. Floats use 10 significant digits; rows sort by
// (snr_db, detector name).
std::string to_csv(const SimResult& result);         // run schema
std::string trace_to_csv(const SimResult& result);   // trace schema
std::string format_double(double v);
void write_file(const std::string& path, const std::string& contents);

/// "start:step:stop" or comma-separated list -> values.
std::vector<double> parse_snr_spec(const std::string& spec);

}  // namespace afdm
