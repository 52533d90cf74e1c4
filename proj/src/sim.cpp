#include "afdm/sim.hpp"

#include "afdm/qpsk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace afdm {

namespace {

// Substream layout per frame: bits, channel draw, noise.
enum FrameStream : std::uint64_t { kBits = 0, kChannel = 1, kNoise = 2, kStreamsPerFrame = 4 };

std::uint64_t count_bit_errors(const std::vector<int>& sent, const std::vector<int>& decided) {
    std::uint64_t e = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) e += sent[i] != decided[i];
    return e;
}

// Runs fn(i) for i in [0, count) over a small worker pool; results must be
// written to per-index slots so scheduling cannot affect the aggregate.
void parallel_for(int threads, std::uint64_t count, const std::function<void(std::uint64_t)>& fn) {
    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = static_cast<int>(std::min<std::uint64_t>(n_threads, std::max<std::uint64_t>(count, 1)));
    if (n_threads == 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct CellKey {
    double snr_db;
    DetectorKind det;
};

bool cell_less(const SimCell& a, const SimCell& b) {
    if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
    return std::string_view(to_string(a.detector)) < std::string_view(to_string(b.detector));
}

}  // namespace

void SimConfig::validate() const {
    if (n < 2) throw std::invalid_argument("SimConfig: n must be >= 2");
    if (paths < 1) throw std::invalid_argument("SimConfig: paths must be >= 1");
    if (l_max < 0) throw std::invalid_argument("SimConfig: l_max must be >= 0");
    if (paths - 1 > l_max)
        throw std::invalid_argument("SimConfig: distinct delays need paths <= l_max + 1");
    if (alpha_max < 0) throw std::invalid_argument("SimConfig: alpha_max must be >= 0");
    if (xi_nu < 0) throw std::invalid_argument("SimConfig: xi_nu must be >= 0");
    if (snr_db.empty()) throw std::invalid_argument("SimConfig: empty SNR list");
    if (frames < 1) throw std::invalid_argument("SimConfig: frames must be >= 1");
    if (detectors.empty()) throw std::invalid_argument("SimConfig: no detectors requested");
    for (DetectorKind k : detectors)
        if (k == DetectorKind::mf_mp)
            throw std::invalid_argument("SimConfig: mf-mp has a FLOP model only");
    if (!(eta > 0.0)) throw std::invalid_argument("SimConfig: eta must be > 0");
    if (!(t_error > 0.0 && t_error < 1.0))
        throw std::invalid_argument("SimConfig: t_error must be in (0, 1)");
    if (t_max_iter < 1) throw std::invalid_argument("SimConfig: t_max_iter must be >= 1");
}

AfdmConfig SimConfig::afdm() const { return AfdmConfig::make(n, alpha_max, xi_nu, l_max); }

FrameStats run_frame(const SimConfig& cfg, double snr_db, std::uint64_t frame_index) {
    RngStream channel_rng(cfg.seed, frame_index * kStreamsPerFrame + kChannel);
    const ChannelRealization ch =
        generate_channel(channel_rng, cfg.paths, cfg.l_max, cfg.alpha_max, cfg.integer_doppler);
    return run_frame_on_channel(cfg, snr_db, frame_index, ch);
}

FrameStats run_frame_on_channel(const SimConfig& cfg, double snr_db, std::uint64_t frame_index,
                                const ChannelRealization& ch) {
    const AfdmConfig acfg = cfg.afdm();
    const DaftPlan plan(acfg);

    RngStream bits_rng(cfg.seed, frame_index * kStreamsPerFrame + kBits);
    RngStream noise_rng(cfg.seed, frame_index * kStreamsPerFrame + kNoise);

    const std::vector<int> bits = random_bits(bits_rng, 2 * static_cast<std::size_t>(cfg.n));
    const ComplexVec x = map_qpsk(bits);
    const ComplexVec s_cpp = add_cpp(acfg, plan.inverse(x));

    const double n0 = std::pow(10.0, -snr_db / 10.0);
    const ComplexVec r = apply_channel(ch, s_cpp, acfg.l_cpp, n0, noise_rng);
    const ComplexVec y = plan.forward(remove_cpp(acfg, r));
    const EffectiveChannel h = build_effective_channel(plan, ch, n0);

    DetectorConfig dcfg;
    dcfg.t_max_iter = cfg.t_max_iter;
    dcfg.t_error = cfg.t_error;
    dcfg.eta = cfg.eta;
    dcfg.snr_linear = n0 > 0.0 ? 1.0 / n0 : std::numeric_limits<double>::infinity();
    dcfg.disable_convergence_check = cfg.trace_mse;
    const ComplexVec* truth = cfg.trace_mse ? &x : nullptr;

    FrameStats stats;
    stats.per_detector.resize(cfg.detectors.size());
    for (std::size_t di = 0; di < cfg.detectors.size(); ++di) {
        DetectionResult res;
        switch (cfg.detectors[di]) {
            case DetectorKind::mmse: res = detect_mmse(h, y, dcfg, truth); break;
            case DetectorKind::mrc_dfe: res = detect_mrc_dfe(h, y, dcfg, truth); break;
            case DetectorKind::sfd: res = detect_sfd(h, y, dcfg, truth); break;
            case DetectorKind::mf_mp:
                throw std::invalid_argument("run_frame: mf-mp has a FLOP model only");
        }
        DetectorFrameStats& out = stats.per_detector[di];
        out.bit_errors = count_bit_errors(bits, demap_qpsk_hard(res.x_hat));
        out.iterations = res.iterations_used;
        out.flops = res.flops_estimate;
        out.mse_trace = std::move(res.mse_trace);
    }
    return stats;
}

SimResult run_sweep(const SimConfig& cfg, const std::string& csv_path) {
    cfg.validate();
    const std::uint64_t frames = static_cast<std::uint64_t>(cfg.frames);
    SimResult result;

    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double snr = cfg.snr_db[si];
        std::vector<FrameStats> per_frame(frames);
        parallel_for(cfg.threads, frames, [&](std::uint64_t fi) {
            per_frame[fi] = run_frame(cfg, snr, si * frames + fi);
        });

        for (std::size_t di = 0; di < cfg.detectors.size(); ++di) {
            SimCell cell;
            cell.snr_db = snr;
            cell.detector = cfg.detectors[di];
            cell.frames = frames;
            cell.bits_sent = frames * 2 * static_cast<std::uint64_t>(cfg.n);
            cell.eta_used = cfg.eta;
            double iter_sum = 0.0, flop_sum = 0.0;
            for (const FrameStats& fs : per_frame) {
                const DetectorFrameStats& d = fs.per_detector[di];
                cell.bit_errors += d.bit_errors;
                iter_sum += d.iterations;
                flop_sum += static_cast<double>(d.flops);
            }
            cell.ber = static_cast<double>(cell.bit_errors) / static_cast<double>(cell.bits_sent);
            cell.mean_iterations = iter_sum / static_cast<double>(frames);
            cell.mean_flops = flop_sum / static_cast<double>(frames);
            if (cfg.trace_mse) {
                std::size_t len = 0;
                for (const FrameStats& fs : per_frame)
                    len = std::max(len, fs.per_detector[di].mse_trace.size());
                cell.mse_trace.assign(len, 0.0);
                for (const FrameStats& fs : per_frame) {
                    const std::vector<double>& tr = fs.per_detector[di].mse_trace;
                    for (std::size_t t = 0; t < tr.size(); ++t) cell.mse_trace[t] += tr[t];
                }
                for (double& v : cell.mse_trace) v /= static_cast<double>(frames);
            }
            result.cells.push_back(std::move(cell));
        }
    }

    std::sort(result.cells.begin(), result.cells.end(), cell_less);
    if (!csv_path.empty()) write_file(csv_path, to_csv(result));
    return result;
}

double calibrate_eta(const SimConfig& cfg, double snr_db, const std::vector<double>& grid,
                     std::vector<std::pair<double, double>>* grid_ber) {
    if (grid.empty()) throw std::invalid_argument("calibrate_eta: empty grid");
    for (double g : grid)
        if (!(g > 0.0)) throw std::invalid_argument("calibrate_eta: grid values must be > 0");

    SimConfig sub = cfg;
    sub.snr_db = {snr_db};
    sub.frames = std::max(cfg.frames / 10, 200);
    sub.detectors = {DetectorKind::sfd};
    sub.trace_mse = false;

    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());

    double best_eta = sorted.front();
    double best_ber = std::numeric_limits<double>::infinity();
    for (double eta : sorted) {
        sub.eta = eta;
        const SimResult r = run_sweep(sub);
        const double ber = r.cells.front().ber;
        if (grid_ber) grid_ber->emplace_back(eta, ber);
        if (ber < best_ber) {  // ties keep the smaller eta
            best_ber = ber;
            best_eta = eta;
        }
    }
    return best_eta;
}

SimResult trace_convergence(const SimConfig& cfg, double snr_db) {
    bool has_mrc = false, has_sfd = false;
    for (DetectorKind k : cfg.detectors) {
        has_mrc |= k == DetectorKind::mrc_dfe;
        has_sfd |= k == DetectorKind::sfd;
    }
    if (!has_mrc || !has_sfd)
        throw std::invalid_argument("trace_convergence: needs both mrc-dfe and sfd");

    SimConfig sub = cfg;
    sub.snr_db = {snr_db};
    sub.trace_mse = true;
    sub.detectors.clear();
    for (DetectorKind k : cfg.detectors)  // iterative detectors only
        if (k == DetectorKind::mrc_dfe || k == DetectorKind::sfd) sub.detectors.push_back(k);
    return run_sweep(sub);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string to_csv(const SimResult& result) {
    std::ostringstream os;
    os << "snr_db,detector,frames,bits_sent,bit_errors,ber,mean_iterations,mean_flops,eta\n";
    for (const SimCell& c : result.cells) {
        os << format_double(c.snr_db) << ',' << to_string(c.detector) << ',' << c.frames << ','
           << c.bits_sent << ',' << c.bit_errors << ',' << format_double(c.ber) << ','
           << format_double(c.mean_iterations) << ',' << format_double(c.mean_flops) << ','
           << format_double(c.eta_used) << '\n';
    }
    return os.str();
}

std::string trace_to_csv(const SimResult& result) {
    std::ostringstream os;
    os << "snr_db,detector,iteration,mse\n";
    for (const SimCell& c : result.cells) {
        for (std::size_t t = 0; t < c.mse_trace.size(); ++t)
            os << format_double(c.snr_db) << ',' << to_string(c.detector) << ',' << (t + 1) << ','
               << format_double(c.mse_trace[t]) << '\n';
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << contents;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<double> parse_snr_spec(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double start = 0, step = 0, stop = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(spec);
        if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0)
            throw std::invalid_argument("bad range spec '" + spec + "' (want start:step:stop)");
        for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    } else {
        std::istringstream is(spec);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) continue;
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument("bad value '" + tok + "'");
            out.push_back(v);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty value list '" + spec + "'");
    return out;
}

}  // namespace afdm
