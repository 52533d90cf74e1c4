#include "afdm/detector.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace afdm {

namespace {

using EigenMat =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<const EigenMat>;
using VecMap = Eigen::Map<const Eigen::VectorXcd>;

constexpr double kSqrt2 = std::numbers::sqrt2;

enum class Feedback { hard, soft };

// nearest QPSK point; exact zeros slice positive, matching the demapper
Complex qpsk_slice(Complex x) {
    const double a = 1.0 / kSqrt2;
    return {x.real() < 0.0 ? -a : a, x.imag() < 0.0 ? -a : a};
}

double symbol_mse(const ComplexVec& est, const ComplexVec& truth) {
    double acc = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) acc += std::norm(est[i] - truth[i]);
    return acc / static_cast<double>(est.size());
}

double clamp_llr(double l) { return std::clamp(l, -kLlrSaturation, kLlrSaturation); }

// Shared core of MRC-DFE and SFD. The estimation sweep is identical for
// both: the running residual dy = y - H*q cancels interference with q, the
// freshest symbol estimates (in-sweep Gauss-Seidel replacement), so after a
// sweep dy is exactly the fresh residual of the new estimates. The two
// detectors differ only in what gets fed back after the convergence check:
// MRC-DFE re-slices the estimates onto the constellation (hard decision
// feedback), the SFD feeds the soft symbol expectations. q then moves to
// the fed-back values, so the next sweep's residual cancels with them.
// Feeding conditional means keeps a wrongly saturated symbol recoverable:
// its true signal stays in the residual and the combine pulls it back.
DetectionResult run_mrc_family(const EffectiveChannel& h, const ComplexVec& y,
                               const DetectorConfig& cfg, Feedback mode,
                               const ComplexVec* truth, const IterationObserver& observer) {
    cfg.validate();
    const int n = h.n;
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("detector: observation length mismatch");
    if (truth && static_cast<int>(truth->size()) != n)
        throw std::invalid_argument("detector: ground-truth length mismatch");
    const double inv_gamma = 1.0 / cfg.snr_linear;  // 0 when snr_linear is +inf

    DetectionResult res;
    ComplexVec x_prev(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    ComplexVec x_cur = x_prev;
    ComplexVec g(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    ComplexVec feedback = x_prev;  // x_hat^(0) = 0 and E_sym^(0) = 0
    ComplexVec q = x_prev;         // cancellation vector: dy == y - H*q throughout
    ComplexVec dy = y;

    SoftState soft;
    if (mode == Feedback::soft) {
        soft.l_post.assign(2 * static_cast<std::size_t>(n), 0.0);
        soft.l_pri.assign(2 * static_cast<std::size_t>(n), 0.0);
        soft.e_sym.assign(static_cast<std::size_t>(n), Complex{0.0, 0.0});
        soft.var_bit.assign(2 * static_cast<std::size_t>(n), 1.0);
    }

    const double llr_scale = cfg.tanh_half_llr ? 0.5 : 1.0;
    int used = 0;
    for (int t = 1; t <= cfg.t_max_iter; ++t) {
        used = t;
        for (int c = 0; c < n; ++c) {
            Complex acc{0.0, 0.0};
            for (int idx = h.col_begin[c]; idx < h.col_begin[c + 1]; ++idx)
                acc += std::conj(h.band_val[idx]) * dy[h.band_row[idx]];
            const double dc = cfg.use_per_column_d ? h.d_col[c] : h.d;
            const Complex gc = acc + dc * feedback[c];
            g[c] = gc;
            const Complex xn = gc / (dc + inv_gamma);
            const Complex delta = xn - q[c];
            x_cur[c] = xn;
            q[c] = xn;
            for (int idx = h.col_begin[c]; idx < h.col_begin[c + 1]; ++idx)
                dy[h.band_row[idx]] -= h.band_val[idx] * delta;
        }

        if (truth) res.mse_trace.push_back(symbol_mse(x_cur, *truth));

        if (cfg.validate_residual) {
            // fresh residual per its definition, over the banded support
            double num = 0.0, den = 0.0;
            for (int r = 0; r < n; ++r) {
                Complex fresh = y[r];
                for (int c : h.band.rows[r]) fresh -= h.dense.at(r, c) * x_cur[c];
                num += std::norm(dy[r] - fresh);
                den += std::norm(fresh);
            }
            const double dev = std::sqrt(num) / std::max(std::sqrt(den), 1e-30);
            res.max_residual_dev = std::max(res.max_residual_dev, dev);
        }

        const bool converged = !cfg.disable_convergence_check &&
                               l2_dist(x_cur, x_prev) <= cfg.t_error * l2_norm(x_prev);
        x_prev = x_cur;
        if (converged) {
            res.converged = true;
            if (observer)
                observer(DetectorState{x_cur, dy, g, t}, mode == Feedback::soft ? &soft : nullptr);
            break;
        }

        if (mode == Feedback::soft) {
            soft.l_pri = soft.l_post;
            for (int c = 0; c < n; ++c) {
                const auto [b1, b2] = bit_projection(x_cur[c]);
                const double l_ext1 = kSqrt2 / soft.var_bit[2 * c] * b1;
                const double l_ext2 = kSqrt2 / soft.var_bit[2 * c + 1] * b2;
                soft.l_post[2 * c] = soft.l_pri[2 * c] + l_ext1;
                soft.l_post[2 * c + 1] = soft.l_pri[2 * c + 1] + l_ext2;
                const Complex e = soft_expectation(llr_scale * soft.l_post[2 * c],
                                                   llr_scale * soft.l_post[2 * c + 1]);
                soft.e_sym[c] = e;
                const double var = variance_update(e, cfg.eta);
                soft.var_bit[2 * c] = var;
                soft.var_bit[2 * c + 1] = var;
            }
            feedback = soft.e_sym;
        } else {
            for (int c = 0; c < n; ++c) feedback[c] = qpsk_slice(x_cur[c]);
        }

        // move the cancellation from the raw estimates to the fed-back
        // values, so dy == y - H*feedback entering the next sweep
        for (int c = 0; c < n; ++c) {
            const Complex adj = feedback[c] - q[c];
            q[c] = feedback[c];
            if (adj == Complex{0.0, 0.0}) continue;
            for (int idx = h.col_begin[c]; idx < h.col_begin[c + 1]; ++idx)
                dy[h.band_row[idx]] -= h.band_val[idx] * adj;
        }

        if (observer)
            observer(DetectorState{x_cur, dy, g, t}, mode == Feedback::soft ? &soft : nullptr);
    }

    res.x_hat = std::move(x_cur);
    res.iterations_used = used;
    res.flops_estimate = flops_model(
        mode == Feedback::soft ? DetectorKind::sfd : DetectorKind::mrc_dfe,
        static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(h.band.bandwidth),
        static_cast<std::uint64_t>(used));
    if (mode == Feedback::soft) res.soft = std::move(soft);
    return res;
}

}  // namespace

const char* to_string(DetectorKind k) {
    switch (k) {
        case DetectorKind::mmse: return "mmse";
        case DetectorKind::mf_mp: return "mf-mp";
        case DetectorKind::mrc_dfe: return "mrc-dfe";
        case DetectorKind::sfd: return "sfd";
    }
    return "?";
}

std::optional<DetectorKind> detector_from_string(std::string_view s) {
    if (s == "mmse") return DetectorKind::mmse;
    if (s == "mf-mp") return DetectorKind::mf_mp;
    if (s == "mrc-dfe") return DetectorKind::mrc_dfe;
    if (s == "sfd") return DetectorKind::sfd;
    return std::nullopt;
}

void DetectorConfig::validate() const {
    if (t_max_iter < 1) throw std::invalid_argument("DetectorConfig: t_max_iter must be >= 1");
    if (!(t_error > 0.0 && t_error < 1.0))
        throw std::invalid_argument("DetectorConfig: t_error must be in (0, 1)");
    if (!(eta > 0.0)) throw std::invalid_argument("DetectorConfig: eta must be > 0");
    if (!(snr_linear > 0.0)) throw std::invalid_argument("DetectorConfig: snr must be > 0");
}

std::pair<double, double> bit_projection(Complex x_hat_c) {
    return {x_hat_c.real(), x_hat_c.imag()};
}

// noinline: the detector loop must store bit-identical values to what these
// public functions return, so instrumented runs can assert exact coupling;
// inlined copies would be free to contract the arithmetic differently.
[[gnu::noinline]] Complex soft_expectation(double l_post_b1, double l_post_b2) {
    return {std::tanh(clamp_llr(l_post_b1)) / kSqrt2, std::tanh(clamp_llr(l_post_b2)) / kSqrt2};
}

[[gnu::noinline]] double variance_update(Complex e_sym_c, double eta) {
    return std::max(eta * (1.0 - std::norm(e_sym_c)), kVarianceFloor);
}

DetectionResult detect_mmse(const EffectiveChannel& h, const ComplexVec& y,
                            const DetectorConfig& cfg, const ComplexVec* truth) {
    cfg.validate();
    const int n = h.n;
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("detect_mmse: observation length mismatch");
    const double inv_gamma = 1.0 / cfg.snr_linear;

    MatMap hm(h.dense.data.data(), n, n);
    VecMap yv(y.data(), n);

    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(hm.adjoint());  // H^H H
    gram.diagonal().array() += inv_gamma;

    const Eigen::VectorXcd rhs = hm.adjoint() * yv;
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    Eigen::VectorXcd sol;
    if (llt.info() == Eigen::Success) {
        sol = llt.solve(rhs);
    } else {
        // gamma = inf with a rank-deficient channel; fall back to a pivoted solve
        Eigen::MatrixXcd full = gram.selfadjointView<Eigen::Lower>();
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(full);
        if (!lu.isInvertible()) throw std::runtime_error("detect_mmse: singular system");
        sol = lu.solve(rhs);
    }

    DetectionResult res;
    res.x_hat.assign(sol.data(), sol.data() + n);
    res.iterations_used = 1;
    res.converged = true;
    res.flops_estimate = flops_model(DetectorKind::mmse, static_cast<std::uint64_t>(n),
                                     static_cast<std::uint64_t>(h.band.bandwidth), 1);
    if (truth) res.mse_trace.push_back(symbol_mse(res.x_hat, *truth));
    return res;
}

DetectionResult detect_mrc_dfe(const EffectiveChannel& h, const ComplexVec& y,
                               const DetectorConfig& cfg, const ComplexVec* truth,
                               const IterationObserver& observer) {
    return run_mrc_family(h, y, cfg, Feedback::hard, truth, observer);
}

DetectionResult detect_sfd(const EffectiveChannel& h, const ComplexVec& y,
                           const DetectorConfig& cfg, const ComplexVec* truth,
                           const IterationObserver& observer) {
    return run_mrc_family(h, y, cfg, Feedback::soft, truth, observer);
}

double exact_bit_variance_oracle(const EffectiveChannel& h, const std::vector<double>& v,
                                 double n0, int c, NoiseSign sign) {
    const int n = h.n;
    if (n > 64) throw std::invalid_argument("exact_bit_variance_oracle: test-scale only (n <= 64)");
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("exact_bit_variance_oracle: v length mismatch");
    if (c < 0 || c >= n) throw std::invalid_argument("exact_bit_variance_oracle: bad column");

    MatMap hm(h.dense.data.data(), n, n);
    const Eigen::VectorXd vd = Eigen::Map<const Eigen::VectorXd>(v.data(), n);
    const double noise = sign == NoiseSign::plus ? n0 : -n0;
    Eigen::MatrixXcd m = hm * vd.asDiagonal() * hm.adjoint();
    m.diagonal().array() += noise;

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    if (!lu.isInvertible())
        throw std::runtime_error("exact_bit_variance_oracle: inner matrix is singular");
    const Eigen::VectorXcd hc = hm.col(c);
    const double theta = hc.dot(lu.solve(hc)).real();
    const double vc = v[static_cast<std::size_t>(c)];
    return vc * vc * theta * (1.0 - vc * theta);
}

std::uint64_t flops_model(DetectorKind k, std::uint64_t n, std::uint64_t l,
                          std::uint64_t n_iter) {
    if (n == 0) throw std::invalid_argument("flops_model: n must be positive");
    switch (k) {
        case DetectorKind::mmse:
            return 24 * n * n * n;
        case DetectorKind::mf_mp:
            return 32 * n * l * l + n_iter * (32 * n * l + 120 * n);
        case DetectorKind::mrc_dfe:
            return n_iter * n * (16 * l + 17);
        case DetectorKind::sfd:
            return n_iter * n * (16 * l + 51);
    }
    throw std::invalid_argument("flops_model: unknown detector");
}

}  // namespace afdm
