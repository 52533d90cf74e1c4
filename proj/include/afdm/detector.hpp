// detector.hpp - the three detectors (dense MMSE, MRC-DFE, SFD) plus the
// soft-feedback primitives, the exact bit-variance oracle, and the
// analytical FLOP models.

#pragma once

#include "afdm/channel.hpp"
#include "afdm/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace afdm {

enum class DetectorKind { mmse, mf_mp, mrc_dfe, sfd };

const char* to_string(DetectorKind k);
std::optional<DetectorKind> detector_from_string(std::string_view s);

struct DetectorConfig {
    int t_max_iter = 20;
    double t_error = 0.01;   // relative convergence tolerance
    double eta = 0.5;        // soft bit-variance scaling
    double snr_linear = 1.0; // gamma = Es/N0; +inf allowed (zero shrinkage)

    bool use_per_column_d = false;       // exact d_c instead of the shared mean
    bool tanh_half_llr = false;          // tanh(L/2) soft-symbol convention
    bool disable_convergence_check = false;  // trace mode: always run t_max_iter
    bool validate_residual = false;      // track running-vs-recomputed residual drift

    void validate() const;
};

/// Per-symbol soft information. Bit b=1 is the in-phase bit (Re), b=2 the
/// quadrature bit (Im); arrays hold 2 entries per symbol, [2c] and [2c+1].
struct SoftState {
    std::vector<double> l_post;
    std::vector<double> l_pri;
    ComplexVec e_sym;
    std::vector<double> var_bit;
};

/// Read-only view handed to iteration observers (test instrumentation).
struct DetectorState {
    const ComplexVec& x_hat;
    const ComplexVec& residual;
    const ComplexVec& g;
    int iteration;
};

using IterationObserver = std::function<void(const DetectorState&, const SoftState*)>;

struct DetectionResult {
    ComplexVec x_hat;
    int iterations_used = 0;
    bool converged = false;
    std::vector<double> mse_trace;   // ||x_hat - x||^2 / N per iteration, if truth given
    std::uint64_t flops_estimate = 0;
    double max_residual_dev = 0.0;   // only meaningful with cfg.validate_residual
    SoftState soft;                  // final soft state (SFD only)
};

/// Dense LMMSE: x_hat = (H^H H + gamma^{-1} I)^{-1} H^H y on the full
/// effective channel matrix.
DetectionResult detect_mmse(const EffectiveChannel& h, const ComplexVec& y,
                            const DetectorConfig& cfg, const ComplexVec* truth = nullptr);

/// MRC decision-feedback baseline: per-column combine over the banded
/// support, shrinkage by d + gamma^{-1}, in-sweep (Gauss-Seidel) residual
/// updates, previous estimates fed back.
DetectionResult detect_mrc_dfe(const EffectiveChannel& h, const ComplexVec& y,
                               const DetectorConfig& cfg, const ComplexVec* truth = nullptr,
                               const IterationObserver& observer = {});

/// Soft-feedback detector: the MRC estimator with soft symbol expectations
/// fed back, followed once per iteration by the LLR update
///   L_ext = sqrt(2)/var_bit * x_hat_bit,  L_post += L_ext,
///   E_sym = (tanh(L_post,1) + j tanh(L_post,2))/sqrt(2),
///   var_bit = max(eta*(1 - |E_sym|^2), variance floor).
DetectionResult detect_sfd(const EffectiveChannel& h, const ComplexVec& y,
                           const DetectorConfig& cfg, const ComplexVec* truth = nullptr,
                           const IterationObserver& observer = {});

inline constexpr double kVarianceFloor = 1e-6;
inline constexpr double kLlrSaturation = 38.0;  // tanh(38) == 1 to double precision

/// Per-bit soft observations of a QPSK estimate: (Re, Im).
std::pair<double, double> bit_projection(Complex x_hat_c);

/// QPSK soft symbol expectation from the two posterior bit LLRs.
Complex soft_expectation(double l_post_b1, double l_post_b2);

/// Simplified bit variance: max(eta * (1 - |e_sym|^2), floor).
double variance_update(Complex e_sym_c, double eta);

enum class NoiseSign { plus, minus };

/// Exact (matrix-inversion) bit variance for test-scale problems (n <= 64):
/// theta_c = h_c^H (H V H^H +/- N0 I)^{-1} h_c with V = diag(v), and
/// sigma^2 = v_c^2 * theta_c * (1 - v_c * theta_c). The additive noise term
/// uses '+' by default; the sign switch exists for test ablation only.
double exact_bit_variance_oracle(const EffectiveChannel& h, const std::vector<double>& v,
                                 double n0, int c, NoiseSign sign = NoiseSign::plus);

/// Closed-form FLOP counts:
///   mmse     24*N^3
///   mf-mp    32*N*L^2 + n_iter*(32*N*L + 120*N)
///   mrc-dfe  n_iter*N*(16L + 17)
///   sfd      n_iter*N*(16L + 51)
std::uint64_t flops_model(DetectorKind k, std::uint64_t n, std::uint64_t l,
                          std::uint64_t n_iter);

}  // namespace afdm
