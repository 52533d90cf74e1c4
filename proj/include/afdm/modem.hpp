// modem.hpp - AFDM modulation: DAFT matrix, IDAFT transmit transform,
// chirp-periodic prefix handling, DAFT receive transform.
//
// Convention: the DAFT matrix is A = Lambda_c2 * F * Lambda_c1 with
// Lambda_c = diag(e^{-j2*pi*c*n^2}) and F the unitary DFT, so the c1 chirp
// acts on the time index and the c2 chirp on the chirp-domain index.
// Demodulation computes y = A*r, modulation s = A^H*x; a path with delay l
// and normalized Doppler alpha then shifts chirp-domain bins by
// 2*N*c1*l + alpha, which is what makes c1 = (2*(alpha_max+xi_nu)+1)/(2N)
// separate paths into disjoint bands.

#pragma once

#include "afdm/transform.hpp"
#include "afdm/types.hpp"

namespace afdm {

struct AfdmConfig {
    int n = 0;              // subcarrier count
    double c1 = 0.0;        // first chirp rate, 1/samples^2
    double c2 = 0.0;        // second chirp rate
    double alpha_max = 0.0; // max normalized Doppler the frame is designed for
    int xi_nu = 0;          // fractional-Doppler guard half-width, in bins
    int l_cpp = 0;          // chirp-periodic prefix length, samples

    /// Canonical construction: c1 = (2*(alpha_max + xi_nu) + 1) / (2n),
    /// c2 a scaled quadratic irrational (the detector maths never depends
    /// on c2, it only decorrelates the chirp-domain phases).
    static AfdmConfig make(int n, double alpha_max, int xi_nu, int l_cpp);

    void validate() const;  // throws std::invalid_argument
};

double canonical_c1(int n, double alpha_max, int xi_nu);
double default_c2(int n);

/// Cached chirp tables + FFT plan for one config; use for repeated
/// transforms (one plan per frame / per effective-channel build).
class DaftPlan {
public:
    explicit DaftPlan(const AfdmConfig& cfg);

    const AfdmConfig& config() const { return cfg_; }

    ComplexVec forward(const ComplexVec& time_samples) const;  // y = A*r
    ComplexVec inverse(const ComplexVec& daft_symbols) const;  // s = A^H*x

private:
    AfdmConfig cfg_;
    FftPlan fft_;
    ComplexVec chirp1_;  // e^{-j2*pi*c1*n^2}
    ComplexVec chirp2_;  // e^{-j2*pi*c2*m^2}
};

/// Dense N x N DAFT matrix (unitary).
ComplexMat daft_matrix(const AfdmConfig& cfg);

ComplexVec modulate(const AfdmConfig& cfg, const ComplexVec& x);
ComplexVec demodulate(const AfdmConfig& cfg, const ComplexVec& r);

/// Prepend the chirp-periodic prefix: sample at absolute index k in
/// [-l_cpp, -1] equals s[n+k] * e^{-j2*pi*c1*(n^2 + 2*n*k)}.
ComplexVec add_cpp(const AfdmConfig& cfg, const ComplexVec& s);

/// Drop the first l_cpp samples of an (n + l_cpp)-sample receive frame.
ComplexVec remove_cpp(const AfdmConfig& cfg, const ComplexVec& r);

}  // namespace afdm
