// channel.hpp - doubly dispersive channel model and the chirp-domain
// effective channel with its banded sparsity structure.

#pragma once

#include "afdm/modem.hpp"
#include "afdm/rng.hpp"
#include "afdm/types.hpp"

#include <vector>

namespace afdm {

struct ChannelPath {
    Complex gain;        // h_i
    int delay = 0;       // l_i, integer samples
    double doppler = 0;  // alpha_i = N*f_i, cycles per frame
};

struct ChannelRealization {
    std::vector<ChannelPath> paths;
    int l_max = 0;
    double alpha_max = 0.0;

    int max_delay() const;
};

/// Random channel draw: path 0 at delay 0, remaining delays sampled without
/// replacement from [1, l_max], gains i.i.d. CN(0, 1/p) (unit average
/// channel energy), Dopplers uniform on [-alpha_max, alpha_max] or on the
/// integers of that range.
ChannelRealization generate_channel(RngStream& rng, int p, int l_max, double alpha_max,
                                    bool integer_doppler);

/// Exact linear time-varying channel. `s_cpp` holds n + l_cpp samples with
/// the prefix occupying absolute sample indices [-l_cpp, -1]; the output has
/// the same layout. Per path: r[n] += h * e^{-j2*pi*(alpha/N)*n} * s[n-l],
/// with the Doppler phase evaluated at the absolute index n. AWGN of
/// variance n0 is added to every output sample.
ComplexVec apply_channel(const ChannelRealization& ch, const ComplexVec& s_cpp, int l_cpp,
                         double n0, RngStream& rng);

struct BandSupport {
    std::vector<std::vector<int>> cols;  // J_c: retained row indices, per column
    std::vector<std::vector<int>> rows;  // I_r: retained column indices, per row
    int bandwidth = 0;                   // L = (2*xi_nu + 1) * P
};

/// Banded support of the effective channel. Path i has position parameter
/// p_i = 2*N*c1*l_i + alpha_i and contributes, for column c, the rows
/// (c - round(p_i) + k) mod N for k in [-xi_nu, xi_nu]; J_c is the union
/// over paths (deduplicated), I_r the transpose relation.
///
/// Note the sign: with the e^{-j2*pi*f*n} Doppler phase and the A = Lambda_c2
/// F Lambda_c1 transform pair, a path moves energy from column c to row
/// c - p_i (mod N). A dense brute-force conjugation confirms this
/// orientation; see the single-path tests.
BandSupport band_support(const AfdmConfig& cfg, const ChannelRealization& ch);

struct EffectiveChannel {
    int n = 0;
    ComplexMat dense;           // exact H_eff, operationally defined
    BandSupport band;
    double d = 0.0;             // mean over columns of the banded column energy
    std::vector<double> d_col;  // per-column banded energy (ablation path)
    double noise_variance = 0.0;

    // Banded entries packed column-major for the iterative detectors.
    std::vector<int> col_begin;  // size n+1, prefix offsets
    std::vector<int> band_row;   // row index per packed entry
    ComplexVec band_val;         // H_eff[row, col] per packed entry
};

/// H_eff defined operationally: column c is the noiseless receive chain
/// (IDAFT -> CPP -> channel -> CPP removal -> DAFT) applied to the c-th unit
/// vector, i.e. H_eff = A * T * A^H with T the time-domain transfer matrix.
/// This guarantees demodulate(receive(x)) == H_eff*x + w for any x, with no
/// dependence on closed-form phase conventions.
EffectiveChannel build_effective_channel(const AfdmConfig& cfg, const ChannelRealization& ch,
                                         double n0);
EffectiveChannel build_effective_channel(const DaftPlan& plan, const ChannelRealization& ch,
                                         double n0);

}  // namespace afdm
