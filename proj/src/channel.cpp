#include "afdm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace afdm {

namespace {

// Doppler phase e^{-j2*pi*(alpha/N)*n} over absolute samples n in
// [-l_cpp, n_frame); table index k corresponds to n = k - l_cpp.
ComplexVec doppler_table(double alpha, int n_frame, int l_cpp) {
    ComplexVec t(static_cast<std::size_t>(n_frame + l_cpp));
    for (int k = 0; k < n_frame + l_cpp; ++k) {
        const int n = k - l_cpp;
        t[k] = phase_turns(-static_cast<long double>(alpha) * n / n_frame);
    }
    return t;
}

// Noiseless LTV channel on a CPP-extended frame; inputs earlier than the
// prefix are treated as zero (those outputs sit in the discarded prefix).
void apply_paths(const ChannelRealization& ch, const std::vector<ComplexVec>& phases,
                 const ComplexVec& s_cpp, ComplexVec& out) {
    const int total = static_cast<int>(s_cpp.size());
    out.assign(s_cpp.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < ch.paths.size(); ++i) {
        const ChannelPath& p = ch.paths[i];
        const ComplexVec& ph = phases[i];
        const int l = p.delay;
        for (int k = l; k < total; ++k) out[k] += p.gain * ph[k] * s_cpp[k - l];
    }
}

std::vector<ComplexVec> doppler_tables(const ChannelRealization& ch, int n_frame, int l_cpp) {
    std::vector<ComplexVec> phases;
    phases.reserve(ch.paths.size());
    for (const ChannelPath& p : ch.paths) phases.push_back(doppler_table(p.doppler, n_frame, l_cpp));
    return phases;
}

void check_delays(const ChannelRealization& ch, int l_cpp) {
    for (const ChannelPath& p : ch.paths) {
        if (p.delay < 0) throw std::invalid_argument("channel: negative path delay");
        if (p.delay > l_cpp)
            throw std::invalid_argument("channel: path delay exceeds the prefix length");
    }
}

}  // namespace

int ChannelRealization::max_delay() const {
    int m = 0;
    for (const ChannelPath& p : paths) m = std::max(m, p.delay);
    return m;
}

ChannelRealization generate_channel(RngStream& rng, int p, int l_max, double alpha_max,
                                    bool integer_doppler) {
    if (p < 1) throw std::invalid_argument("generate_channel: need at least one path");
    if (l_max < 0) throw std::invalid_argument("generate_channel: negative l_max");
    if (alpha_max < 0) throw std::invalid_argument("generate_channel: negative alpha_max");
    if (p - 1 > l_max)
        throw std::invalid_argument(
            "generate_channel: distinct delays need p <= l_max + 1");

    ChannelRealization ch;
    ch.l_max = l_max;
    ch.alpha_max = alpha_max;
    ch.paths.resize(static_cast<std::size_t>(p));

    const ComplexVec gains = sample_cscg(rng, static_cast<std::size_t>(p), 1.0 / p);
    for (int i = 0; i < p; ++i) ch.paths[i].gain = gains[i];

    // path 0 at delay 0; the rest drawn without replacement from [1, l_max]
    ch.paths[0].delay = 0;
    std::vector<int> pool(static_cast<std::size_t>(l_max));
    std::iota(pool.begin(), pool.end(), 1);
    for (int i = 1; i < p; ++i) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(pool.size()));
        ch.paths[i].delay = pool[pick];
        pool[pick] = pool.back();
        pool.pop_back();
    }

    const int alpha_int = static_cast<int>(std::floor(alpha_max));
    for (int i = 0; i < p; ++i) {
        if (integer_doppler) {
            const std::uint64_t span = 2 * static_cast<std::uint64_t>(alpha_int) + 1;
            ch.paths[i].doppler = static_cast<double>(static_cast<int>(rng.below(span)) - alpha_int);
        } else {
            ch.paths[i].doppler = alpha_max * (2.0 * rng.uniform() - 1.0);
        }
    }
    return ch;
}

ComplexVec apply_channel(const ChannelRealization& ch, const ComplexVec& s_cpp, int l_cpp,
                         double n0, RngStream& rng) {
    if (l_cpp < 0 || static_cast<int>(s_cpp.size()) <= l_cpp)
        throw std::invalid_argument("apply_channel: bad frame/prefix lengths");
    check_delays(ch, l_cpp);
    const int n_frame = static_cast<int>(s_cpp.size()) - l_cpp;

    ComplexVec out;
    apply_paths(ch, doppler_tables(ch, n_frame, l_cpp), s_cpp, out);

    if (n0 > 0.0) {
        const ComplexVec w = sample_cscg(rng, out.size(), n0);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += w[k];
    } else if (n0 < 0.0) {
        throw std::invalid_argument("apply_channel: negative noise variance");
    }
    return out;
}

BandSupport band_support(const AfdmConfig& cfg, const ChannelRealization& ch) {
    cfg.validate();
    const int n = cfg.n;

    // column-to-row offsets shared by every column
    std::set<int> offs;
    for (const ChannelPath& p : ch.paths) {
        const double pos = 2.0 * n * cfg.c1 * p.delay + p.doppler;
        const long center = std::llround(pos);
        for (int k = -cfg.xi_nu; k <= cfg.xi_nu; ++k) {
            long u = -center + k;
            u %= n;
            if (u < 0) u += n;
            offs.insert(static_cast<int>(u));
        }
    }

    BandSupport band;
    band.bandwidth = (2 * cfg.xi_nu + 1) * static_cast<int>(ch.paths.size());
    band.cols.resize(static_cast<std::size_t>(n));
    band.rows.resize(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        std::vector<int>& jc = band.cols[c];
        jc.reserve(offs.size());
        for (int u : offs) jc.push_back((c + u) % n);
        std::sort(jc.begin(), jc.end());
    }
    for (int r = 0; r < n; ++r) {
        std::vector<int>& ir = band.rows[r];
        ir.reserve(offs.size());
        for (int u : offs) ir.push_back((r - u + n) % n);
        std::sort(ir.begin(), ir.end());
    }
    return band;
}

EffectiveChannel build_effective_channel(const AfdmConfig& cfg, const ChannelRealization& ch,
                                         double n0) {
    return build_effective_channel(DaftPlan(cfg), ch, n0);
}

EffectiveChannel build_effective_channel(const DaftPlan& plan, const ChannelRealization& ch,
                                         double n0) {
    const AfdmConfig& cfg = plan.config();
    check_delays(ch, cfg.l_cpp);
    if (n0 < 0.0) throw std::invalid_argument("build_effective_channel: negative noise variance");
    const int n = cfg.n;

    EffectiveChannel h;
    h.n = n;
    h.noise_variance = n0;
    h.dense = ComplexMat(n, n);

    const std::vector<ComplexVec> phases = doppler_tables(ch, n, cfg.l_cpp);
    ComplexVec unit(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    ComplexVec faded;
    for (int c = 0; c < n; ++c) {
        unit[c] = 1.0;
        const ComplexVec s_cpp = add_cpp(cfg, plan.inverse(unit));
        unit[c] = 0.0;
        apply_paths(ch, phases, s_cpp, faded);
        const ComplexVec y = plan.forward(remove_cpp(cfg, faded));
        for (int r = 0; r < n; ++r) h.dense.at(r, c) = y[r];
    }

    h.band = band_support(cfg, ch);
    h.col_begin.resize(static_cast<std::size_t>(n) + 1, 0);
    h.d_col.resize(static_cast<std::size_t>(n), 0.0);
    for (int c = 0; c < n; ++c)
        h.col_begin[c + 1] = h.col_begin[c] + static_cast<int>(h.band.cols[c].size());
    h.band_row.resize(static_cast<std::size_t>(h.col_begin[n]));
    h.band_val.resize(static_cast<std::size_t>(h.col_begin[n]));
    for (int c = 0; c < n; ++c) {
        int idx = h.col_begin[c];
        double energy = 0.0;
        for (int r : h.band.cols[c]) {
            const Complex v = h.dense.at(r, c);
            h.band_row[idx] = r;
            h.band_val[idx] = v;
            energy += std::norm(v);
            ++idx;
        }
        h.d_col[c] = energy;
    }
    h.d = std::accumulate(h.d_col.begin(), h.d_col.end(), 0.0) / n;
    return h;
}

}  // namespace afdm
