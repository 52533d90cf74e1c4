#include "afdm/modem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace afdm {

namespace {

// e^{-j2*pi*c*k} for integer k, with the turn count folded in extended
// precision (k reaches N^2 + 2*N*l_cpp for the prefix phases).
Complex chirp_phase(double c, long long k) {
    return phase_turns(-static_cast<long double>(c) * static_cast<long double>(k));
}

ComplexVec chirp_table(double c, int n) {
    ComplexVec t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        t[i] = chirp_phase(c, static_cast<long long>(i) * static_cast<long long>(i));
    return t;
}

}  // namespace

double canonical_c1(int n, double alpha_max, int xi_nu) {
    return (2.0 * (alpha_max + xi_nu) + 1.0) / (2.0 * n);
}

double default_c2(int n) {
    // scaled like c1; quadratic irrational, value is otherwise immaterial
    return (std::sqrt(5.0) - 1.0) / 2.0 / (2.0 * n);
}

AfdmConfig AfdmConfig::make(int n, double alpha_max, int xi_nu, int l_cpp) {
    AfdmConfig cfg;
    cfg.n = n;
    cfg.alpha_max = alpha_max;
    cfg.xi_nu = xi_nu;
    cfg.l_cpp = l_cpp;
    cfg.c1 = canonical_c1(n, alpha_max, xi_nu);
    cfg.c2 = default_c2(n);
    cfg.validate();
    return cfg;
}

void AfdmConfig::validate() const {
    if (n < 2) throw std::invalid_argument("AfdmConfig: n must be >= 2");
    if (xi_nu < 0) throw std::invalid_argument("AfdmConfig: xi_nu must be >= 0");
    if (alpha_max < 0) throw std::invalid_argument("AfdmConfig: alpha_max must be >= 0");
    if (l_cpp < 0 || l_cpp > n)
        throw std::invalid_argument("AfdmConfig: l_cpp must be in [0, n]");
    if (!std::isfinite(c1) || !std::isfinite(c2))
        throw std::invalid_argument("AfdmConfig: chirp rates must be finite");
}

DaftPlan::DaftPlan(const AfdmConfig& cfg)
    : cfg_(cfg), fft_(static_cast<std::size_t>(cfg.n)),
      chirp1_(chirp_table(cfg.c1, cfg.n)), chirp2_(chirp_table(cfg.c2, cfg.n)) {
    cfg.validate();
}

ComplexVec DaftPlan::forward(const ComplexVec& r) const {
    const int n = cfg_.n;
    if (static_cast<int>(r.size()) != n)
        throw std::invalid_argument("DaftPlan::forward: expected " + std::to_string(n) +
                                    " samples");
    ComplexVec y(r.size());
    for (int i = 0; i < n; ++i) y[i] = chirp1_[i] * r[i];
    fft_.forward(y);
    for (int m = 0; m < n; ++m) y[m] *= chirp2_[m];
    return y;
}

ComplexVec DaftPlan::inverse(const ComplexVec& x) const {
    const int n = cfg_.n;
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("DaftPlan::inverse: expected " + std::to_string(n) +
                                    " symbols");
    ComplexVec s(x.size());
    for (int m = 0; m < n; ++m) s[m] = std::conj(chirp2_[m]) * x[m];
    fft_.inverse(s);
    for (int i = 0; i < n; ++i) s[i] *= std::conj(chirp1_[i]);
    return s;
}

ComplexMat daft_matrix(const AfdmConfig& cfg) {
    cfg.validate();
    const int n = cfg.n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMat a(n, n);
    for (int r = 0; r < n; ++r) {
        const long double row_turns =
            static_cast<long double>(cfg.c2) * (static_cast<long long>(r) * r);
        for (int c = 0; c < n; ++c) {
            const long double col_turns =
                static_cast<long double>(cfg.c1) * (static_cast<long long>(c) * c);
            const long double dft_turns =
                static_cast<long double>((static_cast<long long>(r) * c) % n) / n;
            a.at(r, c) = scale * phase_turns(-(row_turns + dft_turns + col_turns));
        }
    }
    return a;
}

ComplexVec modulate(const AfdmConfig& cfg, const ComplexVec& x) {
    return DaftPlan(cfg).inverse(x);
}

ComplexVec demodulate(const AfdmConfig& cfg, const ComplexVec& r) {
    return DaftPlan(cfg).forward(r);
}

ComplexVec add_cpp(const AfdmConfig& cfg, const ComplexVec& s) {
    cfg.validate();
    const int n = cfg.n;
    const int l = cfg.l_cpp;
    if (static_cast<int>(s.size()) != n)
        throw std::invalid_argument("add_cpp: expected n samples");
    ComplexVec out(static_cast<std::size_t>(n + l));
    for (int k = 0; k < l; ++k) {
        const int abs_idx = k - l;  // in [-l_cpp, -1]
        const long long arg = static_cast<long long>(n) * n + 2LL * n * abs_idx;
        out[k] = s[static_cast<std::size_t>(n + abs_idx)] * chirp_phase(cfg.c1, arg);
    }
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(l + i)] = s[i];
    return out;
}

ComplexVec remove_cpp(const AfdmConfig& cfg, const ComplexVec& r) {
    cfg.validate();
    const int n = cfg.n;
    const int l = cfg.l_cpp;
    if (static_cast<int>(r.size()) != n + l)
        throw std::invalid_argument("remove_cpp: expected n + l_cpp samples");
    return ComplexVec(r.begin() + l, r.end());
}

}  // namespace afdm
