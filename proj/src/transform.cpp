#include "afdm/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace afdm {

namespace {
constexpr long double kTau = 6.283185307179586476925286766559L;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Complex phase_turns(long double turns) {
    long double f = turns - std::floor(turns);
    const double ang = static_cast<double>(kTau * f);
    return {std::cos(ang), std::sin(ang)};
}

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
    if (n == 0) throw std::invalid_argument("FftPlan: empty transform");
    if (pow2_) {
        twiddle_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k)
            twiddle_[k] = phase_turns(-static_cast<long double>(k) / static_cast<long double>(n));
        bitrev_.resize(n);
        std::uint32_t bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t r = 0;
            for (std::uint32_t b = 0; b < bits; ++b)
                if (i & (std::size_t{1} << b)) r |= std::uint32_t{1} << (bits - 1 - b);
            bitrev_[i] = r;
        }
    } else {
        twiddle_.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            twiddle_[k] = phase_turns(-static_cast<long double>(k) / static_cast<long double>(n));
    }
}

void FftPlan::radix2(ComplexVec& x, bool inverse) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < half; ++k) {
                Complex w = twiddle_[k * stride];
                if (inverse) w = std::conj(w);
                const Complex u = x[base + k];
                const Complex t = x[base + k + half] * w;
                x[base + k] = u + t;
                x[base + k + half] = u - t;
            }
        }
    }
}

void FftPlan::direct(ComplexVec& x, bool inverse) const {
    const std::size_t n = n_;
    ComplexVec out(n, Complex{0.0, 0.0});
    for (std::size_t m = 0; m < n; ++m) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            Complex w = twiddle_[(k * m) % n];
            if (inverse) w = std::conj(w);
            acc += x[k] * w;
        }
        out[m] = acc;
    }
    x = std::move(out);
}

void FftPlan::forward(ComplexVec& x) const {
    if (x.size() != n_) throw std::invalid_argument("FftPlan::forward: size mismatch");
    if (pow2_)
        radix2(x, false);
    else
        direct(x, false);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (Complex& v : x) v *= scale;
}

void FftPlan::inverse(ComplexVec& x) const {
    if (x.size() != n_) throw std::invalid_argument("FftPlan::inverse: size mismatch");
    if (pow2_)
        radix2(x, true);
    else
        direct(x, true);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (Complex& v : x) v *= scale;
}

ComplexVec unitary_dft(const ComplexVec& x) {
    if (x.empty()) throw std::invalid_argument("unitary_dft: empty input");
    ComplexVec y = x;
    FftPlan(x.size()).forward(y);
    return y;
}

ComplexVec unitary_idft(const ComplexVec& x) {
    if (x.empty()) throw std::invalid_argument("unitary_idft: empty input");
    ComplexVec y = x;
    FftPlan(x.size()).inverse(y);
    return y;
}

}  // namespace afdm
