#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

using afdm::Complex;
using afdm::ComplexMat;
using afdm::ComplexVec;

ComplexVec dft_direct(const ComplexVec& x, bool inverse) {
    const std::size_t n = x.size();
    const long double tau = 6.283185307179586476925286766559L;
    const double sign = inverse ? 1.0 : -1.0;
    ComplexVec y(n);
    for (std::size_t m = 0; m < n; ++m) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const long double ang = tau * static_cast<long double>((k * m) % n) / n;
            const double a = static_cast<double>(ang);
            acc += x[k] * Complex{std::cos(a), sign * std::sin(a)};
        }
        y[m] = acc / std::sqrt(static_cast<double>(n));
    }
    return y;
}

ComplexVec ge_solve(ComplexMat a, ComplexVec b) {
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("ge_solve: shape mismatch");
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(a.at(r, col));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("ge_solve: singular matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a.at(pivot, c), a.at(col, c));
            std::swap(b[pivot], b[col]);
        }
        const Complex inv = 1.0 / a.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const Complex f = a.at(r, col) * inv;
            if (f == Complex{0.0, 0.0}) continue;
            for (int c = col; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
            b[r] -= f * b[col];
        }
    }
    ComplexVec x(static_cast<std::size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        Complex acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a.at(r, c) * x[c];
        x[r] = acc / a.at(r, r);
    }
    return x;
}

ComplexMat gram(const ComplexMat& a) {
    ComplexMat g(a.cols, a.cols);
    for (int i = 0; i < a.cols; ++i)
        for (int j = 0; j < a.cols; ++j) {
            Complex acc = 0.0;
            for (int k = 0; k < a.rows; ++k) acc += std::conj(a.at(k, i)) * a.at(k, j);
            g.at(i, j) = acc;
        }
    return g;
}

ComplexVec adjoint_times(const ComplexMat& a, const ComplexVec& y) {
    ComplexVec out(static_cast<std::size_t>(a.cols), Complex{0.0, 0.0});
    for (int c = 0; c < a.cols; ++c) {
        Complex acc = 0.0;
        for (int r = 0; r < a.rows; ++r) acc += std::conj(a.at(r, c)) * y[r];
        out[c] = acc;
    }
    return out;
}

double dirichlet_mag(double beta, int n) {
    const double num = std::sin(M_PI * beta);
    const double den = n * std::sin(M_PI * beta / n);
    if (std::abs(den) < 1e-12) return 1.0;
    return std::abs(num / den);
}

double wrap_centered(double x, int n) {
    double v = std::fmod(x + n / 2.0, static_cast<double>(n));
    if (v < 0) v += n;
    return v - n / 2.0;
}

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracles
