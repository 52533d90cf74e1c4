// types.hpp - shared complex vector/matrix types

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace afdm {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

/// Dense row-major complex matrix. Heavy linear algebra maps this into
/// Eigen where needed; the struct itself stays a plain value type.
struct ComplexMat {
    int rows = 0;
    int cols = 0;
    ComplexVec data;  // row-major, rows*cols entries

    ComplexMat() = default;
    ComplexMat(int r, int c)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}

    Complex& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const Complex& at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    static ComplexMat identity(int n) {
        ComplexMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

double l2_norm(const ComplexVec& x);
double l2_dist(const ComplexVec& a, const ComplexVec& b);
ComplexVec matvec(const ComplexMat& m, const ComplexVec& x);

}  // namespace afdm
