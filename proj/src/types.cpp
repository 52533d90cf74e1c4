#include "afdm/types.hpp"

#include <cmath>
#include <stdexcept>

namespace afdm {

double l2_norm(const ComplexVec& x) {
    double acc = 0.0;
    for (const Complex& v : x) acc += std::norm(v);
    return std::sqrt(acc);
}

double l2_dist(const ComplexVec& a, const ComplexVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("l2_dist: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc);
}

ComplexVec matvec(const ComplexMat& m, const ComplexVec& x) {
    if (static_cast<int>(x.size()) != m.cols) throw std::invalid_argument("matvec: size mismatch");
    ComplexVec y(static_cast<std::size_t>(m.rows));
    for (int r = 0; r < m.rows; ++r) {
        Complex acc = 0.0;
        const Complex* row = m.data.data() + static_cast<std::size_t>(r) * m.cols;
        for (int c = 0; c < m.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

}  // namespace afdm
