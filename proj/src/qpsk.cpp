#include "afdm/qpsk.hpp"

#include <numbers>
#include <stdexcept>

namespace afdm {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}

ComplexVec map_qpsk(const std::vector<int>& bits) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("map_qpsk: odd bit count");
    ComplexVec x(bits.size() / 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const int b1 = bits[2 * i];
        const int b2 = bits[2 * i + 1];
        x[i] = {(1 - 2 * b1) * kInvSqrt2, (1 - 2 * b2) * kInvSqrt2};
    }
    return x;
}

std::vector<int> demap_qpsk_hard(const ComplexVec& x_hat) {
    std::vector<int> bits(2 * x_hat.size());
    for (std::size_t i = 0; i < x_hat.size(); ++i) {
        bits[2 * i] = x_hat[i].real() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = x_hat[i].imag() < 0.0 ? 1 : 0;
    }
    return bits;
}

}  // namespace afdm
