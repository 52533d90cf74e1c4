// transform.hpp - unitary DFT/IDFT
//
// Both directions carry the 1/sqrt(N) factor so the transform pair is
// exactly unitary: idft(dft(x)) == x and ||dft(x)|| == ||x||.

#pragma once

#include "afdm/types.hpp"

#include <cstdint>

namespace afdm {

ComplexVec unitary_dft(const ComplexVec& x);
ComplexVec unitary_idft(const ComplexVec& x);

/// e^{j*2*pi*turns} with the argument folded to [0,1) in extended precision
/// before the trig call. Quadratic chirp phases reach ~1e6 turns; folding
/// late would cost ~6 digits of phase accuracy.
Complex phase_turns(long double turns);

/// Reusable transform plan: iterative radix-2 when n is a power of two,
/// direct evaluation otherwise (test sizes only).
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(ComplexVec& x) const;  // unitary DFT, in place
    void inverse(ComplexVec& x) const;  // unitary IDFT, in place

private:
    std::size_t n_ = 0;
    bool pow2_ = false;
    std::vector<Complex> twiddle_;        // e^{-j2*pi*k/n}
    std::vector<std::uint32_t> bitrev_;

    void radix2(ComplexVec& x, bool inverse) const;
    void direct(ComplexVec& x, bool inverse) const;
};

}  // namespace afdm
