#include "afdm/rng.hpp"
#include "afdm/transform.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace afdm;

namespace {

ComplexVec random_vec(RngStream& rng, std::size_t n) {
    ComplexVec v(n);
    for (Complex& c : v) c = {rng.gaussian(), rng.gaussian()};
    return v;
}

}  // namespace

TEST_CASE("unitary_dft: impulse maps to a flat spectrum") {
    const ComplexVec y = unitary_dft({1.0, 0.0, 0.0, 0.0});
    for (const Complex& v : y) {
        CHECK(v.real() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("unitary_dft: constant input concentrates into bin zero") {
    const ComplexVec y = unitary_dft({1.0, 1.0, 1.0, 1.0});
    CHECK(std::abs(y[0] - Complex{2.0, 0.0}) < 1e-12);
    for (std::size_t i = 1; i < y.size(); ++i) CHECK(std::abs(y[i]) < 1e-12);
}

TEST_CASE("unitary_idft: inverse of the constant example") {
    const ComplexVec s = unitary_idft({2.0, 0.0, 0.0, 0.0});
    for (const Complex& v : s) CHECK(std::abs(v - Complex{1.0, 0.0}) < 1e-12);
}

TEST_CASE("unitary_idft: zero stays zero") {
    const ComplexVec s = unitary_idft(ComplexVec(16, Complex{0.0, 0.0}));
    for (const Complex& v : s) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("transforms reject empty input") {
    CHECK_THROWS_AS(unitary_dft({}), std::invalid_argument);
    CHECK_THROWS_AS(unitary_idft({}), std::invalid_argument);
}

TEST_CASE("dft/idft: round trip, Parseval, and oracle agreement across sizes") {
    RngStream rng(7, 0);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 12u, 16u, 31u, 32u, 64u, 100u, 128u, 255u,
                          256u, 257u, 511u, 512u, 513u, 777u, 1000u, 1023u, 1024u}) {
        const ComplexVec x = random_vec(rng, n);
        const ComplexVec y = unitary_dft(x);
        const ComplexVec back = unitary_idft(y);
        const double nx = l2_norm(x);
        CHECK(l2_dist(back, x) <= 1e-10 * nx);
        CHECK(std::abs(l2_norm(y) * l2_norm(y) - nx * nx) <= 1e-10 * nx * nx);

        // independent direct-formula oracle
        const ComplexVec ref = oracles::dft_direct(x, false);
        CHECK(l2_dist(y, ref) <= 1e-10 * nx);
    }
}

TEST_CASE("dft: norm preservation at the working frame size") {
    RngStream rng(11, 3);
    const ComplexVec x = random_vec(rng, 512);
    CHECK(std::abs(l2_norm(unitary_dft(x)) - l2_norm(x)) <= 1e-10 * l2_norm(x));
}

TEST_CASE("RngStream: identical (seed, stream) pairs reproduce exactly") {
    RngStream a(42, 9), b(42, 9);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c(42, 9), d(42, 10);
    bool differ = false;
    for (int i = 0; i < 16 && !differ; ++i) differ = c.next_u64() != d.next_u64();
    CHECK(differ);
}

TEST_CASE("sample_cscg: deterministic, zero-variance edge, moment check") {
    RngStream a(1, 5), b(1, 5);
    CHECK(sample_cscg(a, 64, 2.0) == sample_cscg(b, 64, 2.0));

    RngStream z(1, 6);
    for (const Complex& v : sample_cscg(z, 32, 0.0)) CHECK(std::abs(v) == 0.0);

    CHECK_THROWS_AS(sample_cscg(z, 4, -1.0), std::invalid_argument);

    // law-of-large-numbers check at n = 1e6
    RngStream m(123, 0);
    const std::size_t n = 1000000;
    const ComplexVec s = sample_cscg(m, n, 1.0);
    Complex mean = 0.0;
    double var = 0.0;
    for (const Complex& v : s) {
        mean += v;
        var += std::norm(v);
    }
    mean /= static_cast<double>(n);
    var /= static_cast<double>(n);
    CHECK(std::abs(mean) < 4e-3);
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("random_bits: deterministic and roughly balanced") {
    RngStream a(9, 1), b(9, 1);
    CHECK(random_bits(a, 999) == random_bits(b, 999));

    RngStream c(9, 2);
    const std::vector<int> bits = random_bits(c, 100000);
    long ones = 0;
    for (int v : bits) ones += v;
    CHECK(std::abs(ones / 100000.0 - 0.5) < 0.01);
}
