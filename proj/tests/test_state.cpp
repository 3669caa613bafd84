#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "oracle.hpp"
#include "swnet/state.hpp"

using namespace swnet;

TEST_CASE("basis states")
{
    const auto a = basis_state(2, 0);
    CHECK(a[0] == cplx(1.0));
    CHECK(a[1] == cplx(0.0));
    CHECK(a[2] == cplx(0.0));
    CHECK(a[3] == cplx(0.0));
    const auto b = basis_state(2, 3);
    CHECK(b[3] == cplx(1.0));
    CHECK(b[0] == cplx(0.0));
    CHECK_THROWS(basis_state(2, 4));
    for (std::size_t i = 0; i < 32; ++i) CHECK(ipr(basis_state(5, i)) == 1.0);
    CHECK(StateVector(3).size() == 8);
    CHECK(StateVector(3)[0] == cplx(1.0));
}

TEST_CASE("construction checks length and finiteness")
{
    CHECK_THROWS_AS(StateVector(2, std::vector<cplx>(3)), std::invalid_argument);
    std::vector<cplx> bad(4);
    bad[1] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(StateVector(2, bad), std::invalid_argument);
    bad[1] = {0.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(StateVector(2, bad), std::invalid_argument);
}

TEST_CASE("ipr")
{
    CHECK(ipr(StateVector::uniform(4)) == doctest::Approx(16.0).epsilon(1e-14));
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(ipr(StateVector(2, {h, h, 0.0, 0.0})) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(ipr(StateVector(2, std::vector<cplx>(4))), std::domain_error);
    // unnormalized input: the ratio of sums as written
    CHECK(ipr(StateVector(2, {3.0, 3.0, 0.0, 0.0})) == doctest::Approx(18.0 / 162.0).epsilon(1e-14));

    for (unsigned seed = 0; seed < 20; ++seed) {
        const auto s = oracle::random_state(6, seed);
        const double x = ipr(s);
        CHECK(x >= 1.0);
        CHECK(x <= 64.0);
    }
}

TEST_CASE("dft of simple states")
{
    const auto f = dft(StateVector(1), FourierDirection::Forward);
    CHECK(std::abs(f[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(f[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
    for (int n = 1; n <= 6; ++n) {
        const auto back = dft(StateVector::uniform(n), FourierDirection::Inverse);
        CHECK(max_abs_diff(back, StateVector(n)) < 1e-14);
        const auto fwd = dft(StateVector::uniform(n), FourierDirection::Forward);
        CHECK(max_abs_diff(fwd, StateVector(n)) < 1e-14);
    }
}

TEST_CASE("dft against the direct sum")
{
    for (int n = 1; n <= 6; ++n) {
        const auto s = oracle::random_state(n, 100 + static_cast<unsigned>(n));
        const std::vector<cplx> x(s.amplitudes().begin(), s.amplitudes().end());
        const auto fwd = dft(s, FourierDirection::Forward);
        const auto inv = dft(s, FourierDirection::Inverse);
        const auto ref_f = oracle::naive_dft(x, +1);
        const auto ref_i = oracle::naive_dft(x, -1);
        double ef = 0.0, ei = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            ef = std::max(ef, std::abs(fwd[k] - ref_f[k]));
            ei = std::max(ei, std::abs(inv[k] - ref_i[k]));
        }
        CHECK(ef < 1e-12);
        CHECK(ei < 1e-12);

        // forward twice is the reflection i -> -i mod N
        const auto twice = dft(fwd, FourierDirection::Forward);
        const std::size_t nn = s.size();
        double er = 0.0;
        for (std::size_t i = 0; i < nn; ++i) er = std::max(er, std::abs(twice[i] - s[(nn - i) % nn]));
        CHECK(er < 1e-12);
    }
}

TEST_CASE("dft is unitary")
{
    for (int n : {2, 5, 10, 14}) {
        const auto s = oracle::random_state(n, 7);
        const auto f = dft(s, FourierDirection::Forward);
        CHECK(std::abs(f.norm_squared() - 1.0) < 1e-12);
        const auto back = dft(f, FourierDirection::Inverse);
        CHECK(max_abs_diff(back, s) < 1e-12);
    }
}

TEST_CASE("overlap")
{
    for (std::size_t i = 0; i < 8; ++i) CHECK(overlap(basis_state(3, i), basis_state(3, i)) == cplx(1.0));
    CHECK(overlap(basis_state(3, 0), basis_state(3, 1)) == cplx(0.0));
    CHECK_THROWS_AS(overlap(StateVector(3), StateVector(4)), std::invalid_argument);
    const auto a = oracle::random_state(6, 1);
    const auto b = dft(a, FourierDirection::Forward);
    CHECK(std::abs(overlap(a, b)) <= 1.0 + 1e-12);
    const cplx ab = overlap(a, b);
    const cplx ba = overlap(b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-15);
}

TEST_CASE("normalize")
{
    StateVector s(2, {1.0, 1.0, 1.0, 1.0});
    s.normalize();
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
    StateVector z(2, std::vector<cplx>(4));
    CHECK_THROWS(z.normalize());
}
