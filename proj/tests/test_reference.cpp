#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracle.hpp"
#include "swnet/reference.hpp"

using namespace swnet;
using oracle::Mat;
using oracle::Vec;

namespace {

SmallWorldHamiltonian random_h(int n, double width, double p, unsigned seed)
{
    Rng rng(seed);
    auto d = sample_disorder(n, width, rng);
    auto s = sample_shortcuts(n, p, rng);
    return make_hamiltonian(std::move(d), std::move(s), p);
}

Mat h0_matrix(const SmallWorldHamiltonian& h)
{
    const auto n = static_cast<Eigen::Index>(h.dimension());
    Mat m = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = h.disorder.energies[static_cast<std::size_t>(i)];
    return m;
}

Mat h2_matrix(const ShortcutSet& s)
{
    const auto n = static_cast<Eigen::Index>(std::size_t{1} << s.n_qubits);
    Mat m = Mat::Zero(n, n);
    for (const auto& [a, b] : s.pairs) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += 1.0;
        m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) += 1.0;
    }
    return m;
}

Mat full_matrix(const SmallWorldHamiltonian& h) { return h0_matrix(h) + oracle::ring(h.dimension()) + h2_matrix(h.shortcuts); }

double one_step_error(const SmallWorldHamiltonian& h, double dt, const StateVector& psi)
{
    StateVector a = psi;
    SplitPropagator(h, dt).step(a);
    const Vec ref = oracle::expi(full_matrix(h), dt) * oracle::to_vec(psi);
    return oracle::max_diff(oracle::to_vec(a), ref);
}


double tail_mean(const std::vector<double>& v)
{
    const std::size_t start = v.size() - v.size() / 10;
    double s = 0.0;
    for (std::size_t i = start; i < v.size(); ++i) s += v[i];
    return s / static_cast<double>(v.size() - start);
}

} // namespace

TEST_CASE("step_h0")
{
    const auto h = random_h(3, 1.0, 0.0, 1);
    auto psi = oracle::random_state(3, 2);
    auto a = psi;
    step_h0(a, h.disorder, 0.0);
    CHECK(max_abs_diff(a, psi) == 0.0);
    step_h0(a, h.disorder, 0.7);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(std::abs(a[i]) - std::abs(psi[i])) < 1e-15);
    const Vec ref = oracle::expi(h0_matrix(h), 0.7) * oracle::to_vec(psi);
    CHECK(oracle::max_diff(oracle::to_vec(a), ref) < 1e-12);
}

TEST_CASE("step_h1")
{
    auto psi = oracle::random_state(3, 3);
    auto a = psi;
    step_h1(a, 0.0);
    CHECK(max_abs_diff(a, psi) < 1e-15);
    step_h1(a, 0.7);
    const Vec ref = oracle::expi(oracle::ring(8), 0.7) * oracle::to_vec(psi);
    CHECK(oracle::max_diff(oracle::to_vec(a), ref) < 1e-12);

    // ring eigenmodes only acquire a phase
    const std::size_t n = 32;
    for (std::size_t k : {0UL, 3UL, 16UL, 31UL}) {
        std::vector<cplx> mode(n);
        for (std::size_t j = 0; j < n; ++j)
            mode[j] = std::polar(1.0 / std::sqrt(double(n)), 2.0 * std::numbers::pi * double(j * k) / double(n));
        StateVector m(5, mode);
        step_h1(m, 1.3);
        const cplx phase = std::polar(1.0, 2.0 * 1.3 * std::cos(2.0 * std::numbers::pi * double(k) / double(n)));
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(m[j] - phase * mode[j]) < 1e-13);
    }
}

TEST_CASE("step_h2")
{
    ShortcutSet s{4, LinkMode::Matching, {{0, 5}, {3, 9}}};
    auto psi = oracle::random_state(4, 4);
    auto a = psi;
    step_h2(a, s, 0.0);
    CHECK(max_abs_diff(a, psi) == 0.0);

    auto b = basis_state(4, 0);
    step_h2(b, s, std::numbers::pi / 2.0);
    CHECK(std::abs(b[5] - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(b[0]) < 1e-15);

    step_h2(a, s, 0.7);
    const Vec ref = oracle::expi(h2_matrix(s), 0.7) * oracle::to_vec(psi);
    CHECK(oracle::max_diff(oracle::to_vec(a), ref) < 1e-12);

    auto c = psi;
    step_h2_exact(c, s, 0.7);
    CHECK(max_abs_diff(c, a) < 1e-15);
}

TEST_CASE("step_h2 with shared endpoints")
{
    ShortcutSet s{4, LinkMode::IndependentPairs, {{0, 5}, {5, 9}, {2, 9}}};
    CHECK(h2_composition(s) == H2Composition::SymmetricSequential);
    auto psi = oracle::random_state(4, 5);
    auto c = psi;
    CHECK_THROWS_AS(step_h2_exact(c, s, 0.1), std::invalid_argument);
    // symmetric composition: third-order local error
    std::vector<double> dts{0.2, 0.1, 0.05, 0.025}, err;
    for (double t : dts) {
        auto a = psi;
        step_h2(a, s, t);
        err.push_back(oracle::max_diff(oracle::to_vec(a), oracle::expi(h2_matrix(s), t) * oracle::to_vec(psi)));
    }
    CHECK(oracle::loglog_slope(dts, err) == doctest::Approx(3.0).epsilon(0.07));
}

TEST_CASE("split step error is third order")
{
    const auto h = random_h(3, 1.0, 1.0 / 4.0, 6);
    const auto psi = oracle::random_state(3, 7);
    std::vector<double> dts{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1}, err;
    for (double dt : dts) err.push_back(one_step_error(h, dt, psi));
    const double s = oracle::loglog_slope(dts, err);
    MESSAGE("one-step error slope " << s << ", C = " << err.back() / 1e-3);
    CHECK(s == doctest::Approx(3.0).epsilon(0.2 / 3.0));
    const double ratio = one_step_error(h, 0.02, psi) / one_step_error(h, 0.01, psi);
    CHECK(ratio > 8.0 * 0.8);
    CHECK(ratio < 8.0 * 1.2);
}

TEST_CASE("split and eigen agree on the clean ring")
{
    const auto h = random_h(6, 0.0, 0.0, 8);
    const auto psi = basis_state(6, 17);
    const double dt = 1e-3;
    const auto split = evolve_split(psi, h, dt, 10000);
    const auto eig = evolve_eigen(psi, h, 10.0);
    CHECK(std::abs(ipr(split) - ipr(eig)) < 1e-6);
    CHECK(max_abs_diff(split, eig) < 1e-5);
}

TEST_CASE("split and eigen agree with disorder and links")
{
    const auto h = random_h(7, 0.8, 1.0 / 16.0, 9);
    const auto psi = basis_state(7, 0);
    const auto split = evolve_split(psi, h, 0.005, 2000);
    const auto eig = evolve_eigen(psi, h, 10.0);
    CHECK(max_abs_diff(split, eig) < 1e-3);
    CHECK(std::abs(ipr(split) / ipr(eig) - 1.0) < 1e-3);
}

TEST_CASE("observer and fused half steps")
{
    const auto h = random_h(5, 1.0, 1.0 / 8.0, 10);
    const auto psi = oracle::random_state(5, 11);
    std::vector<std::size_t> seen;
    std::vector<StateVector> snaps;
    const auto out = evolve_split(psi, h, 0.1, 25, [&](std::size_t s, const StateVector& x) {
        seen.push_back(s);
        snaps.push_back(x);
    }, 10);
    CHECK(seen == std::vector<std::size_t>{0, 10, 20});
    auto ref = psi;
    SplitPropagator prop(h, 0.1);
    for (int s = 1; s <= 25; ++s) {
        prop.step(ref);
        if (s == 10) CHECK(max_abs_diff(ref, snaps[1]) < 1e-13);
        if (s == 20) CHECK(max_abs_diff(ref, snaps[2]) < 1e-13);
    }
    CHECK(max_abs_diff(ref, out) < 1e-13);
    CHECK(default_stride(0.03) == 34);
    CHECK(default_stride(0.1) == 10);
    CHECK(default_stride(0.5) == 2);
    CHECK_THROWS_AS(default_stride(0.0), std::invalid_argument);
    CHECK_THROWS_AS(SplitPropagator(h, -1.0), std::invalid_argument);
}

TEST_CASE("norm after many steps")
{
    const auto h = random_h(6, 1.0, 1.0 / 16.0, 12);
    auto psi = basis_state(6, 3);
    SplitPropagator(h, 0.1).evolve(psi, 100000);
    CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-9);
}

TEST_CASE("evolve_eigen")
{
    const auto h = random_h(6, 1.0, 1.0 / 16.0, 13);
    const auto psi = oracle::random_state(6, 14);
    EigenPropagator prop(h);
    CHECK(max_abs_diff(prop.evolve(psi, 0.0), psi) < 1e-13);
    for (double t : {0.5, 10.0, 1000.0}) CHECK(std::abs(prop.evolve(psi, t).norm_squared() - 1.0) < 1e-10);
    const Vec ref = oracle::expi(full_matrix(h), 2.5) * oracle::to_vec(psi);
    CHECK(oracle::max_diff(oracle::to_vec(prop.evolve(psi, 2.5)), ref) < 1e-10);
    SmallWorldHamiltonian big;
    big.n_qubits = 13;
    CHECK_THROWS_AS(EigenPropagator{big}, std::invalid_argument);
}

TEST_CASE("energy conservation")
{
    const auto h = random_h(6, 1.0, 1.0 / 16.0, 15);
    const auto psi = oracle::random_state(6, 16);
    const double e0 = energy(h, psi);
    EigenPropagator prop(h);
    for (double t : {1.0, 50.0, 500.0}) CHECK(std::abs(energy(h, prop.evolve(psi, t)) - e0) < 1e-6 * std::abs(e0) + 1e-12);

    auto drift = [&](double dt) {
        auto s = psi;
        double worst = 0.0;
        SplitPropagator(h, dt).evolve(s, static_cast<std::size_t>(std::llround(20.0 / dt)), [&](std::size_t, const StateVector& x) {
            worst = std::max(worst, std::abs(energy(h, x) - e0));
        }, 1);
        return worst;
    };
    const double r = drift(0.1) / drift(0.05);
    MESSAGE("energy drift ratio on halving dt: " << r);
    CHECK(r > 3.0);
    CHECK(r < 5.0);
}

TEST_CASE("spectrum")
{
    auto ring8 = random_h(3, 0.0, 0.0, 17);
    const auto ev = spectrum(ring8);
    std::vector<double> expect;
    for (int k = 0; k < 8; ++k) expect.push_back(2.0 * std::cos(2.0 * std::numbers::pi * k / 8.0));
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < 8; ++k) CHECK(std::abs(ev[static_cast<std::size_t>(k)] - expect[static_cast<std::size_t>(k)]) < 1e-12);
    CHECK(std::is_sorted(ev.begin(), ev.end()));

    auto weak = random_h(6, 5.0, 0.0, 18);
    weak.hopping = 1e-6;
    auto sorted = weak.disorder.energies;
    std::sort(sorted.begin(), sorted.end());
    const auto ew = spectrum(weak);
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(std::abs(ew[i] - sorted[i]) < 1e-5);

    const auto h = random_h(8, 2.0, 1.0 / 32.0, 19);
    const auto e = spectrum(h);
    const double tr = std::accumulate(h.disorder.energies.begin(), h.disorder.energies.end(), 0.0);
    const double se = std::accumulate(e.begin(), e.end(), 0.0);
    CHECK(std::abs(tr - se) <= 1e-8 * std::max(1.0, std::abs(tr)));

    SmallWorldHamiltonian big;
    big.n_qubits = 14;
    CHECK_THROWS_AS(spectrum(big), std::invalid_argument);
}

TEST_CASE("saturation IPR converged in dt")
{
    // Same realizations at dt and dt/2, the acceptance step of the exact engine.
    double a = 0.0, b = 0.0;
    for (unsigned r = 0; r < 4; ++r) {
        const auto h = random_h(10, 0.25, 1.0 / 32.0, 100 + r);
        for (double dt : {0.1, 0.05}) {
            std::vector<double> series;
            const auto stride = default_stride(dt);
            evolve_split(basis_state(10, 0), h, dt, static_cast<std::size_t>(std::llround(2000.0 / dt)),
                         [&](std::size_t, const StateVector& x) { series.push_back(ipr(x)); }, stride);
            (dt == 0.1 ? a : b) += tail_mean(series);
        }
    }
    MESSAGE("xi_sat dt=0.1: " << a / 4 << "  dt=0.05: " << b / 4);
    CHECK(std::abs(a / b - 1.0) < 0.02);
}
