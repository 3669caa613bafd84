#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "swnet/circuit.hpp"
#include "swnet/noise.hpp"

using namespace swnet;
using oracle::Mat;

namespace {

// H_E from Kronecker products: sum delta_i Z_i + sum J_i X_i X_{i+1 mod n}
Mat dense_he(const NoiseParams& p)
{
    const int n = p.n_qubits;
    const auto d = static_cast<Eigen::Index>(dimension_of(n));
    Mat h = Mat::Zero(d, d);
    for (int q = 1; q <= n; ++q) {
        h += p.deltas[static_cast<std::size_t>(q - 1)] * oracle::on_qubit(oracle::pauli_z(), q, n);
        const int r = q % n + 1;
        h += p.couplings[static_cast<std::size_t>(q - 1)] * oracle::on_qubit(oracle::pauli_x(), q, n) *
             oracle::on_qubit(oracle::pauli_x(), r, n);
    }
    return h;
}


} // namespace

TEST_CASE("sampled fields")
{
    Rng rng(1);
    const auto zero = sample_noise(5, 0.0, rng);
    for (double d : zero.deltas) CHECK(d == 0.0);
    for (double j : zero.couplings) CHECK(j == 0.0);
    for (int k = 0; k < 50; ++k) {
        const auto p = sample_noise(6, 1e-3, rng);
        CHECK(p.deltas.size() == 6);
        CHECK(p.couplings.size() == 6);
        for (double d : p.deltas) CHECK(std::abs(d) <= 0.5e-3);
        for (double j : p.couplings) CHECK(std::abs(j) <= 1e-3);
    }
    Rng a(9), b(9);
    const auto pa = sample_noise(6, 1e-4, a);
    const auto pb = sample_noise(6, 1e-4, b);
    CHECK(pa.deltas == pb.deltas);
    CHECK(pa.couplings == pb.couplings);
    CHECK_THROWS_AS(sample_noise(6, -1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_noise(1, 1.0, rng), std::invalid_argument);
}

TEST_CASE("fields span their intervals")
{
    Rng rng(2);
    double dmax = 0.0, jmax = 0.0;
    for (int k = 0; k < 500; ++k) {
        const auto p = sample_noise(4, 1.0, rng);
        for (double d : p.deltas) dmax = std::max(dmax, std::abs(d));
        for (double j : p.couplings) jmax = std::max(jmax, std::abs(j));
    }
    CHECK(dmax > 0.49);
    CHECK(jmax > 0.98);
}

TEST_CASE("zero noise is the identity")
{
    Rng rng(3);
    const auto p = sample_noise(5, 0.0, rng);
    const ErrorStep e(p);
    CHECK(e.is_identity());
    const auto psi = oracle::random_state(5, 4);
    auto a = psi;
    e.apply(a);
    CHECK(max_abs_diff(a, psi) == 0.0);
}

TEST_CASE("error step against the dense exponential")
{
    Rng rng(5);
    for (int n : {2, 3, 4}) {
        const auto p = sample_noise(n, 1e-2, rng);
        const auto psi = oracle::random_state(n, 6);
        auto a = psi;
        apply_error_step(a, p);
        const oracle::Vec ref = oracle::expi(dense_he(p), -p.tau_g) * oracle::to_vec(psi);
        const double err = oracle::max_diff(oracle::to_vec(a), ref);
        MESSAGE("n_r=" << n << " error " << err);
        CHECK(err < 1e-6);
        CHECK(std::abs(a.norm_squared() - 1.0) < 1e-12);
    }
}

TEST_CASE("XX terms commute")
{
    Rng rng(7);
    auto p = sample_noise(4, 0.3, rng);
    for (auto& d : p.deltas) d = 0.0;
    const auto psi = oracle::random_state(4, 8);
    auto a = psi;
    ErrorStep(p).apply(a);
    Mat fwd = Mat::Identity(16, 16), rev = Mat::Identity(16, 16);
    for (int q = 1; q <= 4; ++q) {
        const Mat xx = oracle::on_qubit(oracle::pauli_x(), q, 4) * oracle::on_qubit(oracle::pauli_x(), q % 4 + 1, 4);
        const Mat u = oracle::expi(xx, -p.couplings[static_cast<std::size_t>(q - 1)]);
        fwd = u * fwd;
        rev = rev * u;
    }
    const auto v = oracle::to_vec(psi);
    CHECK(oracle::max_diff(fwd * v, rev * v) < 1e-12);
    CHECK(oracle::max_diff(oracle::to_vec(a), fwd * v) < 1e-12);
}

TEST_CASE("infidelity grows as eps squared")
{
    const auto prog = build_h1_program(5, 0.03, 10);
    const auto psi = oracle::random_state(5, 9);
    auto ideal = psi;
    run_program(ideal, prog);
    std::vector<double> eps{1e-6, 3e-6, 1e-5, 3e-5, 1e-4}, infid;
    for (double e : eps) {
        Rng rng(10);
        const ErrorStep step(sample_noise(5, e, rng));
        auto noisy = psi;
        const auto stats = run_program(noisy, prog, &step);
        CHECK(stats.error_steps == prog.elementary_total());
        infid.push_back(1.0 - std::norm(overlap(ideal, noisy)));
    }
    const double s = oracle::loglog_slope(eps, infid);
    MESSAGE("infidelity slope " << s);
    CHECK(s == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("register size mismatch")
{
    Rng rng(11);
    const ErrorStep e(sample_noise(4, 1e-3, rng));
    StateVector s(5);
    CHECK_THROWS_AS(e.apply(s), std::invalid_argument);
    NoiseParams bad{3, 0.1, 1.0, {0.0, 0.0}, {0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(ErrorStep{bad}, std::invalid_argument);
}
