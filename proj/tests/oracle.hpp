#pragma once

// Independent dense references for the tests: everything here is built from
// textbook definitions with Kronecker products and the Eigen matrix
// exponential, never from the library's fast kernels.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "swnet/state.hpp"

namespace oracle {

using swnet::cplx;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Vec to_vec(const swnet::StateVector& s)
{
    Vec v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

inline swnet::StateVector to_state(int n, const Vec& v)
{
    std::vector<cplx> a(v.data(), v.data() + v.size());
    return swnet::StateVector(n, std::move(a));
}

inline double max_diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline swnet::StateVector random_state(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> a(std::size_t{1} << n);
    double s = 0.0;
    for (auto& x : a) {
        x = {g(rng), g(rng)};
        s += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(s);
    return swnet::StateVector(n, std::move(a));
}

/// exp(i t H)
inline Mat expi(const Mat& h, double t) { return (cplx(0.0, t) * h).exp(); }

inline Mat pauli_x()
{
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Mat pauli_z()
{
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Mat hadamard()
{
    Mat m(2, 2);
    const double h = 1.0 / std::sqrt(2.0);
    m << h, h, h, -h;
    return m;
}

/// Operator acting as `op` on qubit q (1 = most significant) of an n-qubit register.
inline Mat on_qubit(const Mat& op, int q, int n)
{
    Mat out = Mat::Identity(1, 1);
    for (int k = 1; k <= n; ++k) {
        const Mat f = k == q ? op : Mat::Identity(2, 2);
        out = Eigen::kroneckerProduct(out, f).eval();
    }
    return out;
}

inline Mat projector(int bit)
{
    Mat m = Mat::Zero(2, 2);
    m(bit, bit) = 1.0;
    return m;
}

/// |ctrl = 1><1| (x) op + |0><0| (x) 1, built as a sum of Kronecker products.
inline Mat controlled(const Mat& op, int control, int target, int n)
{
    Mat a = Mat::Identity(1, 1), b = Mat::Identity(1, 1);
    for (int k = 1; k <= n; ++k) {
        const Mat fa = k == control ? projector(0) : Mat::Identity(2, 2);
        const Mat fb = k == control ? projector(1) : (k == target ? op : Mat::Identity(2, 2));
        a = Eigen::kroneckerProduct(a, fa).eval();
        b = Eigen::kroneckerProduct(b, fb).eval();
    }
    return a + b;
}

/// Direct O(N^2) sum, psi_k -> N^{-1/2} sum_j e^{sign 2 pi i jk/N} psi_j.
inline std::vector<cplx> naive_dft(const std::vector<cplx>& x, int sign)
{
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += x[j] * std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                                            static_cast<double>(n));
        out[k] = s / std::sqrt(static_cast<double>(n));
    }
    return out;
}

/// Ring hopping matrix with unit elements, periodic.
inline Mat ring(std::size_t n)
{
    Mat h = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = static_cast<Eigen::Index>(i);
        const auto b = static_cast<Eigen::Index>((i + 1) % n);
        h(a, b) += 1.0;
        h(b, a) += 1.0;
    }
    return h;
}

/// Least-squares slope of log10 y against log10 x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log10(x[i]);
        my += std::log10(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (std::log10(x[i]) - mx) * (std::log10(x[i]) - mx);
        sxy += (std::log10(x[i]) - mx) * (std::log10(y[i]) - my);
    }
    return sxy / sxx;
}

} // namespace oracle
