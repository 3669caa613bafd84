#include "swnet/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "swnet/fourier.hpp"

namespace swnet {
namespace {

void check_qubits(int n_qubits)
{
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("register size out of range: " + std::to_string(n_qubits));
}

} // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits)
{
    check_qubits(n_qubits);
    amp_.assign(dimension_of(n_qubits), cplx{0.0, 0.0});
    amp_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amp_(std::move(amplitudes))
{
    check_qubits(n_qubits);
    if (amp_.size() != dimension_of(n_qubits))
        throw std::invalid_argument("amplitude array length must be 2^n_r");
    if (!all_finite()) throw std::invalid_argument("non-finite amplitude");
}

StateVector StateVector::basis(int n_qubits, std::size_t index)
{
    check_qubits(n_qubits);
    if (index >= dimension_of(n_qubits))
        throw std::out_of_range("basis index " + std::to_string(index) + " outside register");
    StateVector psi(n_qubits);
    psi.amp_[0] = 0.0;
    psi.amp_[index] = 1.0;
    return psi;
}

StateVector StateVector::uniform(int n_qubits)
{
    StateVector psi(n_qubits);
    const double a = 1.0 / std::sqrt(static_cast<double>(psi.size()));
    for (auto& x : psi.amp_) x = a;
    return psi;
}

double StateVector::norm_squared() const
{
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
}

bool StateVector::all_finite() const
{
    for (const auto& a : amp_)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    return true;
}

void StateVector::normalize()
{
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw std::domain_error("cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amp_) a *= inv;
}

StateVector basis_state(int n_qubits, std::size_t index) { return StateVector::basis(n_qubits, index); }

double ipr(std::span<const cplx> amplitudes)
{
    double s2 = 0.0;
    double s4 = 0.0;
    for (const auto& a : amplitudes) {
        const double w = std::norm(a);
        s2 += w;
        s4 += w * w;
    }
    if (!(s4 > 0.0)) throw std::domain_error("ipr of the zero vector");
    return s2 / s4;
}

double ipr(const StateVector& psi) { return ipr(psi.amplitudes()); }

void dft_inplace(StateVector& psi, FourierDirection direction)
{
    detail::fft_unnormalized(psi.amplitudes(), direction == FourierDirection::Forward ? +1 : -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(psi.size()));
    for (auto& a : psi.amplitudes()) a *= scale;
}

StateVector dft(StateVector psi, FourierDirection direction)
{
    dft_inplace(psi, direction);
    return psi;
}

cplx overlap(const StateVector& a, const StateVector& b)
{
    if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("overlap: register size mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double max_abs_diff(const StateVector& a, const StateVector& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace swnet
