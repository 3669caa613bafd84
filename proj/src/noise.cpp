#include "swnet/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace swnet {
namespace {

std::size_t qubit_mask(int n_qubits, int qubit) { return std::size_t{1} << (n_qubits - qubit); }

void check(const NoiseParams& noise)
{
    if (noise.n_qubits < 2) throw std::invalid_argument("noise model needs at least 2 qubits");
    if (noise.deltas.size() != static_cast<std::size_t>(noise.n_qubits) ||
        noise.couplings.size() != static_cast<std::size_t>(noise.n_qubits))
        throw std::invalid_argument("noise field sizes must equal n_r");
}

} // namespace

NoiseParams sample_noise(int n_qubits, double epsilon, Rng& rng)
{
    if (!(epsilon >= 0.0)) throw std::invalid_argument("noise strength must be >= 0");
    if (n_qubits < 2) throw std::invalid_argument("noise model needs at least 2 qubits");
    NoiseParams p;
    p.n_qubits = n_qubits;
    p.epsilon = epsilon;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    p.deltas.resize(static_cast<std::size_t>(n_qubits));
    p.couplings.resize(static_cast<std::size_t>(n_qubits));
    for (auto& d : p.deltas) d = 0.5 * epsilon * unit(rng);
    for (auto& j : p.couplings) j = epsilon * unit(rng);
    return p;
}

ErrorStep::ErrorStep(const NoiseParams& noise) : n_qubits_(noise.n_qubits)
{
    check(noise);
    const std::size_t n = dimension_of(n_qubits_);
    identity_ = true;
    for (double d : noise.deltas) identity_ = identity_ && d == 0.0;
    for (double j : noise.couplings) identity_ = identity_ && j == 0.0;

    z_half_.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        double e = 0.0;
        for (int q = 1; q <= n_qubits_; ++q)
            e += ((u & qubit_mask(n_qubits_, q)) ? -1.0 : 1.0) * noise.deltas[static_cast<std::size_t>(q - 1)];
        z_half_[u] = std::polar(1.0, -0.5 * noise.tau_g * e);
    }
    for (int q = 1; q <= n_qubits_; ++q) {
        const int next = q % n_qubits_ + 1;
        const double a = noise.couplings[static_cast<std::size_t>(q - 1)] * noise.tau_g;
        xx_.push_back({qubit_mask(n_qubits_, q) | qubit_mask(n_qubits_, next), std::cos(a), std::sin(a)});
    }
}

void ErrorStep::apply(std::span<cplx> a) const
{
    if (identity_) return;
    const std::size_t n = a.size();
    if (n != z_half_.size()) throw std::invalid_argument("error step: register size mismatch");
    const cplx mi{0.0, -1.0};
    for (std::size_t u = 0; u < n; ++u) a[u] *= z_half_[u];
    for (const auto& t : xx_) {
        // e^{-i a XX} = cos a - i sin a XX
        for (std::size_t u = 0; u < n; ++u) {
            const std::size_t v = u ^ t.mask;
            if (v < u) continue;
            const cplx x = a[u];
            const cplx y = a[v];
            a[u] = t.c * x + mi * t.s * y;
            a[v] = mi * t.s * x + t.c * y;
        }
    }
    for (std::size_t u = 0; u < n; ++u) a[u] *= z_half_[u];
}

void ErrorStep::apply(StateVector& psi) const
{
    if (psi.num_qubits() != n_qubits_) throw std::invalid_argument("error step: register size mismatch");
    apply(psi.amplitudes());
}

void apply_error_step(StateVector& psi, const NoiseParams& noise) { ErrorStep(noise).apply(psi); }

} // namespace swnet
