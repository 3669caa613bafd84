#include "swnet/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "swnet/fourier.hpp"

namespace swnet {
namespace {

constexpr cplx kI{0.0, 1.0};

void check_field(const StateVector& psi, const DisorderField& disorder)
{
    if (disorder.energies.size() != psi.size()) throw std::invalid_argument("disorder field size mismatch");
}

void check_pairs(const StateVector& psi, const ShortcutSet& shortcuts)
{
    if (shortcuts.n_qubits != psi.num_qubits()) throw std::invalid_argument("shortcut register size mismatch");
}

inline void rotate_pair(cplx* amp, std::uint64_t a, std::uint64_t b, double c, double s)
{
    const cplx x = amp[a];
    const cplx y = amp[b];
    amp[a] = c * x + kI * s * y;
    amp[b] = kI * s * x + c * y;
}

void rotate_pairs(StateVector& psi, const std::vector<VertexPair>& pairs, H2Composition comp, double angle)
{
    cplx* amp = psi.data();
    if (comp == H2Composition::Simultaneous) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        for (const auto& [a, b] : pairs) rotate_pair(amp, a, b, c, s);
        return;
    }
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    for (const auto& [a, b] : pairs) rotate_pair(amp, a, b, c, s);
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) rotate_pair(amp, it->first, it->second, c, s);
}

std::vector<cplx> ring_phases(int n_qubits, double angle_scale)
{
    // e^{i angle_scale cos(2 pi k/N)} / N
    const std::size_t n = dimension_of(n_qubits);
    std::vector<cplx> d(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double e = angle_scale * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
        d[k] = std::polar(inv_n, e);
    }
    return d;
}

void apply_ring(StateVector& psi, const std::vector<cplx>& diag)
{
    detail::fft_unnormalized(psi.amplitudes(), +1);
    cplx* a = psi.data();
    for (std::size_t k = 0; k < psi.size(); ++k) a[k] *= diag[k];
    detail::fft_unnormalized(psi.amplitudes(), -1);
}

} // namespace

void step_h0(StateVector& psi, const DisorderField& disorder, double t)
{
    check_field(psi, disorder);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, disorder.energies[i] * t);
}

void step_h1(StateVector& psi, double t, double hopping)
{
    apply_ring(psi, ring_phases(psi.num_qubits(), 2.0 * hopping * t));
}

H2Composition h2_composition(const ShortcutSet& shortcuts)
{
    return shortcuts.vertex_disjoint() ? H2Composition::Simultaneous : H2Composition::SymmetricSequential;
}

void step_h2(StateVector& psi, const ShortcutSet& shortcuts, double t, double hopping)
{
    check_pairs(psi, shortcuts);
    rotate_pairs(psi, shortcuts.pairs, h2_composition(shortcuts), hopping * t);
}

void step_h2_exact(StateVector& psi, const ShortcutSet& shortcuts, double t, double hopping)
{
    check_pairs(psi, shortcuts);
    if (!shortcuts.vertex_disjoint())
        throw std::invalid_argument("overlapping shortcut pairs have no closed-form H2 propagator");
    rotate_pairs(psi, shortcuts.pairs, H2Composition::Simultaneous, hopping * t);
}

std::size_t default_stride(double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    return static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / dt - 1e-9)));
}

SplitPropagator::SplitPropagator(const SmallWorldHamiltonian& h, double dt)
    : n_qubits_(h.n_qubits), dt_(dt), pairs_(h.shortcuts.pairs), composition_(h2_composition(h.shortcuts))
{
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const std::size_t n = h.dimension();
    if (h.disorder.energies.size() != n) throw std::invalid_argument("disorder field size mismatch");
    h0_half_.resize(n);
    h0_full_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        h0_half_[i] = std::polar(1.0, 0.5 * dt * h.disorder.energies[i]);
        h0_full_[i] = std::polar(1.0, dt * h.disorder.energies[i]);
    }
    // e^{iH1 dt/2}: eigenphase 2V (dt/2) cos
    h1_half_ = ring_phases(n_qubits_, h.hopping * dt);
    const double angle = h.hopping * dt;
    const double a = composition_ == H2Composition::Simultaneous ? angle : 0.5 * angle;
    h2_cos_ = std::cos(a);
    h2_sin_ = std::sin(a);
}

void SplitPropagator::apply_diagonal(StateVector& psi, const std::vector<cplx>& phases) const
{
    cplx* a = psi.data();
    for (std::size_t i = 0; i < psi.size(); ++i) a[i] *= phases[i];
}

void SplitPropagator::apply_h1_half(StateVector& psi) const { apply_ring(psi, h1_half_); }

void SplitPropagator::apply_h2(StateVector& psi) const
{
    cplx* amp = psi.data();
    for (const auto& [a, b] : pairs_) rotate_pair(amp, a, b, h2_cos_, h2_sin_);
    if (composition_ == H2Composition::SymmetricSequential)
        for (auto it = pairs_.rbegin(); it != pairs_.rend(); ++it) rotate_pair(amp, it->first, it->second, h2_cos_, h2_sin_);
}

void SplitPropagator::step(StateVector& psi) const
{
    if (psi.num_qubits() != n_qubits_) throw std::invalid_argument("state register size mismatch");
    apply_diagonal(psi, h0_half_);
    apply_h1_half(psi);
    apply_h2(psi);
    apply_h1_half(psi);
    apply_diagonal(psi, h0_half_);
}

void SplitPropagator::evolve(StateVector& psi, std::size_t n_steps, const Observer& observer, std::size_t stride) const
{
    if (psi.num_qubits() != n_qubits_) throw std::invalid_argument("state register size mismatch");
    if (stride == 0) stride = default_stride(dt_);
    if (observer) observer(0, psi);
    if (n_steps == 0) return;
    apply_diagonal(psi, h0_half_);
    for (std::size_t s = 1; s <= n_steps; ++s) {
        apply_h1_half(psi);
        apply_h2(psi);
        apply_h1_half(psi);
        const bool observe = observer && (s % stride == 0);
        if (s == n_steps || observe) {
            apply_diagonal(psi, h0_half_);
            if (observe) observer(s, psi);
            if (s < n_steps) apply_diagonal(psi, h0_half_);
        } else {
            apply_diagonal(psi, h0_full_);
        }
    }
}

StateVector evolve_split(StateVector psi, const SmallWorldHamiltonian& h, double dt, std::size_t n_steps,
                         const Observer& observer, std::size_t stride)
{
    SplitPropagator(h, dt).evolve(psi, n_steps, observer, stride);
    return psi;
}

EigenPropagator::EigenPropagator(const SmallWorldHamiltonian& h) : n_qubits_(h.n_qubits)
{
    if (h.n_qubits > kMaxEigenQubits)
        throw std::invalid_argument("register too large for full diagonalization (n_r <= 12)");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_dense(h), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

StateVector EigenPropagator::evolve(const StateVector& psi, double t) const
{
    if (psi.num_qubits() != n_qubits_) throw std::invalid_argument("state register size mismatch");
    const auto n = static_cast<Eigen::Index>(psi.size());
    Eigen::VectorXd re(n), im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        re(i) = psi[static_cast<std::size_t>(i)].real();
        im(i) = psi[static_cast<std::size_t>(i)].imag();
    }
    Eigen::VectorXd cr = vectors_.transpose() * re;
    Eigen::VectorXd ci = vectors_.transpose() * im;
    for (Eigen::Index m = 0; m < n; ++m) {
        const cplx c = cplx(cr(m), ci(m)) * std::polar(1.0, values_(m) * t);
        cr(m) = c.real();
        ci(m) = c.imag();
    }
    re = vectors_ * cr;
    im = vectors_ * ci;
    std::vector<cplx> out(psi.size());
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = cplx(re(i), im(i));
    return StateVector(n_qubits_, std::move(out));
}

StateVector evolve_eigen(const StateVector& psi, const SmallWorldHamiltonian& h, double t)
{
    return EigenPropagator(h).evolve(psi, t);
}

std::vector<double> spectrum(const SmallWorldHamiltonian& h)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_dense(h), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    const Eigen::VectorXd& v = solver.eigenvalues();
    std::vector<double> out(v.data(), v.data() + v.size());
    for (double e : out)
        if (!std::isfinite(e)) throw std::runtime_error("eigensolver returned a non-finite eigenvalue");
    return out;
}

StateVector apply_hamiltonian(const SmallWorldHamiltonian& h, const StateVector& psi)
{
    const std::size_t n = psi.size();
    if (n != h.dimension()) throw std::invalid_argument("state register size mismatch");
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = h.disorder.energies[i] * psi[i] + h.hopping * (psi[(i + 1) % n] + psi[(i + n - 1) % n]);
    for (const auto& [a, b] : h.shortcuts.pairs) {
        out[a] += h.hopping * psi[b];
        out[b] += h.hopping * psi[a];
    }
    return StateVector(psi.num_qubits(), std::move(out));
}

double energy(const SmallWorldHamiltonian& h, const StateVector& psi)
{
    return overlap(psi, apply_hamiltonian(h, psi)).real();
}

} // namespace swnet
