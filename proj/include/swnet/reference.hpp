#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "swnet/network.hpp"
#include "swnet/state.hpp"

namespace swnet {

// All propagators follow the e^{+iHt} sign convention.

/// psi_i <- e^{i eps_i t} psi_i
void step_h0(StateVector& psi, const DisorderField& disorder, double t);

/// psi <- F^{-1} diag(e^{2iVt cos(2 pi k/N)}) F psi
void step_h1(StateVector& psi, double t, double hopping = 1.0);

/// How e^{iH2 t} is realized for a shortcut set.
enum class H2Composition {
    Simultaneous,        ///< vertex-disjoint pairs: exact closed form
    SymmetricSequential, ///< shared endpoints: pairs at t/2 in listed order, then reversed
};

H2Composition h2_composition(const ShortcutSet& shortcuts);

/// e^{iVt sigma_x} on every linked pair (i_k, j_k).
void step_h2(StateVector& psi, const ShortcutSet& shortcuts, double t, double hopping = 1.0);

/// Strict variant: rejects sets whose pairs share endpoints.
void step_h2_exact(StateVector& psi, const ShortcutSet& shortcuts, double t, double hopping = 1.0);

/// Called with (step index, state) at step 0 and every `stride` steps.
using Observer = std::function<void(std::size_t, const StateVector&)>;

/// Default observer stride: ceil(1/dt) steps, one unit of physical time.
std::size_t default_stride(double dt);

/**
 * Second-order split-operator propagator
 *   e^{iH dt} ~ e^{iH0 dt/2} e^{iH1 dt/2} e^{iH2 dt} e^{iH1 dt/2} e^{iH0 dt/2}.
 * Phase tables are precomputed; adjacent H0 half steps are fused between
 * observations.
 */
class SplitPropagator {
public:
    SplitPropagator(const SmallWorldHamiltonian& h, double dt);

    double dt() const { return dt_; }
    void step(StateVector& psi) const;
    void evolve(StateVector& psi, std::size_t n_steps, const Observer& observer = {}, std::size_t stride = 0) const;

private:
    void apply_diagonal(StateVector& psi, const std::vector<cplx>& phases) const;
    void apply_h1_half(StateVector& psi) const;
    void apply_h2(StateVector& psi) const;

    int n_qubits_;
    double dt_;
    std::vector<cplx> h0_half_;
    std::vector<cplx> h0_full_;
    std::vector<cplx> h1_half_; // includes the 1/N of the unnormalized FFT pair
    std::vector<VertexPair> pairs_;
    H2Composition composition_;
    double h2_cos_, h2_sin_;
};

StateVector evolve_split(StateVector psi, const SmallWorldHamiltonian& h, double dt, std::size_t n_steps,
                         const Observer& observer = {}, std::size_t stride = 0);

/// Largest register accepted by full-diagonalization evolution.
inline constexpr int kMaxEigenQubits = 12;

/// Exact propagator from a full diagonalization of the dense Hamiltonian.
class EigenPropagator {
public:
    explicit EigenPropagator(const SmallWorldHamiltonian& h);

    const Eigen::VectorXd& eigenvalues() const { return values_; }
    StateVector evolve(const StateVector& psi, double t) const;

private:
    int n_qubits_;
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
};

StateVector evolve_eigen(const StateVector& psi, const SmallWorldHamiltonian& h, double t);

/// Ascending eigenvalues of the dense Hamiltonian (n_r <= 13).
std::vector<double> spectrum(const SmallWorldHamiltonian& h);

/// H psi using the sparse structure of H0 + H1 + H2.
StateVector apply_hamiltonian(const SmallWorldHamiltonian& h, const StateVector& psi);

/// <psi|H|psi>
double energy(const SmallWorldHamiltonian& h, const StateVector& psi);

} // namespace swnet
