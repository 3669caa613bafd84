#pragma once

#include <vector>

#include "swnet/rng.hpp"
#include "swnet/state.hpp"

namespace swnet {

/**
 * Static imperfections H_E = sum_i delta_i Z_i + sum_i J_i X_i X_{i+1}
 * on a circular chain of register qubits. With tau_g = 1, delta_i is drawn
 * from [-eps/2, eps/2] and J_i from [-eps, eps]. Fields stay fixed for the
 * whole experiment, across all disorder realizations.
 *
 * deltas[i] and couplings[i] refer to qubit i+1; couplings[i] couples qubits
 * i+1 and (i+1) mod n_r + 1.
 */
struct NoiseParams {
    int n_qubits = 0;
    double epsilon = 0.0;
    double tau_g = 1.0;
    std::vector<double> deltas;
    std::vector<double> couplings;
};

/// Draws unit-scale fields and multiplies them by eps, so one seed gives
/// proportional fields for every eps.
NoiseParams sample_noise(int n_qubits, double epsilon, Rng& rng);

/**
 * exp(-i H_E tau_g), split as Z/2 . XX . Z/2. The XX terms commute with each
 * other and are applied exactly; the Z-XX splitting error is O(eps^3).
 */
class ErrorStep {
public:
    explicit ErrorStep(const NoiseParams& noise);

    void apply(StateVector& psi) const;
    void apply(std::span<cplx> amplitudes) const;
    bool is_identity() const { return identity_; }
    int num_qubits() const { return n_qubits_; }

private:
    int n_qubits_;
    bool identity_;
    std::vector<cplx> z_half_;
    struct XXTerm {
        std::size_t mask;
        double c, s;
    };
    std::vector<XXTerm> xx_;
};

void apply_error_step(StateVector& psi, const NoiseParams& noise);

} // namespace swnet
