#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace swnet {

using cplx = std::complex<double>;

/// Largest register supported by the dense state-vector representation.
inline constexpr int kMaxQubits = 26;

/// Number of basis states 2^n of an n-qubit register.
inline std::size_t dimension_of(int n_qubits) { return std::size_t{1} << n_qubits; }

/**
 * Amplitudes of a wavefunction on N = 2^n_r vertices.
 *
 * Vertex i is the basis state whose binary digits are the register qubits,
 * with qubit 1 the most significant bit. Every constructor enforces
 * size == 2^n_r and finite amplitudes.
 */
class StateVector {
public:
    /// |0>, the state localized on vertex 0.
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, std::vector<cplx> amplitudes);

    static StateVector basis(int n_qubits, std::size_t index);
    static StateVector uniform(int n_qubits);

    int num_qubits() const { return n_qubits_; }
    std::size_t size() const { return amp_.size(); }

    std::span<cplx> amplitudes() { return amp_; }
    std::span<const cplx> amplitudes() const { return amp_; }

    cplx& operator[](std::size_t i) { return amp_[i]; }
    const cplx& operator[](std::size_t i) const { return amp_[i]; }

    double norm_squared() const;
    bool all_finite() const;
    void normalize();

    cplx* data() { return amp_.data(); }
    const cplx* data() const { return amp_.data(); }

private:
    int n_qubits_;
    std::vector<cplx> amp_;
};

StateVector basis_state(int n_qubits, std::size_t index);

/// Inverse participation ratio sum|psi|^2 / sum|psi|^4 (rejects the zero vector).
double ipr(const StateVector& psi);
double ipr(std::span<const cplx> amplitudes);

enum class FourierDirection { Forward, Inverse };

/**
 * Unitary discrete Fourier transform of the amplitude array.
 *
 * Forward: psi_k <- N^{-1/2} sum_j e^{+2 pi i jk/N} psi_j, which is the
 * convention produced by the standard QFT gate network. Inverse uses the
 * conjugate kernel. In this basis the ring hopping operator is diagonal
 * with eigenvalue 2 cos(2 pi k/N).
 */
void dft_inplace(StateVector& psi, FourierDirection direction);
StateVector dft(StateVector psi, FourierDirection direction);

/// <a|b>, antilinear in the first argument.
cplx overlap(const StateVector& a, const StateVector& b);

/// max_i |a_i - b_i|
double max_abs_diff(const StateVector& a, const StateVector& b);

} // namespace swnet
