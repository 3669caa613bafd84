#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "swnet/circuit.hpp"

namespace swnet {

/**
 * Exact fusion of a noise-free gate sequence into a few O(N) kernels.
 *
 * Runs of diagonal/permutation gates become one gather-with-phase; runs in
 * which every non-monomial gate acts on the same qubit q become one set of
 * 2x2 blocks over the pairs (r, r | q). The product is computed from the
 * gates themselves, so results agree with gate-by-gate execution to rounding.
 */
class CompiledProgram {
public:
    CompiledProgram() = default;
    CompiledProgram(int n_qubits, const std::vector<const GateProgram*>& programs);
    explicit CompiledProgram(const GateProgram& program);
    explicit CompiledProgram(const TrotterStep& step);

    void apply(StateVector& psi) const;
    std::size_t num_kernels() const { return kernels_.size(); }
    int num_qubits() const { return n_qubits_; }

private:
    struct Monomial {
        bool diagonal = true;
        std::vector<std::uint32_t> source; ///< out[i] = phase[i] * in[source[i]]
        std::vector<cplx> phase;
    };
    struct PairBlocks {
        std::size_t mask = 0;
        std::vector<std::array<cplx, 4>> blocks; ///< row-major 2x2 per pair, indexed by r with bit q removed
    };

    void compile_segment(const std::vector<const Gate*>& gates, bool block, int qubit);

    int n_qubits_ = 0;
    std::vector<std::variant<Monomial, PairBlocks>> kernels_;
};

/// Dense matrix of one (possibly noisy) Trotter step, built column by column
/// from gate-level execution. Intended for n_r <= 10.
Eigen::MatrixXcd step_matrix(const TrotterStep& step, const ErrorStep* noise = nullptr, const NoiseOptions& options = {});

inline constexpr int kMaxStepMatrixQubits = 10;

} // namespace swnet
