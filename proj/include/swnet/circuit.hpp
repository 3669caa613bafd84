#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "swnet/network.hpp"
#include "swnet/noise.hpp"
#include "swnet/rng.hpp"
#include "swnet/state.hpp"

namespace swnet {

// Qubits are numbered 1..n_r, qubit 1 being the most significant bit of the
// vertex index.

/// exp(i angle Z / 2)
struct RZ {
    int qubit;
    double angle;
};

struct Hadamard {
    int qubit;
};

struct CNot {
    int control;
    int target;
};

/// Phase e^{i angle} on |11> of (control, target).
struct CPhase {
    int control;
    int target;
    double angle;
};

struct ControlBit {
    int qubit;
    int value; ///< 0 or 1
};

/// exp(i angle X) on the target when every control holds its required value.
struct MultiControlledRX {
    std::vector<ControlBit> controls;
    int target;
    double angle;
};

/// |i> -> |(a i + b) mod N>, or its inverse |i> -> |a^{-1}(i - b) mod N>.
struct ModAffine {
    std::uint64_t a;
    std::uint64_t b;
    bool inverse = false;
};

using GateOp = std::variant<RZ, Hadamard, CNot, CPhase, MultiControlledRX, ModAffine>;

struct Gate {
    GateOp op;
    std::int64_t elementary_count = 1;
};

bool is_elementary(const Gate& g);
/// Diagonal or permutation gates: map a basis state to a single basis state.
bool is_monomial(const Gate& g);
std::string gate_name(const Gate& g);

enum class Factor { H0, H1, H2, QFT, InverseQFT, Custom };
std::string to_string(Factor f);
Factor factor_from_string(const std::string& s);

/// One multi-controlled rotation of the H2 circuit, creating 2^power links.
struct LinkTerm {
    int power = 0;
    std::vector<ControlBit> controls;
    int target = 0;
};

/// Every random choice and parameter a builder used.
struct ProgramMetadata {
    Factor factor = Factor::Custom;
    double dt = 0.0;
    int n_s = 0;
    int L = 0;
    int n_p = 0;
    double sigma = 0.0;
    double sigma_scale = 1.0;
    double gamma = 0.0;
    double density = 0.0;
    std::vector<double> register_angles;   ///< H0: phi_k
    std::vector<double> extra_angles;      ///< H0: phi'_k
    std::vector<std::array<int, 2>> wiring; ///< H0 / H2 CNOT (i_k, j_k)
    std::vector<std::uint64_t> affine_a;    ///< H2: a_k
    std::vector<std::uint64_t> affine_b;    ///< H2: b_k
    std::vector<LinkTerm> link_terms;       ///< H2: one per binary digit of round(pN)
};

struct GateProgram {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::int64_t declared_gate_count = 0;
    ProgramMetadata metadata;

    /// Sum of elementary_count over all gates.
    std::int64_t elementary_total() const;
    /// Sum of elementary_count over the gates that are themselves elementary.
    std::int64_t elementary_gate_total() const;
};

/// Multiplicative constants of the O(n_r^2) costs of compound gates.
struct CompoundCosts {
    double c_mc = 1.0; ///< multi-controlled rotation: c_mc n_r^2
    double c_ar = 1.0; ///< modular affine map: c_ar n_r^2
};

std::int64_t compound_cost(double c, int n_qubits);

/// Modular inverse of an odd a modulo 2^n_qubits.
std::uint64_t inverse_mod_pow2(std::uint64_t a, int n_qubits);

/// Applies one gate. Throws std::invalid_argument on bad qubit indices or an even multiplier.
void apply_gate(StateVector& psi, const Gate& g);
void apply_gate(std::span<cplx> amplitudes, int n_qubits, const Gate& g);

/// Index image of a basis state under a permutation gate (CNot or ModAffine).
std::uint64_t permute_index(const Gate& g, std::uint64_t index, int n_qubits);

/// Ratio of the realized H0 phase standard deviation to W dt, for the
/// uniform-angle construction with the rotation convention exp(i phi Z/2).
inline constexpr double kH0WidthRatio = 0.25;

/**
 * e^{iH0 dt} as a diagonal network of n_r + n_s rotations and 2 n_s CNOTs.
 * Angles are uniform in [-sigma/2, sigma/2] with
 * sigma = sigma_scale * W dt sqrt(3 / (n_r + n_s)).
 */
GateProgram build_h0_program(int n_qubits, int n_s, double width, double dt, Rng& rng, double sigma_scale = 1.0);

/// Hadamard + controlled-phase QFT without swaps: output index is bit-reversed.
GateProgram build_qft(int n_qubits, bool inverse = false);

/// Sign of gamma that makes the cosine core produce +2 dt cos(2 pi k/N).
int h1_gamma_sign();

/**
 * Cosine-diagonal core between the QFTs: L repetitions of
 * R_{gamma/2}(theta) R_{gamma/2}(-theta), |gamma| = 2 dt / L, acting on the
 * bit-reversed Fourier index. gamma_sign = 0 uses h1_gamma_sign().
 */
GateProgram build_h1_core(int n_qubits, double dt, int L, int gamma_sign = 0);

/// QFT, cosine core, inverse QFT: approximates e^{iH1 dt}.
GateProgram build_h1_program(int n_qubits, double dt, int L);

/// Permutation P, one multi-controlled rotation per binary digit of round(pN), P^{-1}.
GateProgram build_h2_program(int n_qubits, double density, double dt, int n_p, Rng& rng,
                             const CompoundCosts& costs = {});

struct DiagonalExtraction {
    std::vector<double> phases;
    double max_leakage = 0.0;
    bool leaked = false; ///< some basis state lost more than 1e-10 of its weight
};

DiagonalExtraction extract_diagonal(const GateProgram& program);

struct InducedLinks {
    ShortcutSet links;
    std::vector<std::size_t> term_sizes;
    std::size_t ring_collisions = 0; ///< induced pairs that coincide with ring edges
    std::size_t term_collisions = 0; ///< vertices touched by more than one rotation term
};

/// The shortcut set realized by an H2 program, in original vertex labels.
InducedLinks induced_links(const GateProgram& h2_program);

struct TrotterParams {
    double width = 0.0;   ///< W
    double density = 0.0; ///< p
    double dt = 0.03;
    int n_s = 0; ///< 0 selects 30 n_r
    int L = 10;
    int n_p = 0; ///< 0 selects 3 n_r
    CompoundCosts costs;
    bool match_exact_variance = false;
    /// Standard deviation of the on-site energies per unit W targeted when
    /// match_exact_variance is set.
    double disorder_std_ratio = 1.0;
};

int resolved_n_s(const TrotterParams& p, int n_qubits);
int resolved_n_p(const TrotterParams& p, int n_qubits);

/// e^{iH0 dt/2} e^{iH1 dt/2} e^{iH2 dt} e^{iH1 dt/2} e^{iH0 dt/2}, with the H0
/// angles and the H2 permutation fixed for the realization.
struct TrotterStep {
    GateProgram h0_half;
    GateProgram h1_half;
    GateProgram h2; ///< empty when round(pN) = 0

    bool has_links() const { return !h2.gates.empty(); }
    std::vector<const GateProgram*> sequence() const;
    std::int64_t elementary_total() const;
    std::int64_t declared_total() const;
};

TrotterStep build_trotter_step(int n_qubits, const TrotterParams& params, Rng& h0_rng, Rng& h2_rng);

struct NoiseOptions {
    /// Also run the error step after H2 gates, elementary_count times per compound gate.
    bool noise_on_compound = false;
};

struct RunStats {
    std::int64_t gates = 0;
    std::int64_t elementary = 0;
    std::int64_t error_steps = 0;
};

/**
 * Applies the program gate by gate. With noise, one error step follows every
 * elementary gate of H0/H1 programs; H2 programs run exactly unless
 * noise_on_compound is set.
 */
RunStats run_program(StateVector& psi, const GateProgram& program, const ErrorStep* noise = nullptr,
                     const NoiseOptions& options = {});
RunStats run_program(std::span<cplx> amplitudes, const GateProgram& program, const ErrorStep* noise = nullptr,
                     const NoiseOptions& options = {});

RunStats run_step(StateVector& psi, const TrotterStep& step, const ErrorStep* noise = nullptr,
                  const NoiseOptions& options = {});

} // namespace swnet
