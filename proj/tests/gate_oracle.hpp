#pragma once

// Dense matrices of gates, programs and link sets, built from Kronecker
// products and index arithmetic only.

#include "oracle.hpp"
#include "swnet/circuit.hpp"

namespace oracle {

using namespace swnet;

inline Mat diag2(cplx a, cplx b)
{
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// Dense matrix of one gate from Kronecker products and arithmetic.
inline Mat gate_matrix(const Gate& g, int n)
{
    const auto dim = static_cast<Eigen::Index>(dimension_of(n));
    if (auto* r = std::get_if<RZ>(&g.op))
        return oracle::on_qubit(diag2(std::polar(1.0, r->angle / 2), std::polar(1.0, -r->angle / 2)), r->qubit, n);
    if (auto* h = std::get_if<Hadamard>(&g.op)) return oracle::on_qubit(oracle::hadamard(), h->qubit, n);
    if (auto* c = std::get_if<CNot>(&g.op)) return oracle::controlled(oracle::pauli_x(), c->control, c->target, n);
    if (auto* c = std::get_if<CPhase>(&g.op))
        return oracle::controlled(diag2(1.0, std::polar(1.0, c->angle)), c->control, c->target, n);
    if (auto* m = std::get_if<MultiControlledRX>(&g.op)) {
        Mat proj = Mat::Identity(dim, dim);
        for (const auto& cb : m->controls) proj = proj * oracle::on_qubit(oracle::projector(cb.value), cb.qubit, n);
        const Mat rx = std::cos(m->angle) * Mat::Identity(2, 2) + cplx(0.0, std::sin(m->angle)) * oracle::pauli_x();
        const Mat id = Mat::Identity(dim, dim);
        return id - proj + proj * oracle::on_qubit(rx, m->target, n);
    }
    const auto& a = std::get<ModAffine>(g.op);
    const std::uint64_t size = dimension_of(n);
    Mat p = Mat::Zero(dim, dim);
    for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t j = (a.a * i + a.b) % size;
        if (a.inverse)
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        else
            p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return p;
}

inline Mat program_matrix(const GateProgram& prog)
{
    const auto dim = static_cast<Eigen::Index>(dimension_of(prog.n_qubits));
    Mat u = Mat::Identity(dim, dim);
    for (const auto& g : prog.gates) u = gate_matrix(g, prog.n_qubits) * u;
    return u;
}

inline std::uint64_t bit_reverse(std::uint64_t x, int n)
{
    std::uint64_t r = 0;
    for (int b = 0; b < n; ++b) r |= ((x >> b) & 1ULL) << (n - 1 - b);
    return r;
}

inline Mat links_matrix(const ShortcutSet& s)
{
    const auto d = static_cast<Eigen::Index>(dimension_of(s.n_qubits));
    Mat m = Mat::Zero(d, d);
    for (const auto& [a, b] : s.pairs) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += 1.0;
        m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) += 1.0;
    }
    return m;
}


inline Mat ring_h1(int n) { return oracle::ring(dimension_of(n)); }

// On-site energies recovered from the H0 half-step of a Trotter step.
inline DisorderField extracted_disorder(const TrotterStep& step)
{
    const auto d = extract_diagonal(step.h0_half);
    DisorderField f;
    for (double ph : d.phases) f.energies.push_back(ph / step.h0_half.metadata.dt);
    return f;
}

inline SmallWorldHamiltonian matched_hamiltonian(const TrotterStep& step, double density)
{
    ShortcutSet links;
    links.n_qubits = step.h0_half.n_qubits;
    if (step.has_links()) links = induced_links(step.h2).links;
    return make_hamiltonian(extracted_disorder(step), links, density);
}

inline Mat hamiltonian_matrix(const SmallWorldHamiltonian& h)
{
    const auto d = static_cast<Eigen::Index>(h.dimension());
    Mat m = ring_h1(h.n_qubits) + links_matrix(h.shortcuts);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) += h.disorder.energies[static_cast<std::size_t>(i)];
    return m;
}

} // namespace oracle
