#include "swnet/compiled.hpp"

#include <numbers>
#include <stdexcept>

namespace swnet {
namespace {

constexpr cplx kI{0.0, 1.0};

std::size_t mask_of(int n_qubits, int qubit) { return std::size_t{1} << (n_qubits - qubit); }

// Block index of r (bit `mask` clear): r with that bit squeezed out.
inline std::size_t squeeze(std::size_t r, std::size_t mask) { return ((r & ~(mask - 1)) >> 1) | (r & (mask - 1)); }

bool is_permutation(const Gate& g)
{
    return std::holds_alternative<CNot>(g.op) || std::holds_alternative<ModAffine>(g.op);
}

int nonmonomial_qubit(const Gate& g)
{
    if (const auto* h = std::get_if<Hadamard>(&g.op)) return h->qubit;
    if (const auto* r = std::get_if<MultiControlledRX>(&g.op)) return r->target;
    return 0;
}

// Phase a diagonal gate puts on basis index i.
cplx diagonal_phase(const Gate& g, std::size_t i, int n_qubits)
{
    if (const auto* r = std::get_if<RZ>(&g.op)) {
        const bool one = (i & mask_of(n_qubits, r->qubit)) != 0;
        return std::polar(1.0, one ? -0.5 * r->angle : 0.5 * r->angle);
    }
    if (const auto* c = std::get_if<CPhase>(&g.op)) {
        const std::size_t m = mask_of(n_qubits, c->control) | mask_of(n_qubits, c->target);
        return (i & m) == m ? std::polar(1.0, c->angle) : cplx{1.0, 0.0};
    }
    throw std::logic_error("diagonal_phase: not a diagonal gate");
}

std::vector<cplx>& scratch(std::size_t n)
{
    thread_local std::vector<cplx> buf;
    if (buf.size() < n) buf.resize(n);
    return buf;
}

} // namespace

CompiledProgram::CompiledProgram(const GateProgram& program) : CompiledProgram(program.n_qubits, {&program}) {}

CompiledProgram::CompiledProgram(const TrotterStep& step) : CompiledProgram(step.h0_half.n_qubits, step.sequence()) {}

CompiledProgram::CompiledProgram(int n_qubits, const std::vector<const GateProgram*>& programs) : n_qubits_(n_qubits)
{
    std::vector<const Gate*> segment;
    bool block = false;
    int qubit = 0;
    auto flush = [&] {
        if (!segment.empty()) compile_segment(segment, block, qubit);
        segment.clear();
        block = false;
        qubit = 0;
    };
    for (const auto* p : programs) {
        if (p->n_qubits != n_qubits) throw std::invalid_argument("compile: register size mismatch");
        for (const auto& g : p->gates) {
            if (is_permutation(g)) {
                if (block) flush();
            } else if (!is_monomial(g)) {
                const int q = nonmonomial_qubit(g);
                if (!block || q != qubit) {
                    flush();
                    block = true;
                    qubit = q;
                }
            }
            segment.push_back(&g);
        }
    }
    flush();
}

void CompiledProgram::compile_segment(const std::vector<const Gate*>& gates, bool block, int qubit)
{
    const std::size_t n = dimension_of(n_qubits_);
    if (!block) {
        Monomial k;
        std::vector<std::uint64_t> index(n);
        std::vector<cplx> phase(n, cplx{1.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) index[i] = i;
        for (const Gate* g : gates) {
            if (is_permutation(*g)) {
                for (auto& v : index) v = permute_index(*g, v, n_qubits_);
            } else {
                for (std::size_t i = 0; i < n; ++i) phase[i] *= diagonal_phase(*g, index[i], n_qubits_);
            }
        }
        k.source.resize(n);
        k.phase.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            k.source[index[i]] = static_cast<std::uint32_t>(i);
            k.phase[index[i]] = phase[i];
            k.diagonal = k.diagonal && index[i] == i;
        }
        kernels_.emplace_back(std::move(k));
        return;
    }

    PairBlocks k;
    k.mask = mask_of(n_qubits_, qubit);
    const std::size_t m = k.mask;
    k.blocks.assign(n / 2, {cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    const double h = std::numbers::sqrt2 / 2.0;
    for (const Gate* g : gates) {
        if (std::holds_alternative<Hadamard>(g->op)) {
            for (auto& b : k.blocks) b = {h * (b[0] + b[2]), h * (b[1] + b[3]), h * (b[0] - b[2]), h * (b[1] - b[3])};
        } else if (const auto* r = std::get_if<MultiControlledRX>(&g->op)) {
            std::size_t cmask = 0;
            std::size_t cval = 0;
            for (const auto& cb : r->controls) {
                cmask |= mask_of(n_qubits_, cb.qubit);
                if (cb.value) cval |= mask_of(n_qubits_, cb.qubit);
            }
            const double c = std::cos(r->angle);
            const cplx is = kI * std::sin(r->angle);
            for (std::size_t rr = 0; rr < n; ++rr) {
                if ((rr & m) || (rr & cmask) != cval) continue;
                auto& b = k.blocks[squeeze(rr, m)];
                b = {c * b[0] + is * b[2], c * b[1] + is * b[3], is * b[0] + c * b[2], is * b[1] + c * b[3]};
            }
        } else {
            for (std::size_t rr = 0; rr < n; ++rr) {
                if (rr & m) continue;
                auto& b = k.blocks[squeeze(rr, m)];
                const cplx d0 = diagonal_phase(*g, rr, n_qubits_);
                const cplx d1 = diagonal_phase(*g, rr | m, n_qubits_);
                b = {d0 * b[0], d0 * b[1], d1 * b[2], d1 * b[3]};
            }
        }
    }
    kernels_.emplace_back(std::move(k));
}

void CompiledProgram::apply(StateVector& psi) const
{
    if (psi.num_qubits() != n_qubits_) throw std::invalid_argument("compiled program: register size mismatch");
    const std::size_t n = psi.size();
    cplx* a = psi.data();
    for (const auto& kernel : kernels_) {
        if (const auto* mono = std::get_if<Monomial>(&kernel)) {
            if (mono->diagonal) {
                for (std::size_t i = 0; i < n; ++i) a[i] *= mono->phase[i];
            } else {
                auto& tmp = scratch(n);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = mono->phase[i] * a[mono->source[i]];
                std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n), a);
            }
            continue;
        }
        const auto& pb = std::get<PairBlocks>(kernel);
        const std::size_t m = pb.mask;
        std::size_t idx = 0;
        for (std::size_t hi = 0; hi < n; hi += 2 * m) {
            for (std::size_t lo = 0; lo < m; ++lo, ++idx) {
                const std::size_t r = hi + lo;
                const auto& b = pb.blocks[idx];
                const cplx x = a[r];
                const cplx y = a[r | m];
                a[r] = b[0] * x + b[1] * y;
                a[r | m] = b[2] * x + b[3] * y;
            }
        }
    }
}

Eigen::MatrixXcd step_matrix(const TrotterStep& step, const ErrorStep* noise, const NoiseOptions& options)
{
    const int nq = step.h0_half.n_qubits;
    if (nq > kMaxStepMatrixQubits) throw std::invalid_argument("step matrix limited to n_r <= 10");
    const auto n = static_cast<Eigen::Index>(dimension_of(nq));
    Eigen::MatrixXcd u(n, n);
    const auto seq = step.sequence();
    for (Eigen::Index j = 0; j < n; ++j) {
        std::span<cplx> col(u.col(j).data(), static_cast<std::size_t>(n));
        std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
        col[static_cast<std::size_t>(j)] = 1.0;
        for (const auto* p : seq) run_program(col, *p, noise, options);
    }
    return u;
}

} // namespace swnet
