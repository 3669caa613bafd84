#include "swnet/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace swnet {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t mask_of(int n_qubits, int qubit) { return std::size_t{1} << (n_qubits - qubit); }

void check_qubit(int n_qubits, int q)
{
    if (q < 1 || q > n_qubits) throw std::invalid_argument("qubit index " + std::to_string(q) + " outside [1, n_r]");
}

void check_pair(int n_qubits, int a, int b)
{
    check_qubit(n_qubits, a);
    check_qubit(n_qubits, b);
    if (a == b) throw std::invalid_argument("two-qubit gate needs distinct qubits");
}

std::vector<cplx>& scratch(std::size_t n)
{
    thread_local std::vector<cplx> buf;
    if (buf.size() < n) buf.resize(n);
    return buf;
}

std::uint64_t bit_reverse(std::uint64_t x, int n_qubits)
{
    std::uint64_t r = 0;
    for (int b = 0; b < n_qubits; ++b) r |= ((x >> b) & 1ULL) << (n_qubits - 1 - b);
    return r;
}

double wrap_phase(double x)
{
    x = std::remainder(x, 2.0 * kPi);
    return x;
}

GateProgram empty_program(int n_qubits, Factor factor, double dt)
{
    GateProgram p;
    p.n_qubits = n_qubits;
    p.metadata.factor = factor;
    p.metadata.dt = dt;
    return p;
}

} // namespace

bool is_elementary(const Gate& g)
{
    return !std::holds_alternative<MultiControlledRX>(g.op) && !std::holds_alternative<ModAffine>(g.op);
}

bool is_monomial(const Gate& g)
{
    return !std::holds_alternative<Hadamard>(g.op) && !std::holds_alternative<MultiControlledRX>(g.op);
}

std::string gate_name(const Gate& g)
{
    return std::visit(overloaded{
                          [](const RZ&) { return std::string("RZ"); },
                          [](const Hadamard&) { return std::string("HAD"); },
                          [](const CNot&) { return std::string("CNOT"); },
                          [](const CPhase&) { return std::string("CPHASE"); },
                          [](const MultiControlledRX&) { return std::string("MCRX"); },
                          [](const ModAffine&) { return std::string("MODAFFINE"); },
                      },
                      g.op);
}

std::string to_string(Factor f)
{
    switch (f) {
    case Factor::H0: return "H0";
    case Factor::H1: return "H1";
    case Factor::H2: return "H2";
    case Factor::QFT: return "QFT";
    case Factor::InverseQFT: return "IQFT";
    case Factor::Custom: return "custom";
    }
    return "custom";
}

Factor factor_from_string(const std::string& s)
{
    for (Factor f : {Factor::H0, Factor::H1, Factor::H2, Factor::QFT, Factor::InverseQFT, Factor::Custom})
        if (to_string(f) == s) return f;
    throw std::invalid_argument("unknown program factor: " + s);
}

std::int64_t GateProgram::elementary_total() const
{
    std::int64_t s = 0;
    for (const auto& g : gates) s += g.elementary_count;
    return s;
}

std::int64_t GateProgram::elementary_gate_total() const
{
    std::int64_t s = 0;
    for (const auto& g : gates)
        if (is_elementary(g)) s += g.elementary_count;
    return s;
}

std::int64_t compound_cost(double c, int n_qubits)
{
    return std::max<std::int64_t>(1, std::llround(c * n_qubits * n_qubits));
}

std::uint64_t inverse_mod_pow2(std::uint64_t a, int n_qubits)
{
    if ((a & 1ULL) == 0) throw std::invalid_argument("modular multiplier must be odd");
    // Newton iteration doubles the number of correct low bits each round.
    std::uint64_t x = a;
    for (int i = 0; i < 6; ++i) x *= 2 - a * x;
    const std::uint64_t mask = n_qubits >= 64 ? ~0ULL : (1ULL << n_qubits) - 1;
    return x & mask;
}

std::uint64_t permute_index(const Gate& g, std::uint64_t index, int n_qubits)
{
    const std::uint64_t n = std::uint64_t{1} << n_qubits;
    if (const auto* c = std::get_if<CNot>(&g.op)) {
        return (index & mask_of(n_qubits, c->control)) ? index ^ mask_of(n_qubits, c->target) : index;
    }
    if (const auto* m = std::get_if<ModAffine>(&g.op)) {
        if (!m->inverse) return (m->a * index + m->b) & (n - 1);
        return (inverse_mod_pow2(m->a, n_qubits) * (index + n - (m->b & (n - 1)))) & (n - 1);
    }
    throw std::invalid_argument("permute_index: not a permutation gate");
}

void apply_gate(std::span<cplx> a, int n_qubits, const Gate& g)
{
    const std::size_t n = a.size();
    if (n != dimension_of(n_qubits)) throw std::invalid_argument("apply_gate: amplitude length is not 2^n_r");
    std::visit(overloaded{
                   [&](const RZ& r) {
                       check_qubit(n_qubits, r.qubit);
                       const std::size_t m = mask_of(n_qubits, r.qubit);
                       const cplx p0 = std::polar(1.0, 0.5 * r.angle);
                       const cplx p1 = std::conj(p0);
                       for (std::size_t i = 0; i < n; ++i) a[i] *= (i & m) ? p1 : p0;
                   },
                   [&](const Hadamard& h) {
                       check_qubit(n_qubits, h.qubit);
                       const std::size_t m = mask_of(n_qubits, h.qubit);
                       const double r = std::numbers::sqrt2 / 2.0;
                       for (std::size_t i = 0; i < n; ++i) {
                           if (i & m) continue;
                           const cplx x = a[i];
                           const cplx y = a[i | m];
                           a[i] = r * (x + y);
                           a[i | m] = r * (x - y);
                       }
                   },
                   [&](const CNot& c) {
                       check_pair(n_qubits, c.control, c.target);
                       const std::size_t mc = mask_of(n_qubits, c.control);
                       const std::size_t mt = mask_of(n_qubits, c.target);
                       for (std::size_t i = 0; i < n; ++i)
                           if ((i & mc) && !(i & mt)) std::swap(a[i], a[i | mt]);
                   },
                   [&](const CPhase& c) {
                       check_pair(n_qubits, c.control, c.target);
                       const std::size_t m = mask_of(n_qubits, c.control) | mask_of(n_qubits, c.target);
                       const cplx ph = std::polar(1.0, c.angle);
                       for (std::size_t i = 0; i < n; ++i)
                           if ((i & m) == m) a[i] *= ph;
                   },
                   [&](const MultiControlledRX& r) {
                       check_qubit(n_qubits, r.target);
                       std::size_t cmask = 0;
                       std::size_t cval = 0;
                       for (const auto& cb : r.controls) {
                           check_qubit(n_qubits, cb.qubit);
                           const std::size_t m = mask_of(n_qubits, cb.qubit);
                           if (cb.qubit == r.target || (cmask & m))
                               throw std::invalid_argument("MCRX controls must be distinct and differ from the target");
                           if (cb.value != 0 && cb.value != 1) throw std::invalid_argument("MCRX control value must be 0 or 1");
                           cmask |= m;
                           if (cb.value) cval |= m;
                       }
                       const std::size_t mt = mask_of(n_qubits, r.target);
                       const double c = std::cos(r.angle);
                       const cplx is = kI * std::sin(r.angle);
                       for (std::size_t i = 0; i < n; ++i) {
                           if ((i & mt) || (i & cmask) != cval) continue;
                           const cplx x = a[i];
                           const cplx y = a[i | mt];
                           a[i] = c * x + is * y;
                           a[i | mt] = is * x + c * y;
                       }
                   },
                   [&](const ModAffine& m) {
                       if ((m.a & 1ULL) == 0) throw std::invalid_argument("MODAFFINE multiplier must be odd");
                       auto& tmp = scratch(n);
                       for (std::size_t i = 0; i < n; ++i) tmp[permute_index(g, i, n_qubits)] = a[i];
                       std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n), a.begin());
                   },
               },
               g.op);
}

void apply_gate(StateVector& psi, const Gate& g) { apply_gate(psi.amplitudes(), psi.num_qubits(), g); }

GateProgram build_h0_program(int n_qubits, int n_s, double width, double dt, Rng& rng, double sigma_scale)
{
    if (n_qubits < 2) throw std::invalid_argument("H0 circuit needs at least 2 qubits");
    if (n_s < 1) throw std::invalid_argument("n_s must be >= 1");
    if (!(width >= 0.0)) throw std::invalid_argument("disorder width must be >= 0");
    GateProgram p = empty_program(n_qubits, Factor::H0, dt);
    auto& md = p.metadata;
    md.n_s = n_s;
    md.sigma_scale = sigma_scale;
    md.sigma = sigma_scale * width * dt * std::sqrt(3.0 / static_cast<double>(n_qubits + n_s));
    std::uniform_real_distribution<double> angle(-0.5 * md.sigma, 0.5 * md.sigma);
    std::uniform_int_distribution<int> qubit(1, n_qubits);

    md.register_angles.resize(static_cast<std::size_t>(n_qubits));
    for (auto& phi : md.register_angles) phi = md.sigma > 0.0 ? angle(rng) : 0.0;
    md.extra_angles.resize(static_cast<std::size_t>(n_s));
    md.wiring.resize(static_cast<std::size_t>(n_s));
    for (int k = 0; k < n_s; ++k) {
        md.extra_angles[static_cast<std::size_t>(k)] = md.sigma > 0.0 ? angle(rng) : 0.0;
        int i = qubit(rng);
        int j = qubit(rng);
        while (j == i) j = qubit(rng);
        md.wiring[static_cast<std::size_t>(k)] = {i, j};
    }

    // prod_{k=n_s}^{1} CNOT_k  prod_{k=1}^{n_s} (R_{j_k}(phi'_k) CNOT_k)  prod_{k=1}^{n_r} R_k(phi_k),
    // listed in application order (rightmost factor first).
    for (int k = 1; k <= n_qubits; ++k) p.gates.push_back({RZ{k, md.register_angles[static_cast<std::size_t>(k - 1)]}});
    for (int k = n_s; k >= 1; --k) {
        const auto [i, j] = md.wiring[static_cast<std::size_t>(k - 1)];
        p.gates.push_back({CNot{i, j}});
        p.gates.push_back({RZ{j, md.extra_angles[static_cast<std::size_t>(k - 1)]}});
    }
    for (int k = 1; k <= n_s; ++k) {
        const auto [i, j] = md.wiring[static_cast<std::size_t>(k - 1)];
        p.gates.push_back({CNot{i, j}});
    }
    p.declared_gate_count = 3 * static_cast<std::int64_t>(n_s) + n_qubits;
    return p;
}

GateProgram build_qft(int n_qubits, bool inverse)
{
    if (n_qubits < 1) throw std::invalid_argument("QFT needs at least 1 qubit");
    GateProgram p = empty_program(n_qubits, inverse ? Factor::InverseQFT : Factor::QFT, 0.0);
    for (int q = 1; q <= n_qubits; ++q) {
        p.gates.push_back({Hadamard{q}});
        for (int j = q + 1; j <= n_qubits; ++j) p.gates.push_back({CPhase{j, q, kPi / std::ldexp(1.0, j - q)}});
    }
    if (inverse) {
        std::reverse(p.gates.begin(), p.gates.end());
        for (auto& g : p.gates)
            if (auto* c = std::get_if<CPhase>(&g.op)) c->angle = -c->angle;
    }
    p.declared_gate_count = static_cast<std::int64_t>(n_qubits) * (n_qubits + 1) / 2;
    return p;
}

namespace {

// S^m = prod_{j=2}^{n_r} C_{1,j}(pi m / 2^{j-1}) in bit-reversed labels: the
// leading Fourier bit a_1 sits on register qubit n_r, a_j on qubit n_r + 1 - j.
void append_ladder(std::vector<Gate>& gates, int n_qubits, double m)
{
    const int lead = n_qubits;
    for (int j = 2; j <= n_qubits; ++j)
        gates.push_back({CPhase{n_qubits + 1 - j, lead, kPi * m / std::ldexp(1.0, j - 1)}});
}

// R_g(+-theta) = H S^{s} H e^{-i(g/2)Z} H S^{-2s} H e^{-i(g/2)Z} H S^{s} H
void append_r(std::vector<Gate>& gates, int n_qubits, double g, double s)
{
    const int lead = n_qubits;
    gates.push_back({Hadamard{lead}});
    append_ladder(gates, n_qubits, s);
    gates.push_back({Hadamard{lead}});
    gates.push_back({RZ{lead, -g}});
    gates.push_back({Hadamard{lead}});
    append_ladder(gates, n_qubits, -2.0 * s);
    gates.push_back({Hadamard{lead}});
    gates.push_back({RZ{lead, -g}});
    gates.push_back({Hadamard{lead}});
    append_ladder(gates, n_qubits, s);
    gates.push_back({Hadamard{lead}});
}

int calibrate_gamma_sign()
{
    constexpr int kQubits = 4;
    constexpr double kDt = 0.05;
    constexpr int kL = 10;
    const std::size_t n = dimension_of(kQubits);
    double best_err = 0.0;
    int best = 0;
    for (int sign : {+1, -1}) {
        const auto diag = extract_diagonal(build_h1_core(kQubits, kDt, kL, sign));
        double err = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            const double k = static_cast<double>(bit_reverse(u, kQubits));
            const double target = 2.0 * kDt * std::cos(2.0 * kPi * k / static_cast<double>(n));
            err = std::max(err, std::abs(wrap_phase(diag.phases[u] - target)));
        }
        if (best == 0 || err < best_err) {
            best = sign;
            best_err = err;
        }
    }
    return best;
}

} // namespace

int h1_gamma_sign()
{
    static const int sign = calibrate_gamma_sign();
    return sign;
}

GateProgram build_h1_core(int n_qubits, double dt, int L, int gamma_sign)
{
    if (n_qubits < 2) throw std::invalid_argument("H1 circuit needs at least 2 qubits");
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    if (gamma_sign == 0) gamma_sign = h1_gamma_sign();
    GateProgram p = empty_program(n_qubits, Factor::H1, dt);
    p.metadata.L = L;
    p.metadata.gamma = gamma_sign * 2.0 * dt / L;
    const double g = 0.5 * p.metadata.gamma;
    for (int rep = 0; rep < L; ++rep) {
        append_r(p.gates, n_qubits, g, +1.0);
        append_r(p.gates, n_qubits, g, -1.0);
    }
    p.declared_gate_count = 2 * static_cast<std::int64_t>(L) * (5 + 3 * n_qubits);
    return p;
}

GateProgram build_h1_program(int n_qubits, double dt, int L)
{
    GateProgram core = build_h1_core(n_qubits, dt, L);
    GateProgram qft = build_qft(n_qubits);
    GateProgram iqft = build_qft(n_qubits, true);
    GateProgram p = empty_program(n_qubits, Factor::H1, dt);
    p.metadata = core.metadata;
    p.gates.reserve(qft.gates.size() + core.gates.size() + iqft.gates.size());
    p.gates.insert(p.gates.end(), qft.gates.begin(), qft.gates.end());
    p.gates.insert(p.gates.end(), core.gates.begin(), core.gates.end());
    p.gates.insert(p.gates.end(), iqft.gates.begin(), iqft.gates.end());
    p.declared_gate_count = static_cast<std::int64_t>(n_qubits) * (n_qubits + 1) + core.declared_gate_count;
    return p;
}

GateProgram build_h2_program(int n_qubits, double density, double dt, int n_p, Rng& rng, const CompoundCosts& costs)
{
    if (n_qubits < 2) throw std::invalid_argument("H2 circuit needs at least 2 qubits");
    if (n_p < 0) throw std::invalid_argument("n_p must be >= 0");
    const std::uint64_t n = dimension_of(n_qubits);
    const std::uint64_t links = link_count(n_qubits, density);
    if (links < 1) throw std::invalid_argument("H2 circuit needs round(pN) >= 1");
    if (2 * links > n)
        throw std::invalid_argument("round(pN) > N/2: a rotation term would need more qubits than the register has");

    GateProgram p = empty_program(n_qubits, Factor::H2, dt);
    auto& md = p.metadata;
    md.n_p = n_p;
    md.density = density;
    std::uniform_int_distribution<int> qubit(1, n_qubits);

    // a_k odd in [0.2 N, 0.8 N]
    const auto a_lo = static_cast<std::uint64_t>(std::ceil(0.2 * static_cast<double>(n)));
    const auto a_hi = static_cast<std::uint64_t>(std::floor(0.8 * static_cast<double>(n)));
    std::vector<std::uint64_t> odd;
    for (std::uint64_t a = a_lo | 1ULL; a <= a_hi; a += 2) odd.push_back(a);
    if (odd.empty()) odd.push_back(1);
    std::uniform_int_distribution<std::size_t> pick_a(0, odd.size() - 1);
    std::uniform_int_distribution<std::uint64_t> pick_b(0, n - 1);
    for (int k = 0; k < n_p; ++k) {
        md.affine_a.push_back(odd[pick_a(rng)]);
        md.affine_b.push_back(pick_b(rng));
        int i = qubit(rng);
        int j = qubit(rng);
        while (j == i) j = qubit(rng);
        md.wiring.push_back({i, j});
    }

    const std::int64_t ar = compound_cost(costs.c_ar, n_qubits);
    const std::int64_t mc = compound_cost(costs.c_mc, n_qubits);

    // P = prod_{k=1}^{n_p} U_k CNOT_k, applied rightmost first
    for (int k = n_p; k >= 1; --k) {
        const auto kk = static_cast<std::size_t>(k - 1);
        p.gates.push_back({CNot{md.wiring[kk][0], md.wiring[kk][1]}});
        p.gates.push_back({ModAffine{md.affine_a[kk], md.affine_b[kk], false}, ar});
    }
    for (int bit = 0; bit < n_qubits; ++bit) {
        if (((links >> bit) & 1ULL) == 0) continue;
        LinkTerm term;
        term.power = bit;
        const int mu = n_qubits - bit - 1;
        std::vector<int> order(static_cast<std::size_t>(n_qubits));
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);
        term.target = order[0];
        std::uniform_int_distribution<int> coin(0, 1);
        for (int c = 0; c < mu; ++c) term.controls.push_back({order[static_cast<std::size_t>(c + 1)], coin(rng)});
        p.gates.push_back({MultiControlledRX{term.controls, term.target, dt}, mc});
        md.link_terms.push_back(std::move(term));
    }
    // P^{-1}: V_1 CNOT_1 ... V_{n_p} CNOT_{n_p} in application order
    for (int k = 1; k <= n_p; ++k) {
        const auto kk = static_cast<std::size_t>(k - 1);
        p.gates.push_back({ModAffine{md.affine_a[kk], md.affine_b[kk], true}, ar});
        p.gates.push_back({CNot{md.wiring[kk][0], md.wiring[kk][1]}});
    }
    p.declared_gate_count = p.elementary_total();
    return p;
}

DiagonalExtraction extract_diagonal(const GateProgram& program)
{
    const std::size_t n = dimension_of(program.n_qubits);
    DiagonalExtraction out;
    out.phases.resize(n);
    std::vector<cplx> amp(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(amp.begin(), amp.end(), cplx{0.0, 0.0});
        amp[i] = 1.0;
        for (const auto& g : program.gates) apply_gate(amp, program.n_qubits, g);
        out.phases[i] = std::arg(amp[i]);
        out.max_leakage = std::max(out.max_leakage, std::abs(1.0 - std::norm(amp[i])));
    }
    out.leaked = out.max_leakage > 1e-10;
    return out;
}

InducedLinks induced_links(const GateProgram& h2)
{
    const auto& md = h2.metadata;
    if (md.factor != Factor::H2) throw std::invalid_argument("induced_links expects an H2 program");
    const int nq = h2.n_qubits;
    const std::uint64_t n = dimension_of(nq);

    // P^{-1} in application order
    std::vector<Gate> inverse;
    for (std::size_t k = 0; k < md.affine_a.size(); ++k) {
        inverse.push_back({ModAffine{md.affine_a[k], md.affine_b[k], true}});
        inverse.push_back({CNot{md.wiring[k][0], md.wiring[k][1]}});
    }
    auto unpermute = [&](std::uint64_t v) {
        for (const auto& g : inverse) v = permute_index(g, v, nq);
        return v;
    };

    InducedLinks out;
    out.links.n_qubits = nq;
    out.links.mode = LinkMode::Matching;
    std::set<std::uint64_t> used;
    for (const auto& term : md.link_terms) {
        std::size_t cmask = 0;
        std::size_t cval = 0;
        for (const auto& cb : term.controls) {
            cmask |= mask_of(nq, cb.qubit);
            if (cb.value) cval |= mask_of(nq, cb.qubit);
        }
        const std::size_t mt = mask_of(nq, term.target);
        std::size_t count = 0;
        std::set<std::uint64_t> term_vertices;
        for (std::uint64_t u = 0; u < n; ++u) {
            if ((u & mt) || (u & cmask) != cval) continue;
            const std::uint64_t a = unpermute(u);
            const std::uint64_t b = unpermute(u | mt);
            out.links.pairs.emplace_back(std::min(a, b), std::max(a, b));
            if (is_ring_edge(a, b, n)) ++out.ring_collisions;
            for (auto v : {a, b}) {
                if (used.count(v)) ++out.term_collisions;
                term_vertices.insert(v);
            }
            ++count;
        }
        used.insert(term_vertices.begin(), term_vertices.end());
        out.term_sizes.push_back(count);
    }
    return out;
}

int resolved_n_s(const TrotterParams& p, int n_qubits) { return p.n_s > 0 ? p.n_s : 30 * n_qubits; }
int resolved_n_p(const TrotterParams& p, int n_qubits) { return p.n_p > 0 ? p.n_p : 3 * n_qubits; }

std::vector<const GateProgram*> TrotterStep::sequence() const
{
    if (!has_links()) return {&h0_half, &h1_half, &h1_half, &h0_half};
    return {&h0_half, &h1_half, &h2, &h1_half, &h0_half};
}

std::int64_t TrotterStep::elementary_total() const
{
    std::int64_t s = 0;
    for (const auto* p : sequence()) s += p->elementary_total();
    return s;
}

std::int64_t TrotterStep::declared_total() const
{
    std::int64_t s = 0;
    for (const auto* p : sequence()) s += p->declared_gate_count;
    return s;
}

TrotterStep build_trotter_step(int n_qubits, const TrotterParams& params, Rng& h0_rng, Rng& h2_rng)
{
    if (!(params.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    TrotterStep step;
    const double scale = params.match_exact_variance ? params.disorder_std_ratio / kH0WidthRatio : 1.0;
    step.h0_half = build_h0_program(n_qubits, resolved_n_s(params, n_qubits), params.width, 0.5 * params.dt, h0_rng, scale);
    step.h1_half = build_h1_program(n_qubits, 0.5 * params.dt, params.L);
    if (link_count(n_qubits, params.density) > 0)
        step.h2 = build_h2_program(n_qubits, params.density, params.dt, resolved_n_p(params, n_qubits), h2_rng,
                                   params.costs);
    else
        step.h2 = empty_program(n_qubits, Factor::H2, params.dt);
    return step;
}

RunStats run_program(std::span<cplx> amplitudes, const GateProgram& program, const ErrorStep* noise,
                     const NoiseOptions& options)
{
    RunStats stats;
    const bool noisy_factor = program.metadata.factor != Factor::H2 || options.noise_on_compound;
    for (const auto& g : program.gates) {
        apply_gate(amplitudes, program.n_qubits, g);
        ++stats.gates;
        stats.elementary += g.elementary_count;
        if (noise == nullptr || !noisy_factor) continue;
        const std::int64_t reps = is_elementary(g) ? 1 : g.elementary_count;
        for (std::int64_t r = 0; r < reps; ++r) noise->apply(amplitudes);
        stats.error_steps += reps;
    }
    return stats;
}

RunStats run_program(StateVector& psi, const GateProgram& program, const ErrorStep* noise, const NoiseOptions& options)
{
    if (psi.num_qubits() != program.n_qubits) throw std::invalid_argument("program register size mismatch");
    return run_program(psi.amplitudes(), program, noise, options);
}

RunStats run_step(StateVector& psi, const TrotterStep& step, const ErrorStep* noise, const NoiseOptions& options)
{
    RunStats total;
    for (const auto* p : step.sequence()) {
        const auto s = run_program(psi, *p, noise, options);
        total.gates += s.gates;
        total.elementary += s.elementary;
        total.error_steps += s.error_steps;
    }
    return total;
}

} // namespace swnet
