#include "swnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace swnet {

std::string to_string(LinkMode mode)
{
    return mode == LinkMode::Matching ? "matching" : "independent-pairs";
}

LinkMode link_mode_from_string(const std::string& s)
{
    if (s == "matching") return LinkMode::Matching;
    if (s == "independent-pairs") return LinkMode::IndependentPairs;
    throw std::invalid_argument("unknown link mode: " + s);
}

bool ShortcutSet::vertex_disjoint() const
{
    std::set<std::uint64_t> seen;
    for (const auto& [a, b] : pairs) {
        if (!seen.insert(a).second || !seen.insert(b).second) return false;
    }
    return true;
}

std::size_t link_count(int n_qubits, double density)
{
    if (!(density >= 0.0)) throw std::invalid_argument("shortcut density must be >= 0");
    return static_cast<std::size_t>(std::llround(density * static_cast<double>(std::size_t{1} << n_qubits)));
}

bool is_ring_edge(std::uint64_t i, std::uint64_t j, std::size_t n)
{
    const std::uint64_t d = (i > j ? i - j : j - i) % n;
    return d == 1 || d == n - 1;
}

namespace {

ShortcutSet sample_matching(int n_qubits, std::size_t m, Rng& rng)
{
    const std::size_t n = std::size_t{1} << n_qubits;
    if (2 * m > n)
        throw std::invalid_argument("shortcut density too large for a vertex-disjoint matching "
                                    "(2 round(pN) > N); use independent-pairs");
    ShortcutSet out{n_qubits, LinkMode::Matching, {}};
    if (m == 0) return out;

    // A uniform random permutation paired off consecutively is uniform over
    // matchings of size m; rejecting samples that contain a ring edge keeps it
    // uniform over the admissible ones.
    std::vector<std::uint64_t> vertices(n);
    constexpr int kMaxAttempts = 100000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::iota(vertices.begin(), vertices.end(), std::uint64_t{0});
        for (std::size_t k = 0; k < 2 * m; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, n - 1);
            std::swap(vertices[k], vertices[pick(rng)]);
        }
        bool ok = true;
        for (std::size_t k = 0; k < m && ok; ++k) ok = !is_ring_edge(vertices[2 * k], vertices[2 * k + 1], n);
        if (!ok) continue;
        out.pairs.reserve(m);
        for (std::size_t k = 0; k < m; ++k) {
            auto a = vertices[2 * k];
            auto b = vertices[2 * k + 1];
            out.pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
        return out;
    }
    throw std::runtime_error("could not sample a matching without ring edges");
}

ShortcutSet sample_independent(int n_qubits, std::size_t m, Rng& rng)
{
    const std::size_t n = std::size_t{1} << n_qubits;
    if (n < 4 || m > n * (n - 3) / 2) throw std::invalid_argument("more links requested than non-ring vertex pairs");
    ShortcutSet out{n_qubits, LinkMode::IndependentPairs, {}};
    std::set<VertexPair> used;
    std::uniform_int_distribution<std::uint64_t> vertex(0, n - 1);
    while (out.pairs.size() < m) {
        auto a = vertex(rng);
        auto b = vertex(rng);
        if (a == b || is_ring_edge(a, b, n)) continue;
        VertexPair key{std::min(a, b), std::max(a, b)};
        if (!used.insert(key).second) continue;
        out.pairs.push_back(key);
    }
    return out;
}

} // namespace

ShortcutSet sample_shortcuts(int n_qubits, double density, Rng& rng, LinkMode mode)
{
    if (n_qubits < 2) throw std::invalid_argument("ring needs at least 2 qubits");
    const std::size_t m = link_count(n_qubits, density);
    return mode == LinkMode::Matching ? sample_matching(n_qubits, m, rng) : sample_independent(n_qubits, m, rng);
}

DisorderField sample_disorder(int n_qubits, double width, Rng& rng)
{
    if (!(width >= 0.0)) throw std::invalid_argument("disorder width must be >= 0");
    DisorderField field{width, std::vector<double>(std::size_t{1} << n_qubits, 0.0)};
    if (width == 0.0) return field;
    std::normal_distribution<double> gauss(0.0, width);
    const double cut = kDisorderCutoff * width;
    for (auto& e : field.energies) {
        do {
            e = gauss(rng);
        } while (std::abs(e) > cut);
    }
    return field;
}

SmallWorldHamiltonian make_hamiltonian(DisorderField disorder, ShortcutSet shortcuts, double density)
{
    SmallWorldHamiltonian h;
    h.n_qubits = shortcuts.n_qubits;
    if (disorder.energies.size() != h.dimension())
        throw std::invalid_argument("disorder field size does not match the shortcut register");
    h.density = density;
    h.disorder = std::move(disorder);
    h.shortcuts = std::move(shortcuts);
    return h;
}

Eigen::MatrixXd build_dense(const SmallWorldHamiltonian& h)
{
    if (h.n_qubits > kMaxDenseQubits)
        throw std::invalid_argument("register too large for a dense Hamiltonian (n_r <= 13)");
    const auto n = static_cast<Eigen::Index>(h.dimension());
    if (static_cast<Eigen::Index>(h.disorder.energies.size()) != n)
        throw std::invalid_argument("disorder field size mismatch");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = h.disorder.energies[static_cast<std::size_t>(i)];
        const Eigen::Index j = (i + 1) % n;
        m(i, j) += h.hopping;
        m(j, i) += h.hopping;
    }
    for (const auto& [a, b] : h.shortcuts.pairs) {
        const auto i = static_cast<Eigen::Index>(a);
        const auto j = static_cast<Eigen::Index>(b);
        m(i, j) += h.hopping;
        m(j, i) += h.hopping;
    }
    return m;
}

} // namespace swnet
