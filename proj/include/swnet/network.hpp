#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "swnet/rng.hpp"

namespace swnet {

/// How shortcut endpoints are drawn.
enum class LinkMode {
    Matching,         ///< vertex-disjoint matching, 2M distinct endpoints
    IndependentPairs, ///< endpoints may repeat across links (needed for p > 1/2)
};

std::string to_string(LinkMode mode);
LinkMode link_mode_from_string(const std::string& s);

using VertexPair = std::pair<std::uint64_t, std::uint64_t>;

/// Shortcut links {i_k, j_k}. Pair order is significant when endpoints repeat.
struct ShortcutSet {
    int n_qubits = 0;
    LinkMode mode = LinkMode::Matching;
    std::vector<VertexPair> pairs;

    std::size_t size() const { return pairs.size(); }
    /// True when no vertex appears in two pairs.
    bool vertex_disjoint() const;
};

/// On-site energies epsilon_i in units of the hopping V.
struct DisorderField {
    double width = 0.0;
    std::vector<double> energies;
};

/// Truncation of the on-site Gaussian, in units of its width.
inline constexpr double kDisorderCutoff = 4.0;

/// H = H0 (disorder) + H1 (ring hopping) + H2 (shortcuts).
struct SmallWorldHamiltonian {
    int n_qubits = 0;
    double density = 0.0;
    double hopping = 1.0;
    DisorderField disorder;
    ShortcutSet shortcuts;

    std::size_t dimension() const { return std::size_t{1} << n_qubits; }
};

/// Number of links M = round(p N).
std::size_t link_count(int n_qubits, double density);

/// True when |i - j| mod N is 1 or N-1.
bool is_ring_edge(std::uint64_t i, std::uint64_t j, std::size_t n);

ShortcutSet sample_shortcuts(int n_qubits, double density, Rng& rng, LinkMode mode = LinkMode::Matching);
DisorderField sample_disorder(int n_qubits, double width, Rng& rng);

SmallWorldHamiltonian make_hamiltonian(DisorderField disorder, ShortcutSet shortcuts, double density);

/// Largest register accepted by build_dense.
inline constexpr int kMaxDenseQubits = 13;

Eigen::MatrixXd build_dense(const SmallWorldHamiltonian& h);

} // namespace swnet
