#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swnet {

/// Unfolded nearest-neighbour spacings (mean ~ 1).
struct SpacingSample {
    std::vector<double> spacings;
    double window_fraction = 1.0; ///< fraction of the spectrum kept, centred
};

/// Middle ceil(L/2) levels of a sorted spectrum (L >= 8).
std::vector<double> central_half(std::span<const double> levels);

inline constexpr int kUnfoldDegree = 6;

/**
 * Unfold by a least-squares polynomial fit (degree 6) of the level staircase.
 * Throws std::runtime_error if the fitted staircase decreases anywhere on the
 * levels, and std::invalid_argument for fewer than 32 levels.
 */
SpacingSample unfold(std::span<const double> levels, double window_fraction = 1.0);

/// central_half followed by unfold.
SpacingSample unfolded_spacings(std::span<const double> sorted_spectrum);

struct SpacingHistogram {
    double bin_width = 0.1;
    std::vector<double> s_mid;
    std::vector<double> density;
    std::vector<std::size_t> counts;
    std::size_t total = 0;
};

/**
 * Normalized density estimate with sum(P) * ds = 1. Bins start at 0 and cover
 * [0, s_max], extended when needed so that no spacing falls outside.
 */
SpacingHistogram spacing_histogram(std::span<const double> spacings, double bin_width = 0.1, double s_max = 4.0);

double poisson_pdf(double s);
double wigner_pdf(double s);

/// First positive crossing of e^{-s} and (pi s/2) e^{-pi s^2/4}.
double pdf_crossing();

struct EtaResult {
    double eta = 0.0;
    std::size_t n_spacings = 0;
    bool low_confidence = false; ///< fewer than 1000 spacings
};

/**
 * eta = int_0^{s0} (P - P_W) / int_0^{s0} (P_P - P_W), with s0 = pdf_crossing().
 * 1 for Poisson statistics, 0 for Wigner-Dyson. The sample integral is the
 * empirical fraction of spacings below s0, so no binning enters.
 */
EtaResult eta_measure(std::span<const double> spacings);

} // namespace swnet
