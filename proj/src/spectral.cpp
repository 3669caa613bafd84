#include "swnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace swnet {

std::vector<double> central_half(std::span<const double> levels)
{
    const std::size_t n = levels.size();
    if (n < 8) throw std::invalid_argument("central_half needs at least 8 levels");
    const std::size_t keep = (n + 1) / 2;
    const std::size_t start = (n - keep) / 2;
    return {levels.begin() + static_cast<std::ptrdiff_t>(start),
            levels.begin() + static_cast<std::ptrdiff_t>(start + keep)};
}

SpacingSample unfold(std::span<const double> levels, double window_fraction)
{
    const std::size_t n = levels.size();
    if (n < 32) throw std::invalid_argument("unfold needs at least 32 levels");
    if (!std::is_sorted(levels.begin(), levels.end())) throw std::invalid_argument("unfold expects sorted levels");
    const double lo = levels.front();
    const double hi = levels.back();
    if (!(hi > lo)) throw std::runtime_error("unfold: degenerate spectrum window");
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    constexpr int kTerms = kUnfoldDegree + 1;
    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd basis(rows, kTerms);
    Eigen::VectorXd staircase(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double x = (levels[static_cast<std::size_t>(i)] - centre) / half;
        double p = 1.0;
        for (int k = 0; k < kTerms; ++k, p *= x) basis(i, k) = p;
        staircase(i) = static_cast<double>(i) + 0.5;
    }
    const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(staircase);
    const Eigen::VectorXd smooth = basis * coef;

    SpacingSample out;
    out.window_fraction = window_fraction;
    out.spacings.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double s = smooth(static_cast<Eigen::Index>(i + 1)) - smooth(static_cast<Eigen::Index>(i));
        if (s < 0.0) throw std::runtime_error("unfold: fitted staircase is not monotone over the window");
        out.spacings[i] = s;
    }
    return out;
}

SpacingSample unfolded_spacings(std::span<const double> sorted_spectrum)
{
    const auto window = central_half(sorted_spectrum);
    return unfold(window, 0.5);
}

SpacingHistogram spacing_histogram(std::span<const double> spacings, double bin_width, double s_max)
{
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
    double top = s_max;
    for (double s : spacings) {
        if (!(s >= 0.0)) throw std::invalid_argument("spacings must be non-negative");
        top = std::max(top, s);
    }
    auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-12)));
    if (top > static_cast<double>(bins) * bin_width) bins = static_cast<std::size_t>(top / bin_width) + 1;

    SpacingHistogram h;
    h.bin_width = bin_width;
    h.counts.assign(bins, 0);
    for (double s : spacings) {
        auto b = static_cast<std::size_t>(s / bin_width);
        h.counts[std::min(b, bins - 1)] += 1;
    }
    h.total = spacings.size();
    h.s_mid.resize(bins);
    h.density.resize(bins);
    const double norm = h.total > 0 ? 1.0 / (static_cast<double>(h.total) * bin_width) : 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        h.s_mid[b] = (static_cast<double>(b) + 0.5) * bin_width;
        h.density[b] = static_cast<double>(h.counts[b]) * norm;
    }
    return h;
}

double poisson_pdf(double s) { return std::exp(-s); }

double wigner_pdf(double s)
{
    constexpr double pi = std::numbers::pi;
    return 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
}

double pdf_crossing()
{
    static const double s0 = [] {
        // Poisson exceeds Wigner at 0+, falls below it by s = 1.
        double lo = 1e-9;
        double hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (poisson_pdf(mid) > wigner_pdf(mid)) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return s0;
}

EtaResult eta_measure(std::span<const double> spacings)
{
    if (spacings.empty()) throw std::invalid_argument("eta_measure needs spacings");
    constexpr double pi = std::numbers::pi;
    const double s0 = pdf_crossing();
    const double cum_poisson = 1.0 - std::exp(-s0);
    const double cum_wigner = 1.0 - std::exp(-0.25 * pi * s0 * s0);
    const auto below = std::count_if(spacings.begin(), spacings.end(), [s0](double s) { return s < s0; });
    const double cum_sample = static_cast<double>(below) / static_cast<double>(spacings.size());
    EtaResult r;
    r.n_spacings = spacings.size();
    r.low_confidence = spacings.size() < 1000;
    r.eta = (cum_sample - cum_wigner) / (cum_poisson - cum_wigner);
    return r;
}

} // namespace swnet
