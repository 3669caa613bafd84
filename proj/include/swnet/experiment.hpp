#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swnet/circuit.hpp"
#include "swnet/network.hpp"
#include "swnet/serialize.hpp"
#include "swnet/spectral.hpp"

namespace swnet {

enum class Scenario { Spectral, Ipr, Scaling, Tau, Noise };
enum class Engine { Exact, Gates };
/// Shortcuts of the exact engine: sampled matching, or the links induced by
/// the gate engine's H2 circuit for the same realization.
enum class Topology { Sampled, Induced };
enum class TauFit { Power, Log };

std::string to_string(Scenario s);
std::string to_string(Engine e);
std::string to_string(Topology t);
std::string to_string(TauFit f);
Scenario scenario_from_string(const std::string& s);
Engine engine_from_string(const std::string& s);
Topology topology_from_string(const std::string& s);
TauFit tau_fit_from_string(const std::string& s);

struct ExperimentConfig {
    Scenario scenario = Scenario::Ipr;
    std::vector<int> n_r{8};
    double W = 0.5;
    double p = 1.0 / 32.0;
    LinkMode link_mode = LinkMode::Matching;
    Engine engine = Engine::Exact;
    double dt = 0.03;       ///< gate engine step (and exact engine step unless dt_exact > 0)
    double dt_exact = 0.0;
    double t_max = 2000.0;
    int stride = 0; ///< steps between samples, 0 selects ceil(1/dt)
    int N_D = 10;
    int n_s = 0; ///< 0 selects 30 n_r
    int L = 10;
    int n_p = 0; ///< 0 selects 3 n_r
    std::vector<double> eps{0.0, 1e-7, 1e-6, 1e-5, 1e-4};
    std::uint64_t seed = 1;
    double c_mc = 1.0;
    double c_ar = 1.0;
    bool match_exact_variance = false;
    /// Gaussian standard deviation of the on-site energies per unit width W.
    double disorder_std_per_width = 0.5;
    Topology topology = Topology::Sampled;
    TauFit tau_fit = TauFit::Power;
    bool noise_on_compound = false;
    bool dump_programs = false;
    std::string output;
};

json to_json(const ExperimentConfig& cfg);
/// Accepts a bare config object or a run manifest (its "config" member).
/// Unknown keys are rejected.
ExperimentConfig config_from_json(const json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws std::invalid_argument describing the first violated precondition.
void validate(const ExperimentConfig& cfg);

double exact_dt(const ExperimentConfig& cfg);
double engine_dt(const ExperimentConfig& cfg);
std::size_t sample_stride(const ExperimentConfig& cfg);

struct PowerFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    double residual = 0.0; ///< RMS of log10 residuals
    std::size_t points = 0;
};

/// Least squares of log10 y on log10 x. Needs >= 3 points, all positive.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct LogFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = 0.0; ///< RMS residual of y
    std::size_t points = 0;
};

/// Least squares y = a + b log10 x.
LogFit fit_log(const std::vector<double>& x, const std::vector<double>& y);

/// RMS of (y - model) / y.
double relative_rms(const std::vector<double>& y, const std::vector<double>& model);

struct MeasurementEstimate {
    std::vector<std::size_t> counts;
    double ipr = 0.0;
    double stderr_ipr = 0.0;
};

/// i.i.d. vertex draws from |psi|^2, with the collision estimator of the IPR.
MeasurementEstimate sample_measurement_counts(const StateVector& psi, std::size_t shots, Rng& rng);

/// Mean IPR curve of one (n_r, eps) ensemble.
struct Curve {
    int n_r = 0;
    double eps = 0.0;
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> sem;
    std::size_t realizations = 0;
};

struct SizePoint {
    int n_r = 0;
    double eps = 0.0;
    double xi_sat = 0.0;   ///< mean of the curve over the final 10% of the window
    double xi_final = 0.0; ///< curve value at the last sample
    double tau = 0.0;      ///< first time the curve reaches xi_sat / 2
    bool non_saturating = false;
};

struct SpectralResult {
    int n_r = 0;
    std::vector<std::vector<double>> spacings; ///< per realization
    SpacingHistogram histogram;
    EtaResult eta;
};

struct RunRecord {
    ExperimentConfig config;
    json manifest;
    std::vector<Curve> curves;
    /// Per-realization IPR series, aligned with curves (curve c, realization r).
    std::vector<std::vector<std::vector<double>>> series;
    std::vector<SpectralResult> spectral;
    std::vector<SizePoint> sizes;
    std::optional<PowerFit> alpha;
    std::optional<PowerFit> beta;
    std::optional<LogFit> tau_log;
    double beta_relative_rms = 0.0;
    double tau_log_relative_rms = 0.0;
    json fits;
    std::vector<std::pair<std::string, json>> programs; ///< file stem, Trotter step
};

RunRecord run_spectral(const ExperimentConfig& cfg, int workers = 1);
RunRecord run_ipr(const ExperimentConfig& cfg, int workers = 1);
RunRecord run_scaling(const ExperimentConfig& cfg, int workers = 1);
RunRecord run_tau(const ExperimentConfig& cfg, int workers = 1);
RunRecord run_noise(const ExperimentConfig& cfg, int workers = 1);
RunRecord run_experiment(const ExperimentConfig& cfg, int workers = 1);

/// manifest.json, curves.csv, fits.json, spacings.csv, realizations.csv
/// (and programs/ when dump_programs is set).
void write_outputs(const RunRecord& record, const std::filesystem::path& dir);

} // namespace swnet
