#include "swnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "swnet/compiled.hpp"
#include "swnet/noise.hpp"
#include "swnet/reference.hpp"

namespace swnet {
namespace {

template <class E>
std::string enum_name(E value, std::initializer_list<std::pair<E, const char*>> names)
{
    for (const auto& [v, n] : names)
        if (v == value) return n;
    return "?";
}

template <class E>
E enum_parse(const std::string& s, std::initializer_list<std::pair<E, const char*>> names, const char* what)
{
    for (const auto& [v, n] : names)
        if (s == n) return v;
    throw std::invalid_argument(std::string("unknown ") + what + ": " + s);
}

const std::initializer_list<std::pair<Scenario, const char*>> kScenarios{
    {Scenario::Spectral, "spectral"}, {Scenario::Ipr, "ipr"},     {Scenario::Scaling, "scaling"},
    {Scenario::Tau, "tau"},           {Scenario::Noise, "noise"},
};
const std::initializer_list<std::pair<Engine, const char*>> kEngines{{Engine::Exact, "exact"}, {Engine::Gates, "gates"}};
const std::initializer_list<std::pair<Topology, const char*>> kTopologies{{Topology::Sampled, "sampled"},
                                                                            {Topology::Induced, "induced"}};
const std::initializer_list<std::pair<TauFit, const char*>> kTauFits{{TauFit::Power, "power"}, {TauFit::Log, "log"}};

const std::vector<std::string> kConfigKeys{
    "scenario", "n_r",  "W",    "p",   "link_mode", "engine", "dt",   "dt_exact",
    "t_max",    "stride", "N_D", "n_s", "L",        "n_p",    "eps",  "seed",
    "c_mc",     "c_ar", "match_exact_variance", "disorder_std_per_width", "topology", "tau_fit",
    "noise_on_compound", "dump_programs", "output",
};

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Runs f(0..n-1) on `workers` threads; results are stored by index.
template <class T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& f)
{
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto nthreads = static_cast<std::size_t>(std::max(1, workers));
    if (nthreads == 1 || n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < std::min(nthreads, n); ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

struct Realization {
    int n_r = 0;
    int index = 0;
    std::uint64_t disorder = 0;
    std::uint64_t shortcuts = 0;
    std::uint64_t gate_h0 = 0;
    std::uint64_t gate_h2 = 0;
};

std::vector<Realization> plan(const ExperimentConfig& cfg)
{
    std::vector<Realization> out;
    for (int n : cfg.n_r) {
        for (int r = 0; r < cfg.N_D; ++r) {
            const auto nn = static_cast<std::uint64_t>(n);
            const auto rr = static_cast<std::uint64_t>(r);
            out.push_back({n, r, derive_seed(cfg.seed, Stream::Disorder, {nn, rr}),
                           derive_seed(cfg.seed, Stream::Shortcuts, {nn, rr}),
                           derive_seed(cfg.seed, Stream::GateH0, {nn, rr}),
                           derive_seed(cfg.seed, Stream::GateH2, {nn, rr})});
        }
    }
    return out;
}

json seeds_json(const Realization& r)
{
    return {{"disorder", r.disorder}, {"shortcuts", r.shortcuts}, {"gate_h0", r.gate_h0}, {"gate_h2", r.gate_h2}};
}

TrotterParams trotter_params(const ExperimentConfig& cfg)
{
    TrotterParams t;
    t.width = cfg.W;
    t.density = cfg.p;
    t.dt = cfg.dt;
    t.n_s = cfg.n_s;
    t.L = cfg.L;
    t.n_p = cfg.n_p;
    t.costs = {cfg.c_mc, cfg.c_ar};
    t.match_exact_variance = cfg.match_exact_variance;
    t.disorder_std_ratio = cfg.disorder_std_per_width;
    return t;
}

ShortcutSet realization_links(const ExperimentConfig& cfg, const Realization& r, json& info)
{
    if (cfg.topology == Topology::Sampled) {
        Rng rng(r.shortcuts);
        return sample_shortcuts(r.n_r, cfg.p, rng, cfg.link_mode);
    }
    if (link_count(r.n_r, cfg.p) == 0) return ShortcutSet{r.n_r, LinkMode::Matching, {}};
    Rng rng(r.gate_h2);
    const auto params = trotter_params(cfg);
    const auto h2 = build_h2_program(r.n_r, cfg.p, cfg.dt, resolved_n_p(params, r.n_r), rng, params.costs);
    auto induced = induced_links(h2);
    info["ring_collisions"] = induced.ring_collisions;
    info["term_collisions"] = induced.term_collisions;
    return std::move(induced.links);
}

SmallWorldHamiltonian realization_hamiltonian(const ExperimentConfig& cfg, const Realization& r, json& info)
{
    Rng rng(r.disorder);
    auto disorder = sample_disorder(r.n_r, cfg.W * cfg.disorder_std_per_width, rng);
    auto links = realization_links(cfg, r, info);
    auto h = make_hamiltonian(std::move(disorder), std::move(links), cfg.p);
    info["links"] = to_json(h.shortcuts)["pairs"];
    info["h2_composition"] = h.shortcuts.vertex_disjoint() ? "simultaneous" : "symmetric-sequential";
    return h;
}

std::size_t sample_count(const ExperimentConfig& cfg)
{
    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_max / engine_dt(cfg)));
    return steps / sample_stride(cfg);
}

std::vector<double> exact_series(const SmallWorldHamiltonian& h, double dt, std::size_t stride, std::size_t samples)
{
    std::vector<double> out;
    out.reserve(samples + 1);
    StateVector psi = StateVector::basis(h.n_qubits, 0);
    SplitPropagator(h, dt).evolve(
        psi, stride * samples, [&](std::size_t, const StateVector& s) { out.push_back(ipr(s)); }, stride);
    return out;
}

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, std::size_t k)
{
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
    bool first = true;
    while (k > 0) {
        if (k & 1) {
            if (first) {
                result = base;
                first = false;
            } else {
                result = (result * base).eval();
            }
        }
        k >>= 1;
        if (k > 0) base = (base * base).eval();
    }
    return result;
}

std::vector<double> gate_series(const TrotterStep& step, const ErrorStep* noise, const NoiseOptions& options,
                                std::size_t stride, std::size_t samples)
{
    const int nq = step.h0_half.n_qubits;
    std::vector<double> out;
    out.reserve(samples + 1);
    StateVector psi = StateVector::basis(nq, 0);
    out.push_back(ipr(psi));
    if (noise == nullptr || noise->is_identity()) {
        const CompiledProgram program(step);
        for (std::size_t k = 0; k < samples; ++k) {
            for (std::size_t s = 0; s < stride; ++s) program.apply(psi);
            out.push_back(ipr(psi));
        }
        return out;
    }
    const Eigen::MatrixXcd v = matrix_power(step_matrix(step, noise, options), stride);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(v.rows());
    x(0) = 1.0;
    for (std::size_t k = 0; k < samples; ++k) {
        x = (v * x).eval();
        out.push_back(ipr(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size()))));
    }
    return out;
}

json gate_counts(const TrotterStep& step)
{
    json per = json::object();
    for (const auto* p : step.sequence()) {
        const auto name = to_string(p->metadata.factor);
        if (!per.contains(name)) per[name] = {{"gates", p->gates.size()}, {"elementary", p->elementary_total()},
                                              {"declared", p->declared_gate_count}};
    }
    return {{"per_step_elementary", step.elementary_total()},
            {"per_step_declared", step.declared_total()},
            {"programs", per}};
}

struct TaskResult {
    std::vector<std::vector<double>> series; ///< one per eps
    json info;
    json program;
};

NoiseParams unit_noise(const ExperimentConfig& cfg, int n_r)
{
    Rng rng(derive_seed(cfg.seed, Stream::Noise, {static_cast<std::uint64_t>(n_r)}));
    return sample_noise(n_r, 1.0, rng);
}

NoiseParams scaled_noise(const NoiseParams& unit, double eps)
{
    NoiseParams out = unit;
    out.epsilon = eps;
    for (auto& d : out.deltas) d *= eps;
    for (auto& j : out.couplings) j *= eps;
    return out;
}

TaskResult run_realization(const ExperimentConfig& cfg, const Realization& r, const std::vector<double>& eps)
{
    TaskResult out;
    out.info = {{"n_r", r.n_r}, {"index", r.index}, {"seeds", seeds_json(r)}};
    const std::size_t stride = sample_stride(cfg);
    const std::size_t samples = sample_count(cfg);
    if (cfg.engine == Engine::Exact) {
        const auto h = realization_hamiltonian(cfg, r, out.info);
        out.series.push_back(exact_series(h, exact_dt(cfg), stride, samples));
        return out;
    }
    Rng h0(r.gate_h0);
    Rng h2(r.gate_h2);
    const auto step = build_trotter_step(r.n_r, trotter_params(cfg), h0, h2);
    out.info["gate_counts"] = gate_counts(step);
    if (step.has_links()) {
        const auto induced = induced_links(step.h2);
        out.info["links"] = to_json(induced.links)["pairs"];
        out.info["ring_collisions"] = induced.ring_collisions;
        out.info["term_collisions"] = induced.term_collisions;
    }
    if (cfg.dump_programs) out.program = to_json(step);
    const NoiseOptions options{cfg.noise_on_compound};
    const auto unit = unit_noise(cfg, r.n_r);
    for (double e : eps) {
        if (e == 0.0) {
            out.series.push_back(gate_series(step, nullptr, options, stride, samples));
        } else {
            const ErrorStep noise(scaled_noise(unit, e));
            out.series.push_back(gate_series(step, &noise, options, stride, samples));
        }
    }
    return out;
}

Curve mean_curve(int n_r, double eps, const std::vector<std::vector<double>>& series, double dt_sample)
{
    Curve c;
    c.n_r = n_r;
    c.eps = eps;
    c.realizations = series.size();
    const std::size_t k = series.front().size();
    c.t.resize(k);
    c.mean.assign(k, 0.0);
    c.sem.assign(k, 0.0);
    const auto m = static_cast<double>(series.size());
    for (std::size_t i = 0; i < k; ++i) {
        c.t[i] = static_cast<double>(i) * dt_sample;
        double s = 0.0;
        for (const auto& x : series) s += x[i];
        const double mean = s / m;
        double v = 0.0;
        for (const auto& x : series) v += (x[i] - mean) * (x[i] - mean);
        c.mean[i] = mean;
        c.sem[i] = series.size() > 1 ? std::sqrt(v / (m - 1.0) / m) : 0.0;
    }
    return c;
}

double window_mean(const Curve& c, double lo, double hi)
{
    const double t_end = c.t.back();
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        if (c.t[i] >= lo * t_end && (c.t[i] < hi * t_end || (hi >= 1.0 && i + 1 == c.t.size()))) {
            s += c.mean[i];
            ++n;
        }
    }
    return n ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

SizePoint size_point(const Curve& c)
{
    SizePoint p;
    p.n_r = c.n_r;
    p.eps = c.eps;
    p.xi_sat = window_mean(c, 0.9, 1.0);
    p.xi_final = c.mean.back();
    const double before = window_mean(c, 0.8, 0.9);
    p.non_saturating = !(std::abs(before - p.xi_sat) <= 0.1 * p.xi_sat);
    const double half = 0.5 * p.xi_sat;
    p.tau = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < c.mean.size(); ++i) {
        if (c.mean[i] >= half) {
            if (i == 0) {
                p.tau = c.t[0];
            } else {
                const double f = (half - c.mean[i - 1]) / (c.mean[i] - c.mean[i - 1]);
                p.tau = c.t[i - 1] + f * (c.t[i] - c.t[i - 1]);
            }
            break;
        }
    }
    return p;
}

json size_json(const SizePoint& p)
{
    return {{"n_r", p.n_r},
            {"N", dimension_of(p.n_r)},
            {"eps", p.eps},
            {"xi_sat", p.xi_sat},
            {"xi_final", p.xi_final},
            {"tau", p.tau},
            {"non_saturating", p.non_saturating}};
}

json power_json(const PowerFit& f)
{
    return {{"prefactor", f.prefactor}, {"exponent", f.exponent}, {"residual", f.residual}, {"points", f.points}};
}

json base_manifest(const ExperimentConfig& cfg)
{
    return {
        {"format", "swnet-run/1"},
        {"config", to_json(cfg)},
        {"resolved",
         {{"dt_exact", exact_dt(cfg)},
          {"stride", sample_stride(cfg)},
          {"samples", cfg.scenario == Scenario::Spectral ? 0 : sample_count(cfg)},
          {"initial_vertex", 0},
          {"disorder_std", cfg.W * cfg.disorder_std_per_width}}},
        {"conventions",
         {{"evolution", "exp(+iHt)"},
          {"error_step", "exp(-i H_E tau_g), Z/2 XX Z/2"},
          {"dft_forward", "exp(+2 pi i jk/N)/sqrt(N)"},
          {"vertex_bits", "qubit 1 = most significant bit"},
          {"rz", "exp(i angle Z/2)"},
          {"logarithm", "decimal"}}},
        {"seed_derivation", "splitmix64 chain over (master, stream, n_r, realization)"},
    };
}

RunRecord run_evolution(const ExperimentConfig& cfg, int workers, const std::vector<double>& eps)
{
    validate(cfg);
    RunRecord rec;
    rec.config = cfg;
    rec.manifest = base_manifest(cfg);
    const auto realizations = plan(cfg);
    const auto results = parallel_map<TaskResult>(realizations.size(), workers,
                                                  [&](std::size_t i) { return run_realization(cfg, realizations[i], eps); });

    json infos = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        infos.push_back(results[i].info);
        if (cfg.dump_programs && !results[i].program.is_null())
            rec.programs.emplace_back("n" + std::to_string(realizations[i].n_r) + "_r" +
                                          std::to_string(realizations[i].index),
                                      results[i].program);
    }
    rec.manifest["realizations"] = infos;
    if (cfg.engine == Engine::Gates) {
        json noise = json::array();
        for (int n : cfg.n_r) {
            const auto unit = unit_noise(cfg, n);
            for (double e : eps) noise.push_back(to_json(scaled_noise(unit, e)));
        }
        rec.manifest["noise"] = noise;
        json budget = json::array();
        for (int n : cfg.n_r) budget.push_back({{"n_r", n}, {"ancilla", 2 * n + 3}, {"n_q", 3 * n + 3}});
        rec.manifest["qubit_budget"] = budget;
        rec.manifest["noise_model"] = {{"qubits", "register"},
                                       {"per_elementary_gate", true},
                                       {"noise_on_compound", cfg.noise_on_compound}};
    }

    const double dt_sample = static_cast<double>(sample_stride(cfg)) * engine_dt(cfg);
    std::size_t offset = 0;
    json sizes = json::array();
    for (int n : cfg.n_r) {
        for (std::size_t e = 0; e < eps.size(); ++e) {
            std::vector<std::vector<double>> series;
            for (int r = 0; r < cfg.N_D; ++r) series.push_back(results[offset + static_cast<std::size_t>(r)].series[e]);
            rec.curves.push_back(mean_curve(n, eps[e], series, dt_sample));
            rec.series.push_back(std::move(series));
            rec.sizes.push_back(size_point(rec.curves.back()));
            sizes.push_back(size_json(rec.sizes.back()));
        }
        offset += static_cast<std::size_t>(cfg.N_D);
    }
    rec.fits = {{"scenario", to_string(cfg.scenario)}, {"engine", to_string(cfg.engine)}, {"sizes", sizes}};
    return rec;
}

std::vector<double> sizes_n(const RunRecord& rec)
{
    std::vector<double> out;
    for (const auto& s : rec.sizes) out.push_back(static_cast<double>(dimension_of(s.n_r)));
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

std::string to_string(Scenario s) { return enum_name(s, kScenarios); }
std::string to_string(Engine e) { return enum_name(e, kEngines); }
std::string to_string(Topology t) { return enum_name(t, kTopologies); }
std::string to_string(TauFit f) { return enum_name(f, kTauFits); }
Scenario scenario_from_string(const std::string& s) { return enum_parse(s, kScenarios, "scenario"); }
Engine engine_from_string(const std::string& s) { return enum_parse(s, kEngines, "engine"); }
Topology topology_from_string(const std::string& s) { return enum_parse(s, kTopologies, "topology"); }
TauFit tau_fit_from_string(const std::string& s) { return enum_parse(s, kTauFits, "tau_fit"); }

json to_json(const ExperimentConfig& cfg)
{
    return {
        {"scenario", to_string(cfg.scenario)},
        {"n_r", cfg.n_r},
        {"W", cfg.W},
        {"p", cfg.p},
        {"link_mode", to_string(cfg.link_mode)},
        {"engine", to_string(cfg.engine)},
        {"dt", cfg.dt},
        {"dt_exact", cfg.dt_exact},
        {"t_max", cfg.t_max},
        {"stride", cfg.stride},
        {"N_D", cfg.N_D},
        {"n_s", cfg.n_s},
        {"L", cfg.L},
        {"n_p", cfg.n_p},
        {"eps", cfg.eps},
        {"seed", cfg.seed},
        {"c_mc", cfg.c_mc},
        {"c_ar", cfg.c_ar},
        {"match_exact_variance", cfg.match_exact_variance},
        {"disorder_std_per_width", cfg.disorder_std_per_width},
        {"topology", to_string(cfg.topology)},
        {"tau_fit", to_string(cfg.tau_fit)},
        {"noise_on_compound", cfg.noise_on_compound},
        {"dump_programs", cfg.dump_programs},
        {"output", cfg.output},
    };
}

ExperimentConfig config_from_json(const json& input)
{
    const json& j = input.contains("config") && input.contains("format") ? input.at("config") : input;
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end())
            throw std::invalid_argument("unknown config key: " + key);

    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    try {
        if (j.contains("scenario")) c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
        if (j.contains("n_r")) {
            if (j.at("n_r").is_array())
                c.n_r = j.at("n_r").get<std::vector<int>>();
            else
                c.n_r = {j.at("n_r").get<int>()};
        }
        get("W", c.W);
        get("p", c.p);
        if (j.contains("link_mode")) c.link_mode = link_mode_from_string(j.at("link_mode").get<std::string>());
        if (j.contains("engine")) c.engine = engine_from_string(j.at("engine").get<std::string>());
        get("dt", c.dt);
        get("dt_exact", c.dt_exact);
        get("t_max", c.t_max);
        get("stride", c.stride);
        get("N_D", c.N_D);
        get("n_s", c.n_s);
        get("L", c.L);
        get("n_p", c.n_p);
        get("eps", c.eps);
        get("seed", c.seed);
        get("c_mc", c.c_mc);
        get("c_ar", c.c_ar);
        get("match_exact_variance", c.match_exact_variance);
        get("disorder_std_per_width", c.disorder_std_per_width);
        if (j.contains("topology")) c.topology = topology_from_string(j.at("topology").get<std::string>());
        if (j.contains("tau_fit")) c.tau_fit = tau_fit_from_string(j.at("tau_fit").get<std::string>());
        get("noise_on_compound", c.noise_on_compound);
        get("dump_programs", c.dump_programs);
        get("output", c.output);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

double exact_dt(const ExperimentConfig& cfg) { return cfg.dt_exact > 0.0 ? cfg.dt_exact : cfg.dt; }

double engine_dt(const ExperimentConfig& cfg) { return cfg.engine == Engine::Exact ? exact_dt(cfg) : cfg.dt; }

std::size_t sample_stride(const ExperimentConfig& cfg)
{
    return cfg.stride > 0 ? static_cast<std::size_t>(cfg.stride) : default_stride(engine_dt(cfg));
}

void validate(const ExperimentConfig& cfg)
{
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw std::invalid_argument(msg);
    };
    require(!cfg.n_r.empty(), "n_r list is empty");
    for (int n : cfg.n_r) require(n >= 2 && n <= kMaxQubits, "n_r must lie in [2, 26]");
    require(std::isfinite(cfg.W) && cfg.W >= 0.0, "W must be finite and >= 0");
    require(std::isfinite(cfg.p) && cfg.p >= 0.0, "p must be finite and >= 0");
    require(std::isfinite(cfg.disorder_std_per_width) && cfg.disorder_std_per_width > 0.0,
            "disorder_std_per_width must be > 0");
    require(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt must be > 0");
    require(std::isfinite(cfg.dt_exact) && cfg.dt_exact >= 0.0, "dt_exact must be >= 0");
    require(cfg.N_D >= 1, "N_D must be >= 1");
    require(cfg.stride >= 0, "stride must be >= 0");
    require(cfg.n_s >= 0 && cfg.n_p >= 0, "n_s and n_p must be >= 0 (0 selects the default)");
    require(cfg.L >= 1, "L must be >= 1");
    require(cfg.c_mc > 0.0 && cfg.c_ar > 0.0, "c_mc and c_ar must be > 0");

    const bool gate_links = cfg.engine == Engine::Gates || cfg.topology == Topology::Induced;
    for (int n : cfg.n_r) {
        const std::size_t m = link_count(n, cfg.p);
        if (gate_links)
            require(2 * m <= dimension_of(n), "round(pN) > N/2 cannot be realized by the H2 circuit at n_r=" +
                                                   std::to_string(n));
        else if (cfg.link_mode == LinkMode::Matching)
            require(2 * m <= dimension_of(n), "2 round(pN) > N at n_r=" + std::to_string(n) +
                                                   ": a disjoint matching is impossible, use link_mode "
                                                   "independent-pairs");
        else
            require(dimension_of(n) >= 4, "independent-pairs needs N >= 4");
    }

    if (cfg.scenario == Scenario::Spectral) {
        require(cfg.engine == Engine::Exact, "spectral scenario needs the exact engine");
        for (int n : cfg.n_r) {
            require(n <= kMaxDenseQubits, "spectral scenario: N = 2^" + std::to_string(n) +
                                              " exceeds the dense limit 2^13; lower n_r");
            require(n >= 6, "spectral scenario needs n_r >= 6 for a 32-level unfolding window");
        }
        return;
    }

    require(std::isfinite(cfg.t_max) && cfg.t_max > 0.0, "t_max must be > 0");
    require(sample_count(cfg) >= 10, "t_max / (stride dt) must give at least 10 samples");
    if (cfg.scenario == Scenario::Scaling || cfg.scenario == Scenario::Tau) {
        const std::set<int> distinct(cfg.n_r.begin(), cfg.n_r.end());
        require(distinct.size() >= 3, "scaling and tau fits need at least 3 distinct sizes");
    }
    if (cfg.scenario == Scenario::Noise) {
        require(cfg.engine == Engine::Gates, "noise scenario needs the gate engine");
        require(!cfg.eps.empty(), "eps list is empty");
        for (double e : cfg.eps) require(std::isfinite(e) && e >= 0.0, "eps values must be >= 0");
        const bool noisy = std::any_of(cfg.eps.begin(), cfg.eps.end(), [](double e) { return e > 0.0; });
        for (int n : cfg.n_r)
            require(!noisy || n <= kMaxStepMatrixQubits, "noisy gate runs are limited to n_r <= 10");
    }
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    if (x.size() < 3) throw std::invalid_argument("fit_power_law needs at least 3 points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw std::invalid_argument("fit_power_law: values must be positive and finite");
        lx.push_back(std::log10(x[i]));
        ly.push_back(std::log10(y[i]));
    }
    const auto fit = fit_log(x, ly);
    PowerFit out;
    out.exponent = fit.slope;
    out.prefactor = std::pow(10.0, fit.intercept);
    out.residual = fit.residual;
    out.points = x.size();
    return out;
}

LogFit fit_log(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) throw std::invalid_argument("fit_log: size mismatch");
    if (x.size() < 3) throw std::invalid_argument("fit_log needs at least 3 points");
    const auto n = static_cast<double>(x.size());
    std::vector<double> lx;
    for (double v : x) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("fit_log: x must be positive");
        lx.push_back(std::log10(v));
    }
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("fit_log: y must be finite");
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit needs at least two distinct x values");
    LogFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double r2 = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double d = y[i] - (out.intercept + out.slope * lx[i]);
        r2 += d * d;
    }
    out.residual = std::sqrt(r2 / n);
    out.points = x.size();
    return out;
}

double relative_rms(const std::vector<double>& y, const std::vector<double>& model)
{
    if (y.size() != model.size() || y.empty()) throw std::invalid_argument("relative_rms: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = (y[i] - model[i]) / y[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(y.size()));
}

MeasurementEstimate sample_measurement_counts(const StateVector& psi, std::size_t shots, Rng& rng)
{
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    std::vector<double> w(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) w[i] = std::norm(psi[i]);
    std::discrete_distribution<std::size_t> draw(w.begin(), w.end());
    MeasurementEstimate out;
    out.counts.assign(psi.size(), 0);
    for (std::size_t s = 0; s < shots; ++s) ++out.counts[draw(rng)];

    // Unbiased U-statistics for sum p^2 and sum p^3.
    const auto S = static_cast<double>(shots);
    double c2 = 0.0, c3 = 0.0;
    for (auto c : out.counts) {
        const auto n = static_cast<double>(c);
        c2 += n * (n - 1.0);
        c3 += n * (n - 1.0) * (n - 2.0);
    }
    if (shots < 2 || c2 == 0.0) {
        out.ipr = std::numeric_limits<double>::infinity();
        out.stderr_ipr = std::numeric_limits<double>::infinity();
        return out;
    }
    const double p2 = c2 / (S * (S - 1.0));
    const double p3 = shots >= 3 ? c3 / (S * (S - 1.0) * (S - 2.0)) : p2 * p2;
    const double var = std::max(0.0, (4.0 * (S - 2.0) * (p3 - p2 * p2) + 2.0 * (p2 - p2 * p2)) / (S * (S - 1.0)));
    out.ipr = 1.0 / p2;
    out.stderr_ipr = std::sqrt(var) / (p2 * p2);
    return out;
}

RunRecord run_spectral(const ExperimentConfig& cfg, int workers)
{
    ExperimentConfig c = cfg;
    c.scenario = Scenario::Spectral;
    validate(c);
    RunRecord rec;
    rec.config = c;
    rec.manifest = base_manifest(c);
    const auto realizations = plan(c);
    struct Out {
        std::vector<double> spacings;
        json info;
    };
    const auto results = parallel_map<Out>(realizations.size(), workers, [&](std::size_t i) {
        const auto& r = realizations[i];
        Out o;
        o.info = {{"n_r", r.n_r}, {"index", r.index}, {"seeds", seeds_json(r)}};
        const auto h = realization_hamiltonian(c, r, o.info);
        o.spacings = unfolded_spacings(spectrum(h)).spacings;
        return o;
    });
    json infos = json::array();
    for (const auto& o : results) infos.push_back(o.info);
    rec.manifest["realizations"] = infos;

    json spectral = json::array();
    std::size_t offset = 0;
    for (int n : c.n_r) {
        SpectralResult s;
        s.n_r = n;
        std::vector<double> pooled;
        for (int r = 0; r < c.N_D; ++r) {
            s.spacings.push_back(results[offset + static_cast<std::size_t>(r)].spacings);
            pooled.insert(pooled.end(), s.spacings.back().begin(), s.spacings.back().end());
        }
        offset += static_cast<std::size_t>(c.N_D);
        s.histogram = spacing_histogram(pooled);
        s.eta = eta_measure(pooled);
        spectral.push_back({{"n_r", n},
                            {"eta", s.eta.eta},
                            {"n_spacings", s.eta.n_spacings},
                            {"low_confidence", s.eta.low_confidence},
                            {"s0", pdf_crossing()},
                            {"bin_width", s.histogram.bin_width}});
        rec.spectral.push_back(std::move(s));
    }
    rec.fits = {{"scenario", "spectral"}, {"spectral", spectral}};
    return rec;
}

RunRecord run_ipr(const ExperimentConfig& cfg, int workers)
{
    ExperimentConfig c = cfg;
    c.scenario = Scenario::Ipr;
    return run_evolution(c, workers, {0.0});
}

RunRecord run_scaling(const ExperimentConfig& cfg, int workers)
{
    ExperimentConfig c = cfg;
    c.scenario = Scenario::Scaling;
    auto rec = run_evolution(c, workers, {0.0});
    std::vector<double> xi;
    for (const auto& s : rec.sizes) xi.push_back(s.xi_sat);
    rec.alpha = fit_power_law(sizes_n(rec), xi);
    rec.fits["alpha"] = power_json(*rec.alpha);
    std::vector<double> fin;
    for (const auto& s : rec.sizes) fin.push_back(s.xi_final);
    rec.fits["alpha_final"] = power_json(fit_power_law(sizes_n(rec), fin));
    return rec;
}

RunRecord run_tau(const ExperimentConfig& cfg, int workers)
{
    ExperimentConfig c = cfg;
    c.scenario = Scenario::Tau;
    auto rec = run_evolution(c, workers, {0.0});
    const auto n = sizes_n(rec);
    std::vector<double> tau;
    bool flagged = false;
    for (const auto& s : rec.sizes) {
        tau.push_back(s.tau);
        flagged = flagged || s.non_saturating;
    }
    rec.fits["tau_fit"] = to_string(c.tau_fit);
    rec.fits["non_saturating"] = flagged;
    const bool usable = std::all_of(tau.begin(), tau.end(), [](double t) { return std::isfinite(t) && t > 0.0; });
    if (!usable) {
        rec.fits["error"] = "half-rise time undefined for some size";
        return rec;
    }
    rec.beta = fit_power_law(n, tau);
    rec.tau_log = fit_log(n, tau);
    std::vector<double> pw, lg;
    for (double x : n) {
        pw.push_back(rec.beta->prefactor * std::pow(x, rec.beta->exponent));
        lg.push_back(rec.tau_log->intercept + rec.tau_log->slope * std::log10(x));
    }
    rec.beta_relative_rms = relative_rms(tau, pw);
    rec.tau_log_relative_rms = relative_rms(tau, lg);
    auto beta = power_json(*rec.beta);
    beta["relative_rms"] = rec.beta_relative_rms;
    rec.fits["beta"] = beta;
    rec.fits["log"] = {{"intercept", rec.tau_log->intercept},
                       {"slope", rec.tau_log->slope},
                       {"residual", rec.tau_log->residual},
                       {"relative_rms", rec.tau_log_relative_rms},
                       {"points", rec.tau_log->points}};
    return rec;
}

RunRecord run_noise(const ExperimentConfig& cfg, int workers)
{
    ExperimentConfig c = cfg;
    c.scenario = Scenario::Noise;
    validate(c);
    return run_evolution(c, workers, c.eps);
}

RunRecord run_experiment(const ExperimentConfig& cfg, int workers)
{
    switch (cfg.scenario) {
    case Scenario::Spectral: return run_spectral(cfg, workers);
    case Scenario::Ipr: return run_ipr(cfg, workers);
    case Scenario::Scaling: return run_scaling(cfg, workers);
    case Scenario::Tau: return run_tau(cfg, workers);
    case Scenario::Noise: return run_noise(cfg, workers);
    }
    throw std::invalid_argument("unknown scenario");
}

void write_outputs(const RunRecord& rec, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "manifest.json", rec.manifest.dump(2) + "\n");
    write_text(dir / "fits.json", rec.fits.dump(2) + "\n");

    std::string curves, spacings = "n_r,realization,s\n", series = "n_r,eps,realization,t,ipr\n";
    if (rec.config.scenario == Scenario::Spectral) {
        curves = "n_r,s_mid,P,N_samples,poisson,wigner\n";
        for (const auto& s : rec.spectral) {
            const auto& h = s.histogram;
            for (std::size_t b = 0; b < h.s_mid.size(); ++b)
                curves += std::to_string(s.n_r) + "," + fmt(h.s_mid[b]) + "," + fmt(h.density[b]) + "," +
                          std::to_string(h.counts[b]) + "," + fmt(poisson_pdf(h.s_mid[b])) + "," +
                          fmt(wigner_pdf(h.s_mid[b])) + "\n";
            for (std::size_t r = 0; r < s.spacings.size(); ++r)
                for (double v : s.spacings[r])
                    spacings += std::to_string(s.n_r) + "," + std::to_string(r) + "," + fmt(v) + "\n";
        }
    } else {
        curves = "n_r,eps,t,mean_ipr,sem,realizations\n";
        for (std::size_t c = 0; c < rec.curves.size(); ++c) {
            const auto& cv = rec.curves[c];
            const std::string head = std::to_string(cv.n_r) + "," + fmt(cv.eps) + ",";
            for (std::size_t i = 0; i < cv.t.size(); ++i)
                curves += head + fmt(cv.t[i]) + "," + fmt(cv.mean[i]) + "," + fmt(cv.sem[i]) + "," +
                          std::to_string(cv.realizations) + "\n";
            for (std::size_t r = 0; r < rec.series[c].size(); ++r)
                for (std::size_t i = 0; i < cv.t.size(); ++i)
                    series += head + std::to_string(r) + "," + fmt(cv.t[i]) + "," + fmt(rec.series[c][r][i]) + "\n";
        }
    }
    write_text(dir / "curves.csv", curves);
    write_text(dir / "spacings.csv", spacings);
    write_text(dir / "realizations.csv", series);
    if (!rec.programs.empty()) {
        std::filesystem::create_directories(dir / "programs");
        for (const auto& [stem, program] : rec.programs) write_text(dir / "programs" / (stem + ".json"), program.dump(1) + "\n");
    }
}

} // namespace swnet
