#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "eitcool/analytics.hpp"
#include "eitcool/constants.hpp"
#include "eitcool/effective_ops.hpp"
#include "eitcool/errors.hpp"
#include "eitcool/parallel.hpp"
#include "eitcool/scenario.hpp"
#include "eitcool/version.hpp"

namespace eitcool {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> axis_values(const ScenarioConfig& cfg, const std::string& name, SweepAxis fallback) {
    if (const SweepAxis* a = cfg.sweep(name)) return a->values();
    fallback.name = name;
    return fallback.values();
}

std::vector<double> list_or(const ScenarioConfig& cfg, const std::string& key, std::vector<double> fallback) {
    if (auto v = cfg.list(key)) return *v;
    return fallback;
}

// Short tag for file and column names, e.g. 0.1 -> "0.1", 10 -> "10".
std::string tag(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

EvolveOptions evolve_options(const ScenarioConfig& cfg) {
    EvolveOptions o;
    o.rel_tol = cfg.solver.rel_tol;
    o.abs_tol = cfg.solver.abs_tol;
    o.positivity_checkpoints = cfg.solver.positivity_checkpoints;
    o.leakage_threshold = cfg.solver.leakage_threshold;
    return o;
}

InitialStateSpec initial_or_fock(const ScenarioConfig& cfg, std::string nv, std::size_t fock) {
    InitialStateSpec s = cfg.initial;
    if (!cfg.lines.count("initial.nv")) s.nv = std::move(nv);
    if (!s.fock && !s.thermal_n) s.fock = fock;
    return s;
}

double initial_mean(const InitialStateSpec& s) {
    if (s.fock) return static_cast<double>(*s.fock);
    if (s.thermal_n) return *s.thermal_n;
    return 0.0;
}

void record_stats(RunManifest& m, const std::string& prefix, const SolverStats& s) {
    m.solver[prefix + "rel_tol"] = s.rel_tol;
    m.solver[prefix + "abs_tol"] = s.abs_tol;
    m.solver[prefix + "steps"] = static_cast<double>(s.steps);
    m.solver[prefix + "rhs_evaluations"] = static_cast<double>(s.rhs_evaluations);
    m.solver[prefix + "max_hermiticity_residual"] = s.max_hermiticity_residual;
    m.solver[prefix + "max_trace_error"] = s.max_trace_error;
    m.solver[prefix + "max_leakage"] = s.max_leakage;
    if (s.min_eigenvalue) m.solver[prefix + "min_eigenvalue"] = *s.min_eigenvalue;
    m.solver[prefix + "wall_seconds"] = s.wall_seconds;
}

class OutputWriter {
public:
    OutputWriter(std::filesystem::path dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    void text(const std::string& name, const std::string& contents) {
        write_text_file(dir_ / name, contents);
        manifest_.outputs.push_back({name, sha256_hex(contents), contents.size()});
    }

    void csv(const std::string& name, const CsvTable& table) {
        std::ostringstream ss;
        write_csv(ss, table);
        text(name, ss.str());
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    RunManifest& manifest_;
};

void run_absorption(const ScenarioConfig& cfg, RunManifest& m, OutputWriter& out) {
    const ModelParams& p = cfg.params;
    const auto omegas = axis_values(cfg, "omega", {"", -3.0, 3.0, 1201, SweepScale::lin});
    const SpectrumSeries absorption = absorption_spectrum(p, omegas);
    out.csv("absorption.csv", to_table(absorption));
    out.csv("spectrum.csv", to_table(fluctuation_spectrum(p, omegas)));

    const DressedStateReport d = dressed_states(p);
    std::ostringstream ss;
    ss << "E_plus = " << format_number(d.E_plus) << "\n"
       << "E_minus = " << format_number(d.E_minus) << "\n"
       << "phi = " << format_number(d.phi) << "\n"
       << "linewidth_plus = " << format_number(d.linewidth_plus) << "\n"
       << "linewidth_minus = " << format_number(d.linewidth_minus) << "\n";
    out.text("dressed.txt", ss.str());

    double peak = 0.0;
    for (const auto& v : absorption.values) peak = std::max(peak, v.real());
    m.metrics["E_plus"] = d.E_plus;
    m.metrics["E_minus"] = d.E_minus;
    m.metrics["absorption_peak"] = peak;
    m.metrics["absorption_at_resonance"] = absorption_spectrum(p, std::vector<double>{0.0}).values[0].real();
}

void run_rates_vs_mr(const ScenarioConfig& cfg, RunManifest& m, OutputWriter& out) {
    const auto mrs = axis_values(cfg, "m_r", {"", 2.0, 12.0, 201, SweepScale::lin});
    CsvTable t{{"m_r", "a_plus", "a_minus", "w", "n_ss"}, {}};
    for (double mr : mrs) {
        ModelParams p = cfg.params;
        p.set_optimum(mr);
        const RateReport r = rates(p);
        t.rows.push_back({mr, r.a_plus, r.a_minus, r.w, r.n_ss});
    }
    out.csv("rates_vs_mr.csv", t);

    ModelParams p8 = cfg.params;
    p8.set_optimum(8.0);
    const RateReport r8 = rates(p8);
    m.metrics["a_minus_over_a_plus_at_mr8"] = r8.a_minus / r8.a_plus;
    m.metrics["a_minus_hz_at_mr8"] = r8.a_minus * cfg.params.omega_m / constants::two_pi;
    m.metrics["a_plus_hz_at_mr8"] = r8.a_plus * cfg.params.omega_m / constants::two_pi;

    // Rate report at the configured working point, as given (no optimum imposed).
    const RateReport r = rates(cfg.params);
    const double to_hz = cfg.params.omega_m / constants::two_pi;
    std::ostringstream kv;
    kv.precision(10);
    kv << "rabi_omega0 = " << cfg.params.rabi_omega0 << "\n"
       << "detuning = " << cfg.params.detuning << "\n"
       << "a_plus = " << r.a_plus << "\n"
       << "a_minus = " << r.a_minus << "\n"
       << "w = " << r.w << "\n"
       << "n_ss = " << r.n_ss << "\n"
       << "thermal_n = " << r.thermal_n << "\n"
       << "a_plus_hz = " << r.a_plus * to_hz << "\n"
       << "a_minus_hz = " << r.a_minus * to_hz << "\n"
       << "w_hz = " << r.w * to_hz << "\n";
    out.text("rates.txt", kv.str());
}

void run_steady_map(const ScenarioConfig& cfg, RunManifest& m, OutputWriter& out) {
    const auto qs = axis_values(cfg, "quality_q", {"", 1e3, 1e7, 41, SweepScale::log});
    const auto ts = axis_values(cfg, "temperature_mk", {"", 1.0, 100.0, 41, SweepScale::lin});
    CsvTable t{{"quality_q", "temperature_mk", "n_ss", "log10_n_ss"}, {}};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double q : qs) {
        for (double tmk : ts) {
            ModelParams p = cfg.params;
            p.set_quality_q(q);
            p.temperature = tmk * 1e-3;
            p.bath = Bath::thermal;
            const double n = rates(p).n_ss;
            t.rows.push_back({q, tmk, n, std::log10(n)});
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
    }
    out.csv("steady_map.csv", t);
    m.metrics["n_ss_min"] = lo;
    m.metrics["n_ss_max"] = hi;
}

void run_cooling_compare(const ScenarioConfig& cfg, RunManifest& m, OutputWriter& out, unsigned threads) {
    const auto omegas_mhz = list_or(cfg, "cooling.omega_m_mhz", {1.0, 10.0});
    const auto mrs = axis_values(cfg, "m_r", {"", 8.0, 8.0, 1, SweepScale::lin});
    const EvolveOptions opts = evolve_options(cfg);
    const InitialStateSpec initial = initial_or_fock(cfg, "dark", 1);
    const std::size_t fock = cfg.solver.fock_dim.value_or(8);
    for (double f : omegas_mhz) {
        const ModelParams base = params_at_omega(cfg, f * 1e6 * constants::two_pi);
        std::vector<std::optional<CoolingComparison>> results(mrs.size());
        parallel_for(mrs.size(), threads, [&](std::size_t i) {
            ModelParams p = base;
            p.set_optimum(mrs[i]);
            const double t_final = cfg.solver.t_final.value_or(0.0);
            results[i] = compare_cooling_rate(p, fock, t_final, cfg.solver.sample_count, opts, initial);
        });
        CsvTable t{{"m_r", "w_analytic_over_lambda", "w_numeric_over_lambda", "residual_rms"}, {}};
        for (std::size_t i = 0; i < mrs.size(); ++i) {
            const CoolingComparison& c = *results[i];
            t.rows.push_back({mrs[i], c.w_analytic / base.eta, c.fit.w_fit / base.eta, c.fit.residual_rms});
            const std::string key = "omega_" + tag(f) + "mhz_mr_" + tag(mrs[i]);
            m.metrics[key + "_w_numeric_over_lambda"] = c.fit.w_fit / base.eta;
            m.metrics[key + "_w_analytic_over_lambda"] = c.w_analytic / base.eta;
            record_stats(m, key + ".", c.series.meta());
        }
        out.csv("cooling_" + tag(f) + "mhz.csv", t);
    }
}

void run_robustness(const ScenarioConfig& cfg, RunManifest& m, OutputWriter& out) {
    for (const RobustnessCurve& c : robustness_sweep(cfg)) {
        out.csv("robustness_mr_" + tag(c.m_r) + ".csv", c.table);
        std::size_t best = 0;
        for (std::size_t i = 0; i < c.table.rows.size(); ++i)
            if (c.table.rows[i][1] < c.table.rows[best][1]) best = i;
        m.metrics["mr_" + tag(c.m_r) + "_argmin_deviation"] = c.table.rows[best][0];
    }
}

double final_value(const TimeSeries& s, const std::string& name) { return s.value(s.size() - 1, name); }

void run_recycling(const ScenarioConfig& cfg, RunManifest& m, OutputWriter& out, unsigned threads) {
    const InitialStateSpec initial = initial_or_fock(cfg, level::minus, 3);
    const std::size_t fock = cfg.solver.fock_dim.value_or(16);
    const double t_final = cfg.solver.t_final.value_or(200.0);
    const EvolveOptions opts = evolve_options(cfg);
    const RecyclingResult r =
        run_recycling_models(cfg.params, fock, t_final, cfg.solver.sample_count, opts, initial, threads);

    CsvTable t{{"t", "n_3level", "n_4level", "n_7level", "p0_4level", "p0_7level"}, {}};
    const std::string p0 = "p_" + std::string(level::zero);
    for (std::size_t i = 0; i < r.three.size(); ++i) {
        t.rows.push_back({r.three.times()[i], r.three.value(i, "n"), r.four.value(i, "n"), r.seven.value(i, "n"),
                          r.four.value(i, p0), r.seven.value(i, p0)});
    }
    out.csv("recycling.csv", t);
    m.metrics["max_relative_deviation_3_4"] = r.dev_3_4;
    m.metrics["max_relative_deviation_3_7"] = r.dev_3_7;
    m.metrics["max_relative_deviation_4_7"] = r.dev_4_7;
    record_stats(m, "three_level.", r.three.meta());
    record_stats(m, "four_level.", r.four.meta());
    record_stats(m, "seven_level.", r.seven.meta());

    // Sensitivity of the final phonon number to the unassigned frame offsets of |0> and |1A1>.
    const auto offsets = list_or(cfg, "recycling.offsets", {-10.0, 10.0});
    const ModelParams pumped = with_effective_pump(cfg.params);
    const double n4 = final_value(r.four, "n"), n7 = final_value(r.seven, "n");
    struct Probe {
        double offset;
        int kind;  // 0: ω₀ in the four-level model, 1: ω₀ in seven-level, 2: ω_s in seven-level
    };
    std::vector<Probe> probes;
    for (double o : offsets)
        for (int k = 0; k < 3; ++k) probes.push_back({o, k});
    std::vector<double> finals(probes.size());
    parallel_for(probes.size(), threads, [&](std::size_t i) {
        ModelParams p = probes[i].kind == 0 ? pumped : cfg.params;
        if (probes[i].kind == 2) p.level_energies.omega_s = probes[i].offset;
        else p.level_energies.omega_0 = probes[i].offset;
        const LindbladModel model =
            probes[i].kind == 0 ? build_model_four_level(p, fock) : build_model_seven_level(p, fock);
        const TimeSeries s = evolve(model, make_initial_state(model.space(), initial), t_final, 2, opts);
        finals[i] = final_value(s, "n");
    });
    CsvTable sens{{"offset", "n_final_4level_omega0", "n_final_7level_omega0", "n_final_7level_omega_s",
                   "rel_change_4level_omega0", "rel_change_7level_omega0", "rel_change_7level_omega_s"},
                  {}};
    double worst = 0.0;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        const double a = finals[3 * j], b = finals[3 * j + 1], c = finals[3 * j + 2];
        const double ra = std::abs(a - n4) / n4, rb = std::abs(b - n7) / n7, rc = std::abs(c - n7) / n7;
        worst = std::max({worst, ra, rb, rc});
        sens.rows.push_back({offsets[j], a, b, c, ra, rb, rc});
    }
    out.csv("sensitivity.csv", sens);
    m.metrics["offset_sensitivity_max_relative_change"] = worst;
    if (worst >= 0.01) {
        m.warnings.push_back("final <n> changes by " + tag(100.0 * worst) +
                             "% over the frame-offset probe; the zero default is not neutral here");
    }
}

void run_nuclear(const ScenarioConfig& cfg, RunManifest& m, OutputWriter& out, unsigned threads) {
    const auto dmax_mhz = list_or(cfg, "nuclear.delta_max_mhz", {0.0, 0.1, 0.5});
    const auto samples = static_cast<std::size_t>(list_or(cfg, "nuclear.samples", {200.0})[0]);
    MonteCarloOptions mc;
    mc.sample_count = cfg.solver.sample_count;
    mc.evolve = evolve_options(cfg);
    mc.initial = initial_or_fock(cfg, "dark", 3);
    mc.threads = threads;
    const std::size_t fock = cfg.solver.fock_dim.value_or(default_fock_dim(initial_mean(mc.initial)));
    const RateReport r = rates(cfg.params);
    if (!(r.w > 0.0)) throw DomainError("nuclear-bath: no net cooling at the configured parameters");
    const double t_final = cfg.solver.t_final.value_or(10.0 / r.w);

    CsvTable mean{{"t"}, {}};
    CsvTable summary{{"delta_max_mhz", "delta_max", "n_ss_mean", "cooling_time"}, {}};
    std::vector<MonteCarloResult> results;
    for (double d : dmax_mhz) {
        const double delta = d * 1e6 * constants::two_pi / cfg.params.omega_m;
        results.push_back(monte_carlo_detuning(cfg.params, delta, samples, cfg.seed, fock, t_final, mc));
        const MonteCarloResult& res = results.back();
        mean.header.push_back("n_dmax_" + tag(d) + "mhz");
        summary.rows.push_back({d, delta, res.n_ss_mean,
                                res.cooling_time.value_or(std::numeric_limits<double>::quiet_NaN())});
        m.metrics["n_ss_mean_dmax_" + tag(d) + "mhz"] = res.n_ss_mean;
        record_stats(m, "dmax_" + tag(d) + "mhz.", res.mean.meta());
        if (!res.cooling_time) {
            m.warnings.push_back("delta_max " + tag(d) + " MHz: mean <n> never reached 1.1 n_ss_mean");
        }
    }
    const auto& times = results.front().mean.times();
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i]};
        for (const auto& res : results) row.push_back(res.mean.value(i, "n"));
        mean.rows.push_back(std::move(row));
    }
    out.csv("nuclear_mean_n.csv", mean);
    out.csv("nuclear_summary.csv", summary);
    m.metadata["detuning_distribution"] = "uniform on [-delta_max, delta_max], mt19937_64(seed), u = (x >> 11) * 2^-53";
    m.metadata["detuning_application"] = "static energy shift of |-1> per realization";
    m.metadata["samples_per_delta_max"] = std::to_string(samples);
    m.metadata["fock_dim"] = std::to_string(fock);
}

}  // namespace

std::string manifest_json(const RunManifest& m) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["scenario"] = m.scenario;
    j["version"] = m.version;
    j["status"] = m.status;
    if (!m.error.empty()) j["error"] = m.error;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : m.config) cfg[k] = v;
    j["config"] = cfg;
    j["seed"] = m.seed;
    j["threads"] = m.threads;
    j["wall_seconds"] = m.wall_seconds;
    j["units"] = {{"omega_m_rad_per_s", m.omega_m},
                  {"time_unit_s", m.omega_m > 0 ? 1.0 / m.omega_m : 0.0},
                  {"frequency_unit_hz", m.omega_m / constants::two_pi},
                  {"note", "CSV quantities are in units of omega_m; multiply rates by omega_m/2pi for Hz"}};
    ordered_json outs = ordered_json::array();
    for (const auto& o : m.outputs) outs.push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    j["outputs"] = outs;
    auto number_map = [](const std::map<std::string, double>& src) {
        ordered_json obj = ordered_json::object();
        for (const auto& [k, v] : src) {
            if (std::isfinite(v)) obj[k] = v;
            else obj[k] = format_number(v);
        }
        return obj;
    };
    j["solver"] = number_map(m.solver);
    j["metrics"] = number_map(m.metrics);
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : m.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["warnings"] = m.warnings;
    return j.dump(2) + "\n";
}

RunManifest run(const ScenarioConfig& config) {
    const auto start = Clock::now();
    RunManifest m;
    m.scenario = config.scenario;
    m.version = version_string;
    m.config = config.entries;
    m.seed = config.seed;
    m.threads = resolve_threads(config.threads);
    m.omega_m = config.params.omega_m;
    m.warnings = validate(config).warnings;

    OutputWriter out(config.output_dir, m);
    auto finish = [&] {
        m.wall_seconds = seconds_since(start);
        write_text_file(out.dir() / "manifest.json", manifest_json(m));
    };
    try {
        const std::string& s = config.scenario;
        if (s == "absorption") run_absorption(config, m, out);
        else if (s == "rates-vs-mr") run_rates_vs_mr(config, m, out);
        else if (s == "steady-map") run_steady_map(config, m, out);
        else if (s == "cooling-rate-compare") run_cooling_compare(config, m, out, m.threads);
        else if (s == "robustness") run_robustness(config, m, out);
        else if (s == "recycling-check") run_recycling(config, m, out, m.threads);
        else if (s == "nuclear-bath") run_nuclear(config, m, out, m.threads);
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        m.status = "failed";
        m.error = e.what();
        finish();
        throw;
    }
    finish();
    return m;
}

std::vector<RobustnessCurve> robustness_sweep(const ScenarioConfig& config) {
    const auto deviations = axis_values(config, "rabi_deviation", {"", -0.1, 0.1, 201, SweepScale::lin});
    const auto mrs = list_or(config, "robustness.m_r", {6.0, 8.0, 10.0});
    const auto gammas_hz = list_or(config, "robustness.gamma_mech_hz", {0.0, 10.0, 100.0});
    std::vector<RobustnessCurve> curves;
    for (double mr : mrs) {
        RobustnessCurve c{mr, {{"deviation"}, {}}};
        for (double g : gammas_hz) c.table.header.push_back("n_ss_gamma_" + tag(g) + "hz");
        ModelParams nominal = config.params;
        nominal.set_optimum(mr);
        for (double dev : deviations) {
            std::vector<double> row{dev};
            for (double g : gammas_hz) {
                ModelParams p = nominal;
                p.rabi_omega0 = mr * (1.0 + dev);
                p.gamma_mech = g * constants::two_pi / p.omega_m;
                row.push_back(rates(p).n_ss);
            }
            c.table.rows.push_back(std::move(row));
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

CoolingComparison compare_cooling_rate(const ModelParams& params, std::size_t fock_dim, double t_final,
                                       std::size_t sample_count, const EvolveOptions& options,
                                       const InitialStateSpec& initial) {
    const RateReport r = rates(params);
    if (!(r.w > 0.0)) throw DomainError("compare_cooling_rate: no net cooling at these parameters");
    if (!(t_final > 0.0)) t_final = 10.0 / r.w;
    const LindbladModel model = build_model_three_level(params, fock_dim);
    TimeSeries series = evolve(model, make_initial_state(model.space(), initial), t_final, sample_count, options);
    const CoolingFit fit = extract_cooling_rate(series, "n", default_fit_options(params));
    return {r.w, fit, std::move(series)};
}

double max_relative_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("max_relative_deviation: series lengths differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double mean = 0.5 * (a[i] + b[i]);
        if (mean == 0.0) {
            if (a[i] != b[i]) return std::numeric_limits<double>::infinity();
            continue;
        }
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(mean));
    }
    return worst;
}

RecyclingResult run_recycling_models(const ModelParams& params, std::size_t fock_dim, double t_final,
                                     std::size_t sample_count, const EvolveOptions& options,
                                     const InitialStateSpec& initial, unsigned threads) {
    const ModelParams pumped = with_effective_pump(params);
    std::vector<std::optional<TimeSeries>> out(3);
    parallel_for(3, threads, [&](std::size_t i) {
        const LindbladModel model = i == 0   ? build_model_three_level(pumped, fock_dim)
                                    : i == 1 ? build_model_four_level(pumped, fock_dim)
                                             : build_model_seven_level(params, fock_dim);
        out[i] = evolve(model, make_initial_state(model.space(), initial), t_final, sample_count, options);
    });
    RecyclingResult r{std::move(*out[0]), std::move(*out[1]), std::move(*out[2])};
    const auto n3 = r.three.column("n"), n4 = r.four.column("n"), n7 = r.seven.column("n");
    r.dev_3_4 = max_relative_deviation(n3, n4);
    r.dev_3_7 = max_relative_deviation(n3, n7);
    r.dev_4_7 = max_relative_deviation(n4, n7);
    return r;
}

}  // namespace eitcool
