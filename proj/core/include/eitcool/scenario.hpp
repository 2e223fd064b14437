#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eitcool/dynamics.hpp"
#include "eitcool/io.hpp"
#include "eitcool/nv_model.hpp"

namespace eitcool {

enum class SweepScale { lin, log };

struct SweepAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;
    SweepScale scale = SweepScale::lin;

    std::vector<double> values() const;
};

struct SolverSettings {
    double rel_tol = 1e-7;
    double abs_tol = 1e-9;
    std::optional<std::size_t> fock_dim;
    std::optional<double> t_final;
    std::size_t sample_count = 201;
    std::size_t positivity_checkpoints = 0;
    double leakage_threshold = 1e-4;
};

struct ScenarioConfig {
    std::string source = "<config>";
    std::string scenario;
    ModelParams params;
    // Frequency-like parameters given in SI (rad/s), kept so sweeps over ω_m can renormalize.
    std::map<std::string, double> si_rates;
    std::vector<SweepAxis> sweeps;
    SolverSettings solver;
    InitialStateSpec initial;
    std::uint64_t seed = 42;
    std::filesystem::path output_dir = "eitcool-out";
    std::optional<unsigned> threads;
    std::map<std::string, std::vector<double>> lists;
    std::vector<std::pair<std::string, std::string>> entries;  // raw key/value echo in file order
    std::map<std::string, std::size_t> lines;                  // key -> source line

    const SweepAxis* sweep(std::string_view name) const;
    std::optional<std::vector<double>> list(std::string_view key) const;
};

const std::vector<std::string>& scenario_names();
std::string scenario_summary(std::string_view name);

// Parses the flat "key = value" grammar. Throws ConfigError with line/field.
ScenarioConfig parse_config(std::istream& in, std::string source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

// Model parameters renormalized to a different mechanical frequency (rad/s).
ModelParams params_at_omega(const ScenarioConfig& config, double omega_m);

struct Diagnostics {
    std::vector<std::string> warnings;
};

// Schema and sanity checks with no side effects. Throws ConfigError.
Diagnostics validate(const ScenarioConfig& config);
Diagnostics validate_file(const std::filesystem::path& path);

struct OutputRecord {
    std::string file;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string scenario;
    std::string version;
    std::string status = "ok";
    std::string error;
    std::vector<std::pair<std::string, std::string>> config;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double wall_seconds = 0.0;
    std::vector<OutputRecord> outputs;
    std::map<std::string, double> solver;
    std::map<std::string, double> metrics;
    std::map<std::string, std::string> metadata;
    std::vector<std::string> warnings;
    double omega_m = 0.0;
};

std::string manifest_json(const RunManifest& manifest);

// Runs the mapped pipeline, writes CSVs and manifest.json into config.output_dir.
// On failure the manifest records partial progress before the error propagates.
RunManifest run(const ScenarioConfig& config);

struct RobustnessCurve {
    double m_r;
    CsvTable table;  // deviation, then one n_ss column per γ_m
};

std::vector<RobustnessCurve> robustness_sweep(const ScenarioConfig& config);

struct CoolingComparison {
    double w_analytic;  // units of ω_m
    CoolingFit fit;
    TimeSeries series;
};

// Full three-level integration plus exponential fit against the closed-form rate.
CoolingComparison compare_cooling_rate(const ModelParams& params, std::size_t fock_dim, double t_final,
                                       std::size_t sample_count, const EvolveOptions& options,
                                       const InitialStateSpec& initial);

struct RecyclingResult {
    TimeSeries three;
    TimeSeries four;
    TimeSeries seven;
    double dev_3_4 = 0.0;
    double dev_3_7 = 0.0;
    double dev_4_7 = 0.0;
};

// Maximum over time of |a - b| / ((a + b)/2).
double max_relative_deviation(const std::vector<double>& a, const std::vector<double>& b);

RecyclingResult run_recycling_models(const ModelParams& params, std::size_t fock_dim, double t_final,
                                     std::size_t sample_count, const EvolveOptions& options,
                                     const InitialStateSpec& initial, unsigned threads);

}  // namespace eitcool
