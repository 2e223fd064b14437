#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "eitcool/errors.hpp"
#include "eitcool/scenario.hpp"
#include "eitcool/version.hpp"

namespace {

enum Exit { ok = 0, usage = 1, config_error = 2, solver_error = 3, io_error = 4 };

struct RunFlags {
    std::string config;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> rel_tol;
};

int do_validate(const std::string& path) {
    const auto diag = eitcool::validate_file(path);
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << path << ": ok\n";
    return ok;
}

int do_run(const RunFlags& f) {
    eitcool::ScenarioConfig cfg = eitcool::load_config(f.config);
    if (f.output_dir) cfg.output_dir = *f.output_dir;
    if (f.seed) cfg.seed = *f.seed;
    if (f.threads) cfg.threads = *f.threads;
    if (f.rel_tol) cfg.solver.rel_tol = *f.rel_tol;
    eitcool::validate(cfg);
    const eitcool::RunManifest m = eitcool::run(cfg);
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& o : m.outputs) std::cout << (cfg.output_dir / o.file).string() << "  " << o.sha256 << "\n";
    std::cout << "manifest: " << (cfg.output_dir / "manifest.json").string() << " (" << m.wall_seconds << " s)\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EIT cooling of a magnetically coupled mechanical resonator"};
    app.set_version_flag("--version", std::string(eitcool::version_string));
    app.require_subcommand(1);

    RunFlags flags;
    auto* run = app.add_subcommand("run", "run a scenario config and write CSVs plus manifest.json");
    run->add_option("config", flags.config, "scenario config file")->required();
    run->add_option("--output-dir", flags.output_dir, "override output_dir");
    run->add_option("--seed", flags.seed, "override seed");
    run->add_option("--threads", flags.threads, "worker threads (fallback: EITCOOL_THREADS)")
        ->check(CLI::PositiveNumber);
    run->add_option("--rel-tol", flags.rel_tol, "override solver.rel_tol")->check(CLI::PositiveNumber);

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "check a config without running it");
    val->add_option("config", validate_path, "scenario config file")->required();

    auto* list = app.add_subcommand("list-scenarios", "print the known scenario names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& name : eitcool::scenario_names())
                std::cout << name << "  " << eitcool::scenario_summary(name) << "\n";
            return ok;
        }
        if (*val) return do_validate(validate_path);
        return do_run(flags);
    } catch (const eitcool::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const eitcool::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return io_error;
    } catch (const eitcool::Error& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return solver_error;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return solver_error;
    }
}
