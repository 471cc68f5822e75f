// helio_dsm: command-line front end for synthesizing Cauchy data and locating
// multipolar Helmholtz sources with DSM and DSM2.
//
// Exit codes: 0 success, 1 validation, 2 runtime, 3 verification failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <dsm/dsm.hpp>

namespace {

namespace fs = std::filesystem;

enum ExitCode : int { ok = 0, validation = 1, runtime = 2, verification = 3 };

struct Common {
    std::string config_path;
    std::string algorithm;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 0;
    bool quiet = false;
};

void say(const Common& c, const std::string& text) {
    if (!c.quiet) std::cout << text << std::flush;
}

void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

/// Applies --seed, --out and --threads (with the environment fallback) to a config.
void apply_overrides(dsm::io::ExperimentConfig& config, const Common& c) {
    if (c.seed) config.seed = *c.seed;
    if (!c.out.empty()) config.output = c.out;
    config.threads = static_cast<int>(dsm::resolve_threads(c.threads > 0 ? c.threads
                                                                         : static_cast<unsigned>(config.threads)));
}

dsm::io::ExperimentConfig load(const Common& c) {
    if (c.config_path.empty()) throw dsm::io::ValidationError("--config is required");
    auto config = dsm::io::load_config(c.config_path);
    apply_overrides(config, c);
    return config;
}

dsm::Algorithm pick_algorithm(const dsm::io::ExperimentConfig& config, const Common& c) {
    const std::string name = c.algorithm.empty() ? config.algorithm : c.algorithm;
    return name == "dsm" ? dsm::Algorithm::dsm : dsm::Algorithm::dsm2;
}

template <int N>
dsm::SynthesizedData<N> synthesize_to(const dsm::io::ExperimentConfig& config, const fs::path& dir) {
    auto data = dsm::synthesize<N>(config);
    fs::create_directories(dir);
    dsm::io::write_cauchy_csv<N>(dir / "cauchy.csv", data.clean, data.noisy);
    dsm::io::Json meta;
    meta["config"] = dsm::io::to_json(config);
    meta["seed"] = config.seed;
    meta["points"] = data.clean.surface.size();
    meta["warnings"] = data.warnings;
    dsm::io::write_json(dir / "meta.json", meta);
    warn(data.warnings);
    return data;
}

template <int N>
int synthesize_command(const Common& c) {
    const auto config = load(c);
    const fs::path dir = config.output;
    const auto data = synthesize_to<N>(config, dir);
    say(c, "wrote " + (dir / "cauchy.csv").string() + " (" + std::to_string(data.clean.surface.size()) +
               " points)\n");
    return ok;
}

template <int N>
int reconstruct_command(const Common& c, const std::string& cauchy_path) {
    const auto config = load(c);
    const fs::path dir = config.output;
    const auto algorithm = pick_algorithm(config, c);
    dsm::SourceEnsemble<N> truth = dsm::io::make_ensemble<N>(config);
    dsm::CauchyData<N> data;
    if (cauchy_path.empty()) {
        data = synthesize_to<N>(config, dir).noisy;
    } else {
        data = dsm::io::read_cauchy_csv<N>(cauchy_path, true);
        fs::create_directories(dir);
    }
    const auto rec = dsm::reconstruct<N>(config, data, algorithm, true);
    dsm::write_reconstruction_outputs<N>(dir, config, rec);
    warn(rec.warnings);
    say(c, dsm::comparison_table<N>(truth, rec));
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s wall time: %.3f s\n", dsm::to_string(algorithm), rec.timings.total_seconds);
    say(c, buf);
    return ok;
}

template <int N>
int example_command(const Common& c, dsm::io::ExperimentConfig config) {
    apply_overrides(config, c);
    const fs::path dir = config.output;
    const auto data = synthesize_to<N>(config, dir);
    const auto truth = dsm::io::make_ensemble<N>(config);

    const auto rec2 = dsm::reconstruct<N>(config, data.noisy, dsm::Algorithm::dsm2, true);
    dsm::write_reconstruction_outputs<N>(dir, config, rec2);
    warn(rec2.warnings);
    say(c, "== " + config.name + ": DSM2\n" + dsm::comparison_table<N>(truth, rec2));

    char buf[160];
    if (config.dsm_grid) {
        const auto rec1 = dsm::reconstruct<N>(config, data.noisy, dsm::Algorithm::dsm, true);
        dsm::write_reconstruction_outputs<N>(dir, config, rec1, "_dsm");
        warn(rec1.warnings);
        say(c, "== " + config.name + ": DSM\n" + dsm::comparison_table<N>(truth, rec1));
        std::snprintf(buf, sizeof buf, "wall time: DSM %.3f s, DSM2 %.3f s, speedup %.2fx\n",
                      rec1.timings.total_seconds, rec2.timings.total_seconds,
                      rec1.timings.total_seconds / rec2.timings.total_seconds);
    } else {
        std::snprintf(buf, sizeof buf, "wall time: DSM2 %.3f s\n", rec2.timings.total_seconds);
    }
    say(c, buf);
    say(c, "outputs in " + dir.string() + "\n");
    return ok;
}

int verify_command(const Common& c, const std::string& level, double perturb) {
    if (level != "quick" && level != "full") throw dsm::io::ValidationError("verify level must be quick or full");
    const auto checks = dsm::verify::run(level == "full", 1.0 + perturb);
    const bool passed = dsm::verify::all_passed(checks);
    say(c, dsm::verify::report(checks));
    if (!c.quiet) std::cout << (passed ? "all checks passed\n" : "verification FAILED\n");
    return passed ? ok : verification;
}

template <class Fn>
int by_dims(int dims, Fn&& fn) {
    if (dims == 2) return fn(std::integral_constant<int, 2>{});
    return fn(std::integral_constant<int, 3>{});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Direct sampling localization of monopole and dipole Helmholtz sources"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--config", common.config_path, "Experiment config (JSON)");
    app.add_option("--algorithm", common.algorithm, "dsm or dsm2 (default: from config)")
        ->check(CLI::IsMember({"dsm", "dsm2"}));
    app.add_option("--seed", common.seed, "Noise seed, overrides the config or preset");
    app.add_option("--out", common.out, "Output directory, overrides the config or preset");
    app.add_option("--threads", common.threads, "Worker threads (default: HELIO_DSM_THREADS, then all cores)");
    app.add_flag("--quiet", common.quiet, "Suppress tables and progress on stdout");

    auto* synth = app.add_subcommand("synthesize", "Write clean and noisy Cauchy data (cauchy.csv, meta.json)");

    std::string cauchy_path;
    auto* recon = app.add_subcommand("reconstruct", "Locate sources; write indicator, reconstruction and run files");
    recon->add_option("--cauchy", cauchy_path, "Read noisy Cauchy data from this cauchy.csv instead of synthesizing");

    std::string level = "quick";
    double perturb = 0.0;
    auto* ver = app.add_subcommand("verify", "Run the oracle suites");
    ver->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    ver->add_option("--perturb-coefficient", perturb, "Debug hook: scale the indicator coefficients by 1+value");

    int example_id = 0;
    bool print_config = false;
    auto* ex = app.add_subcommand("example", "Run a built-in reference experiment end to end");
    ex->add_option("id", example_id, "Experiment 1..5")->required();
    ex->add_flag("--print-config", print_config, "Print the preset config as JSON and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    try {
        if (*synth) {
            const auto dims = load(common).dims;
            return by_dims(dims, [&](auto n) { return synthesize_command<decltype(n)::value>(common); });
        }
        if (*recon) {
            const auto dims = load(common).dims;
            return by_dims(dims, [&](auto n) { return reconstruct_command<decltype(n)::value>(common, cauchy_path); });
        }
        if (*ver) return verify_command(common, level, perturb);
        if (*ex) {
            auto config = dsm::presets::example(example_id);
            if (print_config) {
                if (common.seed) config.seed = *common.seed;
                if (!common.out.empty()) config.output = common.out;
                std::cout << dsm::io::to_json(config).dump(2) << '\n';
                return ok;
            }
            return by_dims(config.dims,
                           [&](auto n) { return example_command<decltype(n)::value>(common, config); });
        }
    } catch (const dsm::io::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return runtime;
    }
    return ok;
}
