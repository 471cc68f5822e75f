#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <dsm/dsm.hpp>

using namespace dsm;
namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* p = std::getenv("HELIO_DSM_CLI");
    return p ? p : "helio_dsm";
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("helio_dsm_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

/// Runs the CLI with the given arguments; stdout (and stderr unless split) goes to log.
int run(const std::string& args, const fs::path& log = "/dev/null", const std::string& env = "",
        bool split_stderr = false) {
    const std::string cmd = env + " \"" + cli() + "\" " + args + " > \"" + log.string() + "\"" +
                            (split_stderr ? " 2>/dev/null" : " 2>&1");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t data_rows(const fs::path& csv) { return io::detail::read_csv(csv).rows.size(); }

}  // namespace

TEST(Cli, HelpSucceeds) { EXPECT_EQ(run("--help"), 0); }

TEST(Cli, MissingSubcommandIsValidationError) { EXPECT_EQ(run(""), 1); }

TEST(Cli, UnknownOptionIsValidationError) { EXPECT_EQ(run("verify --bogus"), 1); }

TEST(Cli, BadAlgorithmIsValidationError) { EXPECT_EQ(run("--algorithm music example 1 --print-config"), 1); }

TEST(Cli, UnknownExampleIsValidationError) { EXPECT_EQ(run("example 9"), 1); }

TEST(Cli, VerifyQuickPasses) {
    const auto dir = scratch("verify");
    EXPECT_EQ(run("verify quick", dir / "log.txt"), 0);
    const auto log = slurp(dir / "log.txt");
    EXPECT_NE(log.find("all checks passed"), std::string::npos) << log;
    EXPECT_EQ(log.find("FAIL"), std::string::npos) << log;
}

TEST(Cli, VerifyDetectsPerturbedCoefficients) {
    const auto dir = scratch("verify_perturbed");
    EXPECT_EQ(run("verify quick --perturb-coefficient 0.01", dir / "log.txt"), 3);
    EXPECT_NE(slurp(dir / "log.txt").find("FAIL"), std::string::npos);
}

TEST(Cli, ConfigRequiredForSynthesize) { EXPECT_EQ(run("synthesize"), 1); }

TEST(Cli, MalformedConfigIsValidationError) {
    const auto dir = scratch("bad_config");
    std::ofstream(dir / "bad.json") << "{\"dims\": 2}";
    EXPECT_EQ(run("--config \"" + (dir / "bad.json").string() + "\" synthesize"), 1);
    auto j = io::to_json(presets::example(1));
    j["sources"] = io::Json::array();
    io::write_json(dir / "empty.json", j);
    EXPECT_EQ(run("--config \"" + (dir / "empty.json").string() + "\" reconstruct"), 1);
    EXPECT_EQ(run("--config \"" + (dir / "missing.json").string() + "\" synthesize"), 1);
}

TEST(Cli, UnwritableOutputIsRuntimeError) {
    EXPECT_EQ(run("--quiet --out /dev/null/sub example 3"), 2);
}

TEST(Cli, ExampleOneWritesAllOutputs) {
    const auto dir = scratch("example1");
    ASSERT_EQ(run("--out \"" + dir.string() + "\" example 1", dir / "log.txt"), 0);
    for (int l = 0; l <= 2; ++l) {
        const auto csv = dir / ("indicator_" + std::to_string(l) + ".csv");
        ASSERT_TRUE(fs::exists(csv));
        EXPECT_EQ(data_rows(csv), 10000u);
    }
    EXPECT_EQ(data_rows(dir / "cauchy.csv"), 200u);
    EXPECT_EQ(io::read_reconstruction_csv(dir / "reconstruction.csv", 2).size(), 4u);
    const auto run_json = io::Json::parse(slurp(dir / "run.json"));
    EXPECT_EQ(run_json["estimated_count"], 4);
    EXPECT_EQ(run_json["seed"], 1001);
    const auto meta = io::Json::parse(slurp(dir / "meta.json"));
    EXPECT_EQ(meta["points"], 200);
    const auto log = slurp(dir / "log.txt");
    EXPECT_NE(log.find("estimated count: 4 (true 4)"), std::string::npos) << log;
}

TEST(Cli, QuietSuppressesStdout) {
    const auto dir = scratch("quiet");
    ASSERT_EQ(run("--quiet --out \"" + dir.string() + "\" example 2", dir / "log.txt", "", true), 0);
    EXPECT_TRUE(slurp(dir / "log.txt").empty());
}

TEST(Cli, OutputsIdenticalAcrossThreadCounts) {
    const auto a = scratch("threads_a");
    const auto b = scratch("threads_b");
    const auto c = scratch("threads_c");
    ASSERT_EQ(run("--quiet --threads 1 --out \"" + a.string() + "\" example 3"), 0);
    ASSERT_EQ(run("--quiet --threads 4 --out \"" + b.string() + "\" example 3"), 0);
    ASSERT_EQ(run("--quiet --out \"" + c.string() + "\" example 3", "/dev/null", "HELIO_DSM_THREADS=3"), 0);
    for (const char* f : {"cauchy.csv", "indicator_0.csv", "indicator_1.csv", "indicator_2.csv", "reconstruction.csv"}) {
        const auto ref = slurp(a / f);
        ASSERT_FALSE(ref.empty()) << f;
        EXPECT_EQ(ref, slurp(b / f)) << f;
        EXPECT_EQ(ref, slurp(c / f)) << f;
    }
}

TEST(Cli, SeedChangesNoiseOnly) {
    const auto a = scratch("seed_a");
    const auto b = scratch("seed_b");
    ASSERT_EQ(run("--quiet --seed 5 --out \"" + a.string() + "\" example 2"), 0);
    ASSERT_EQ(run("--quiet --seed 6 --out \"" + b.string() + "\" example 2"), 0);
    const auto clean_a = io::read_cauchy_csv<2>(a / "cauchy.csv", false);
    const auto clean_b = io::read_cauchy_csv<2>(b / "cauchy.csv", false);
    EXPECT_EQ(clean_a.dirichlet, clean_b.dirichlet);
    EXPECT_NE(io::read_cauchy_csv<2>(a / "cauchy.csv", true).dirichlet,
              io::read_cauchy_csv<2>(b / "cauchy.csv", true).dirichlet);
}

TEST(Cli, PrintedConfigDrivesSynthesizeAndReconstruct) {
    const auto dir = scratch("roundtrip");
    const auto cfg = dir / "example2.json";
    ASSERT_EQ(run("example 2 --print-config", cfg), 0);
    const auto loaded = io::load_config(cfg);
    EXPECT_EQ(io::to_json(loaded).dump(), io::to_json(presets::example(2)).dump());

    const auto synth = dir / "synth";
    ASSERT_EQ(run("--quiet --config \"" + cfg.string() + "\" --out \"" + synth.string() + "\" synthesize"), 0);
    ASSERT_TRUE(fs::exists(synth / "cauchy.csv"));

    const auto from_file = dir / "from_file";
    ASSERT_EQ(run("--quiet --config \"" + cfg.string() + "\" --out \"" + from_file.string() +
                  "\" reconstruct --cauchy \"" + (synth / "cauchy.csv").string() + "\""),
              0);
    const auto direct = dir / "direct";
    ASSERT_EQ(run("--quiet --config \"" + cfg.string() + "\" --out \"" + direct.string() + "\" reconstruct"), 0);
    EXPECT_EQ(slurp(from_file / "reconstruction.csv"), slurp(direct / "reconstruction.csv"));
    EXPECT_EQ(io::read_reconstruction_csv(direct / "reconstruction.csv", 2).size(), 2u);
}

TEST(Cli, AlgorithmFlagSelectsDsm) {
    const auto dir = scratch("algorithm");
    const auto cfg = dir / "example3.json";
    ASSERT_EQ(run("example 3 --print-config", cfg), 0);
    ASSERT_EQ(run("--quiet --algorithm dsm --config \"" + cfg.string() + "\" --out \"" + dir.string() +
                  "\" reconstruct"),
              0);
    EXPECT_EQ(io::Json::parse(slurp(dir / "run.json"))["algorithm"], "dsm");
}
