#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <dsm/dsm.hpp>

using namespace dsm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("helio_dsm_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

io::Json example_json(int id) { return io::to_json(presets::example(id)); }

}  // namespace

TEST(Numbers, ShortestRoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng) * std::pow(10.0, i % 40 - 20);
        EXPECT_EQ(io::parse_double(io::format_double(v)), v);
    }
    EXPECT_THROW(io::parse_double("1.5x"), io::ValidationError);
    EXPECT_THROW(io::parse_double(""), io::ValidationError);
    EXPECT_THROW(io::format_double(std::nan("")), std::invalid_argument);
}

TEST(Config, RoundTripIsIdempotent) {
    for (int id = 1; id <= 5; ++id) {
        const auto j1 = example_json(id);
        const auto j2 = io::to_json(io::config_from_json(j1));
        EXPECT_EQ(j1.dump(), j2.dump()) << "example " << id;
    }
}

TEST(Config, LoadFromFile) {
    const auto dir = scratch("config");
    io::write_json(dir / "c.json", example_json(3));
    const auto c = io::load_config(dir / "c.json");
    EXPECT_EQ(c.dims, 2);
    EXPECT_EQ(c.sources.size(), presets::example(3).sources.size());
    EXPECT_THROW(io::load_config(dir / "missing.json"), io::ValidationError);
    std::ofstream(dir / "bad.json") << "{ not json";
    EXPECT_THROW(io::load_config(dir / "bad.json"), io::ValidationError);
}

TEST(Config, DefaultsForOptionalKeys) {
    auto j = example_json(1);
    j.erase("locator");
    j.erase("noise");
    j.erase("algorithm");
    j["sources"][0].erase("eta");
    const auto c = io::config_from_json(j);
    EXPECT_EQ(c.locator.significance, 0.5);
    EXPECT_EQ(c.noise_level, 0.0);
    EXPECT_EQ(c.algorithm, "dsm2");
    EXPECT_EQ(c.sources[0].eta.size(), 2u);
}

TEST(Config, ValidationErrors) {
    auto mutate = [](auto&& fn) {
        auto j = example_json(1);
        fn(j);
        return j;
    };
    const std::vector<io::Json> bad = {
        mutate([](io::Json& j) { j["sources"] = io::Json::array(); }),
        mutate([](io::Json& j) { j["dims"] = 4; }),
        mutate([](io::Json& j) { j["wavenumber"] = -1.0; }),
        mutate([](io::Json& j) { j["wavenumber"] = "fast"; }),
        mutate([](io::Json& j) { j["sources"][0]["location"] = io::Json::array({1.0}); }),
        mutate([](io::Json& j) { j["noise"]["level"] = 1.0; }),
        mutate([](io::Json& j) { j["noise"]["level"] = -0.1; }),
        mutate([](io::Json& j) { j["grid"]["counts"] = io::Json::array({1, 100}); }),
        mutate([](io::Json& j) { j["grid"]["lower"] = io::Json::array({50.0, -2.0}); }),
        mutate([](io::Json& j) { j["measurement"]["radius"] = 0.0; }),
        mutate([](io::Json& j) { j["algorithm"] = "music"; }),
        mutate([](io::Json& j) { j["locator"]["significance"] = 0.0; }),
        mutate([](io::Json& j) { j["locator"]["components"] = "quadrupole"; }),
        mutate([](io::Json& j) { j["threads"] = -2; }),
        mutate([](io::Json& j) { j.erase("grid"); }),
        io::Json::array(),
    };
    for (std::size_t i = 0; i < bad.size(); ++i)
        EXPECT_THROW(io::config_from_json(bad[i]), io::ValidationError) << "case " << i;
}

TEST(Config, PresetsAreValid) {
    for (int id = 1; id <= 5; ++id) EXPECT_NO_THROW(io::validate(presets::example(id)));
    EXPECT_THROW(presets::example(0), io::ValidationError);
    EXPECT_THROW(presets::example(6), io::ValidationError);
}

TEST(CauchyCsv, ExampleOneHas200Rows) {
    const auto dir = scratch("cauchy1");
    const auto c = presets::example(1);
    const auto data = synthesize<2>(c);
    io::write_cauchy_csv<2>(dir / "cauchy.csv", data.clean, data.noisy);
    const auto t = io::detail::read_csv(dir / "cauchy.csv");
    EXPECT_EQ(t.rows.size(), 200u);
    EXPECT_EQ(t.header.size(), 2u + 2u + 1u + 8u);
}

TEST(CauchyCsv, RoundTripIsExact) {
    const auto dir = scratch("cauchy_rt");
    const auto c = presets::example(4);
    const auto data = synthesize<3>(c);
    io::write_cauchy_csv<3>(dir / "cauchy.csv", data.clean, data.noisy);
    const auto clean = io::read_cauchy_csv<3>(dir / "cauchy.csv", false);
    const auto noisy = io::read_cauchy_csv<3>(dir / "cauchy.csv", true);
    ASSERT_EQ(clean.dirichlet.size(), data.clean.dirichlet.size());
    for (std::size_t i = 0; i < clean.dirichlet.size(); ++i) {
        EXPECT_EQ(clean.surface.points[i], data.clean.surface.points[i]);
        EXPECT_EQ(clean.surface.normals[i], data.clean.surface.normals[i]);
        EXPECT_EQ(clean.surface.weights[i], data.clean.surface.weights[i]);
        EXPECT_EQ(clean.dirichlet[i], data.clean.dirichlet[i]);
        EXPECT_EQ(clean.neumann[i], data.clean.neumann[i]);
        EXPECT_EQ(noisy.dirichlet[i], data.noisy.dirichlet[i]);
        EXPECT_EQ(noisy.neumann[i], data.noisy.neumann[i]);
    }
    EXPECT_NEAR(clean.surface.radius, c.radius, 1e-12);
}

TEST(CauchyCsv, ZeroNoiseColumnsEqualClean) {
    auto c = presets::example(1);
    c.noise_level = 0.0;
    const auto dir = scratch("cauchy_eps0");
    const auto data = synthesize<2>(c);
    io::write_cauchy_csv<2>(dir / "cauchy.csv", data.clean, data.noisy);
    const auto t = io::detail::read_csv(dir / "cauchy.csv");
    for (const std::string col : {"u_re", "u_im", "dnu_re", "dnu_im"}) {
        const auto a = t.column(col);
        const auto b = t.column(col.substr(0, col.find('_')) + "_noisy" + col.substr(col.find('_')));
        for (const auto& row : t.rows) EXPECT_EQ(row[a], row[b]) << col;
    }
}

TEST(CauchyCsv, MalformedFilesAreRejected) {
    const auto dir = scratch("cauchy_bad");
    EXPECT_THROW(io::read_cauchy_csv<2>(dir / "none.csv", false), io::ValidationError);
    std::ofstream(dir / "empty.csv").close();
    EXPECT_THROW(io::read_cauchy_csv<2>(dir / "empty.csv", false), io::ValidationError);
    std::ofstream(dir / "header.csv") << "x,y\n1,2\n";
    EXPECT_THROW(io::read_cauchy_csv<2>(dir / "header.csv", false), io::ValidationError);
    std::ofstream(dir / "ragged.csv") << "a,b\n1\n";
    EXPECT_THROW(io::detail::read_csv(dir / "ragged.csv"), io::ValidationError);
}

TEST(IndicatorCsv, ReadBackMatchesInMemoryField) {
    const auto dir = scratch("indicator");
    auto c = presets::example(1);
    c.grid.counts = {41, 37};
    const auto data = synthesize<2>(c);
    const auto rec = reconstruct<2>(c, data.noisy, Algorithm::dsm2, true);
    ASSERT_EQ(rec.fields.size(), 3u);
    write_reconstruction_outputs<2>(dir, c, rec);
    for (const auto& f : rec.fields) {
        const auto path = dir / ("indicator_" + std::to_string(f.component) + ".csv");
        ASSERT_TRUE(fs::exists(path));
        const auto back = io::read_indicator_csv<2>(path, f.component);
        ASSERT_EQ(back.values.size(), f.values.size());
        EXPECT_EQ(back.grid.counts, f.grid.counts);
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            EXPECT_LE(std::abs(back.values[i] - f.values[i]), 1e-15 * (1.0 + std::abs(f.values[i])));
            EXPECT_LE(distance<2>(back.grid.point(i), f.grid.point(i)), 1e-15);
        }
        const auto t = io::detail::read_csv(path);
        double top = 0.0;
        for (const auto& row : t.rows) top = std::max(top, io::parse_double(row[t.column("normalized")]));
        EXPECT_EQ(top, 1.0);
    }
}

TEST(ReconstructionCsv, ReadBackMatchesGroups) {
    const auto dir = scratch("recon");
    const auto c = presets::example(3);
    const auto data = synthesize<2>(c);
    const auto rec = reconstruct<2>(c, data.noisy, Algorithm::dsm2);
    write_reconstruction_outputs<2>(dir, c, rec);
    const auto rows = io::read_reconstruction_csv(dir / "reconstruction.csv", 2);
    ASSERT_EQ(rows.size(), rec.groups.size());
    for (std::size_t g = 0; g < rows.size(); ++g) {
        EXPECT_EQ(rows[g].centroid[0], rec.groups[g].centroid[0]);
        EXPECT_EQ(rows[g].centroid[1], rec.groups[g].centroid[1]);
        EXPECT_EQ(rows[g].kind, to_string(rec.groups[g].kind));
        EXPECT_EQ(rows[g].lambda, rec.groups[g].scalar_estimate);
    }
    const auto run = io::Json::parse(slurp(dir / "run.json"));
    EXPECT_EQ(run["estimated_count"].get<std::size_t>(), rec.estimated_count());
    EXPECT_TRUE(run["intensities_are_estimates"].get<bool>());
    EXPECT_EQ(run["algorithm"], "dsm2");
}

TEST(Experiment, MatchSourcesIsOptimalAssignment) {
    SourceEnsemble<2> truth;
    truth.sources.push_back(PointSource<2>::monopole({0.0, 0.0}, 1.0));
    truth.sources.push_back(PointSource<2>::monopole({1.0, 0.0}, 1.0));
    Reconstruction<2> rec;
    rec.groups.resize(2);
    rec.groups[0].centroid = {0.6, 0.0};
    rec.groups[1].centroid = {-0.5, 0.0};
    const auto m = match_sources<2>(truth, rec);
    EXPECT_EQ(*m[0].group, 1u);
    EXPECT_EQ(*m[1].group, 0u);
    EXPECT_NEAR(m[0].error, 0.5, 1e-15);
    EXPECT_NEAR(m[1].error, 0.4, 1e-15);
    rec.groups.resize(1);
    const auto partial = match_sources<2>(truth, rec);
    EXPECT_TRUE(partial[0].group.has_value() != partial[1].group.has_value());
}

TEST(Experiment, ComparisonTableListsEverySource) {
    const auto c = presets::example(3);
    const auto data = synthesize<2>(c);
    const auto rec = reconstruct<2>(c, data.noisy, Algorithm::dsm2);
    const auto table = comparison_table<2>(io::make_ensemble<2>(c), rec);
    EXPECT_NE(table.find("estimated count: 3 (true 3)"), std::string::npos) << table;
    EXPECT_EQ(table.find("(missing)"), std::string::npos) << table;
}
