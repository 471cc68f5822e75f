// Acceptance suite: one PASS/FAIL line per criterion 1..10.
// Exit status is the number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <dsm/dsm.hpp>

using namespace dsm;
namespace fs = std::filesystem;

namespace {

constexpr int seed_count = 5;

std::uint64_t seed_for(int example, int s) { return 1000u + static_cast<unsigned>(example) + 17u * s; }

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        passed = passed && ok;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <int N>
struct Trial {
    SourceEnsemble<N> truth;
    Reconstruction<N> rec;
    std::vector<SourceMatch> matches;

    double worst_error() const {
        double w = 0.0;
        for (const auto& m : matches) w = std::max(w, m.error);
        return w;
    }
    bool kinds_match() const {
        for (const auto& m : matches)
            if (!m.group ||
                (rec.groups[*m.group].kind == SourceKind::monopole) != truth.sources[m.source].is_monopole())
                return false;
        return true;
    }
};

template <int N>
Trial<N> run_trial(io::ExperimentConfig config, Algorithm algorithm, std::uint64_t seed) {
    config.seed = seed;
    const auto data = synthesize<N>(config);
    Trial<N> t;
    t.truth = data.ensemble;
    t.rec = reconstruct<N>(config, data.noisy, algorithm);
    t.matches = match_sources<N>(t.truth, t.rec);
    return t;
}

/// Recovered count equals the truth and every source lies within tolerance, over all seeds.
template <int N>
Outcome located_across_seeds(int example, double tolerance) {
    Outcome o;
    double worst = 0.0;
    bool counts = true, kinds = true;
    for (int s = 0; s < seed_count; ++s) {
        const auto t = run_trial<N>(presets::example(example), Algorithm::dsm2, seed_for(example, s));
        counts = counts && t.rec.estimated_count() == t.truth.size();
        kinds = kinds && t.kinds_match();
        worst = std::max(worst, t.worst_error());
    }
    o.require(counts, std::string("M~ = M on all seeds: ") + (counts ? "yes" : "no"));
    o.require(worst <= tolerance, fmt("worst error %.4f (tolerance %.2f)", worst, tolerance));
    o.detail += std::string("; kinds ") + (kinds ? "correct" : "wrong on some seed");
    return o;
}

// ----------------------------------------------------------------- criteria

Outcome criterion_specfun() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = verify::specfun_checks();
    const double elapsed = seconds_since(t0);
    double worst = 0.0;
    for (const auto& c : checks) worst = std::max(worst, c.value);
    o.require(verify::all_passed(checks), fmt("worst deviation %.2e (tolerance 1e-10)", worst));
    o.require(elapsed < 5.0, fmt("runtime %.2f s (limit 5 s)", elapsed));
    return o;
}

Outcome criterion_moments() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = verify::moment_checks(20);
    const double elapsed = seconds_since(t0);
    o.require(verify::all_passed(checks), fmt("2D %.2e, 3D %.2e (tolerance 1e-10)", checks[0].value, checks[1].value));
    o.require(elapsed < 30.0, fmt("runtime %.2f s (limit 30 s)", elapsed));
    return o;
}

Outcome criterion_identity() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = verify::identity_checks();
    const double elapsed = seconds_since(t0);
    o.require(verify::all_passed(checks),
              fmt("example 1 %.2e, example 4 %.2e (tolerance 1e-8)", checks[0].value, checks[1].value));
    o.require(elapsed < 60.0, fmt("runtime %.2f s (limit 60 s)", elapsed));
    return o;
}

Outcome criterion_decay() {
    Outcome o;
    const auto checks = verify::decay_checks();
    o.require(verify::all_passed(checks),
              fmt("slope deviation 2D %.4f, 3D %.4f (tolerance 0.15)", checks[0].value, checks[1].value));
    return o;
}

Outcome criterion_example1() {
    const auto t0 = std::chrono::steady_clock::now();
    auto o = located_across_seeds<2>(1, 0.12);
    const double elapsed = seconds_since(t0) / seed_count;
    o.require(elapsed < 120.0, fmt("runtime %.2f s per seed (limit 120 s)", elapsed));
    return o;
}

/// Per component, the three largest local maximizers at least 4pi/k apart; for each
/// source, the three components' maximizers nearest to it form its triplet.
Outcome criterion_example3() {
    Outcome o;
    const auto c = presets::example(3);
    const auto data = synthesize<2>(c);
    const auto rec = reconstruct<2>(c, data.noisy, Algorithm::dsm2, true);
    const auto truth = data.ensemble;
    double worst = 0.0;
    for (const auto& m : match_sources<2>(truth, rec)) worst = std::max(worst, m.error);
    o.require(rec.estimated_count() == 3, "M~ = " + std::to_string(rec.estimated_count()));
    o.require(worst <= 0.12, fmt("worst error %.4f (tolerance 0.12)", worst));

    const double wavelength = 2.0 * std::numbers::pi / c.wavenumber;
    std::vector<std::vector<Peak<2>>> top;
    for (const auto& f : rec.fields) {
        auto peaks = find_peaks<2>(f, 1e-6, 2.0 * wavelength);
        peaks.resize(std::min<std::size_t>(peaks.size(), 3));
        top.push_back(std::move(peaks));
    }
    bool one_per_source = top.size() == 3;
    double spread = 0.0;
    for (const auto& peaks : top) {
        std::vector<bool> used(peaks.size(), false);
        for (const auto& src : truth.sources) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < peaks.size(); ++i)
                if (distance<2>(peaks[i].location, src.location) < distance<2>(peaks[best].location, src.location))
                    best = i;
            one_per_source = one_per_source && !peaks.empty() && !used[best];
            if (!peaks.empty()) used[best] = true;
        }
    }
    for (const auto& src : truth.sources) {
        std::vector<Vec<2>> triplet;
        for (const auto& peaks : top) {
            const auto it = std::min_element(peaks.begin(), peaks.end(), [&](const auto& x, const auto& y) {
                return distance<2>(x.location, src.location) < distance<2>(y.location, src.location);
            });
            if (it != peaks.end()) triplet.push_back(it->location);
        }
        for (const auto& p : triplet)
            for (const auto& q : triplet) spread = std::max(spread, distance<2>(p, q));
    }
    o.require(one_per_source,
              std::string("top three maximizers of each component fall one per source: ") +
                  (one_per_source ? "yes" : "no"));
    o.require(spread <= wavelength, fmt("widest triplet %.4f (limit 2pi/k = %.4f)", spread, wavelength));
    return o;
}

Outcome criterion_example4() {
    Outcome o;
    auto c = presets::example(4);
    const auto data = synthesize<3>(c);
    const auto truth = data.ensemble;
    const auto dsm1 = reconstruct<3>(c, data.noisy, Algorithm::dsm);
    const auto dsm2 = reconstruct<3>(c, data.noisy, Algorithm::dsm2);
    auto worst = [&](const Reconstruction<3>& r) {
        double w = 0.0;
        for (const auto& m : match_sources<3>(truth, r)) w = std::max(w, m.error);
        return w;
    };
    o.require(dsm1.estimated_count() == 3 && dsm2.estimated_count() == 3,
              "M~ DSM " + std::to_string(dsm1.estimated_count()) + ", DSM2 " + std::to_string(dsm2.estimated_count()));
    o.require(worst(dsm2) <= 0.10, fmt("DSM2 worst error %.4f (tolerance 0.10)", worst(dsm2)));
    o.require(worst(dsm1) <= 0.10, fmt("DSM worst error %.4f (tolerance 0.10)", worst(dsm1)));
    const double ratio = dsm2.timings.total_seconds / dsm1.timings.total_seconds;
    o.require(ratio <= 0.1, fmt("DSM2/DSM wall time %.3f (limit 0.100)", ratio) +
                                fmt(", DSM %.2f s, DSM2 %.2f s", dsm1.timings.total_seconds,
                                    dsm2.timings.total_seconds));
    return o;
}

Outcome criterion_example5() { return located_across_seeds<3>(5, 0.16); }

Outcome criterion_intensity() {
    Outcome o;
    const double single = verify::readoff_worst();
    o.require(single <= 1e-8, fmt("single-source read-off %.2e (tolerance 1e-8)", single));
    double worst = 0.0;
    bool matched = true;
    for (int s = 0; s < seed_count; ++s) {
        const auto t = run_trial<2>(presets::example(1), Algorithm::dsm2, seed_for(1, s));
        for (const auto& m : t.matches) {
            if (!m.group) {
                matched = false;
                continue;
            }
            const Complex truth = t.truth.sources[m.source].scalar_intensity;
            worst = std::max(worst, std::abs(t.rec.groups[*m.group].scalar_estimate - truth) / std::abs(truth));
        }
    }
    o.require(matched, std::string("all example 1 sources matched: ") + (matched ? "yes" : "no"));
    o.require(worst <= 0.20, fmt("example 1 worst relative intensity error %.4f (tolerance 0.20)", worst));
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes every CSV output of one preset run into dir.
template <int N>
void write_run(io::ExperimentConfig config, unsigned threads, const fs::path& dir) {
    config.threads = static_cast<int>(threads);
    const auto data = synthesize<N>(config);
    io::write_cauchy_csv<N>(dir / "cauchy.csv", data.clean, data.noisy);
    write_reconstruction_outputs<N>(dir, config, reconstruct<N>(config, data.noisy, Algorithm::dsm2, true));
    if (config.dsm_grid)
        write_reconstruction_outputs<N>(dir, config, reconstruct<N>(config, data.noisy, Algorithm::dsm, true), "_dsm");
}

Outcome criterion_determinism() {
    Outcome o;
    const auto root = fs::temp_directory_path() / "helio_dsm_acceptance";
    std::size_t files = 0, differing = 0;
    for (int id = 1; id <= 5; ++id) {
        const auto config = presets::example(id);
        std::vector<fs::path> dirs;
        for (unsigned threads : {1u, 2u, 5u}) {
            const auto dir = root / ("example" + std::to_string(id)) / ("threads" + std::to_string(threads));
            fs::remove_all(dir);
            fs::create_directories(dir);
            if (config.dims == 2) write_run<2>(config, threads, dir);
            else write_run<3>(config, threads, dir);
            dirs.push_back(dir);
        }
        for (const auto& entry : fs::directory_iterator(dirs[0])) {
            if (entry.path().extension() != ".csv") continue;
            ++files;
            const auto ref = slurp(entry.path());
            for (std::size_t i = 1; i < dirs.size(); ++i)
                if (slurp(dirs[i] / entry.path().filename()) != ref) ++differing;
        }
    }
    fs::remove_all(root);
    o.require(files > 0 && differing == 0, std::to_string(files) + " CSV files per thread count (1, 2, 5), " +
                                               std::to_string(differing) + " differing");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"special-function identities and bounds", criterion_specfun},
        {"moment closed forms vs quadrature", criterion_moments},
        {"plane-wave identity, refined quadrature", criterion_identity},
        {"moment decay rates", criterion_decay},
        {"example 1 location, 5 seeds", criterion_example1},
        {"example 3 location and maximizer triplets", criterion_example3},
        {"example 4 DSM vs DSM2 location and wall time", criterion_example4},
        {"example 5 location, 5 seeds", criterion_example5},
        {"intensity read-off", criterion_intensity},
        {"bitwise determinism across thread counts", criterion_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.passed ? 0 : 1;
        std::printf("%s criterion %zu: %s [%s]\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed;
}
