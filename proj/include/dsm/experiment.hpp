/**
 * @file experiment.hpp
 * @brief End-to-end pipeline shared by the CLI and the acceptance suite:
 *        synthesize, perturb, reconstruct, match against the truth, export.
 */
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "forward.hpp"
#include "io.hpp"
#include "locator.hpp"

namespace dsm {

template <int N>
struct SynthesizedData {
    SourceEnsemble<N> ensemble;
    CauchyData<N> clean;
    CauchyData<N> noisy;
    std::vector<std::string> warnings;
};

template <int N>
SynthesizedData<N> synthesize(const io::ExperimentConfig& config) {
    SynthesizedData<N> out;
    out.ensemble = io::make_ensemble<N>(config);
    out.clean = synthesize_cauchy<N>(out.ensemble, config.wavenumber, io::make_surface<N>(config));
    const NoiseSpec noise{config.noise_level, config.seed};
    if (auto w = noise.validate()) out.warnings.push_back(*w);
    out.noisy = add_noise<N>(out.clean, noise);
    for (auto& w : check_assumptions<N>(out.ensemble, config.wavenumber).warnings) out.warnings.push_back(w);
    return out;
}

/// Runs DSM on dsm_grid (falling back to grid) or DSM2 on grid.
template <int N>
Reconstruction<N> reconstruct(const io::ExperimentConfig& config, const CauchyData<N>& data, Algorithm algorithm,
                              bool keep_fields = false) {
    auto options = io::make_locator_options(config);
    options.keep_fields = keep_fields;
    const auto directions = io::make_directions<N>(config);
    if (algorithm == Algorithm::dsm) {
        const auto& spec = config.dsm_grid ? *config.dsm_grid : config.grid;
        return dsm<N>(data, config.wavenumber, io::make_sampling_grid<N>(spec), directions, options);
    }
    return dsm2<N>(data, config.wavenumber, io::make_sampling_grid<N>(config.grid), directions, options);
}

struct SourceMatch {
    std::size_t source = 0;
    /// Matched group, absent when there are fewer groups than sources.
    std::optional<std::size_t> group;
    double error = std::numeric_limits<double>::infinity();
};

/// One-to-one assignment of true sources to recovered groups minimizing the
/// summed location error (exhaustive search; ensembles are small).
template <int N>
std::vector<SourceMatch> match_sources(const SourceEnsemble<N>& truth, const Reconstruction<N>& rec) {
    const std::size_t m = truth.size();
    const std::size_t g = rec.groups.size();
    std::vector<std::vector<double>> cost(m, std::vector<double>(g));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < g; ++j)
            cost[i][j] = distance<N>(truth.sources[i].location, rec.groups[j].centroid);

    std::vector<std::optional<std::size_t>> best(m), current(m);
    double best_total = std::numeric_limits<double>::infinity();
    std::size_t best_matched = 0;
    std::vector<bool> used(g, false);
    auto search = [&](auto&& self, std::size_t i, double total, std::size_t matched) -> void {
        if (i == m) {
            if (matched > best_matched || (matched == best_matched && total < best_total)) {
                best_matched = matched;
                best_total = total;
                best = current;
            }
            return;
        }
        for (std::size_t j = 0; j < g; ++j) {
            if (used[j]) continue;
            used[j] = true;
            current[i] = j;
            self(self, i + 1, total + cost[i][j], matched + 1);
            used[j] = false;
        }
        if (g < m) {
            current[i].reset();
            self(self, i + 1, total, matched);
        }
    };
    search(search, 0, 0.0, 0);

    std::vector<SourceMatch> out;
    for (std::size_t i = 0; i < m; ++i) {
        SourceMatch s;
        s.source = i;
        s.group = best[i];
        if (best[i]) s.error = cost[i][*best[i]];
        out.push_back(s);
    }
    return out;
}

template <int N>
std::string format_point(const Vec<N>& p) {
    std::ostringstream ss;
    ss << '(';
    for (int a = 0; a < N; ++a) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", p[a]);
        ss << (a ? ", " : "") << buf;
    }
    ss << ')';
    return ss.str();
}

/// Plain-text table: exact location, recovered centroid, error, kind, intensity estimate.
template <int N>
std::string comparison_table(const SourceEnsemble<N>& truth, const Reconstruction<N>& rec) {
    constexpr std::size_t width = N == 2 ? 24 : 32;
    auto pad = [](const std::string& s) { return s + std::string(s.size() < width ? width - s.size() : 1, ' '); };
    std::ostringstream ss;
    ss << "source  " << pad("exact") << pad("recovered") << "error    kind      lambda~ / |eta~|\n";
    const auto matches = match_sources<N>(truth, rec);
    for (const auto& m : matches) {
        const auto& src = truth.sources[m.source];
        const auto exact = format_point<N>(src.location);
        ss << "  " << m.source + 1 << "     " << pad(exact);
        if (!m.group) {
            ss << "(missing)\n";
            continue;
        }
        const auto& grp = rec.groups[*m.group];
        const auto got = format_point<N>(grp.centroid);
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.4f   %-9s %.4f%+.4fi / %.4f", m.error, to_string(grp.kind),
                      grp.scalar_estimate.real(), grp.scalar_estimate.imag(), norm<N>(grp.vector_estimate));
        ss << pad(got) << buf << '\n';
    }
    ss << "estimated count: " << rec.estimated_count() << " (true " << truth.size() << ")\n";
    return ss.str();
}

/// Writes indicator_<l>.csv (when fields were kept), reconstruction.csv and run.json.
template <int N>
void write_reconstruction_outputs(const std::filesystem::path& dir, const io::ExperimentConfig& config,
                                  const Reconstruction<N>& rec, const std::string& suffix = "") {
    for (const auto& f : rec.fields)
        io::write_indicator_csv<N>(dir / ("indicator_" + std::to_string(f.component) + suffix + ".csv"), f);
    io::write_reconstruction_csv<N>(dir / ("reconstruction" + suffix + ".csv"), rec, config.wavenumber);
    io::write_json(dir / ("run" + suffix + ".json"), io::run_record<N>(config, rec));
}

}  // namespace dsm
