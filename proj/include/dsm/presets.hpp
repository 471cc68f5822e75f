/**
 * @file presets.hpp
 * @brief The five reference experiments as ready-made configurations.
 *
 * Each preset carries exact source locations and intensities and a fixed
 * noise seed.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "io.hpp"

namespace dsm::presets {

inline constexpr int count = 5;

namespace detail {

inline io::SourceSpec monopole(std::vector<double> z, double lambda) {
    return io::SourceSpec{std::move(z), Complex(lambda, 0.0), std::vector<Complex>(0)};
}

inline io::SourceSpec dipole(std::vector<double> z, std::vector<double> eta) {
    io::SourceSpec s{std::move(z), Complex{}, {}};
    for (double e : eta) s.eta.emplace_back(e, 0.0);
    return s;
}

inline io::ExperimentConfig planar(std::string name, double k, double radius, double half_width) {
    io::ExperimentConfig c;
    c.name = std::move(name);
    c.dims = 2;
    c.wavenumber = k;
    c.radius = radius;
    c.measurement.count = 200;
    c.directions.count = 256;
    c.noise_level = 0.05;
    c.grid = io::GridSpec{{-half_width, -half_width}, {half_width, half_width}, {100, 100}};
    c.algorithm = "dsm2";
    c.locator.fine_points = 40;
    return c;
}

inline io::ExperimentConfig spatial(std::string name, double noise) {
    io::ExperimentConfig c;
    c.name = std::move(name);
    c.dims = 3;
    c.wavenumber = 10.0;
    c.radius = 6.0;
    c.measurement.n_theta = 42;
    c.measurement.n_phi = 43;
    c.directions.n_theta = 42;
    c.directions.n_phi = 43;
    c.noise_level = noise;
    c.grid = io::GridSpec{{-3.0, -3.0, -3.0}, {3.0, 3.0, 3.0}, {30, 30, 30}};
    c.algorithm = "dsm2";
    c.locator.fine_points = 20;
    return c;
}

inline void fill_eta(io::ExperimentConfig& c) {
    for (auto& s : c.sources)
        if (s.eta.empty()) s.eta.assign(static_cast<std::size_t>(c.dims), Complex{});
}

}  // namespace detail

/// Preset configuration for reference experiment 1..5.
inline io::ExperimentConfig example(int id) {
    using detail::dipole;
    using detail::monopole;
    io::ExperimentConfig c;
    const double r2 = std::sqrt(2.0);
    switch (id) {
        case 1:
            c = detail::planar("example1", 15.0, 6.0, 4.0);
            c.sources = {monopole({2, 3}, 9), monopole({-3, -2}, 8), monopole({-2, 3}, 8), monopole({3, -3}, 7)};
            break;
        case 2:
            c = detail::planar("example2", 18.0, 5.0, 3.0);
            c.sources = {dipole({-1.5, -1.5}, {-r2, r2}), dipole({1.5, -2}, {r2, r2})};
            break;
        case 3:
            c = detail::planar("example3", 20.0, 5.0, 3.0);
            c.sources = {monopole({-1, 2}, 10), dipole({2, -1.5}, {1, 0}), dipole({-2, -2}, {0, 1})};
            break;
        case 4:
            c = detail::spatial("example4", 0.10);
            c.sources = {monopole({1, 1, 2}, 5), monopole({1, -1, -1.5}, 5), monopole({-2, 1, 0}, 5)};
            c.dsm_grid = io::GridSpec{{-3.0, -3.0, -3.0}, {3.0, 3.0, 3.0}, {60, 60, 60}};
            c.locator.components = "monopole";
            break;
        case 5:
            c = detail::spatial("example5", 0.15);
            c.sources = {monopole({1, 1, 2}, 9), dipole({1, -1, -1.5}, {1, 0, 0}), dipole({-2, 1, 0}, {0, 0, 1})};
            break;
        default:
            throw io::ValidationError("example id must be between 1 and 5");
    }
    detail::fill_eta(c);
    c.seed = 1000u + static_cast<unsigned>(id);
    c.output = "out/" + c.name;
    io::validate(c);
    return c;
}

}  // namespace dsm::presets
