/**
 * @file verify.hpp
 * @brief Oracle suites: special-function identities, closed-form moments,
 *        the plane-wave identity, decay slopes and single-source read-off.
 *
 * Each suite returns named checks carrying the measured deviation and the
 * tolerance it is held to.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "forward.hpp"
#include "geometry.hpp"
#include "indicators.hpp"
#include "io.hpp"
#include "locator.hpp"
#include "presets.hpp"
#include "specfun.hpp"

namespace dsm::verify {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

inline Check make_check(std::string name, double value, double tolerance) {
    return Check{std::move(name), value, tolerance, std::isfinite(value) && value <= tolerance};
}

inline bool all_passed(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

inline std::string report(const std::vector<Check>& checks) {
    std::string out;
    for (const auto& c : checks) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-4s  %-44s %.3e  (tolerance %.1e)\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.value, c.tolerance);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Special functions.

/// Wronskian, both small-argument bound families, recurrence and branch agreement.
inline std::vector<Check> specfun_checks() {
    using namespace specfun;
    std::vector<Check> out;

    double wronskian = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double t = 0.1 + (100.0 - 0.1) * i / 1999.0;
        const double w = bessel_j(1, t) * bessel_y(0, t) - bessel_j(0, t) * bessel_y(1, t);
        wronskian = std::max(wronskian, std::abs(w - 2.0 / (std::numbers::pi * t)));
    }
    out.push_back(make_check("wronskian J1Y0-J0Y1 on [0.1,100]", wronskian, 1e-10));

    // Amount by which v leaves (lo, hi); 0 inside.
    auto violation = [](double lo, double v, double hi) { return std::max({0.0, lo - v, v - hi}); };
    double cyl = 0.0, sph = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double t = i / 1000.0;
        const double t2 = t * t, t4 = t2 * t2;
        cyl = std::max({cyl, violation(0.0, bessel_j(0, t), 1.0 - t2 / 4.0 + t4 / 64.0),
                        violation(0.0, bessel_j(1, t), t / 2.0), violation(0.0, bessel_j(2, t), t2 / 8.0)});
        sph = std::max({sph, violation(0.0, spherical_j(0, t), 1.0 - t2 / 6.0 + t4 / 120.0),
                        violation(0.0, spherical_j(1, t), t / 3.0), violation(0.0, spherical_j(2, t), t2 / 15.0)});
    }
    out.push_back(make_check("cylinder small-argument bounds on (0,1)", cyl, 1e-10));
    out.push_back(make_check("spherical small-argument bounds on (0,1)", sph, 1e-10));

    double recurrence = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double t = 0.5 + (100.0 - 0.5) * i / 1999.0;
        recurrence = std::max(recurrence,
                              std::abs(bessel_j(2, t) - (2.0 / t) * bessel_j(1, t) + bessel_j(0, t)));
    }
    out.push_back(make_check("recurrence J2 = (2/t)J1 - J0 on [0.5,100]", recurrence, 1e-10));

    double branch = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = 8.0 + 4.0 * i / 400.0;
        const auto seq = specfun::detail::bessel_j_sequence(t);
        const auto yr = specfun::detail::bessel_y_recurrence(t, seq);
        const auto ys = specfun::detail::bessel_y_series(t);
        for (int n = 0; n <= 2; ++n)
            branch = std::max(branch, std::abs(specfun::detail::bessel_j_series(n, t) - seq[static_cast<std::size_t>(n)]));
        branch = std::max({branch, std::abs(yr[0] - ys[0]), std::abs(yr[1] - ys[1])});
    }
    for (int i = 0; i <= 400; ++i) {
        const double t = 0.3 + 0.4 * i / 400.0;
        for (int n = 0; n <= 2; ++n)
            branch = std::max(branch, std::abs(specfun::detail::spherical_j_series(n, t) -
                                               specfun::detail::spherical_j_closed(n, t)));
    }
    out.push_back(make_check("branch agreement on [8,12] and [0.3,0.7]", branch, 1e-9));
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form moments against direction quadrature.

inline std::vector<double> moment_radii() { return {0.0, 1.0, 5.0, 20.0, 50.0}; }

/// Worst |quadrature - closed form| over all index pairs, radii and orientations.
template <int N>
double moment_deviation(int orientations, std::uint64_t seed = 7) {
    const auto directions = [] {
        if constexpr (N == 2) return circle_directions(512);
        else return sphere_directions(64, 128);
    }();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int o = 0; o < orientations; ++o) {
        Vec<N> axis{};
        for (auto& c : axis) c = gauss(rng);
        axis = (1.0 / norm<N>(axis)) * axis;
        for (double r : moment_radii()) {
            const Vec<N> z = r * axis;
            for (int p = 0; p <= N; ++p)
                for (int q = p; q <= N; ++q)
                    worst = std::max(worst, std::abs(moment_quadrature<N>(directions, p, q, z, 1.0) -
                                                     moment<N>(p, q, z, 1.0)));
        }
    }
    return worst;
}

inline std::vector<Check> moment_checks(int orientations = 20) {
    return {make_check("2D moments (6 forms) vs 512-node quadrature", moment_deviation<2>(orientations), 1e-10),
            make_check("3D moments (10 forms) vs 64x128 quadrature", moment_deviation<3>(orientations), 1e-10)};
}

// ---------------------------------------------------------------------------
// Plane-wave identity on a refined measurement surface.

template <int N>
MeasurementSurface<N> refined_surface(double radius) {
    if constexpr (N == 2) return circle_surface(radius, 2048);
    else return sphere_surface(radius, 64, 128);
}

/// max_d |R_quadrature(d) - R_closed(d)| / max_d |R_closed(d)| for noise-free data.
template <int N>
double identity_deviation(const SourceEnsemble<N>& ensemble, double k, double radius,
                          const DirectionSet<N>& directions) {
    const auto data = synthesize_cauchy<N>(ensemble, k, refined_surface<N>(radius));
    const auto reduced = reduced_data<N>(data, k, directions);
    double diff = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < directions.size(); ++j) {
        const Complex exact = plane_wave_identity<N>(ensemble, k, directions.nodes[j]);
        diff = std::max(diff, std::abs(reduced.values[j] - exact));
        scale = std::max(scale, std::abs(exact));
    }
    return diff / scale;
}

template <int N>
double preset_identity_deviation(int id) {
    const auto config = presets::example(id);
    return identity_deviation<N>(io::make_ensemble<N>(config), config.wavenumber, config.radius,
                                 io::make_directions<N>(config));
}

inline std::vector<Check> identity_checks() {
    return {make_check("plane-wave identity, example 1 ensemble", preset_identity_deviation<2>(1), 1e-8),
            make_check("plane-wave identity, example 4 ensemble", preset_identity_deviation<3>(4), 1e-8)};
}

// ---------------------------------------------------------------------------
// Decay of the closed-form moments.

inline std::vector<double> decay_samples(int count = 25) {
    std::vector<double> kl;
    for (int i = 0; i < count; ++i) kl.push_back(20.0 * std::pow(100.0, i / double(count - 1)));
    return kl;
}

/// Worst |slope - expected| over every index pair of one dimension.
inline double decay_slope_deviation(int dims) {
    const auto kl = decay_samples();
    const double expected = dims == 2 ? -0.5 : -1.0;
    double worst = 0.0;
    for (int p = 0; p <= dims; ++p)
        for (int q = p; q <= dims; ++q)
            worst = std::max(worst, std::abs(loglog_slope(kl, decay_probe(dims, p, q, kl)) - expected));
    return worst;
}

inline std::vector<Check> decay_checks() {
    return {make_check("2D moment decay slope vs -1/2 on kL in [20,2000]", decay_slope_deviation(2), 0.15),
            make_check("3D moment decay slope vs -1 on kL in [20,2000]", decay_slope_deviation(3), 0.15)};
}

// ---------------------------------------------------------------------------
// Exact read-off for a single source.

/// Max deviation of (I_0, I_1.., I_N) at z_1 from (lambda_1, eta_1) for noise-free data.
template <int N>
double readoff_deviation(const PointSource<N>& source, double k, double radius, double coefficient_scale = 1.0) {
    SourceEnsemble<N> ensemble;
    ensemble.sources.push_back(source);
    const auto data = synthesize_cauchy<N>(ensemble, k, refined_surface<N>(radius));
    IndicatorOptions options;
    options.coefficient_scale = coefficient_scale;
    const IndicatorEvaluator<N> evaluator(reduced_data<N>(data, k, default_directions<N>()), k, options);
    double worst = std::abs(evaluator.at(source.location, 0) - source.scalar_intensity);
    for (int l = 1; l <= N; ++l)
        worst = std::max(worst, std::abs(evaluator.at(source.location, l) -
                                         source.vector_intensity[static_cast<std::size_t>(l - 1)]));
    return worst;
}

inline double readoff_worst(double coefficient_scale = 1.0) {
    using C = Complex;
    const double r2 = readoff_deviation<2>(PointSource<2>::monopole({0.7, -0.4}, C(3.0, -2.0)), 15.0, 6.0,
                                           coefficient_scale);
    const double d2 = readoff_deviation<2>(PointSource<2>::dipole({-1.0, 0.5}, {C(1.0, 0.5), C(-2.0, 0.0)}), 15.0,
                                           6.0, coefficient_scale);
    const double r3 = readoff_deviation<3>(PointSource<3>::monopole({1.0, -1.0, 0.5}, C(5.0, 0.0)), 10.0, 6.0,
                                           coefficient_scale);
    const double d3 = readoff_deviation<3>(
        PointSource<3>::dipole({-0.5, 1.0, -1.5}, {C(0.0, 1.0), C(1.0, 0.0), C(0.5, -0.5)}), 10.0, 6.0,
        coefficient_scale);
    return std::max({r2, d2, r3, d3});
}

inline std::vector<Check> readoff_checks(double coefficient_scale = 1.0) {
    return {make_check("single-source read-off (2D and 3D)", readoff_worst(coefficient_scale), 1e-8)};
}

// ---------------------------------------------------------------------------

/// quick: every oracle except the decay fits; full adds them.
inline std::vector<Check> run(bool full, double coefficient_scale = 1.0) {
    std::vector<Check> out;
    for (auto&& group : {specfun_checks(), moment_checks(), identity_checks(), readoff_checks(coefficient_scale)})
        out.insert(out.end(), group.begin(), group.end());
    if (full) {
        const auto decay = decay_checks();
        out.insert(out.end(), decay.begin(), decay.end());
    }
    return out;
}

}  // namespace dsm::verify
