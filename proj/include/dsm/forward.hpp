/**
 * @file forward.hpp
 * @brief Monopole/dipole source ensembles, closed-form radiating fields,
 *        Cauchy data synthesis and the multiplicative noise model.
 *
 * Sign convention: u solves  Delta u + k^2 u = sum_j (lambda_j + eta_j . grad) delta(x - z_j),
 * i.e. u = -sum_j (lambda_j + eta_j . grad) Phi(.; z_j) with Phi the radiating
 * fundamental solution of -(Delta + k^2).
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "specfun.hpp"

namespace dsm {

template <int N>
using ComplexVec = std::array<Complex, N>;

template <int N>
Complex dot(const ComplexVec<N>& a, const Vec<N>& b) {
    Complex s = 0.0;
    for (int i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <int N>
double norm(const ComplexVec<N>& a) {
    double s = 0.0;
    for (const auto& c : a) s += std::norm(c);
    return std::sqrt(s);
}

/// A point source: either a monopole (scalar intensity) or a dipole (vector
/// intensity), never both.
template <int N>
struct PointSource {
    Vec<N> location{};
    Complex scalar_intensity{0.0, 0.0};
    ComplexVec<N> vector_intensity{};

    static PointSource monopole(const Vec<N>& z, Complex lambda) {
        return PointSource{z, lambda, ComplexVec<N>{}};
    }
    static PointSource dipole(const Vec<N>& z, const ComplexVec<N>& eta) {
        return PointSource{z, Complex{}, eta};
    }

    bool is_monopole() const { return std::abs(scalar_intensity) > 0.0; }
};

template <int N>
struct SourceEnsemble {
    std::vector<PointSource<N>> sources;

    std::size_t size() const { return sources.size(); }

    /// Minimum pairwise distance L; +inf for a single source.
    double min_separation() const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < sources.size(); ++i)
            for (std::size_t j = i + 1; j < sources.size(); ++j)
                best = std::min(best, distance<N>(sources[i].location, sources[j].location));
        return best;
    }

    void validate() const {
        if (sources.empty()) throw std::invalid_argument("ensemble: at least one source is required");
        for (std::size_t i = 0; i < sources.size(); ++i) {
            const auto& s = sources[i];
            for (double c : s.location)
                if (!std::isfinite(c)) throw std::invalid_argument("ensemble: non-finite source location");
            const double lam = std::abs(s.scalar_intensity);
            const double eta = norm<N>(s.vector_intensity);
            if (!std::isfinite(lam) || !std::isfinite(eta))
                throw std::invalid_argument("ensemble: non-finite intensity");
            if (lam + eta == 0.0)
                throw std::invalid_argument("ensemble: source " + std::to_string(i) + " has zero intensity");
            if (lam * eta != 0.0)
                throw std::invalid_argument("ensemble: source " + std::to_string(i) +
                                            " is both monopole and dipole");
        }
        if (!(min_separation() > 0.0)) throw std::invalid_argument("ensemble: source locations must be distinct");
    }
};

namespace detail {

inline void check_wavenumber(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("wavenumber must be positive");
}

template <int N>
double offset_or_throw(const Vec<N>& x, const Vec<N>& z, Vec<N>& t) {
    t = x - z;
    const double r = norm<N>(t);
    if (!(r > 0.0)) throw std::domain_error("field evaluated at a source location");
    return r;
}

}  // namespace detail

/// u(x) in 2D: -(i/4) sum [lambda H0(kr) - k (eta.t/r) H1(kr)].
inline Complex field_2d(const SourceEnsemble<2>& ensemble, double k, const Vec<2>& x) {
    detail::check_wavenumber(k);
    Complex sum = 0.0;
    for (const auto& s : ensemble.sources) {
        Vec<2> t{};
        const double r = detail::offset_or_throw<2>(x, s.location, t);
        const auto h = specfun::hankel1_pair(k * r);
        sum += s.scalar_intensity * h[0] - k * dot<2>(s.vector_intensity, t) / r * h[1];
    }
    return Complex(0.0, -0.25) * sum;
}

/// nu . grad u in 2D.
inline Complex neumann_2d(const SourceEnsemble<2>& ensemble, double k, const Vec<2>& x, const Vec<2>& normal) {
    detail::check_wavenumber(k);
    Complex sum = 0.0;
    for (const auto& s : ensemble.sources) {
        Vec<2> t{};
        const double r = detail::offset_or_throw<2>(x, s.location, t);
        const auto h = specfun::hankel1_pair(k * r);
        const double nt = dot<2>(normal, t);
        const Complex eta_t = dot<2>(s.vector_intensity, t);
        const Complex eta_n = dot<2>(s.vector_intensity, normal);
        sum += ((s.scalar_intensity * nt + eta_n) * h[1] * (r * r) +
                eta_t * (k * r * h[0] - 2.0 * h[1]) * nt) / (r * r * r);
    }
    return Complex(0.0, 0.25 * k) * sum;
}

/// u(x) in 3D: -(1/4pi) sum e^{ikr}/r^3 (lambda r^2 + eta.t (ikr - 1)).
inline Complex field_3d(const SourceEnsemble<3>& ensemble, double k, const Vec<3>& x) {
    detail::check_wavenumber(k);
    Complex sum = 0.0;
    for (const auto& s : ensemble.sources) {
        Vec<3> t{};
        const double r = detail::offset_or_throw<3>(x, s.location, t);
        const Complex phase = std::polar(1.0, k * r);
        sum += phase / (r * r * r) *
               (s.scalar_intensity * (r * r) + dot<3>(s.vector_intensity, t) * Complex(-1.0, k * r));
    }
    return -sum / (4.0 * std::numbers::pi);
}

/// nu . grad u in 3D.
inline Complex neumann_3d(const SourceEnsemble<3>& ensemble, double k, const Vec<3>& x, const Vec<3>& normal) {
    detail::check_wavenumber(k);
    Complex sum = 0.0;
    for (const auto& s : ensemble.sources) {
        Vec<3> t{};
        const double r = detail::offset_or_throw<3>(x, s.location, t);
        const Complex phase = std::polar(1.0, k * r);
        const double nt = dot<3>(normal, t);
        const Complex eta_t = dot<3>(s.vector_intensity, t);
        const Complex eta_n = dot<3>(s.vector_intensity, normal);
        const Complex ikr1(-1.0, k * r);
        const Complex quad(k * k * r * r - 3.0, 3.0 * k * r);
        const double r2 = r * r;
        sum += phase / (r2 * r2 * r) * ((s.scalar_intensity * nt + eta_n) * ikr1 * r2 - eta_t * quad * nt);
    }
    return -sum / (4.0 * std::numbers::pi);
}

template <int N>
Complex field(const SourceEnsemble<N>& ensemble, double k, const Vec<N>& x) {
    if constexpr (N == 2) return field_2d(ensemble, k, x);
    else return field_3d(ensemble, k, x);
}

template <int N>
Complex neumann(const SourceEnsemble<N>& ensemble, double k, const Vec<N>& x, const Vec<N>& normal) {
    if constexpr (N == 2) return neumann_2d(ensemble, k, x, normal);
    else return neumann_3d(ensemble, k, x, normal);
}

/// Dirichlet and Neumann traces on a measurement surface.
template <int N>
struct CauchyData {
    MeasurementSurface<N> surface;
    std::vector<Complex> dirichlet;
    std::vector<Complex> neumann;
};

template <int N>
CauchyData<N> synthesize_cauchy(const SourceEnsemble<N>& ensemble, double k, const MeasurementSurface<N>& surface) {
    ensemble.validate();
    detail::check_wavenumber(k);
    const double guard = 1e-8 * surface.radius;
    for (const auto& s : ensemble.sources)
        for (const auto& x : surface.points)
            if (distance<N>(s.location, x) <= guard)
                throw std::invalid_argument("synthesize_cauchy: source lies on the measurement surface");
    CauchyData<N> data;
    data.surface = surface;
    data.dirichlet.resize(surface.size());
    data.neumann.resize(surface.size());
    for (std::size_t m = 0; m < surface.size(); ++m) {
        data.dirichlet[m] = field<N>(ensemble, k, surface.points[m]);
        data.neumann[m] = neumann<N>(ensemble, k, surface.points[m], surface.normals[m]);
    }
    return data;
}

struct NoiseSpec {
    double level = 0.0;
    std::uint64_t seed = 0;

    /// Throws for level < 0 or level >= 1; returns a warning above 0.5.
    std::optional<std::string> validate() const {
        if (!(level >= 0.0) || !std::isfinite(level))
            throw std::invalid_argument("noise level must be non-negative");
        if (level >= 1.0) throw std::invalid_argument("noise level must be below 1");
        if (level > 0.5) return "noise level " + std::to_string(level) + " exceeds 0.5";
        return std::nullopt;
    }
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based uniform draw on [-1, 1), keyed by (seed, stream, point, slot).
/// Stream 0 is the Dirichlet trace, stream 1 the Neumann trace; slot 0 is r1, slot 1 is r2.
constexpr double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t point, std::uint64_t slot) {
    std::uint64_t h = detail::splitmix64(seed);
    h = detail::splitmix64(h ^ (stream * 0xD6E8FEB86659FD93ULL));
    h = detail::splitmix64(h ^ point);
    h = detail::splitmix64(h ^ (slot + 0x632BE59BD9B4E019ULL));
    const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
}

/// v + eps * r1 * |v| * exp(i pi r2), independently per point and per trace.
template <int N>
CauchyData<N> add_noise(const CauchyData<N>& data, const NoiseSpec& spec) {
    spec.validate();
    CauchyData<N> out = data;
    if (spec.level == 0.0) return out;
    auto perturb = [&](std::vector<Complex>& values, std::uint64_t stream) {
        for (std::size_t m = 0; m < values.size(); ++m) {
            const double r1 = keyed_uniform(spec.seed, stream, m, 0);
            const double r2 = keyed_uniform(spec.seed, stream, m, 1);
            values[m] += spec.level * r1 * std::abs(values[m]) * std::polar(1.0, std::numbers::pi * r2);
        }
    };
    perturb(out.dirichlet, 0);
    perturb(out.neumann, 1);
    return out;
}

struct AssumptionReport {
    double min_separation = 0.0;
    double wavelength = 0.0;
    double separation_ratio = 0.0;
    /// |lambda_j| / (k |eta_j'|) for every monopole/dipole pair.
    std::vector<double> intensity_ratios;
    std::vector<std::string> warnings;
};

/// Diagnostic check of the separation and same-order assumptions.
template <int N>
AssumptionReport check_assumptions(const SourceEnsemble<N>& ensemble, double k) {
    detail::check_wavenumber(k);
    AssumptionReport report;
    report.min_separation = ensemble.min_separation();
    report.wavelength = 2.0 * std::numbers::pi / k;
    report.separation_ratio = report.min_separation / report.wavelength;
    if (report.separation_ratio < 2.0)
        report.warnings.push_back("sources closer than two wavelengths (L/(2pi/k) = " +
                                  std::to_string(report.separation_ratio) + ")");
    for (const auto& mono : ensemble.sources) {
        if (!mono.is_monopole()) continue;
        for (const auto& di : ensemble.sources) {
            const double eta = norm<N>(di.vector_intensity);
            if (eta == 0.0) continue;
            const double ratio = std::abs(mono.scalar_intensity) / (k * eta);
            report.intensity_ratios.push_back(ratio);
            if (ratio < 0.2 || ratio > 5.0)
                report.warnings.push_back("monopole/dipole intensity ratio " + std::to_string(ratio) +
                                          " outside [0.2, 5]");
        }
    }
    return report;
}

}  // namespace dsm
