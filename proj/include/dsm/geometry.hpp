/**
 * @file geometry.hpp
 * @brief Direction sets on S^{N-1}, measurement circles/spheres and
 *        rectangular sampling grids.
 *
 * Every node set carries its quadrature weights.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsm {

template <int N>
using Vec = std::array<double, N>;

template <int N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <int N>
inline double norm(const Vec<N>& a) { return std::sqrt(dot<N>(a, a)); }

template <std::size_t N>
constexpr std::array<double, N> operator-(const std::array<double, N>& a, const std::array<double, N>& b) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
    return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator+(const std::array<double, N>& a, const std::array<double, N>& b) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
    return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator*(double s, const std::array<double, N>& a) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
    return r;
}

template <int N>
inline double distance(const Vec<N>& a, const Vec<N>& b) { return norm<N>(a - b); }

/// Total measure of S^{N-1}: 2*pi for the circle, 4*pi for the sphere.
template <int N>
constexpr double sphere_measure() {
    static_assert(N == 2 || N == 3);
    return N == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

/// Quadrature nodes d on the unit sphere with surface-measure weights.
template <int N>
struct DirectionSet {
    std::vector<Vec<N>> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Measurement boundary: points, outward unit normals and surface weights.
template <int N>
struct MeasurementSurface {
    std::vector<Vec<N>> points;
    std::vector<Vec<N>> normals;
    std::vector<double> weights;
    double radius = 0.0;

    std::size_t size() const { return points.size(); }
};

/// Closed axis-aligned lattice. Points are ordered with the first axis
/// varying fastest: index = i0 + n0*(i1 + n1*i2).
template <int N>
struct SamplingGrid {
    Vec<N> lower{};
    Vec<N> upper{};
    std::array<int, N> counts{};

    std::size_t size() const {
        std::size_t n = 1;
        for (int c : counts) n *= static_cast<std::size_t>(c);
        return n;
    }

    double spacing(int axis) const { return (upper[axis] - lower[axis]) / (counts[axis] - 1); }

    double coordinate(int axis, int i) const {
        // The last node is the upper corner exactly.
        if (i == counts[axis] - 1) return upper[axis];
        return lower[axis] + i * spacing(axis);
    }

    std::array<int, N> unravel(std::size_t index) const {
        std::array<int, N> idx{};
        for (int a = 0; a < N; ++a) {
            idx[a] = static_cast<int>(index % static_cast<std::size_t>(counts[a]));
            index /= static_cast<std::size_t>(counts[a]);
        }
        return idx;
    }

    std::size_t ravel(const std::array<int, N>& idx) const {
        std::size_t index = 0;
        for (int a = N - 1; a >= 0; --a) index = index * static_cast<std::size_t>(counts[a]) + idx[a];
        return index;
    }

    Vec<N> point(std::size_t index) const {
        const auto idx = unravel(index);
        Vec<N> p{};
        for (int a = 0; a < N; ++a) p[a] = coordinate(a, idx[a]);
        return p;
    }

    bool contains(const Vec<N>& p, double slack = 1e-12) const {
        for (int a = 0; a < N; ++a)
            if (p[a] < lower[a] - slack || p[a] > upper[a] + slack) return false;
        return true;
    }

    /// Largest per-axis spacing.
    double max_spacing() const {
        double h = 0.0;
        for (int a = 0; a < N; ++a) h = std::max(h, spacing(a));
        return h;
    }
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussLegendre rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            derivative = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / derivative;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        derivative = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

/// Equally spaced angles 2*pi*m/count with trapezoid weights 2*pi/count.
inline DirectionSet<2> circle_directions(int count) {
    if (count < 4) throw std::invalid_argument("circle_directions: count must be at least 4");
    DirectionSet<2> set;
    set.nodes.reserve(static_cast<std::size_t>(count));
    const double w = 2.0 * std::numbers::pi / count;
    for (int m = 0; m < count; ++m) {
        const double theta = w * m;
        set.nodes.push_back({std::cos(theta), std::sin(theta)});
    }
    // Quarter-turn nodes get exactly zero coordinates.
    for (auto& d : set.nodes)
        for (auto& c : d)
            if (std::abs(c) < 1e-15) c = 0.0;
    set.weights.assign(static_cast<std::size_t>(count), w);
    return set;
}

/// Product rule: Gauss-Legendre in cos(theta) times uniform azimuth.
/// Exact for spherical harmonics of degree < min(2*n_theta, n_phi).
inline DirectionSet<3> sphere_directions(int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 4)
        throw std::invalid_argument("sphere_directions: need n_theta >= 2 and n_phi >= 4");
    const auto gl = gauss_legendre(n_theta);
    DirectionSet<3> set;
    set.nodes.reserve(static_cast<std::size_t>(n_theta * n_phi));
    set.weights.reserve(static_cast<std::size_t>(n_theta * n_phi));
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double c = gl.nodes[static_cast<std::size_t>(i)];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int m = 0; m < n_phi; ++m) {
            const double phi = dphi * m;
            set.nodes.push_back({s * std::cos(phi), s * std::sin(phi), c});
            set.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * dphi);
        }
    }
    return set;
}

inline MeasurementSurface<2> circle_surface(double radius, int count) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("circle_surface: radius must be positive");
    if (count < 8) throw std::invalid_argument("circle_surface: count must be at least 8");
    const auto dirs = circle_directions(count);
    MeasurementSurface<2> s;
    s.radius = radius;
    s.normals = dirs.nodes;
    for (const auto& n : dirs.nodes) s.points.push_back(radius * n);
    s.weights.assign(static_cast<std::size_t>(count), 2.0 * std::numbers::pi * radius / count);
    return s;
}

inline MeasurementSurface<3> sphere_surface(double radius, int n_theta, int n_phi) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("sphere_surface: radius must be positive");
    const auto dirs = sphere_directions(n_theta, n_phi);
    MeasurementSurface<3> s;
    s.radius = radius;
    s.normals = dirs.nodes;
    for (const auto& n : dirs.nodes) s.points.push_back(radius * n);
    for (double w : dirs.weights) s.weights.push_back(radius * radius * w);
    return s;
}

template <int N>
SamplingGrid<N> make_grid(const Vec<N>& lower, const Vec<N>& upper, const std::array<int, N>& counts) {
    for (int a = 0; a < N; ++a) {
        if (!std::isfinite(lower[a]) || !std::isfinite(upper[a]) || !(lower[a] < upper[a]))
            throw std::invalid_argument("make_grid: lower corner must be below upper corner");
        if (counts[a] < 2)
            throw std::invalid_argument("make_grid: need at least 2 points on axis " + std::to_string(a));
    }
    return SamplingGrid<N>{lower, upper, counts};
}

}  // namespace dsm
