/**
 * @file indicators.hpp
 * @brief Reduced boundary data R(d), the N+1 direct-sampling indicators and
 *        the closed-form plane-wave moments used to verify them.
 *
 *   R(d)      = int_Gamma ( e^{ikx.d} d_nu u - u ik (d.nu) e^{ikx.d} ) ds(x)
 *   I_l(z)    = a_l / (2^{N-1} pi) int_{S^{N-1}} R(d) d_l e^{-ikd.z} ds(d)
 *   a_0 = 1,  a_l = N i / k  (l = 1..N),  d_0 = 1.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "forward.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "specfun.hpp"

namespace dsm {

template <int N>
struct ReducedData {
    DirectionSet<N> directions;
    std::vector<Complex> values;
};

template <int N>
struct IndicatorField {
    SamplingGrid<N> grid;
    int component = 0;
    std::vector<Complex> values;

    double magnitude(std::size_t i) const { return std::abs(values[i]); }

    double max_magnitude() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Reduced data by surface quadrature; the normal derivative of the plane
/// wave is taken analytically as ik(d.nu)e^{ikx.d}.
template <int N>
ReducedData<N> reduced_data(const CauchyData<N>& cauchy, double k, const DirectionSet<N>& directions,
                            unsigned threads = 1) {
    detail::check_wavenumber(k);
    const auto& surface = cauchy.surface;
    if (cauchy.dirichlet.size() != surface.size() || cauchy.neumann.size() != surface.size())
        throw std::invalid_argument("reduced_data: Cauchy data does not match its surface");
    ReducedData<N> out;
    out.directions = directions;
    out.values.resize(directions.size());
    parallel_for(directions.size(), threads, [&](std::size_t j) {
        const auto& d = directions.nodes[j];
        Complex sum = 0.0;
        for (std::size_t m = 0; m < surface.size(); ++m) {
            const Complex plane = std::polar(1.0, k * dot<N>(surface.points[m], d));
            const Complex dn_plane = Complex(0.0, k * dot<N>(d, surface.normals[m])) * plane;
            sum += surface.weights[m] * (plane * cauchy.neumann[m] - cauchy.dirichlet[m] * dn_plane);
        }
        out.values[j] = sum;
    });
    return out;
}

/// sum_j lambda_j e^{ikd.z_j} - ik sum_j (eta_j.d) e^{ikd.z_j}, which R(d)
/// equals for exact data by Green's formula.
template <int N>
Complex plane_wave_identity(const SourceEnsemble<N>& ensemble, double k, const Vec<N>& d) {
    Complex sum = 0.0;
    for (const auto& s : ensemble.sources) {
        const Complex phase = std::polar(1.0, k * dot<N>(d, s.location));
        sum += (s.scalar_intensity - Complex(0.0, k) * dot<N>(s.vector_intensity, d)) * phase;
    }
    return sum;
}

/// a_{N,l}.
template <int N>
Complex indicator_coefficient(int component, double k) {
    if (component == 0) return 1.0;
    return Complex(0.0, N / k);
}

struct IndicatorOptions {
    /// Multiplies a_{N,l}; 1 except when the verification suite injects a fault.
    double coefficient_scale = 1.0;
    unsigned threads = 1;
};

/// Evaluates indicators for one reduced data set at single points or over
/// tensor grids. Grid evaluation factors e^{-ikd.z} per axis.
template <int N>
class IndicatorEvaluator {
public:
    IndicatorEvaluator(const ReducedData<N>& reduced, double k, IndicatorOptions options = {})
        : k_(k), options_(options), directions_(reduced.directions) {
        detail::check_wavenumber(k);
        if (reduced.values.size() != reduced.directions.size())
            throw std::invalid_argument("indicator: reduced data does not match its directions");
        const double prefactor = 1.0 / (std::pow(2.0, N - 1) * std::numbers::pi);
        base_.resize(reduced.values.size());
        for (std::size_t j = 0; j < base_.size(); ++j)
            base_[j] = prefactor * reduced.directions.weights[j] * reduced.values[j];
    }

    double wavenumber() const { return k_; }

    Complex at(const Vec<N>& z, int component) const {
        check_component(component);
        Complex sum = 0.0;
        for (std::size_t j = 0; j < base_.size(); ++j) {
            const auto& d = directions_.nodes[j];
            const double dl = component == 0 ? 1.0 : d[component - 1];
            sum += base_[j] * dl * std::polar(1.0, -k_ * dot<N>(d, z));
        }
        return coefficient(component) * sum;
    }

    /// All requested components over a grid, in grid order.
    std::vector<IndicatorField<N>> fields(const SamplingGrid<N>& grid, const std::vector<int>& components) const {
        for (int c : components) check_component(c);
        const std::size_t nd = base_.size();
        const int n0 = grid.counts[0];

        // Axis tables e^{-ik d_a x_a(i)}, stored [i][d] as separate re/im planes.
        std::array<std::vector<double>, N> tab_re;
        std::array<std::vector<double>, N> tab_im;
        for (int a = 0; a < N; ++a) {
            const int n = grid.counts[a];
            tab_re[a].resize(static_cast<std::size_t>(n) * nd);
            tab_im[a].resize(static_cast<std::size_t>(n) * nd);
            for (int i = 0; i < n; ++i) {
                const double x = grid.coordinate(a, i);
                for (std::size_t j = 0; j < nd; ++j) {
                    const double phase = -k_ * directions_.nodes[j][a] * x;
                    tab_re[a][i * nd + j] = std::cos(phase);
                    tab_im[a][i * nd + j] = std::sin(phase);
                }
            }
        }

        // Per-component direction weights c_d * d_l.
        const std::size_t nc = components.size();
        std::vector<std::vector<Complex>> weights(nc, std::vector<Complex>(nd));
        for (std::size_t c = 0; c < nc; ++c)
            for (std::size_t j = 0; j < nd; ++j) {
                const int l = components[c];
                weights[c][j] = base_[j] * (l == 0 ? 1.0 : directions_.nodes[j][l - 1]);
            }

        std::vector<IndicatorField<N>> out(nc);
        for (std::size_t c = 0; c < nc; ++c) {
            out[c].grid = grid;
            out[c].component = components[c];
            out[c].values.resize(grid.size());
        }

        const std::size_t rows = grid.size() / static_cast<std::size_t>(n0);
        parallel_for(rows, options_.threads, [&](std::size_t row) {
            std::vector<double> f_re(nd), f_im(nd);
            std::vector<Complex> g(nd, Complex(1.0, 0.0));
            std::size_t rest = row;
            for (int a = 1; a < N; ++a) {
                const std::size_t i = rest % static_cast<std::size_t>(grid.counts[a]);
                rest /= static_cast<std::size_t>(grid.counts[a]);
                for (std::size_t j = 0; j < nd; ++j)
                    g[j] *= Complex(tab_re[a][i * nd + j], tab_im[a][i * nd + j]);
            }
            for (std::size_t c = 0; c < nc; ++c) {
                for (std::size_t j = 0; j < nd; ++j) {
                    const Complex f = weights[c][j] * g[j];
                    f_re[j] = f.real();
                    f_im[j] = f.imag();
                }
                const Complex a = coefficient(components[c]);
                for (int i0 = 0; i0 < n0; ++i0) {
                    const double* er = &tab_re[0][static_cast<std::size_t>(i0) * nd];
                    const double* ei = &tab_im[0][static_cast<std::size_t>(i0) * nd];
                    double re = 0.0, im = 0.0;
                    for (std::size_t j = 0; j < nd; ++j) {
                        re += f_re[j] * er[j] - f_im[j] * ei[j];
                        im += f_re[j] * ei[j] + f_im[j] * er[j];
                    }
                    out[c].values[row * static_cast<std::size_t>(n0) + static_cast<std::size_t>(i0)] =
                        a * Complex(re, im);
                }
            }
        });
        return out;
    }

private:
    void check_component(int component) const {
        if (component < 0 || component > N)
            throw std::out_of_range("indicator component " + std::to_string(component) + " out of range");
    }

    Complex coefficient(int component) const {
        return options_.coefficient_scale * indicator_coefficient<N>(component, k_);
    }

    double k_;
    IndicatorOptions options_;
    DirectionSet<N> directions_;
    std::vector<Complex> base_;
};

template <int N>
IndicatorField<N> indicator_field(const ReducedData<N>& reduced, double k, const SamplingGrid<N>& grid,
                                  int component, IndicatorOptions options = {}) {
    return IndicatorEvaluator<N>(reduced, k, options).fields(grid, {component}).front();
}

// ---------------------------------------------------------------------------
// Closed-form moments  int_{S^{N-1}} d_p d_q e^{ikd.z} ds(d),  d_0 = 1.

namespace detail {

inline Complex moment_2d_terms(int p, int q, double alpha, double j0, double j1, double j2) {
    if (p > q) std::swap(p, q);
    const double pi = std::numbers::pi;
    if (p == 0 && q == 0) return 2.0 * pi * j0;
    if (p == 0 && q == 1) return Complex(0.0, 2.0 * pi * std::cos(alpha) * j1);
    if (p == 0 && q == 2) return Complex(0.0, 2.0 * pi * std::sin(alpha) * j1);
    if (p == 1 && q == 1) return pi * j0 - pi * std::cos(2.0 * alpha) * j2;
    if (p == 2 && q == 2) return pi * j0 + pi * std::cos(2.0 * alpha) * j2;
    return -pi * std::sin(2.0 * alpha) * j2;
}

}  // namespace detail

/// 2D moments, p, q in {0,1,2}; z = |z|(cos a, sin a).
inline Complex moment_2d(int p, int q, const Vec<2>& z, double k) {
    if (p < 0 || p > 2 || q < 0 || q > 2) throw std::out_of_range("moment_2d: index out of range");
    const double rho = k * norm<2>(z);
    // The alpha-dependent terms carry J_1 or J_2, which vanish at rho = 0.
    const double alpha = rho > 0.0 ? std::atan2(z[1], z[0]) : 0.0;
    return detail::moment_2d_terms(p, q, alpha, specfun::bessel_j(0, rho), specfun::bessel_j(1, rho),
                                   specfun::bessel_j(2, rho));
}

/// 3D moments, p, q in {0,..,3}; z = |z|(sin a cos b, sin a sin b, cos a).
inline Complex moment_3d(int p, int q, const Vec<3>& z, double k) {
    if (p < 0 || p > 3 || q < 0 || q > 3) throw std::out_of_range("moment_3d: index out of range");
    if (p > q) std::swap(p, q);
    const double r = norm<3>(z);
    const double rho = k * r;
    double alpha = 0.0, beta = 0.0;
    if (r > 0.0) {
        alpha = std::acos(std::clamp(z[2] / r, -1.0, 1.0));
        beta = std::atan2(z[1], z[0]);
    }
    const double pi = std::numbers::pi;
    const double j0 = specfun::spherical_j(0, rho);
    const double j1 = specfun::spherical_j(1, rho);
    const double j2 = specfun::spherical_j(2, rho);
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double p2 = 3.0 * ca * ca - 1.0;
    if (p == 0) {
        switch (q) {
            case 0: return 4.0 * pi * j0;
            case 1: return Complex(0.0, 4.0 * pi * j1 * sa * std::cos(beta));
            case 2: return Complex(0.0, 4.0 * pi * j1 * sa * std::sin(beta));
            default: return Complex(0.0, 4.0 * pi * j1 * ca);
        }
    }
    if (p == 1 && q == 1)
        return 4.0 * pi / 3.0 * j0 + 2.0 * pi / 3.0 * j2 * p2 - 2.0 * pi * j2 * sa * sa * std::cos(2.0 * beta);
    if (p == 2 && q == 2)
        return 4.0 * pi / 3.0 * j0 + 2.0 * pi / 3.0 * j2 * p2 + 2.0 * pi * j2 * sa * sa * std::cos(2.0 * beta);
    if (p == 3 && q == 3) return 4.0 * pi / 3.0 * j0 - 4.0 * pi / 3.0 * j2 * p2;
    if (p == 1 && q == 2) return -2.0 * pi * j2 * sa * sa * std::sin(2.0 * beta);
    if (p == 1 && q == 3) return -4.0 * pi * j2 * sa * ca * std::cos(beta);
    return -4.0 * pi * j2 * sa * ca * std::sin(beta);
}

template <int N>
Complex moment(int p, int q, const Vec<N>& z, double k) {
    if constexpr (N == 2) return moment_2d(p, q, z, k);
    else return moment_3d(p, q, z, k);
}

/// Direction-set quadrature of d_p d_q e^{ikd.z}; the numerical twin of moment().
template <int N>
Complex moment_quadrature(const DirectionSet<N>& directions, int p, int q, const Vec<N>& z, double k) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < directions.size(); ++j) {
        const auto& d = directions.nodes[j];
        const double dp = p == 0 ? 1.0 : d[p - 1];
        const double dq = q == 0 ? 1.0 : d[q - 1];
        sum += directions.weights[j] * dp * dq * std::polar(1.0, k * dot<N>(d, z));
    }
    return sum;
}

/// Envelope of |moment(p, q, .)| at each k|z| = kL: the maximum over a fan of
/// orientations and over the radial window [kL, kL + pi].
inline std::vector<double> decay_probe(int dims, int p, int q, const std::vector<double>& kl_values,
                                       int window_samples = 16) {
    if (dims != 2 && dims != 3) throw std::invalid_argument("decay_probe: dims must be 2 or 3");
    for (std::size_t i = 0; i < kl_values.size(); ++i) {
        if (!(kl_values[i] >= 10.0)) throw std::invalid_argument("decay_probe: kL values must be >= 10");
        if (i > 0 && !(kl_values[i] > kl_values[i - 1]))
            throw std::invalid_argument("decay_probe: kL values must increase");
    }
    const double pi = std::numbers::pi;
    std::vector<double> out;
    out.reserve(kl_values.size());
    for (double kl : kl_values) {
        double best = 0.0;
        for (int w = 0; w < window_samples; ++w) {
            const double t = kl + pi * w / window_samples;
            if (dims == 2) {
                if (p < 0 || p > 2 || q < 0 || q > 2) throw std::out_of_range("decay_probe: index out of range");
                const double j0 = specfun::bessel_j(0, t);
                const double j1 = specfun::bessel_j(1, t);
                const double j2 = specfun::bessel_j(2, t);
                for (int a = 0; a < 64; ++a) {
                    const double alpha = 2.0 * pi * a / 64.0;
                    best = std::max(best, std::abs(detail::moment_2d_terms(p, q, alpha, j0, j1, j2)));
                }
            } else {
                for (int a = 0; a < 16; ++a) {
                    const double alpha = pi * (a + 0.5) / 16.0;
                    for (int b = 0; b < 32; ++b) {
                        const double beta = 2.0 * pi * b / 32.0;
                        const Vec<3> z{t * std::sin(alpha) * std::cos(beta), t * std::sin(alpha) * std::sin(beta),
                                       t * std::cos(alpha)};
                        best = std::max(best, std::abs(moment_3d(p, q, z, 1.0)));
                    }
                }
            }
        }
        out.push_back(best);
    }
    return out;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dsm
