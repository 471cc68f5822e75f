/**
 * @file specfun.hpp
 * @brief Cylinder and spherical Bessel kernels of low order.
 *
 * Only the orders needed by the Helmholtz forward model and the plane-wave
 * moment formulas are provided: J_0..J_2, Y_0, Y_1, H^(1)_0, H^(1)_1 and
 * j_0..j_2. Arguments are real and non-negative.
 *
 * Evaluation strategy for the cylinder functions:
 *   - t < 12: power series (Y via the Neumann series with harmonic numbers)
 *   - t >= 12: Miller backward recurrence normalized by
 *     J_0 + 2 sum J_2k = 1; Y from the Neumann expansion in J_2k.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsm {

using Complex = std::complex<double>;

namespace specfun {

/// Largest argument accepted by any kernel.
inline constexpr double max_argument = 1.0e4;

/// Below this argument the cylinder functions use their power series.
inline constexpr double series_crossover = 12.0;

/// Below this argument the spherical closed forms switch to series.
inline constexpr double spherical_crossover = 0.5;

inline constexpr double euler_gamma = 0.57721566490153286061;

namespace detail {

inline void check_argument(double t, const char* who, bool allow_zero) {
    if (!std::isfinite(t))
        throw std::domain_error(std::string(who) + ": non-finite argument");
    if (allow_zero ? t < 0.0 : t <= 0.0)
        throw std::domain_error(std::string(who) + ": argument out of domain");
    if (t > max_argument)
        throw std::domain_error(std::string(who) + ": argument exceeds 1e4");
}

/// J_n(t) by its power series, n in {0,1,2}.
inline double bessel_j_series(int n, double t) {
    const double h = 0.5 * t;
    const double h2 = h * h;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= h / i;
    double sum = term;
    for (int p = 1; p < 200; ++p) {
        term *= -h2 / (static_cast<double>(p) * (p + n));
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

/// Y_0 and Y_1 by their ascending (Neumann) series.
inline std::array<double, 2> bessel_y_series(double t) {
    const double h = 0.5 * t;
    const double h2 = h * h;
    const double log_term = std::log(h);

    // Y_0 = (2/pi)[(ln(t/2)+gamma) J_0 + sum_{k>=1} (-1)^{k+1} H_k (t^2/4)^k / (k!)^2]
    double y0_sum = 0.0;
    {
        double term = 1.0;
        double harmonic = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= -h2 / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            const double contribution = -term * harmonic;
            y0_sum += contribution;
            if (std::abs(contribution) < 1e-18 && k > 2) break;
        }
    }
    const double j0 = bessel_j_series(0, t);
    const double y0 = std::numbers::inv_pi * 2.0 * ((log_term + euler_gamma) * j0 + y0_sum);

    // Y_1 = -2/(pi t) + (2/pi) ln(t/2) J_1
    //       - (1/pi) sum_{k>=0} (-1)^k [psi(k+1)+psi(k+2)] (t/2)^{2k+1} / (k!(k+1)!)
    double y1_sum = 0.0;
    {
        double term = h;  // (t/2)^{2k+1}/(k!(k+1)!) at k = 0
        double psi_a = -euler_gamma;        // psi(k+1)
        double psi_b = 1.0 - euler_gamma;   // psi(k+2)
        for (int k = 0; k < 200; ++k) {
            if (k > 0) {
                term *= -h2 / (static_cast<double>(k) * (k + 1));
                psi_a += 1.0 / k;
                psi_b += 1.0 / (k + 1);
            }
            const double contribution = term * (psi_a + psi_b);
            y1_sum += contribution;
            if (std::abs(contribution) < 1e-18 && k > 2) break;
        }
    }
    const double j1 = bessel_j_series(1, t);
    const double y1 = -2.0 * std::numbers::inv_pi / t
                    + 2.0 * std::numbers::inv_pi * log_term * j1
                    - std::numbers::inv_pi * y1_sum;
    return {y0, y1};
}

/// Normalized J_0..J_{m} by Miller's backward recurrence.
inline std::vector<double> bessel_j_sequence(double t) {
    const int start = 2 * static_cast<int>((t + 25.0 * std::cbrt(t) + 40.0) / 2.0);
    std::vector<double> values(static_cast<std::size_t>(start) + 2, 0.0);
    values[start + 1] = 0.0;
    values[start] = 1e-300;
    for (int n = start; n >= 1; --n) {
        values[n - 1] = (2.0 * n / t) * values[n] - values[n + 1];
        if (std::abs(values[n - 1]) > 1e250) {
            for (int m = n - 1; m <= start + 1; ++m) values[m] *= 1e-250;
        }
    }
    double norm = values[0];
    for (int n = 2; n <= start; n += 2) norm += 2.0 * values[n];
    for (auto& v : values) v /= norm;
    return values;
}

inline std::array<double, 2> bessel_y_recurrence(double t, const std::vector<double>& j) {
    const double log_term = std::log(0.5 * t) + euler_gamma;
    const int top = static_cast<int>(j.size()) - 2;
    double even_sum = 0.0;   // sum (-1)^k J_2k / k
    double odd_sum = 0.0;    // sum (-1)^k (J_{2k-1} - J_{2k+1}) / k
    for (int k = 1; 2 * k + 1 <= top; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        even_sum += sign * j[2 * k] / k;
        odd_sum += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    const double two_over_pi = 2.0 * std::numbers::inv_pi;
    const double y0 = two_over_pi * log_term * j[0] - 2.0 * two_over_pi * even_sum;
    const double y1 = two_over_pi * (log_term * j[1] - j[0] / t) + two_over_pi * odd_sum;
    return {y0, y1};
}

inline double bessel_j_recurrence(int order, double t) {
    return bessel_j_sequence(t)[static_cast<std::size_t>(order)];
}

inline double spherical_j_series(int n, double t) {
    // j_n(t) = sum_p (-1)^p t^{n+2p} / (2^p p! (2n+2p+1)!!)
    double lead = 1.0;
    for (int i = 1; i <= n; ++i) lead *= t / (2 * i + 1);
    const double t2 = t * t;
    double term = lead;
    double sum = lead;
    for (int p = 1; p < 60; ++p) {
        term *= -t2 / (2.0 * p * (2 * n + 2 * p + 1));
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

inline double spherical_j_closed(int n, double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    switch (n) {
        case 0: return s / t;
        case 1: return s / (t * t) - c / t;
        default: return (3.0 / (t * t * t) - 1.0 / t) * s - 3.0 * c / (t * t);
    }
}

}  // namespace detail

/// Bessel function of the first kind J_order(t), order in {0,1,2}, t >= 0.
inline double bessel_j(int order, double t) {
    if (order < 0 || order > 2) throw std::invalid_argument("bessel_j: order must be 0, 1 or 2");
    detail::check_argument(t, "bessel_j", true);
    if (t < series_crossover) return detail::bessel_j_series(order, t);
    return detail::bessel_j_recurrence(order, t);
}

/// Bessel function of the second kind Y_order(t), order in {0,1}, t > 0.
inline double bessel_y(int order, double t) {
    if (order < 0 || order > 1) throw std::invalid_argument("bessel_y: order must be 0 or 1");
    detail::check_argument(t, "bessel_y", false);
    if (t < series_crossover) return detail::bessel_y_series(t)[static_cast<std::size_t>(order)];
    const auto j = detail::bessel_j_sequence(t);
    return detail::bessel_y_recurrence(t, j)[static_cast<std::size_t>(order)];
}

/// H^(1)_0(t) and H^(1)_1(t) evaluated together; cheaper than two hankel1 calls.
inline std::array<Complex, 2> hankel1_pair(double t) {
    detail::check_argument(t, "hankel1", false);
    if (t < series_crossover) {
        const auto y = detail::bessel_y_series(t);
        return {Complex(detail::bessel_j_series(0, t), y[0]),
                Complex(detail::bessel_j_series(1, t), y[1])};
    }
    const auto j = detail::bessel_j_sequence(t);
    const auto y = detail::bessel_y_recurrence(t, j);
    return {Complex(j[0], y[0]), Complex(j[1], y[1])};
}

/// Hankel function of the first kind H^(1)_order(t) = J + iY, order in {0,1}.
inline Complex hankel1(int order, double t) {
    if (order < 0 || order > 1) throw std::invalid_argument("hankel1: order must be 0 or 1");
    return hankel1_pair(t)[static_cast<std::size_t>(order)];
}

/// Spherical Bessel function j_order(t), order in {0,1,2}.
inline double spherical_j(int order, double t) {
    if (order < 0 || order > 2) throw std::invalid_argument("spherical_j: order must be 0, 1 or 2");
    detail::check_argument(t, "spherical_j", true);
    if (t < spherical_crossover) return detail::spherical_j_series(order, t);
    return detail::spherical_j_closed(order, t);
}

}  // namespace specfun
}  // namespace dsm
