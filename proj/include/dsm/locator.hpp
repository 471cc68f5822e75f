/**
 * @file locator.hpp
 * @brief Single-level (DSM) and two-level (DSM2) source localization:
 *        significant-maximizer extraction per indicator component,
 *        cross-component clustering, averaging and intensity read-off.
 */
#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forward.hpp"
#include "geometry.hpp"
#include "indicators.hpp"

namespace dsm {

template <int N>
struct Peak {
    Vec<N> location{};
    int component = 0;
    double magnitude = 0.0;
    std::size_t grid_index = 0;
    /// magnitude divided by the global maximum of its component's field.
    double relative = 0.0;
};

enum class SourceKind { monopole, dipole };

inline const char* to_string(SourceKind kind) { return kind == SourceKind::monopole ? "monopole" : "dipole"; }

template <int N>
struct PeakGroup {
    std::vector<Peak<N>> members;
    Vec<N> centroid{};
    /// Point where the intensities were read off.
    Vec<N> anchor{};
    Complex scalar_estimate{};
    ComplexVec<N> vector_estimate{};
    SourceKind kind = SourceKind::monopole;

    /// max(|lambda~|, k |eta~|), the quantity the classification compares.
    double magnitude(double k) const {
        return std::max(std::abs(scalar_estimate), k * norm<N>(vector_estimate));
    }
};

enum class Algorithm { dsm, dsm2 };

inline const char* to_string(Algorithm a) { return a == Algorithm::dsm ? "dsm" : "dsm2"; }

/// Which indicators take part. A monopole-only (dipole-only) prior uses
/// just I_0 (just I_1..I_N).
enum class ComponentSet { all, monopole, dipole };

inline const char* to_string(ComponentSet c) {
    switch (c) {
        case ComponentSet::monopole: return "monopole";
        case ComponentSet::dipole: return "dipole";
        default: return "all";
    }
}

inline ComponentSet parse_component_set(const std::string& s) {
    if (s == "all") return ComponentSet::all;
    if (s == "monopole") return ComponentSet::monopole;
    if (s == "dipole") return ComponentSet::dipole;
    throw std::invalid_argument("unknown component set '" + s + "'");
}

template <int N>
std::vector<int> component_list(ComponentSet set) {
    std::vector<int> out;
    if (set != ComponentSet::dipole) out.push_back(0);
    if (set != ComponentSet::monopole)
        for (int l = 1; l <= N; ++l) out.push_back(l);
    return out;
}

struct LocatorOptions {
    double significance = 0.5;
    /// Defaults to 2*pi/k.
    std::optional<double> merge_radius;
    /// Defaults to 2*pi/k.
    std::optional<double> cluster_radius;
    ComponentSet components = ComponentSet::all;
    /// Points per axis of each DSM2 local grid; 0 selects 40 (2D) or 20 (3D).
    int fine_points = 0;
    /// Side length of each DSM2 local grid; defaults to 2*pi/k.
    std::optional<double> fine_side;
    /// Groups backed by fewer distinct components are discarded. 0 selects
    /// 2 in 2D (when at least two components are evaluated) and 1 in 3D.
    int min_support = 0;
    /// Of two groups whose closest members are nearer than this, only the
    /// stronger is kept (sources are assumed well separated). Defaults to
    /// 4*pi/k; a non-positive value disables it.
    std::optional<double> min_separation;
    /// Keep the (coarse) indicator fields in the result for export.
    bool keep_fields = false;
    IndicatorOptions indicator;
};

struct Timings {
    double reduced_seconds = 0.0;
    double coarse_seconds = 0.0;
    double fine_seconds = 0.0;
    double locate_seconds = 0.0;
    double total_seconds = 0.0;
};

template <int N>
struct Reconstruction {
    Algorithm algorithm = Algorithm::dsm;
    std::vector<PeakGroup<N>> groups;
    /// Significant maximizers per component (index = l), before clustering.
    std::array<std::size_t, N + 1> component_peak_counts{};
    Timings timings;
    std::vector<std::string> warnings;
    /// Indicator fields on the (coarse) grid when requested.
    std::vector<IndicatorField<N>> fields;

    std::size_t estimated_count() const { return groups.size(); }
};

/// Strict local maxima of |I| over the immediate-neighbour stencil, kept if
/// at least significance * max|I|, then merged greedily from the strongest.
template <int N>
std::vector<Peak<N>> find_peaks(const IndicatorField<N>& field, double significance, double merge_radius) {
    if (field.values.empty() || field.values.size() != field.grid.size())
        throw std::invalid_argument("find_peaks: empty field");
    if (!(significance > 0.0 && significance <= 1.0))
        throw std::invalid_argument("find_peaks: significance must lie in (0, 1]");
    if (!(merge_radius > 0.0)) throw std::invalid_argument("find_peaks: merge radius must be positive");

    const auto& grid = field.grid;
    std::vector<double> mag(field.values.size());
    double global = 0.0;
    for (std::size_t i = 0; i < mag.size(); ++i) {
        mag[i] = std::abs(field.values[i]);
        global = std::max(global, mag[i]);
    }
    if (!(global > 0.0)) return {};
    const double threshold = significance * global;

    std::vector<std::array<int, N>> offsets;
    {
        std::array<int, N> o{};
        o.fill(-1);
        while (true) {
            if (std::any_of(o.begin(), o.end(), [](int v) { return v != 0; })) offsets.push_back(o);
            int a = 0;
            while (a < N && o[a] == 1) o[a++] = -1;
            if (a == N) break;
            ++o[a];
        }
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < mag.size(); ++i) {
        if (mag[i] < threshold) continue;
        const auto idx = grid.unravel(i);
        bool is_max = true;
        for (const auto& off : offsets) {
            std::array<int, N> nb{};
            bool inside = true;
            for (int a = 0; a < N; ++a) {
                nb[a] = idx[a] + off[a];
                if (nb[a] < 0 || nb[a] >= grid.counts[a]) { inside = false; break; }
            }
            if (!inside) continue;
            if (!(mag[i] > mag[grid.ravel(nb)])) { is_max = false; break; }
        }
        if (is_max) candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    std::vector<Peak<N>> peaks;
    for (std::size_t i : candidates) {
        const auto p = grid.point(i);
        const bool absorbed = std::any_of(peaks.begin(), peaks.end(), [&](const Peak<N>& q) {
            return distance<N>(p, q.location) < merge_radius;
        });
        if (!absorbed) peaks.push_back(Peak<N>{p, field.component, mag[i], i, mag[i] / global});
    }
    return peaks;
}

/// Single-linkage grouping: peaks closer than radius share a group. Groups
/// are ordered by their first member in input order.
template <int N>
std::vector<PeakGroup<N>> cluster_peaks(const std::vector<Peak<N>>& peaks, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("cluster_peaks: radius must be positive");
    std::vector<std::size_t> parent(peaks.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < peaks.size(); ++i)
        for (std::size_t j = i + 1; j < peaks.size(); ++j)
            if (distance<N>(peaks[i].location, peaks[j].location) < radius) {
                const auto a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }

    std::vector<PeakGroup<N>> groups;
    std::vector<std::size_t> root_to_group(peaks.size(), peaks.size());
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const auto r = find(i);
        if (root_to_group[r] == peaks.size()) {
            root_to_group[r] = groups.size();
            groups.emplace_back();
        }
        groups[root_to_group[r]].members.push_back(peaks[i]);
    }
    for (auto& g : groups) {
        Vec<N> c{};
        for (const auto& m : g.members) c = c + m.location;
        g.centroid = (1.0 / static_cast<double>(g.members.size())) * c;
        g.anchor = g.centroid;
    }
    return groups;
}

/// Smallest distance between a member of a and a member of b.
template <int N>
double set_distance(const PeakGroup<N>& a, const PeakGroup<N>& b) {
    double d = HUGE_VAL;
    for (const auto& p : a.members)
        for (const auto& q : b.members) d = std::min(d, distance<N>(p.location, q.location));
    return d;
}

/// Keeps the strongest member of each component and recomputes the centroid.
template <int N>
void reduce_to_strongest(PeakGroup<N>& group) {
    std::vector<Peak<N>> kept;
    for (const auto& m : group.members) {
        auto it = std::find_if(kept.begin(), kept.end(), [&](const Peak<N>& q) { return q.component == m.component; });
        if (it == kept.end()) kept.push_back(m);
        else if (m.magnitude > it->magnitude) *it = m;
    }
    std::sort(kept.begin(), kept.end(), [](const Peak<N>& a, const Peak<N>& b) { return a.component < b.component; });
    group.members = std::move(kept);
    Vec<N> c{};
    for (const auto& m : group.members) c = c + m.location;
    group.centroid = (1.0 / static_cast<double>(group.members.size())) * c;
    group.anchor = group.centroid;
}

namespace detail {

/// Solves the small dense system A x = b by Gaussian elimination with
/// partial pivoting. Returns false when A is numerically singular.
inline bool solve_dense(std::vector<std::vector<Complex>> a, std::vector<Complex>& b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (!(std::abs(a[piv][c]) > 1e-300)) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex f = a[r][c] / a[c][c];
            for (std::size_t q = c; q < n; ++q) a[r][q] -= f * a[c][q];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t q = c + 1; q < n; ++q) b[c] -= a[c][q] * b[q];
        b[c] /= a[c][c];
    }
    return true;
}

/// Noise-free I_l at offset w = c - z from a unit source at c: slot 0 is the
/// monopole response, slot m >= 1 the dipole response to eta = e_m.
template <int N>
Complex unit_response(int component, int slot, const Vec<N>& w, double k) {
    const Complex a = indicator_coefficient<N>(component, k) / (std::pow(2.0, N - 1) * std::numbers::pi);
    const Complex m = moment<N>(component, slot, w, k);
    return slot == 0 ? a * m : a * Complex(0.0, -k) * m;
}

/// Relative least-squares residual of a single-source model centred at c,
/// fitted to all indicator components on a small axis-aligned stencil.
template <int N>
double model_residual(const IndicatorEvaluator<N>& evaluator, const Vec<N>& c, bool dipole) {
    const double k = evaluator.wavenumber();
    std::vector<Vec<N>> offsets{Vec<N>{}};
    for (int a = 0; a < N; ++a)
        for (double step : {-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0}) {
            Vec<N> o{};
            o[a] = step / k;
            offsets.push_back(o);
        }
    std::vector<int> slots;
    if (dipole)
        for (int m = 1; m <= N; ++m) slots.push_back(m);
    else
        slots.push_back(0);

    std::vector<std::vector<Complex>> rows;
    std::vector<Complex> y;
    for (const auto& o : offsets) {
        const Vec<N> z = c + o;
        for (int l = 0; l <= N; ++l) {
            y.push_back(evaluator.at(z, l));
            std::vector<Complex> row;
            for (int s : slots) row.push_back(unit_response<N>(l, s, (-1.0) * o, k));
            rows.push_back(std::move(row));
        }
    }
    const std::size_t n = slots.size();
    std::vector<std::vector<Complex>> normal(n, std::vector<Complex>(n));
    std::vector<Complex> rhs(n);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t p = 0; p < n; ++p) {
            rhs[p] += std::conj(rows[r][p]) * y[r];
            for (std::size_t q = 0; q < n; ++q) normal[p][q] += std::conj(rows[r][p]) * rows[r][q];
        }
    double total = 0.0;
    for (const auto& v : y) total += std::norm(v);
    if (!(total > 0.0) || !solve_dense(normal, rhs)) return HUGE_VAL;
    double residual = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Complex fit = 0.0;
        for (std::size_t p = 0; p < n; ++p) fit += rows[r][p] * rhs[p];
        residual += std::norm(y[r] - fit);
    }
    return std::sqrt(residual / total);
}

}  // namespace detail

/// Reads lambda~ = I_0 and eta~_l = I_l at one anchor point of the group.
///
/// The monopole candidate starts at the component-0 maximizer; every vector
/// component member seeds a dipole candidate and the one reaching the largest
/// k|I_vec| is kept. Each candidate is scored by how well
/// the matching single-source response explains the indicators around it;
/// the better fit supplies the anchor.
template <int N>
void recover_intensities(PeakGroup<N>& group, const IndicatorEvaluator<N>& evaluator) {
    const double k = evaluator.wavenumber();
    struct Reading {
        Vec<N> at{};
        Complex lambda{};
        ComplexVec<N> eta{};
        double vector = 0.0;
    };
    auto read = [&](const Vec<N>& z) {
        Reading r;
        r.at = z;
        r.lambda = evaluator.at(z, 0);
        for (int l = 1; l <= N; ++l) r.eta[l - 1] = evaluator.at(z, l);
        r.vector = k * norm<N>(r.eta);
        return r;
    };

    std::optional<Reading> mono;
    std::optional<Reading> dip;
    for (const auto& m : group.members)
        if (m.component == 0) mono = read(m.location);
    // Each candidate moves to the maximizer of its own modulus on a local grid
    // of side 2*pi/k centred on it: |I_0| for the monopole, sum_l |I_l|^2
    // (l >= 1) for the dipole.
    auto refine = [&](const Vec<N>& center, bool vector) {
        const int points = N == 2 ? 21 : 11;
        const double half = std::numbers::pi / k;
        Vec<N> lo{}, hi{};
        std::array<int, N> counts{};
        for (int a = 0; a < N; ++a) {
            lo[a] = center[a] - half;
            hi[a] = center[a] + half;
            counts[a] = points;
        }
        const auto local = make_grid<N>(lo, hi, counts);
        std::vector<int> comps;
        if (vector)
            for (int l = 1; l <= N; ++l) comps.push_back(l);
        else
            comps.push_back(0);
        const auto f = evaluator.fields(local, comps);
        std::size_t best = 0;
        double best_value = -1.0;
        for (std::size_t i = 0; i < local.size(); ++i) {
            double v = 0.0;
            for (const auto& fl : f) v += std::norm(fl.values[i]);
            if (v > best_value) {
                best_value = v;
                best = i;
            }
        }
        const Reading centre = read(center);
        const double centre_value = vector ? centre.vector * centre.vector / (k * k) : std::norm(centre.lambda);
        return best_value > centre_value ? read(local.point(best)) : centre;
    };
    if (mono) mono = refine(mono->at, false);
    std::optional<Reading> best_dip;
    for (const auto& m : group.members) {
        if (m.component == 0) continue;
        const auto r = refine(m.location, true);
        if (!best_dip || r.vector > best_dip->vector) best_dip = r;
    }
    dip = best_dip;
    Reading chosen;
    if (mono && dip) {
        const bool monopole = detail::model_residual<N>(evaluator, mono->at, false) <=
                              detail::model_residual<N>(evaluator, dip->at, true);
        chosen = monopole ? *mono : *dip;
    } else if (mono || dip) {
        chosen = mono ? *mono : *dip;
    } else {
        chosen = read(group.centroid);
    }
    group.anchor = chosen.at;
    group.scalar_estimate = chosen.lambda;
    group.vector_estimate = chosen.eta;
    group.kind = std::abs(chosen.lambda) >= chosen.vector ? SourceKind::monopole : SourceKind::dipole;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <int N>
void check_cauchy_dims(const CauchyData<N>& cauchy, const DirectionSet<N>& directions) {
    if (cauchy.surface.size() == 0) throw std::invalid_argument("locator: empty measurement surface");
    if (directions.size() == 0) throw std::invalid_argument("locator: empty direction set");
}

template <int N>
void finish(Reconstruction<N>& rec, std::vector<Peak<N>>& pooled, const IndicatorEvaluator<N>& evaluator,
            const LocatorOptions& options, double k) {
    const double radius = options.cluster_radius.value_or(2.0 * std::numbers::pi / k);
    const auto evaluated = component_list<N>(options.components).size();
    const std::size_t support = options.min_support > 0 ? static_cast<std::size_t>(options.min_support)
                                : (N == 2 && evaluated >= 2)  ? 2
                                                              : 1;
    std::vector<PeakGroup<N>> candidates;
    for (auto& g : cluster_peaks<N>(pooled, radius)) {
        reduce_to_strongest<N>(g);
        if (g.members.size() >= support) candidates.push_back(std::move(g));
    }
    auto strength = [](const PeakGroup<N>& g) {
        double s = 0.0;
        for (const auto& m : g.members) s = std::max(s, m.relative);
        return s;
    };
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return strength(candidates[a]) > strength(candidates[b]); });
    const double separation = options.min_separation.value_or(4.0 * std::numbers::pi / k);
    std::vector<bool> keep(candidates.size(), false);
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        const auto& g = candidates[order[idx]];
        bool shadowed = false;
        for (std::size_t prev = 0; prev < idx && separation > 0.0; ++prev)
            if (keep[order[prev]] && set_distance<N>(g, candidates[order[prev]]) < separation) shadowed = true;
        keep[order[idx]] = !shadowed;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!keep[i]) continue;
        recover_intensities<N>(candidates[i], evaluator);
        rec.groups.push_back(std::move(candidates[i]));
    }
    if (rec.groups.empty()) rec.warnings.push_back("no significant local maximizers found");
    std::array<std::size_t, N + 1> counts = rec.component_peak_counts;
    const std::size_t first = counts[0];
    bool differ = false;
    for (int l = 0; l <= N; ++l)
        if (counts[l] != 0 && first != 0 && counts[l] != first) differ = true;
    if (differ) {
        std::string msg = "components disagree on the number of maximizers:";
        for (int l = 0; l <= N; ++l) msg += " I_" + std::to_string(l) + "=" + std::to_string(counts[l]);
        rec.warnings.push_back(msg);
    }
}

}  // namespace detail

template <int N>
DirectionSet<N> default_directions() {
    if constexpr (N == 2) return circle_directions(256);
    else return sphere_directions(42, 43);
}

/// Single-level direct sampling on one grid.
template <int N>
Reconstruction<N> dsm(const CauchyData<N>& cauchy, double k, const SamplingGrid<N>& grid,
                      const DirectionSet<N>& directions, const LocatorOptions& options = {}) {
    detail::check_wavenumber(k);
    detail::check_cauchy_dims(cauchy, directions);
    const auto t0 = detail::Clock::now();
    Reconstruction<N> rec;
    rec.algorithm = Algorithm::dsm;

    const auto reduced = reduced_data<N>(cauchy, k, directions, options.indicator.threads);
    rec.timings.reduced_seconds = detail::seconds_since(t0);
    const IndicatorEvaluator<N> evaluator(reduced, k, options.indicator);

    const auto t1 = detail::Clock::now();
    const auto fields = evaluator.fields(grid, component_list<N>(options.components));
    rec.timings.coarse_seconds = detail::seconds_since(t1);

    const auto t2 = detail::Clock::now();
    const double merge = options.merge_radius.value_or(2.0 * std::numbers::pi / k);
    std::vector<Peak<N>> pooled;
    for (const auto& f : fields) {
        const auto peaks = find_peaks<N>(f, options.significance, merge);
        rec.component_peak_counts[static_cast<std::size_t>(f.component)] = peaks.size();
        pooled.insert(pooled.end(), peaks.begin(), peaks.end());
    }
    detail::finish<N>(rec, pooled, evaluator, options, k);
    rec.timings.locate_seconds = detail::seconds_since(t2);
    rec.timings.total_seconds = detail::seconds_since(t0);
    if (options.keep_fields) rec.fields = fields;
    return rec;
}

/// Local grid of the given side centred at c, clipped to the probe box.
template <int N>
SamplingGrid<N> local_grid(const Vec<N>& center, double side, int points, const SamplingGrid<N>& box) {
    Vec<N> lo{}, hi{};
    std::array<int, N> counts{};
    for (int a = 0; a < N; ++a) {
        lo[a] = std::max(center[a] - 0.5 * side, box.lower[a]);
        hi[a] = std::min(center[a] + 0.5 * side, box.upper[a]);
        counts[a] = points;
    }
    return make_grid<N>(lo, hi, counts);
}

/// Two-level direct sampling: coarse maximizers, then one local fine grid per
/// maximizer searched on the component that produced it.
template <int N>
Reconstruction<N> dsm2(const CauchyData<N>& cauchy, double k, const SamplingGrid<N>& coarse,
                       const DirectionSet<N>& directions, const LocatorOptions& options = {}) {
    detail::check_wavenumber(k);
    detail::check_cauchy_dims(cauchy, directions);
    const auto t0 = detail::Clock::now();
    Reconstruction<N> rec;
    rec.algorithm = Algorithm::dsm2;
    if (coarse.max_spacing() > std::numbers::pi / k)
        rec.warnings.push_back("coarse grid spacing exceeds pi/k; maximizers may be missed");

    const auto reduced = reduced_data<N>(cauchy, k, directions, options.indicator.threads);
    rec.timings.reduced_seconds = detail::seconds_since(t0);
    const IndicatorEvaluator<N> evaluator(reduced, k, options.indicator);

    const auto t1 = detail::Clock::now();
    const auto fields = evaluator.fields(coarse, component_list<N>(options.components));
    rec.timings.coarse_seconds = detail::seconds_since(t1);

    const auto t2 = detail::Clock::now();
    const double merge = options.merge_radius.value_or(2.0 * std::numbers::pi / k);
    const double side = options.fine_side.value_or(2.0 * std::numbers::pi / k);
    const int points = options.fine_points > 0 ? options.fine_points : (N == 2 ? 40 : 20);
    std::vector<Peak<N>> pooled;
    for (const auto& f : fields) {
        std::vector<Peak<N>> refined;
        for (const auto& p : find_peaks<N>(f, options.significance, merge)) {
            const auto fine = local_grid<N>(p.location, side, points, coarse);
            const auto local = evaluator.fields(fine, {p.component}).front();
            std::size_t best = 0;
            for (std::size_t i = 1; i < local.values.size(); ++i)
                if (local.magnitude(i) > local.magnitude(best)) best = i;
            refined.push_back(Peak<N>{fine.point(best), p.component, local.magnitude(best), best, 0.0});
        }
        // Refined peaks below significance times the largest refined magnitude are dropped.
        double top = 0.0;
        for (const auto& p : refined) top = std::max(top, p.magnitude);
        std::size_t kept = 0;
        for (auto& p : refined) {
            if (p.magnitude < options.significance * top) continue;
            p.relative = p.magnitude / top;
            pooled.push_back(p);
            ++kept;
        }
        rec.component_peak_counts[static_cast<std::size_t>(f.component)] = kept;
    }
    rec.timings.fine_seconds = detail::seconds_since(t2);
    detail::finish<N>(rec, pooled, evaluator, options, k);
    rec.timings.locate_seconds = detail::seconds_since(t2);
    rec.timings.total_seconds = detail::seconds_since(t0);
    if (options.keep_fields) rec.fields = fields;
    return rec;
}

}  // namespace dsm
