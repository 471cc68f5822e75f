/**
 * @file io.hpp
 * @brief Experiment configuration (JSON), CSV export of Cauchy data,
 *        indicator fields and reconstructions, and the matching readers.
 *
 * Numbers are written in shortest round-trip decimal form, so a file read
 * back reproduces the in-memory doubles exactly.
 */
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "forward.hpp"
#include "geometry.hpp"
#include "indicators.hpp"
#include "locator.hpp"

namespace dsm::io {

using Json = nlohmann::ordered_json;

/// Raised for malformed configs or files; maps to exit code 1 in the CLI.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- numbers

inline std::string format_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("format_double: non-finite value");
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) throw ValidationError("not a number: '" + s + "'");
    return v;
}

// ---------------------------------------------------------------- config

struct SourceSpec {
    std::vector<double> location;
    Complex lambda{};
    std::vector<Complex> eta;
};

struct QuadratureSpec {
    /// Circle: count. Sphere: n_theta x n_phi.
    int count = 0;
    int n_theta = 0;
    int n_phi = 0;
};

struct GridSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> counts;
};

struct LocatorSpec {
    double significance = 0.5;
    std::optional<double> merge_radius;
    std::optional<double> cluster_radius;
    std::string components = "all";
    int fine_points = 0;
    std::optional<double> fine_side;
    int min_support = 0;
    std::optional<double> min_separation;
};

struct ExperimentConfig {
    std::string name = "custom";
    int dims = 2;
    double wavenumber = 1.0;
    std::vector<SourceSpec> sources;
    double radius = 1.0;
    QuadratureSpec measurement;
    QuadratureSpec directions;
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    /// Grid probed by DSM and the coarse level of DSM2.
    GridSpec grid;
    /// Optional separate grid for DSM when both algorithms are compared.
    std::optional<GridSpec> dsm_grid;
    std::string algorithm = "dsm2";
    LocatorSpec locator;
    int threads = 0;
    std::string output = "out";
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError("config: " + msg);
}

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
            what + " must be a number or a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
std::vector<T> vector_from_json(const Json& j, const std::string& what) {
    require(j.is_array(), what + " must be an array");
    std::vector<T> out;
    for (const auto& v : j) {
        require(v.is_number(), what + " must contain numbers");
        out.push_back(v.get<T>());
    }
    return out;
}

inline Json quadrature_to_json(const QuadratureSpec& q, int dims) {
    if (dims == 2) return Json{{"count", q.count}};
    return Json{{"n_theta", q.n_theta}, {"n_phi", q.n_phi}};
}

inline QuadratureSpec quadrature_from_json(const Json& j, int dims, const std::string& what) {
    require(j.is_object(), what + " must be an object");
    QuadratureSpec q;
    if (dims == 2) {
        require(j.contains("count") && j["count"].is_number_integer(), what + ".count is required");
        q.count = j["count"].get<int>();
    } else {
        require(j.contains("n_theta") && j.contains("n_phi"), what + " needs n_theta and n_phi");
        q.n_theta = j["n_theta"].get<int>();
        q.n_phi = j["n_phi"].get<int>();
    }
    return q;
}

inline Json grid_to_json(const GridSpec& g) {
    return Json{{"lower", g.lower}, {"upper", g.upper}, {"counts", g.counts}};
}

inline GridSpec grid_from_json(const Json& j, const std::string& what) {
    require(j.is_object(), what + " must be an object");
    for (const char* key : {"lower", "upper", "counts"}) require(j.contains(key), what + "." + key + " is required");
    return GridSpec{vector_from_json<double>(j["lower"], what + ".lower"),
                    vector_from_json<double>(j["upper"], what + ".upper"),
                    vector_from_json<int>(j["counts"], what + ".counts")};
}

inline Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::optional<double> optional_from_json(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    require(j[key].is_number(), std::string(key) + " must be a number or null");
    return j[key].get<double>();
}

inline void validate_grid(const GridSpec& g, int dims, const std::string& what) {
    require(static_cast<int>(g.lower.size()) == dims && static_cast<int>(g.upper.size()) == dims &&
                static_cast<int>(g.counts.size()) == dims,
            what + " corners and counts must have " + std::to_string(dims) + " entries");
    for (int a = 0; a < dims; ++a) {
        require(std::isfinite(g.lower[a]) && std::isfinite(g.upper[a]) && g.lower[a] < g.upper[a],
                what + " lower corner must be below upper corner");
        require(g.counts[a] >= 2, what + " needs at least 2 points per axis");
    }
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
    using detail::require;
    require(c.dims == 2 || c.dims == 3, "dims must be 2 or 3");
    require(std::isfinite(c.wavenumber) && c.wavenumber > 0.0, "wavenumber must be positive");
    require(!c.sources.empty(), "ensemble must contain at least one source");
    for (std::size_t i = 0; i < c.sources.size(); ++i) {
        const auto& s = c.sources[i];
        const std::string tag = "sources[" + std::to_string(i) + "]";
        require(static_cast<int>(s.location.size()) == c.dims, tag + ".location has wrong length");
        require(static_cast<int>(s.eta.size()) == c.dims, tag + ".eta has wrong length");
    }
    require(std::isfinite(c.radius) && c.radius > 0.0, "measurement radius must be positive");
    if (c.dims == 2) {
        require(c.measurement.count >= 8, "measurement.count must be at least 8");
        require(c.directions.count >= 4, "directions.count must be at least 4");
    } else {
        require(c.measurement.n_theta >= 2 && c.measurement.n_phi >= 4, "measurement needs n_theta>=2, n_phi>=4");
        require(c.directions.n_theta >= 2 && c.directions.n_phi >= 4, "directions needs n_theta>=2, n_phi>=4");
    }
    require(std::isfinite(c.noise_level) && c.noise_level >= 0.0 && c.noise_level < 1.0,
            "noise.level must lie in [0, 1)");
    detail::validate_grid(c.grid, c.dims, "grid");
    if (c.dsm_grid) detail::validate_grid(*c.dsm_grid, c.dims, "dsm_grid");
    require(c.algorithm == "dsm" || c.algorithm == "dsm2", "algorithm must be dsm or dsm2");
    require(c.locator.significance > 0.0 && c.locator.significance <= 1.0, "locator.significance must lie in (0, 1]");
    require(c.locator.components == "all" || c.locator.components == "monopole" || c.locator.components == "dipole",
            "locator.components must be all, monopole or dipole");
    require(c.locator.fine_points == 0 || c.locator.fine_points >= 2, "locator.fine_points must be 0 or >= 2");
    for (const auto* v : {&c.locator.merge_radius, &c.locator.cluster_radius, &c.locator.fine_side})
        require(!*v || (std::isfinite(**v) && **v > 0.0), "locator radii and sides must be positive");
    require(c.locator.min_support >= 0, "locator.min_support must be non-negative");
    require(c.threads >= 0, "threads must be non-negative");
}

inline Json to_json(const ExperimentConfig& c) {
    Json sources = Json::array();
    for (const auto& s : c.sources) {
        Json eta = Json::array();
        for (const auto& e : s.eta) eta.push_back(detail::complex_to_json(e));
        sources.push_back(Json{{"location", s.location}, {"lambda", detail::complex_to_json(s.lambda)}, {"eta", eta}});
    }
    Json j;
    j["name"] = c.name;
    j["dims"] = c.dims;
    j["wavenumber"] = c.wavenumber;
    j["sources"] = sources;
    Json measurement = detail::quadrature_to_json(c.measurement, c.dims);
    measurement["radius"] = c.radius;
    j["measurement"] = measurement;
    j["directions"] = detail::quadrature_to_json(c.directions, c.dims);
    j["noise"] = Json{{"level", c.noise_level}, {"seed", c.seed}};
    j["grid"] = detail::grid_to_json(c.grid);
    j["dsm_grid"] = c.dsm_grid ? detail::grid_to_json(*c.dsm_grid) : Json(nullptr);
    j["algorithm"] = c.algorithm;
    j["locator"] = Json{{"significance", c.locator.significance},
                        {"merge_radius", detail::optional_to_json(c.locator.merge_radius)},
                        {"cluster_radius", detail::optional_to_json(c.locator.cluster_radius)},
                        {"components", c.locator.components},
                        {"fine_points", c.locator.fine_points},
                        {"fine_side", detail::optional_to_json(c.locator.fine_side)},
                        {"min_support", c.locator.min_support},
                        {"min_separation", detail::optional_to_json(c.locator.min_separation)}};
    j["threads"] = c.threads;
    j["output"] = c.output;
    return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
    using detail::require;
    require(j.is_object(), "top level must be an object");
    for (const char* key : {"dims", "wavenumber", "sources", "measurement", "directions", "grid"})
        require(j.contains(key), std::string(key) + " is required");
    ExperimentConfig c;
    try {
        c.name = j.value("name", std::string("custom"));
        c.dims = j["dims"].get<int>();
        require(c.dims == 2 || c.dims == 3, "dims must be 2 or 3");
        c.wavenumber = j["wavenumber"].get<double>();
        require(j["sources"].is_array(), "sources must be an array");
        for (std::size_t i = 0; i < j["sources"].size(); ++i) {
            const auto& js = j["sources"][i];
            const std::string tag = "sources[" + std::to_string(i) + "]";
            require(js.is_object() && js.contains("location"), tag + ".location is required");
            SourceSpec s;
            s.location = detail::vector_from_json<double>(js["location"], tag + ".location");
            if (js.contains("lambda")) s.lambda = detail::complex_from_json(js["lambda"], tag + ".lambda");
            if (js.contains("eta")) {
                require(js["eta"].is_array(), tag + ".eta must be an array");
                for (const auto& e : js["eta"]) s.eta.push_back(detail::complex_from_json(e, tag + ".eta"));
            } else {
                s.eta.assign(static_cast<std::size_t>(c.dims), Complex{});
            }
            c.sources.push_back(std::move(s));
        }
        const auto& m = j["measurement"];
        c.measurement = detail::quadrature_from_json(m, c.dims, "measurement");
        require(m.contains("radius"), "measurement.radius is required");
        c.radius = m["radius"].get<double>();
        c.directions = detail::quadrature_from_json(j["directions"], c.dims, "directions");
        if (j.contains("noise")) {
            c.noise_level = j["noise"].value("level", 0.0);
            c.seed = j["noise"].value("seed", std::uint64_t{0});
        }
        c.grid = detail::grid_from_json(j["grid"], "grid");
        if (j.contains("dsm_grid") && !j["dsm_grid"].is_null())
            c.dsm_grid = detail::grid_from_json(j["dsm_grid"], "dsm_grid");
        c.algorithm = j.value("algorithm", std::string("dsm2"));
        if (j.contains("locator")) {
            const auto& l = j["locator"];
            c.locator.significance = l.value("significance", 0.5);
            c.locator.merge_radius = detail::optional_from_json(l, "merge_radius");
            c.locator.cluster_radius = detail::optional_from_json(l, "cluster_radius");
            c.locator.components = l.value("components", std::string("all"));
            c.locator.fine_points = l.value("fine_points", 0);
            c.locator.fine_side = detail::optional_from_json(l, "fine_side");
            c.locator.min_support = l.value("min_support", 0);
            c.locator.min_separation = detail::optional_from_json(l, "min_separation");
        }
        c.threads = j.value("threads", 0);
        c.output = j.value("output", std::string("out"));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

// ------------------------------------------------------ typed conversions

template <int N>
Vec<N> to_vec(const std::vector<double>& v) {
    Vec<N> out{};
    for (int a = 0; a < N; ++a) out[a] = v.at(static_cast<std::size_t>(a));
    return out;
}

template <int N>
SourceEnsemble<N> make_ensemble(const ExperimentConfig& c) {
    SourceEnsemble<N> e;
    for (const auto& s : c.sources) {
        ComplexVec<N> eta{};
        for (int a = 0; a < N; ++a) eta[a] = s.eta.at(static_cast<std::size_t>(a));
        e.sources.push_back(PointSource<N>{to_vec<N>(s.location), s.lambda, eta});
    }
    return e;
}

template <int N>
MeasurementSurface<N> make_surface(const ExperimentConfig& c) {
    if constexpr (N == 2) return circle_surface(c.radius, c.measurement.count);
    else return sphere_surface(c.radius, c.measurement.n_theta, c.measurement.n_phi);
}

template <int N>
DirectionSet<N> make_directions(const ExperimentConfig& c) {
    if constexpr (N == 2) return circle_directions(c.directions.count);
    else return sphere_directions(c.directions.n_theta, c.directions.n_phi);
}

template <int N>
SamplingGrid<N> make_sampling_grid(const GridSpec& g) {
    std::array<int, N> counts{};
    for (int a = 0; a < N; ++a) counts[a] = g.counts.at(static_cast<std::size_t>(a));
    return make_grid<N>(to_vec<N>(g.lower), to_vec<N>(g.upper), counts);
}

inline LocatorOptions make_locator_options(const ExperimentConfig& c) {
    LocatorOptions o;
    o.significance = c.locator.significance;
    o.merge_radius = c.locator.merge_radius;
    o.cluster_radius = c.locator.cluster_radius;
    o.components = parse_component_set(c.locator.components);
    o.fine_points = c.locator.fine_points;
    o.fine_side = c.locator.fine_side;
    o.min_support = c.locator.min_support;
    o.min_separation = c.locator.min_separation;
    o.indicator.threads = static_cast<unsigned>(c.threads);
    return o;
}

// ------------------------------------------------------------------- CSV

namespace detail {

inline const char* axis_name(int a) {
    static const char* names[] = {"x", "y", "z"};
    return names[a];
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ValidationError("csv: missing column '" + name + "'");
    }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty file");
    t.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_csv_line(line);
        if (row.size() != t.header.size()) throw ValidationError(path.string() + ": ragged row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace detail

/// Columns: x.., nx.., weight, u_re, u_im, dnu_re, dnu_im, u_noisy_re,
/// u_noisy_im, dnu_noisy_re, dnu_noisy_im.
template <int N>
void write_cauchy_csv(const std::filesystem::path& path, const CauchyData<N>& clean, const CauchyData<N>& noisy) {
    if (clean.dirichlet.size() != noisy.dirichlet.size())
        throw std::invalid_argument("write_cauchy_csv: clean and noisy data differ in length");
    auto out = detail::open_out(path);
    for (int a = 0; a < N; ++a) out << detail::axis_name(a) << ',';
    for (int a = 0; a < N; ++a) out << 'n' << detail::axis_name(a) << ',';
    out << "weight,u_re,u_im,dnu_re,dnu_im,u_noisy_re,u_noisy_im,dnu_noisy_re,dnu_noisy_im\n";
    const auto& s = clean.surface;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (int a = 0; a < N; ++a) out << format_double(s.points[i][a]) << ',';
        for (int a = 0; a < N; ++a) out << format_double(s.normals[i][a]) << ',';
        out << format_double(s.weights[i]);
        for (const Complex v : {clean.dirichlet[i], clean.neumann[i], noisy.dirichlet[i], noisy.neumann[i]})
            out << ',' << format_double(v.real()) << ',' << format_double(v.imag());
        out << '\n';
    }
}

/// Reads the clean or the noisy columns back into CauchyData.
template <int N>
CauchyData<N> read_cauchy_csv(const std::filesystem::path& path, bool noisy) {
    const auto t = detail::read_csv(path);
    CauchyData<N> c;
    std::array<std::size_t, N> px{}, nx{};
    for (int a = 0; a < N; ++a) {
        px[a] = t.column(detail::axis_name(a));
        nx[a] = t.column(std::string("n") + detail::axis_name(a));
    }
    const std::string suffix = noisy ? "_noisy" : "";
    const auto w = t.column("weight");
    const auto ur = t.column("u" + suffix + "_re"), ui = t.column("u" + suffix + "_im");
    const auto dr = t.column("dnu" + suffix + "_re"), di = t.column("dnu" + suffix + "_im");
    for (const auto& row : t.rows) {
        Vec<N> p{}, n{};
        for (int a = 0; a < N; ++a) {
            p[a] = parse_double(row[px[a]]);
            n[a] = parse_double(row[nx[a]]);
        }
        c.surface.points.push_back(p);
        c.surface.normals.push_back(n);
        c.surface.weights.push_back(parse_double(row[w]));
        c.dirichlet.emplace_back(parse_double(row[ur]), parse_double(row[ui]));
        c.neumann.emplace_back(parse_double(row[dr]), parse_double(row[di]));
    }
    if (c.surface.points.empty()) throw ValidationError(path.string() + ": no data rows");
    c.surface.radius = norm<N>(c.surface.points.front());
    return c;
}

/// Columns: index, x.., abs, normalized, re, im. normalized = |I| / max|I|.
template <int N>
void write_indicator_csv(const std::filesystem::path& path, const IndicatorField<N>& field) {
    auto out = detail::open_out(path);
    out << "index,";
    for (int a = 0; a < N; ++a) out << detail::axis_name(a) << ',';
    out << "abs,normalized,re,im\n";
    const double peak = field.max_magnitude();
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const auto p = field.grid.point(i);
        out << i << ',';
        for (int a = 0; a < N; ++a) out << format_double(p[a]) << ',';
        const double m = field.magnitude(i);
        out << format_double(m) << ',' << format_double(peak > 0.0 ? m / peak : 0.0) << ','
            << format_double(field.values[i].real()) << ',' << format_double(field.values[i].imag()) << '\n';
    }
}

/// Reconstructs the grid from the coordinate columns and the values from re/im.
template <int N>
IndicatorField<N> read_indicator_csv(const std::filesystem::path& path, int component) {
    const auto t = detail::read_csv(path);
    if (t.rows.empty()) throw ValidationError(path.string() + ": no data rows");
    std::array<std::size_t, N> px{};
    for (int a = 0; a < N; ++a) px[a] = t.column(detail::axis_name(a));
    const auto re = t.column("re"), im = t.column("im");
    std::array<std::vector<double>, N> axes;
    IndicatorField<N> f;
    f.component = component;
    for (const auto& row : t.rows) {
        for (int a = 0; a < N; ++a) {
            const double v = parse_double(row[px[a]]);
            if (std::find(axes[a].begin(), axes[a].end(), v) == axes[a].end()) axes[a].push_back(v);
        }
        f.values.emplace_back(parse_double(row[re]), parse_double(row[im]));
    }
    Vec<N> lo{}, hi{};
    std::array<int, N> counts{};
    for (int a = 0; a < N; ++a) {
        lo[a] = *std::min_element(axes[a].begin(), axes[a].end());
        hi[a] = *std::max_element(axes[a].begin(), axes[a].end());
        counts[a] = static_cast<int>(axes[a].size());
    }
    f.grid = make_grid<N>(lo, hi, counts);
    if (f.grid.size() != f.values.size()) throw ValidationError(path.string() + ": not a full lattice");
    return f;
}

inline std::string component_provenance(const std::vector<int>& components) {
    std::string s;
    for (int c : components) {
        if (!s.empty()) s += ';';
        s += "I" + std::to_string(c);
    }
    return s;
}

template <int N>
std::vector<int> group_components(const PeakGroup<N>& g) {
    std::vector<int> out;
    for (const auto& m : g.members)
        if (std::find(out.begin(), out.end(), m.component) == out.end()) out.push_back(m.component);
    std::sort(out.begin(), out.end());
    return out;
}

/// Columns: group, components, members, x.., kind, lambda_re, lambda_im,
/// eta<l>_re, eta<l>_im.., magnitude. Intensities are estimates.
template <int N>
void write_reconstruction_csv(const std::filesystem::path& path, const Reconstruction<N>& rec, double k) {
    auto out = detail::open_out(path);
    out << "group,components,members,";
    for (int a = 0; a < N; ++a) out << detail::axis_name(a) << ',';
    out << "kind,lambda_re,lambda_im,";
    for (int a = 0; a < N; ++a) out << "eta" << a + 1 << "_re,eta" << a + 1 << "_im,";
    out << "magnitude\n";
    for (std::size_t g = 0; g < rec.groups.size(); ++g) {
        const auto& grp = rec.groups[g];
        out << g << ',' << component_provenance(group_components(grp)) << ',' << grp.members.size() << ',';
        for (int a = 0; a < N; ++a) out << format_double(grp.centroid[a]) << ',';
        out << to_string(grp.kind) << ',' << format_double(grp.scalar_estimate.real()) << ','
            << format_double(grp.scalar_estimate.imag()) << ',';
        for (int a = 0; a < N; ++a)
            out << format_double(grp.vector_estimate[a].real()) << ',' << format_double(grp.vector_estimate[a].imag())
                << ',';
        out << format_double(grp.magnitude(k)) << '\n';
    }
}

/// Summary row of one recovered group, as read back from reconstruction.csv.
struct GroupRow {
    std::vector<double> centroid;
    std::string kind;
    Complex lambda;
};

inline std::vector<GroupRow> read_reconstruction_csv(const std::filesystem::path& path, int dims) {
    const auto t = detail::read_csv(path);
    std::vector<GroupRow> out;
    const auto kind = t.column("kind"), lr = t.column("lambda_re"), li = t.column("lambda_im");
    for (const auto& row : t.rows) {
        GroupRow g;
        for (int a = 0; a < dims; ++a) g.centroid.push_back(parse_double(row[t.column(detail::axis_name(a))]));
        g.kind = row[kind];
        g.lambda = {parse_double(row[lr]), parse_double(row[li])};
        out.push_back(std::move(g));
    }
    return out;
}

/// JSON summary of a run: configuration, timings, counts, warnings.
template <int N>
Json run_record(const ExperimentConfig& config, const Reconstruction<N>& rec) {
    Json j;
    j["algorithm"] = to_string(rec.algorithm);
    j["config"] = to_json(config);
    j["seed"] = config.seed;
    j["timings_seconds"] = Json{{"reduced", rec.timings.reduced_seconds},
                                {"coarse", rec.timings.coarse_seconds},
                                {"fine", rec.timings.fine_seconds},
                                {"locate", rec.timings.locate_seconds},
                                {"total", rec.timings.total_seconds}};
    j["estimated_count"] = rec.estimated_count();
    j["component_peak_counts"] = rec.component_peak_counts;
    j["warnings"] = rec.warnings;
    j["intensities_are_estimates"] = true;
    return j;
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace dsm::io
