#include "doa/music.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doa {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

void check_hermitian(const CMatrix& g) {
    if (g.rows() != g.cols()) throw std::invalid_argument("projector must be square");
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("projector is not Hermitian");
}

}  // namespace

NoiseProjector::NoiseProjector(ArrayGeometry geometry, const SubspaceSplit& split)
    : geometry_(std::move(geometry)),
      g_(split.noise_basis * split.noise_basis.adjoint()),
      num_sources_(static_cast<int>(split.signal_basis.cols())) {
    if (g_.rows() != geometry_.num_elements()) throw std::invalid_argument("subspace dimension does not match array");
    g_ = (0.5 * (g_ + g_.adjoint())).eval();
}

NoiseProjector::NoiseProjector(ArrayGeometry geometry, CMatrix projector, int num_sources)
    : geometry_(std::move(geometry)), g_(std::move(projector)), num_sources_(num_sources) {
    check_hermitian(g_);
    if (g_.rows() != geometry_.num_elements()) throw std::invalid_argument("projector dimension does not match array");
    if (num_sources_ < 0 || num_sources_ >= geometry_.num_elements())
        throw std::invalid_argument("need 0 <= source count < element count");
}

double NoiseProjector::quadratic_form(const CVector& a) const { return a.dot(g_ * a).real(); }

double music_value(const NoiseProjector& proj, double azimuth, double elevation) {
    const CVector a = detail::steering_vector_unchecked(proj.geometry(), azimuth, elevation);
    return 1.0 / std::max(proj.quadratic_form(a), kSpectrumFloor);
}

double music_value_from_basis(const ArrayGeometry& geom, const CMatrix& noise_basis, double azimuth,
                              double elevation) {
    const CVector a = detail::steering_vector_unchecked(geom, azimuth, elevation);
    const double q = (noise_basis.adjoint() * a).squaredNorm();
    return 1.0 / std::max(q, kSpectrumFloor);
}

void GridSpec::validate() const {
    if (azimuth_samples < 2 || elevation_samples < 2) throw std::invalid_argument("grid needs >= 2 samples per axis");
    if (!(azimuth_hi > azimuth_lo) || !(elevation_hi > elevation_lo))
        throw std::invalid_argument("grid range must satisfy lo < hi");
    if (elevation_lo < 0.0 || elevation_hi > 90.0) throw std::invalid_argument("grid elevation outside [0, 90]");
}

SpectrumGrid evaluate_spectrum(const NoiseProjector& proj, const GridSpec& spec) {
    spec.validate();
    SpectrumGrid grid;
    grid.spec = spec;
    grid.values.resize(static_cast<std::size_t>(spec.points()));
    for (int i = 0; i < spec.azimuth_samples; ++i) {
        const double az = deg2rad(spec.azimuth_at(i));
        for (int j = 0; j < spec.elevation_samples; ++j)
            grid.values[static_cast<std::size_t>(i) * spec.elevation_samples + j] =
                music_value(proj, az, deg2rad(spec.elevation_at(j)));
    }
    return grid;
}

// Relative difference below which two spectrum samples count as equal, so
// round-off on a flat spectrum does not create maxima.
constexpr double kTieTolerance = 1e-12;

GridSearchResult grid_search(const NoiseProjector& proj, const GridSpec& spec, int count) {
    if (count < 0) throw std::invalid_argument("peak count must be non-negative");
    const SpectrumGrid grid = evaluate_spectrum(proj, spec);
    const int na = spec.azimuth_samples, ne = spec.elevation_samples;

    std::vector<SpectrumPeak> maxima;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < ne; ++j) {
            const double v = grid.at(i, j);
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= na || jj < 0 || jj >= ne) continue;
                    const double nb = grid.at(ii, jj);
                    if (!(v - nb > kTieTolerance * std::abs(nb))) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) maxima.push_back({spec.azimuth_at(i), spec.elevation_at(j), v});
        }
    }
    std::stable_sort(maxima.begin(), maxima.end(),
                     [](const SpectrumPeak& a, const SpectrumPeak& b) { return a.value > b.value; });

    // 0 and 360 are separate samples of the same direction.
    const double step_az = spec.azimuth_step(), step_el = spec.elevation_step();
    std::vector<SpectrumPeak> kept;
    for (const auto& p : maxima) {
        bool dup = false;
        for (const auto& q : kept) {
            double d = std::fmod(std::abs(p.azimuth_deg - q.azimuth_deg), 360.0);
            d = std::min(d, 360.0 - d);
            if (d < step_az && std::abs(p.elevation_deg - q.elevation_deg) < step_el) {
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(p);
    }

    GridSearchResult result;
    result.evaluations = spec.points();
    result.shortfall = static_cast<int>(kept.size()) < count;
    if (static_cast<int>(kept.size()) > count) kept.resize(count);
    result.peaks = std::move(kept);
    return result;
}

void FlopModel::validate() const {
    if (num_elements <= 0 || num_sources <= 0 || grid_points <= 0 || population <= 0 || max_iterations <= 0)
        throw std::invalid_argument("FLOP model parameters must be positive");
    if (num_sources >= num_elements) throw std::invalid_argument("FLOP model needs L < M");
}

double flops_music(const FlopModel& model) {
    model.validate();
    const std::int64_t m = model.num_elements, l = model.num_sources;
    return static_cast<double>(m * m * (l + 2) + model.grid_points * (m + 1) * (m - l));
}

double flops_population(const FlopModel& model) {
    model.validate();
    const std::int64_t m = model.num_elements, l = model.num_sources, n = model.population;
    return static_cast<double>(m * m * (l + 2) + model.max_iterations * n * ((m + 1) * (m - l) + (n - 1)));
}

std::vector<ComplexityCell> complexity_table() {
    std::vector<ComplexityCell> cells;
    for (int l : {1, 3, 10}) {
        for (int m : {12, 32, 128}) {
            FlopModel model;
            model.num_elements = m;
            model.num_sources = l;
            model.grid_points = 361 * 91;
            model.population = 256;
            model.max_iterations = 20;
            const double mu = flops_music(model), po = flops_population(model);
            cells.push_back({m, l, mu / 1e6, po / 1e6, po / mu});
        }
    }
    return cells;
}

}  // namespace doa
