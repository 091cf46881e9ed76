#pragma once

#include <cstdint>
#include <vector>

#include "doa/signal_model.hpp"

namespace doa {

// Projector onto the noise subspace, G = U_n U_n^H. The pseudo-spectrum only
// ever needs G, so it is formed once per covariance and then shared
// read-only by every spectrum evaluation.
class NoiseProjector {
public:
    NoiseProjector(ArrayGeometry geometry, const SubspaceSplit& split);

    // Takes G as given. Throws std::invalid_argument if it is not M x M or not
    // Hermitian within 1e-12.
    NoiseProjector(ArrayGeometry geometry, CMatrix projector, int num_sources);

    const CMatrix& matrix() const { return g_; }
    const ArrayGeometry& geometry() const { return geometry_; }
    int num_sources() const { return num_sources_; }

    // a^H G a, the quantity the pseudo-spectrum inverts. Real and in [0, M]
    // for a true projector.
    double quadratic_form(const CVector& a) const;

private:
    ArrayGeometry geometry_;
    CMatrix g_;
    int num_sources_;
};

inline constexpr double kSpectrumFloor = 1e-12;

/// 1 / max(a^H G a, 1e-12) at (azimuth, elevation) in radians. Azimuth may be
/// any finite value; the spectrum is 2*pi periodic in it.
double music_value(const NoiseProjector& proj, double azimuth, double elevation);

/// Same value from the noise basis directly: 1 / ||U_n^H a||^2.
double music_value_from_basis(const ArrayGeometry& geom, const CMatrix& noise_basis, double azimuth, double elevation);

// Inclusive, uniformly sampled grid in degrees.
struct GridSpec {
    double azimuth_lo = 0.0;
    double azimuth_hi = 360.0;
    int azimuth_samples = 361;
    double elevation_lo = 0.0;
    double elevation_hi = 90.0;
    int elevation_samples = 91;

    double azimuth_step() const { return (azimuth_hi - azimuth_lo) / (azimuth_samples - 1); }
    double elevation_step() const { return (elevation_hi - elevation_lo) / (elevation_samples - 1); }
    double azimuth_at(int i) const { return azimuth_lo + i * azimuth_step(); }
    double elevation_at(int j) const { return elevation_lo + j * elevation_step(); }
    std::int64_t points() const { return static_cast<std::int64_t>(azimuth_samples) * elevation_samples; }

    void validate() const;
};

struct SpectrumGrid {
    GridSpec spec;
    std::vector<double> values;  // row-major, azimuth index major

    double at(int az, int el) const { return values[static_cast<std::size_t>(az) * spec.elevation_samples + el]; }
};

struct SpectrumPeak {
    double azimuth_deg;
    double elevation_deg;
    double value;
};

struct GridSearchResult {
    std::vector<SpectrumPeak> peaks;  // descending by value
    bool shortfall = false;           // fewer local maxima than requested
    std::int64_t evaluations = 0;
};

/// Evaluates the whole grid.
SpectrumGrid evaluate_spectrum(const NoiseProjector& proj, const GridSpec& spec);

/// Exhaustive peak search: strict local maxima against the (up to 8) existing
/// grid neighbours (values within 1e-12 relative are ties), top `count` by
/// value. Maxima on the 0/360 seam that
/// coincide circularly are merged.
GridSearchResult grid_search(const NoiseProjector& proj, const GridSpec& spec, int count);

// Analytic cost model, in FLOPs.
struct FlopModel {
    std::int64_t num_elements = 12;
    std::int64_t num_sources = 3;
    std::int64_t grid_points = 361 * 91;
    std::int64_t population = 256;
    std::int64_t max_iterations = 20;

    void validate() const;
};

// Subspace decomposition plus one spectrum evaluation per grid point:
// M^2 (L + 2) + J (M + 1)(M - L).
double flops_music(const FlopModel& model);

// Subspace decomposition plus, per iteration, one spectrum evaluation and
// the pairwise-distance share per individual:
// M^2 (L + 2) + Max_iter N_R ((M + 1)(M - L) + (N_R - 1)).
double flops_population(const FlopModel& model);

struct ComplexityCell {
    int num_elements;
    int num_sources;
    double music_mflops;
    double population_mflops;
    double ratio;  // population / music
};

/// The 3 x 3 sweep M in {12, 32, 128}, L in {1, 3, 10} with a 361 x 91 grid,
/// N_R = 256 and Max_iter = 20. Ordered by L, then M.
std::vector<ComplexityCell> complexity_table();

}  // namespace doa
