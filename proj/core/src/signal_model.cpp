#include "doa/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace doa {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

}  // namespace

ArrayGeometry::ArrayGeometry(double wavelength, double radius, std::vector<double> x, std::vector<double> y,
                             std::vector<double> azimuths)
    : wavelength_(wavelength),
      radius_(radius),
      wavenumber_(2.0 * kPi / wavelength),
      x_(std::move(x)),
      y_(std::move(y)),
      element_azimuths_(std::move(azimuths)) {}

ArrayGeometry ArrayGeometry::uniform_circular(int num_elements, double wavelength, double radius) {
    if (num_elements < 2) throw std::invalid_argument("UCA needs at least 2 elements");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw std::invalid_argument("wavelength must be positive");
    if (radius < 0.0) radius = wavelength;
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be positive");

    std::vector<double> az(num_elements), x(num_elements), y(num_elements);
    for (int m = 1; m <= num_elements; ++m) {
        const double phi = 2.0 * kPi * m / num_elements;
        az[m - 1] = phi;
        x[m - 1] = radius * std::cos(phi);
        y[m - 1] = radius * std::sin(phi);
    }
    return ArrayGeometry(wavelength, radius, std::move(x), std::move(y), std::move(az));
}

ArrayGeometry ArrayGeometry::uniform_rectangular(int rows, int cols, double wavelength, double spacing) {
    if (rows < 1 || cols < 1 || rows * cols < 2) throw std::invalid_argument("URA needs at least 2 elements");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw std::invalid_argument("wavelength must be positive");
    if (spacing < 0.0) spacing = wavelength / 2.0;
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");

    std::vector<double> x, y, az;
    const double cx = 0.5 * (cols - 1), cy = 0.5 * (rows - 1);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double px = (c - cx) * spacing, py = (r - cy) * spacing;
            x.push_back(px);
            y.push_back(py);
            double a = std::atan2(py, px);
            if (a < 0.0) a += 2.0 * kPi;
            az.push_back(a);
        }
    }
    return ArrayGeometry(wavelength, 0.0, std::move(x), std::move(y), std::move(az));
}

SourceSet SourceSet::from_degrees(std::vector<double> azimuths, std::vector<double> elevations) {
    SourceSet s;
    s.powers.assign(azimuths.size(), 1.0);
    s.azimuths_deg = std::move(azimuths);
    s.elevations_deg = std::move(elevations);
    return s;
}

void SourceSet::validate(int num_elements) const {
    const auto n = azimuths_deg.size();
    if (n == 0) throw std::invalid_argument("source set is empty");
    if (elevations_deg.size() != n || powers.size() != n)
        throw std::invalid_argument("source azimuth/elevation/power lists differ in length");
    if (static_cast<int>(n) >= num_elements)
        throw std::invalid_argument("source count must be smaller than the element count");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(azimuths_deg[i] >= 0.0 && azimuths_deg[i] < 360.0))
            throw std::invalid_argument("source azimuth outside [0, 360): " + std::to_string(azimuths_deg[i]));
        if (!(elevations_deg[i] >= 0.0 && elevations_deg[i] <= 90.0))
            throw std::invalid_argument("source elevation outside [0, 90]: " + std::to_string(elevations_deg[i]));
        if (!(powers[i] > 0.0) || !std::isfinite(powers[i]))
            throw std::invalid_argument("source power must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (azimuths_deg[i] == azimuths_deg[j] && elevations_deg[i] == elevations_deg[j])
                throw std::invalid_argument("two sources share the same direction");
    }
}

namespace detail {

CVector steering_vector_unchecked(const ArrayGeometry& geom, double azimuth, double elevation) {
    const int m = geom.num_elements();
    const auto& x = geom.x();
    const auto& y = geom.y();
    const double k = geom.wavenumber() * std::sin(elevation);
    const double c = std::cos(azimuth), s = std::sin(azimuth);
    CVector a(m);
    for (int i = 0; i < m; ++i) {
        const double phase = -k * (x[i] * c + y[i] * s);
        a[i] = cdouble(std::cos(phase), std::sin(phase));
    }
    return a;
}

}  // namespace detail

CVector steering_vector(const ArrayGeometry& geom, double azimuth, double elevation) {
    if (!(azimuth >= 0.0 && azimuth < 2.0 * kPi))
        throw std::domain_error("azimuth outside [0, 2*pi): " + std::to_string(azimuth));
    if (!(elevation >= 0.0 && elevation <= kPi / 2.0))
        throw std::domain_error("elevation outside [0, pi/2]: " + std::to_string(elevation));
    return detail::steering_vector_unchecked(geom, azimuth, elevation);
}

SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geom, const SourceSet& sources, double snr_db,
                                    int snapshots, std::uint64_t seed) {
    if (snapshots < 1) throw std::invalid_argument("snapshot count must be positive");
    sources.validate(geom.num_elements());

    const int m = geom.num_elements();
    const int l = sources.count();

    if (std::isnan(snr_db)) throw std::invalid_argument("SNR is NaN");
    double noise_var = 0.0;
    bool sources_on = true;
    if (std::isinf(snr_db) && snr_db < 0.0) {
        noise_var = 1.0;
        sources_on = false;
    } else if (!std::isinf(snr_db)) {
        noise_var = std::pow(10.0, -snr_db / 10.0);
    }

    CMatrix manifold(m, l);
    for (int i = 0; i < l; ++i)
        manifold.col(i) = steering_vector(geom, deg2rad(sources.azimuths_deg[i]), deg2rad(sources.elevations_deg[i]));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Each draw below has unit variance per real component, so scale by
    // sqrt(power / 2) to get circular CN(0, power).
    CMatrix symbols(l, snapshots);
    for (int t = 0; t < snapshots; ++t) {
        for (int i = 0; i < l; ++i) {
            const double amp = sources_on ? std::sqrt(sources.powers[i] / 2.0) : 0.0;
            const double re = gauss(rng), im = gauss(rng);
            symbols(i, t) = cdouble(amp * re, amp * im);
        }
    }

    SnapshotMatrix out;
    out.data = manifold * symbols;
    if (noise_var > 0.0) {
        const double amp = std::sqrt(noise_var / 2.0);
        for (int t = 0; t < snapshots; ++t)
            for (int i = 0; i < m; ++i) {
                const double re = gauss(rng), im = gauss(rng);
                out.data(i, t) += cdouble(amp * re, amp * im);
            }
    }
    return out;
}

CMatrix sample_covariance(const SnapshotMatrix& x) {
    if (x.snapshots() < 1) throw std::invalid_argument("snapshot matrix has no columns");
    CMatrix r = x.data * x.data.adjoint() / static_cast<double>(x.snapshots());
    // Symmetrize so the result is exactly Hermitian despite rounding.
    return (0.5 * (r + r.adjoint())).eval();
}

SubspaceSplit subspace_split(const CMatrix& covariance, int num_sources) {
    const int m = static_cast<int>(covariance.rows());
    if (covariance.cols() != m) throw std::invalid_argument("covariance must be square");
    if (num_sources < 0 || num_sources >= m) throw std::invalid_argument("need 0 <= source count < element count");

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(covariance);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigendecomposition failed");

    const Eigen::VectorXd& values = solver.eigenvalues();
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });

    SubspaceSplit split;
    split.signal_basis.resize(m, num_sources);
    split.signal_eigenvalues.resize(num_sources);
    split.noise_basis.resize(m, m - num_sources);
    split.noise_eigenvalues.resize(m - num_sources);
    for (int k = 0; k < m; ++k) {
        const int src = order[k];
        if (k < num_sources) {
            split.signal_basis.col(k) = solver.eigenvectors().col(src);
            split.signal_eigenvalues[k] = values[src];
        } else {
            split.noise_basis.col(k - num_sources) = solver.eigenvectors().col(src);
            split.noise_eigenvalues[k - num_sources] = values[src];
        }
    }
    if (num_sources > 0)
        split.degenerate = (values[order[num_sources - 1]] - values[order[num_sources]]) < kDegenerateGap;
    return split;
}

}  // namespace doa
