#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace doa {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Planar array of omnidirectional elements in the x-y plane. Azimuth is
// measured from the x axis, elevation from the z axis (zenith).
//
// For the uniform circular array, element m (1-based) sits at azimuth
// 2*pi*m/M on a circle of the given radius. The default radius equals the
// wavelength, which makes the phase factor 2*pi*r/lambda collapse to the bare
// 2*pi of the radius-free UCA manifold.
class ArrayGeometry {
public:
    static ArrayGeometry uniform_circular(int num_elements, double wavelength = 1.0, double radius = -1.0);

    // rows x cols grid in the x-y plane with the given spacing (default
    // lambda/2), centered on the origin.
    static ArrayGeometry uniform_rectangular(int rows, int cols, double wavelength = 1.0, double spacing = -1.0);

    int num_elements() const { return static_cast<int>(x_.size()); }
    double wavelength() const { return wavelength_; }
    // Zero for non-circular layouts.
    double radius() const { return radius_; }
    // Azimuth of each element about the array center, in radians.
    const std::vector<double>& element_azimuths() const { return element_azimuths_; }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }

    // 2*pi/lambda
    double wavenumber() const { return wavenumber_; }

private:
    ArrayGeometry(double wavelength, double radius, std::vector<double> x, std::vector<double> y,
                  std::vector<double> azimuths);

    double wavelength_;
    double radius_;
    double wavenumber_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> element_azimuths_;
};

// Far-field sources. Angles are stored in degrees, powers are linear.
struct SourceSet {
    std::vector<double> azimuths_deg;
    std::vector<double> elevations_deg;
    std::vector<double> powers;

    int count() const { return static_cast<int>(azimuths_deg.size()); }

    // Equal unit-power sources.
    static SourceSet from_degrees(std::vector<double> azimuths, std::vector<double> elevations);

    // Throws std::invalid_argument on mismatched lengths, out-of-range angles,
    // non-positive powers, duplicate directions, or count >= num_elements.
    void validate(int num_elements) const;
};

struct SnapshotMatrix {
    CMatrix data;  // M x T

    int num_elements() const { return static_cast<int>(data.rows()); }
    int snapshots() const { return static_cast<int>(data.cols()); }
};

struct SubspaceSplit {
    CMatrix signal_basis;               // M x L
    CMatrix noise_basis;                // M x (M - L)
    Eigen::VectorXd signal_eigenvalues; // descending
    Eigen::VectorXd noise_eigenvalues;  // descending
    // Set when eigenvalues L and L+1 differ by less than kDegenerateGap. The
    // split is still returned; the caller decides whether to trust it.
    bool degenerate = false;
};

inline constexpr double kDegenerateGap = 1e-12;

/// Array response to a unit plane wave from (azimuth, elevation), both in
/// radians. Requires azimuth in [0, 2*pi) and elevation in [0, pi/2]; throws
/// std::domain_error otherwise.
CVector steering_vector(const ArrayGeometry& geom, double azimuth, double elevation);

namespace detail {
// Same formula without the range check. The spectrum and grid code evaluate
// the closed interval [0, 2*pi] and rely on periodicity in azimuth.
CVector steering_vector_unchecked(const ArrayGeometry& geom, double azimuth, double elevation);
}

/// Draws X = A s + n with circular complex Gaussian sources and noise.
///
/// Noise variance is 10^(-snr_db/10); a unit-power source therefore has
/// per-element SNR equal to snr_db. snr_db = +inf gives noiseless data and
/// snr_db = -inf suppresses the sources and leaves unit-variance noise.
/// The result depends only on the arguments.
SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geom, const SourceSet& sources, double snr_db,
                                    int snapshots, std::uint64_t seed);

/// R = X X^H / T.
CMatrix sample_covariance(const SnapshotMatrix& x);

/// Hermitian eigendecomposition sorted by eigenvalue descending (ties keep
/// the solver's index order). The leading `num_sources` eigenvectors span the
/// signal subspace. Requires 0 <= num_sources < M.
SubspaceSplit subspace_split(const CMatrix& covariance, int num_sources);

}  // namespace doa
