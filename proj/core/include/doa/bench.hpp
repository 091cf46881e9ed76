#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doa/music.hpp"
#include "doa/optimizer.hpp"
#include "doa/peaks.hpp"
#include "doa/signal_model.hpp"

namespace doa::bench {

// Everything a Monte Carlo experiment needs. The defaults describe the
// reference experiment: a 12-element UCA, three unit-power sources at
// (30.42, 60.39), (120.27, 29.42), (240.51, 45.55) degrees, 100 snapshots,
// DE-NM with DBSCAN extraction.
struct Scenario {
    int num_elements = 12;
    double wavelength = 1.0;
    double radius = -1.0;  // negative means radius = wavelength
    SourceSet sources = SourceSet::from_degrees({30.42, 120.27, 240.51}, {60.39, 29.42, 45.55});
    std::vector<double> snr_db{-5.0, 0.0, 5.0, 10.0};
    int snapshots = 100;
    int trials = 1000;

    Algorithm algorithm = Algorithm::DENM;
    DEConfig de;
    SearchBox box;
    GridSpec grid;

    ExtractionMethod extraction = ExtractionMethod::DBSCAN;
    ExtractionParams extraction_params;

    double success_threshold_deg = 2.0;
    std::uint64_t master_seed = 20250101;
    int threads = 0;  // 0 = hardware concurrency

    ArrayGeometry geometry() const { return ArrayGeometry::uniform_circular(num_elements, wavelength, radius); }
    int num_sources() const { return sources.count(); }
    void validate() const;
};

// One splitmix64 step (golden increment, then finalizer); stable across
// platforms and releases.
std::uint64_t mix64(std::uint64_t x);

// seed_i = mix64(master + (i + 1) * 0x9E3779B97F4A7C15).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

// Independent per-stage streams derived from a trial seed.
enum class Stream : std::uint64_t { Data = 1, Optimizer = 2, Extraction = 3 };
std::uint64_t stream_seed(std::uint64_t trial_seed, Stream s);

// min(|a - b|, 360 - |a - b|) after reducing the difference mod 360.
double circular_azimuth_error(double a_deg, double b_deg);

struct SourceError {
    std::size_t estimate;  // index into the estimate list
    double theta_err_deg;
    double phi_err_deg;
};

struct Matching {
    std::vector<std::optional<SourceError>> per_source;  // indexed by truth
    double total_cost = 0.0;
    int unmatched = 0;
};

/// Minimum total cost one-to-one assignment of estimates to true sources,
/// with cost circular_azimuth_error + |delta phi|. Solved exactly with the
/// Hungarian method. Requires |estimates| <= L; leftover truths are
/// reported as unmatched.
Matching match_estimates(const SourceSet& truth, std::span<const DoaEstimate> estimates);

struct TrialReport {
    int trial = 0;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    Algorithm algorithm = Algorithm::DENM;
    std::optional<ExtractionMethod> extraction;  // empty for grid search
    std::vector<DoaEstimate> estimates;
    Matching matching;
    bool shortfall = false;
    bool degenerate_split = false;
    bool success = false;
    double model_flops = 0.0;
    std::int64_t measured_evals = 0;
    double wall_ms = 0.0;
};

/// One trial: synthesize, covariance, subspace split, projector, search,
/// extract, match. Everything except wall_ms is fixed by (scenario, snr,
/// trial index).
TrialReport run_trial(const Scenario& s, double snr_db, int trial_index);

/// Same optimizer run scored with several extraction methods, one report
/// per method in the given order. Not meaningful for grid search.
std::vector<TrialReport> run_trial_extractions(const Scenario& s, double snr_db, int trial_index,
                                               std::span<const ExtractionMethod> methods);

struct AggregateReport {
    std::string algorithm;
    std::string extraction;
    int num_elements = 0;
    int num_sources = 0;
    int population = 0;  // 0 for grid search
    double snr_db = 0.0;
    int snapshots = 0;
    int trials = 0;
    // Over successful trials only.
    double mae_theta_deg = 0.0;
    double mae_phi_deg = 0.0;
    // Over every matched source of every trial.
    double raw_mae_theta_deg = 0.0;
    double raw_mae_phi_deg = 0.0;
    double success_rate = 0.0;
    int failures = 0;
    double model_mflops = 0.0;
    double measured_evals = 0.0;  // mean per trial
    double wall_ms = 0.0;         // mean per trial
    // Sorted absolute errors of every matched source, for CDFs.
    std::vector<double> theta_errors;
    std::vector<double> phi_errors;
};

/// Deterministic reduction in trial order.
AggregateReport aggregate(const Scenario& s, double snr_db, std::span<const TrialReport> trials);

/// Runs trials [0, s.trials) on a worker pool; results are ordered by trial
/// index regardless of thread count.
std::vector<TrialReport> run_trials(const Scenario& s, double snr_db);

/// For compare-extract: result[m][t] is trial t scored with methods[m].
std::vector<std::vector<TrialReport>> run_trials_extractions(const Scenario& s, double snr_db,
                                                             std::span<const ExtractionMethod> methods);

struct SweepPoint {
    AggregateReport summary;
    std::vector<TrialReport> trials;
};

/// One point per SNR in s.snr_db.
std::vector<SweepPoint> run_sweep(const Scenario& s);

/// One point per (population size, SNR).
std::vector<SweepPoint> run_population_sweep(const Scenario& s, std::span<const int> population_sizes);

/// Empirical CDF of sorted samples at x: fraction of samples <= x.
double empirical_cdf(std::span<const double> sorted, double x);

// CSV output. Summary columns: algo, extraction, M, L, snr_db, snapshots,
// trials, mae_theta_deg, mae_phi_deg, success_rate, model_mflops,
// measured_evals, wall_ms, raw_mae_theta_deg, raw_mae_phi_deg, population.
void write_summary_header(std::ostream& os);
void write_summary_row(std::ostream& os, const AggregateReport& r);

// Per-trial, per-source absolute errors. Unmatched sources have empty
// error fields.
void write_errors_header(std::ostream& os);
void write_error_rows(std::ostream& os, std::span<const TrialReport> trials);

struct ComplexityRow {
    ComplexityCell cell;
    std::string formatted;  // "3.8/1.9 (1:0.50)"
};
std::vector<ComplexityRow> report_complexity_table();
void write_complexity_table(std::ostream& os);

}  // namespace doa::bench
