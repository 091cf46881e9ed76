#include "doa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace doa::bench {

namespace {

constexpr double kDeg2Rad = std::numbers::pi / 180.0;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Square-or-wide Hungarian method (rows <= cols), potentials formulation.
// Returns, for every row, the column assigned to it.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    const int m = static_cast<int>(cost[0].size());
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

int resolve_threads(int requested, int jobs) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(t, 1, std::max(1, jobs));
}

// Runs job(i) for i in [0, jobs) on a small pool. Each job writes only its
// own slot, so the output order is fixed by index.
template <typename Job>
void parallel_for(int jobs, int threads, Job&& job) {
    const int t = resolve_threads(threads, jobs);
    if (t == 1) {
        for (int i = 0; i < jobs; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < jobs && !failed; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct Prepared {
    std::uint64_t seed;
    NoiseProjector projector;
    bool degenerate;
};

Prepared prepare(const Scenario& s, double snr_db, int trial_index) {
    const auto seed = trial_seed(s.master_seed, static_cast<std::uint64_t>(trial_index));
    const ArrayGeometry geom = s.geometry();
    const auto x = synthesize_snapshots(geom, s.sources, snr_db, s.snapshots, stream_seed(seed, Stream::Data));
    const auto split = subspace_split(sample_covariance(x), s.num_sources());
    return {seed, NoiseProjector(geom, split), split.degenerate};
}

void score(const Scenario& s, TrialReport& r) {
    r.matching = match_estimates(s.sources, r.estimates);
    bool ok = !r.shortfall && r.matching.unmatched == 0;
    for (const auto& e : r.matching.per_source)
        if (!e || e->theta_err_deg > s.success_threshold_deg || e->phi_err_deg > s.success_threshold_deg) ok = false;
    r.success = ok;
}

FlopModel flop_model(const Scenario& s) {
    FlopModel m;
    m.num_elements = s.num_elements;
    m.num_sources = s.num_sources();
    m.grid_points = s.grid.points();
    m.population = s.de.population_size;
    m.max_iterations = std::max(1, s.de.max_iterations);
    return m;
}

double model_flops(const Scenario& s) {
    const FlopModel m = flop_model(s);
    if (s.algorithm == Algorithm::Grid) return flops_music(m);
    // The model's iteration term needs Max_iter >= 1; a zero-iteration run
    // costs only the initial evaluation.
    if (s.de.max_iterations == 0) {
        const double sub = static_cast<double>(m.num_elements * m.num_elements * (m.num_sources + 2));
        return sub + static_cast<double>(m.population * (m.num_elements + 1) * (m.num_elements - m.num_sources));
    }
    return flops_population(m);
}

}  // namespace

void Scenario::validate() const {
    if (snapshots < 1) throw std::invalid_argument("snapshots must be >= 1");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (snr_db.empty()) throw std::invalid_argument("SNR list is empty");
    if (!(success_threshold_deg > 0.0)) throw std::invalid_argument("success threshold must be positive");
    geometry();
    sources.validate(num_elements);
    box.validate();
    grid.validate();
    if (algorithm != Algorithm::Grid) de.validate();
    if (!(extraction_params.dbscan.eps > 0.0) || extraction_params.dbscan.min_pts < 1)
        throw std::invalid_argument("DBSCAN needs eps > 0 and min_pts >= 1");
    if (extraction_params.klocalmax_k < 1) throw std::invalid_argument("k-localmax k must be >= 1");
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return mix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
    return mix64(seed ^ (static_cast<std::uint64_t>(s) * 0xD1B54A32D192ED03ULL));
}

double circular_azimuth_error(double a_deg, double b_deg) {
    double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
    return std::min(d, 360.0 - d);
}

Matching match_estimates(const SourceSet& truth, std::span<const DoaEstimate> estimates) {
    const int l = truth.count();
    const int k = static_cast<int>(estimates.size());
    if (k > l) throw std::invalid_argument("more estimates than true sources");

    Matching out;
    out.per_source.assign(l, std::nullopt);
    out.unmatched = l - k;
    if (k == 0) return out;

    std::vector<std::vector<double>> cost(k, std::vector<double>(l));
    for (int e = 0; e < k; ++e)
        for (int t = 0; t < l; ++t)
            cost[e][t] = circular_azimuth_error(estimates[e].theta_deg, truth.azimuths_deg[t]) +
                         std::abs(estimates[e].phi_deg - truth.elevations_deg[t]);

    const auto assign = hungarian(cost);
    for (int e = 0; e < k; ++e) {
        const int t = assign[e];
        out.per_source[t] = SourceError{static_cast<std::size_t>(e),
                                        circular_azimuth_error(estimates[e].theta_deg, truth.azimuths_deg[t]),
                                        std::abs(estimates[e].phi_deg - truth.elevations_deg[t])};
        out.total_cost += cost[e][t];
    }
    return out;
}

std::vector<TrialReport> run_trial_extractions(const Scenario& s, double snr_db, int trial_index,
                                               std::span<const ExtractionMethod> methods) {
    if (s.algorithm == Algorithm::Grid) throw std::invalid_argument("grid search has no extraction stage");
    const auto start = Clock::now();
    const Prepared prep = prepare(s, snr_db, trial_index);

    std::int64_t evals = 0;
    const NoiseProjector& proj = prep.projector;
    const Objective objective = [&](const Point& p) {
        ++evals;
        return music_value(proj, p.theta * kDeg2Rad, p.phi * kDeg2Rad);
    };
    DEConfig cfg = s.de;
    cfg.seed = stream_seed(prep.seed, Stream::Optimizer);
    const Population pop = run_population_algorithm(s.algorithm, objective, s.box, cfg);
    const double shared_ms = elapsed_ms(start);

    std::vector<TrialReport> out;
    for (const auto method : methods) {
        const auto t0 = Clock::now();
        TrialReport r;
        r.trial = trial_index;
        r.seed = prep.seed;
        r.snr_db = snr_db;
        r.algorithm = s.algorithm;
        r.extraction = method;
        r.degenerate_split = prep.degenerate;
        const Extraction ex =
            extract(method, pop, s.num_sources(), s.extraction_params, stream_seed(prep.seed, Stream::Extraction));
        r.estimates = ex.estimates;
        r.shortfall = ex.shortfall;
        score(s, r);
        r.model_flops = model_flops(s);
        r.measured_evals = evals;
        r.wall_ms = shared_ms + elapsed_ms(t0);
        out.push_back(std::move(r));
    }
    return out;
}

TrialReport run_trial(const Scenario& s, double snr_db, int trial_index) {
    if (s.algorithm != Algorithm::Grid) {
        const ExtractionMethod m[] = {s.extraction};
        return std::move(run_trial_extractions(s, snr_db, trial_index, m).front());
    }
    const auto start = Clock::now();
    const Prepared prep = prepare(s, snr_db, trial_index);
    const GridSearchResult gs = grid_search(prep.projector, s.grid, s.num_sources());

    TrialReport r;
    r.trial = trial_index;
    r.seed = prep.seed;
    r.snr_db = snr_db;
    r.algorithm = Algorithm::Grid;
    r.degenerate_split = prep.degenerate;
    for (const auto& p : gs.peaks) r.estimates.push_back({p.azimuth_deg, p.elevation_deg, p.value, std::nullopt, 0});
    r.shortfall = gs.shortfall;
    score(s, r);
    r.model_flops = model_flops(s);
    r.measured_evals = gs.evaluations;
    r.wall_ms = elapsed_ms(start);
    return r;
}

std::vector<TrialReport> run_trials(const Scenario& s, double snr_db) {
    s.validate();
    std::vector<TrialReport> out(s.trials);
    parallel_for(s.trials, s.threads, [&](int i) { out[i] = run_trial(s, snr_db, i); });
    return out;
}

std::vector<std::vector<TrialReport>> run_trials_extractions(const Scenario& s, double snr_db,
                                                             std::span<const ExtractionMethod> methods) {
    s.validate();
    std::vector<std::vector<TrialReport>> per_trial(s.trials);
    parallel_for(s.trials, s.threads,
                 [&](int i) { per_trial[i] = run_trial_extractions(s, snr_db, i, methods); });
    std::vector<std::vector<TrialReport>> out(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m)
        for (auto& t : per_trial) out[m].push_back(std::move(t[m]));
    return out;
}

AggregateReport aggregate(const Scenario& s, double snr_db, std::span<const TrialReport> trials) {
    AggregateReport a;
    a.algorithm = std::string(to_string(s.algorithm));
    if (!trials.empty() && trials.front().extraction)
        a.extraction = std::string(to_string(*trials.front().extraction));
    else
        a.extraction = s.algorithm == Algorithm::Grid ? "none" : std::string(to_string(s.extraction));
    a.num_elements = s.num_elements;
    a.num_sources = s.num_sources();
    a.population = s.algorithm == Algorithm::Grid ? 0 : s.de.population_size;
    a.snr_db = snr_db;
    a.snapshots = s.snapshots;
    a.trials = static_cast<int>(trials.size());
    if (trials.empty()) return a;

    double st = 0.0, sp = 0.0, rt = 0.0, rp = 0.0, flops = 0.0, evals = 0.0, wall = 0.0;
    std::size_t n_success_pairs = 0;
    int successes = 0;
    for (const auto& t : trials) {
        for (const auto& e : t.matching.per_source) {
            if (!e) continue;
            a.theta_errors.push_back(e->theta_err_deg);
            a.phi_errors.push_back(e->phi_err_deg);
            rt += e->theta_err_deg;
            rp += e->phi_err_deg;
            if (t.success) {
                st += e->theta_err_deg;
                sp += e->phi_err_deg;
                ++n_success_pairs;
            }
        }
        if (t.success) ++successes;
        flops += t.model_flops;
        evals += static_cast<double>(t.measured_evals);
        wall += t.wall_ms;
    }
    const double n = static_cast<double>(trials.size());
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    a.mae_theta_deg = n_success_pairs ? st / n_success_pairs : nan;
    a.mae_phi_deg = n_success_pairs ? sp / n_success_pairs : nan;
    a.raw_mae_theta_deg = a.theta_errors.empty() ? nan : rt / a.theta_errors.size();
    a.raw_mae_phi_deg = a.phi_errors.empty() ? nan : rp / a.phi_errors.size();
    a.success_rate = successes / n;
    a.failures = a.trials - successes;
    a.model_mflops = flops / n / 1e6;
    a.measured_evals = evals / n;
    a.wall_ms = wall / n;
    std::sort(a.theta_errors.begin(), a.theta_errors.end());
    std::sort(a.phi_errors.begin(), a.phi_errors.end());
    return a;
}

std::vector<SweepPoint> run_sweep(const Scenario& s) {
    s.validate();
    std::vector<SweepPoint> out;
    for (double snr : s.snr_db) {
        SweepPoint p;
        p.trials = run_trials(s, snr);
        p.summary = aggregate(s, snr, p.trials);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<SweepPoint> run_population_sweep(const Scenario& s, std::span<const int> population_sizes) {
    std::vector<SweepPoint> out;
    for (int size : population_sizes) {
        Scenario sc = s;
        sc.de.population_size = size;
        sc.de.neighborhood_size = std::min(sc.de.neighborhood_size, size - 1);
        auto points = run_sweep(sc);
        for (auto& p : points) out.push_back(std::move(p));
    }
    return out;
}

double empirical_cdf(std::span<const double> sorted, double x) {
    if (sorted.empty()) return 0.0;
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

namespace {

std::string num(double v, const char* fmt = "%.6g") {
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

void write_summary_header(std::ostream& os) {
    os << "algo,extraction,M,L,snr_db,snapshots,trials,mae_theta_deg,mae_phi_deg,success_rate,model_mflops,"
          "measured_evals,wall_ms,raw_mae_theta_deg,raw_mae_phi_deg,population\n";
}

void write_summary_row(std::ostream& os, const AggregateReport& r) {
    os << r.algorithm << ',' << r.extraction << ',' << r.num_elements << ',' << r.num_sources << ','
       << num(r.snr_db) << ',' << r.snapshots << ',' << r.trials << ',' << num(r.mae_theta_deg) << ','
       << num(r.mae_phi_deg) << ',' << num(r.success_rate) << ',' << num(r.model_mflops, "%.6f") << ','
       << num(r.measured_evals, "%.1f") << ',' << num(r.wall_ms, "%.3f") << ',' << num(r.raw_mae_theta_deg) << ','
       << num(r.raw_mae_phi_deg) << ',' << r.population << '\n';
}

void write_errors_header(std::ostream& os) {
    os << "algo,extraction,snr_db,trial,source,theta_err_deg,phi_err_deg,success\n";
}

void write_error_rows(std::ostream& os, std::span<const TrialReport> trials) {
    for (const auto& t : trials) {
        const std::string ex = t.extraction ? std::string(to_string(*t.extraction)) : "none";
        for (std::size_t k = 0; k < t.matching.per_source.size(); ++k) {
            const auto& e = t.matching.per_source[k];
            os << to_string(t.algorithm) << ',' << ex << ',' << num(t.snr_db) << ',' << t.trial << ',' << k << ','
               << (e ? num(e->theta_err_deg, "%.9g") : "") << ',' << (e ? num(e->phi_err_deg, "%.9g") : "") << ','
               << (t.success ? 1 : 0) << '\n';
        }
    }
}

std::vector<ComplexityRow> report_complexity_table() {
    std::vector<ComplexityRow> rows;
    for (const auto& c : complexity_table()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.1f/%.1f (1:%.2f)", c.music_mflops, c.population_mflops, c.ratio);
        rows.push_back({c, buf});
    }
    return rows;
}

void write_complexity_table(std::ostream& os) {
    const auto rows = report_complexity_table();
    os << "MUSIC/Population-based (MFLOPs), N_R = 256, Max_iter = 20, J = 361 x 91\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %-24s %-24s %-24s\n", "", "M = 12", "M = 32", "M = 128");
    os << line;
    for (std::size_t r = 0; r < rows.size(); r += 3) {
        char label[16];
        std::snprintf(label, sizeof label, "L = %d", rows[r].cell.num_sources);
        std::snprintf(line, sizeof line, "%-8s %-24s %-24s %-24s\n", label, rows[r].formatted.c_str(),
                      rows[r + 1].formatted.c_str(), rows[r + 2].formatted.c_str());
        os << line;
    }
}

}  // namespace doa::bench
