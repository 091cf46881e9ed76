#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace doa {

// A candidate direction in degrees: azimuth theta, elevation phi.
struct Point {
    double theta = 0.0;
    double phi = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(const Point& a, const Point& b) {
    const double dt = a.theta - b.theta, dp = a.phi - b.phi;
    return dt * dt + dp * dp;
}

double distance(const Point& a, const Point& b);

// Flat (non-periodic) box. Out-of-range coordinates are mirrored back at the
// walls, repeatedly if the overshoot exceeds the box width.
struct SearchBox {
    double theta_lo = 0.0;
    double theta_hi = 360.0;
    double phi_lo = 0.0;
    double phi_hi = 90.0;

    void validate() const;
    bool contains(const Point& p) const {
        return p.theta >= theta_lo && p.theta <= theta_hi && p.phi >= phi_lo && p.phi <= phi_hi;
    }
    Point reflect(const Point& p) const;
};

double reflect_into(double v, double lo, double hi);

struct Individual {
    Point position;
    double fitness = 0.0;  // higher is better
};

struct Population {
    std::vector<Individual> individuals;
    int generation = 0;

    std::size_t size() const { return individuals.size(); }
    // Highest fitness, lowest index on ties.
    const Individual& best() const;
};

// Maximized. Evaluated exactly once per initial individual and once per trial
// vector, so a run of P individuals over G generations costs P (G + 1) calls
// (the species and sharing variants included).
using Objective = std::function<double(const Point&)>;

struct DEConfig {
    int population_size = 256;
    double scale_factor = 0.9;
    double crossover_rate = 0.5;
    int max_iterations = 20;
    int neighborhood_size = 8;    // DE-NM only
    double share_radius = 30.0;   // Sharing-DE only, degrees
    double species_radius = 15.0; // SDE only, degrees
    std::uint64_t seed = 1;

    void validate() const;
};

// Emitted once per mutation. `neighborhood` is the donor pool the three
// donors were drawn from (empty for algorithms that draw globally).
struct MutationEvent {
    int generation;
    std::size_t target;
    std::size_t r1, r2, r3;
    std::span<const std::size_t> neighborhood;
};

struct RunHooks {
    std::function<void(const MutationEvent&)> on_mutation;
    // Called with the initial population and after every generation.
    std::function<void(const Population&)> on_generation;
};

enum class Algorithm { Grid, DE, DENM, CrowdingDE, SharingDE, SpeciesDE };

std::string_view to_string(Algorithm a);
// Accepts the CLI ids grid, de, denm, dcde, sharede, sde. Throws
// std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view id);

/// x_r1 + F (x_r2 - x_r3), reflected into the box.
Point de_mutate(const Point& base, const Point& a, const Point& b, double scale_factor, const SearchBox& box);

/// Binomial crossover with one forced coordinate taken from the mutant.
Point de_crossover(const Point& target, const Point& mutant, double crossover_rate, std::mt19937_64& rng);

/// Indices of the m individuals closest to individual i (i excluded), nearest
/// first, lower index on equal distance.
std::vector<std::size_t> nearest_neighbors(std::span<const Individual> individuals, std::size_t i, int m);

/// f_i / sum_j max(0, 1 - d_ij / radius). The sum includes i itself, so an
/// isolated individual keeps its raw fitness. Negative raw fitness is
/// multiplied by the niche count instead so crowding is always penalized.
std::vector<double> shared_fitness(std::span<const Individual> individuals, double radius);

struct SpeciesPartition {
    std::vector<std::size_t> seeds;                 // species seeds, fittest first
    std::vector<std::vector<std::size_t>> members;  // members[s] starts with seeds[s]
};

/// Visits individuals by fitness (descending, lower index on ties) and puts
/// each into the first species whose seed lies within `radius`; otherwise it
/// founds a new species.
SpeciesPartition partition_species(std::span<const Individual> individuals, double radius);

// Classic DE/rand/1/bin over the whole population.
Population de_evolve(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks = {});
Individual de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks = {});

// Donors restricted to each individual's m nearest neighbours.
Population denm_run(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks = {});

// Global donors; each trial competes with its nearest current individual.
Population crowding_de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg,
                           const RunHooks& hooks = {});

// Parents and trials pooled; the best P by shared fitness survive.
Population sharing_de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg,
                          const RunHooks& hooks = {});

// Speciation by seed radius, DE inside each species.
Population species_de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg,
                          const RunHooks& hooks = {});

// Dispatch for the population-based algorithms (not Grid).
Population run_population_algorithm(Algorithm algo, const Objective& f, const SearchBox& box, const DEConfig& cfg,
                                    const RunHooks& hooks = {});

}  // namespace doa
