#include "doa/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace doa {

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

double reflect_into(double v, double lo, double hi) {
    if (v >= lo && v <= hi) return v;
    const double width = hi - lo;
    // Repeated mirroring at both walls is periodic with period 2 * width.
    double d = std::fmod(v - lo, 2.0 * width);
    if (d < 0.0) d += 2.0 * width;
    if (d > width) d = 2.0 * width - d;
    return std::clamp(lo + d, lo, hi);
}

void SearchBox::validate() const {
    if (!(theta_lo < theta_hi) || !(phi_lo < phi_hi)) throw std::invalid_argument("search box needs lo < hi");
}

Point SearchBox::reflect(const Point& p) const {
    return {reflect_into(p.theta, theta_lo, theta_hi), reflect_into(p.phi, phi_lo, phi_hi)};
}

const Individual& Population::best() const {
    if (individuals.empty()) throw std::logic_error("empty population has no best individual");
    std::size_t b = 0;
    for (std::size_t i = 1; i < individuals.size(); ++i)
        if (individuals[i].fitness > individuals[b].fitness) b = i;
    return individuals[b];
}

void DEConfig::validate() const {
    if (population_size < 4) throw std::invalid_argument("population size must be >= 4");
    if (!(scale_factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("crossover rate must be in [0, 1]");
    if (max_iterations < 0) throw std::invalid_argument("max iterations must be >= 0");
    if (neighborhood_size < 4 || neighborhood_size > population_size - 1)
        throw std::invalid_argument("neighborhood size must be in [4, P - 1]");
    if (!(share_radius > 0.0)) throw std::invalid_argument("share radius must be positive");
    if (!(species_radius > 0.0)) throw std::invalid_argument("species radius must be positive");
}

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Grid: return "grid";
        case Algorithm::DE: return "de";
        case Algorithm::DENM: return "denm";
        case Algorithm::CrowdingDE: return "dcde";
        case Algorithm::SharingDE: return "sharede";
        case Algorithm::SpeciesDE: return "sde";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view id) {
    for (auto a : {Algorithm::Grid, Algorithm::DE, Algorithm::DENM, Algorithm::CrowdingDE, Algorithm::SharingDE,
                   Algorithm::SpeciesDE})
        if (to_string(a) == id) return a;
    throw std::invalid_argument("unknown algorithm: " + std::string(id));
}

Point de_mutate(const Point& base, const Point& a, const Point& b, double scale_factor, const SearchBox& box) {
    const Point raw{base.theta + scale_factor * (a.theta - b.theta), base.phi + scale_factor * (a.phi - b.phi)};
    return box.reflect(raw);
}

Point de_crossover(const Point& target, const Point& mutant, double crossover_rate, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int forced = pick(rng);
    Point out = target;
    if (forced == 0 || u(rng) < crossover_rate) out.theta = mutant.theta;
    if (forced == 1 || u(rng) < crossover_rate) out.phi = mutant.phi;
    return out;
}

std::vector<std::size_t> nearest_neighbors(std::span<const Individual> individuals, std::size_t i, int m) {
    const std::size_t n = individuals.size();
    if (i >= n) throw std::out_of_range("individual index out of range");
    if (m < 0 || static_cast<std::size_t>(m) > n - 1) throw std::invalid_argument("neighbourhood larger than population");

    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(n - 1);
    const Point& p = individuals[i].position;
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) keyed.emplace_back(squared_distance(p, individuals[j].position), j);
    std::partial_sort(keyed.begin(), keyed.begin() + m, keyed.end());

    std::vector<std::size_t> out(m);
    for (int k = 0; k < m; ++k) out[k] = keyed[k].second;
    return out;
}

std::vector<double> shared_fitness(std::span<const Individual> individuals, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("share radius must be positive");
    const std::size_t n = individuals.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double niche = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = distance(individuals[i].position, individuals[j].position);
            niche += std::max(0.0, 1.0 - d / radius);
        }
        const double f = individuals[i].fitness;
        out[i] = f >= 0.0 ? f / niche : f * niche;
    }
    return out;
}

SpeciesPartition partition_species(std::span<const Individual> individuals, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("species radius must be positive");
    std::vector<std::size_t> order(individuals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return individuals[a].fitness > individuals[b].fitness;
    });

    SpeciesPartition part;
    const double r2 = radius * radius;
    for (std::size_t idx : order) {
        bool placed = false;
        for (std::size_t s = 0; s < part.seeds.size(); ++s) {
            if (squared_distance(individuals[idx].position, individuals[part.seeds[s]].position) <= r2) {
                part.members[s].push_back(idx);
                placed = true;
                break;
            }
        }
        if (!placed) {
            part.seeds.push_back(idx);
            part.members.push_back({idx});
        }
    }
    return part;
}

namespace {

class Engine {
public:
    Engine(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks)
        : f_(f), box_(box), cfg_(cfg), hooks_(hooks), rng_(cfg.seed) {
        box_.validate();
        cfg_.validate();
    }

    Point random_point() {
        std::uniform_real_distribution<double> ut(box_.theta_lo, box_.theta_hi);
        std::uniform_real_distribution<double> up(box_.phi_lo, box_.phi_hi);
        const double t = ut(rng_);
        return {t, up(rng_)};
    }

    Population initialize() {
        Population pop;
        pop.individuals.resize(cfg_.population_size);
        for (auto& ind : pop.individuals) ind.position = random_point();
        for (auto& ind : pop.individuals) ind.fitness = f_(ind.position);
        notify(pop);
        return pop;
    }

    // Three distinct entries of `pool`, none equal to `target`.
    std::array<std::size_t, 3> pick_donors(std::span<const std::size_t> pool, std::size_t target) {
        std::uniform_int_distribution<std::size_t> u(0, pool.size() - 1);
        std::array<std::size_t, 3> out{};
        for (int k = 0; k < 3; ++k) {
            std::size_t c;
            do {
                c = pool[u(rng_)];
            } while (c == target || std::find(out.begin(), out.begin() + k, c) != out.begin() + k);
            out[k] = c;
        }
        return out;
    }

    std::array<std::size_t, 3> pick_global_donors(std::size_t n, std::size_t target) {
        std::uniform_int_distribution<std::size_t> u(0, n - 1);
        std::array<std::size_t, 3> out{};
        for (int k = 0; k < 3; ++k) {
            std::size_t c;
            do {
                c = u(rng_);
            } while (c == target || std::find(out.begin(), out.begin() + k, c) != out.begin() + k);
            out[k] = c;
        }
        return out;
    }

    Point make_trial(const Point& target, const Point& r1, const Point& r2, const Point& r3) {
        const Point v = de_mutate(r1, r2, r3, cfg_.scale_factor, box_);
        return de_crossover(target, v, cfg_.crossover_rate, rng_);
    }

    void report(int generation, std::size_t target, const std::array<std::size_t, 3>& d,
                std::span<const std::size_t> pool = {}) {
        if (hooks_.on_mutation) hooks_.on_mutation({generation, target, d[0], d[1], d[2], pool});
    }

    void notify(const Population& pop) {
        if (hooks_.on_generation) hooks_.on_generation(pop);
    }

    double evaluate(const Point& p) { return f_(p); }

    const DEConfig& cfg() const { return cfg_; }
    const SearchBox& box() const { return box_; }
    std::mt19937_64& rng() { return rng_; }

private:
    const Objective& f_;
    SearchBox box_;
    DEConfig cfg_;
    const RunHooks& hooks_;
    std::mt19937_64 rng_;
};

// Generation-synchronous greedy replacement: every trial is built from the
// generation-start snapshot, then each slot keeps the better of parent and
// trial.
template <typename DonorFn>
Population greedy_evolve(Engine& eng, DonorFn&& donors_for) {
    Population pop = eng.initialize();
    const std::size_t n = pop.size();
    std::vector<Point> trials(n);
    for (int g = 1; g <= eng.cfg().max_iterations; ++g) {
        const Population snapshot = pop;
        donors_for.begin_generation(snapshot);
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = donors_for(eng, snapshot, i, g);
            const auto& s = snapshot.individuals;
            trials[i] = eng.make_trial(s[i].position, s[d[0]].position, s[d[1]].position, s[d[2]].position);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double ft = eng.evaluate(trials[i]);
            if (ft >= pop.individuals[i].fitness) pop.individuals[i] = {trials[i], ft};
        }
        pop.generation = g;
        eng.notify(pop);
    }
    return pop;
}

struct GlobalDonors {
    void begin_generation(const Population&) {}
    std::array<std::size_t, 3> operator()(Engine& eng, const Population& snap, std::size_t i, int g) {
        const auto d = eng.pick_global_donors(snap.size(), i);
        eng.report(g, i, d);
        return d;
    }
};

struct NeighborhoodDonors {
    std::vector<std::vector<std::size_t>> hoods;

    void begin_generation(const Population& snap) {
        hoods.resize(snap.size());
        for (std::size_t i = 0; i < snap.size(); ++i) hoods[i] = nearest_neighbors(snap.individuals, i, size);
    }
    std::array<std::size_t, 3> operator()(Engine& eng, const Population&, std::size_t i, int g) {
        const auto d = eng.pick_donors(hoods[i], i);
        eng.report(g, i, d, hoods[i]);
        return d;
    }

    int size = 8;
};

}  // namespace

Population de_evolve(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks) {
    Engine eng(f, box, cfg, hooks);
    return greedy_evolve(eng, GlobalDonors{});
}

Individual de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks) {
    return de_evolve(f, box, cfg, hooks).best();
}

Population denm_run(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks) {
    Engine eng(f, box, cfg, hooks);
    NeighborhoodDonors donors;
    donors.size = cfg.neighborhood_size;
    return greedy_evolve(eng, donors);
}

Population crowding_de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks) {
    Engine eng(f, box, cfg, hooks);
    Population pop = eng.initialize();
    const std::size_t n = pop.size();
    std::vector<Point> trials(n);
    std::vector<double> trial_fit(n);
    for (int g = 1; g <= cfg.max_iterations; ++g) {
        const Population snapshot = pop;
        const auto& s = snapshot.individuals;
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = eng.pick_global_donors(n, i);
            eng.report(g, i, d);
            trials[i] = eng.make_trial(s[i].position, s[d[0]].position, s[d[1]].position, s[d[2]].position);
        }
        for (std::size_t i = 0; i < n; ++i) trial_fit[i] = eng.evaluate(trials[i]);

        // Each slot faces the best trial that landed nearest to it, so the
        // outcome does not depend on trial order.
        std::vector<std::ptrdiff_t> challenger(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t nearest = 0;
            double best_d = squared_distance(trials[i], s[0].position);
            for (std::size_t j = 1; j < n; ++j) {
                const double d = squared_distance(trials[i], s[j].position);
                if (d < best_d) {
                    best_d = d;
                    nearest = j;
                }
            }
            auto& c = challenger[nearest];
            if (c < 0 || trial_fit[i] > trial_fit[static_cast<std::size_t>(c)]) c = static_cast<std::ptrdiff_t>(i);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (challenger[j] < 0) continue;
            const auto c = static_cast<std::size_t>(challenger[j]);
            if (trial_fit[c] >= pop.individuals[j].fitness) pop.individuals[j] = {trials[c], trial_fit[c]};
        }
        pop.generation = g;
        eng.notify(pop);
    }
    return pop;
}

Population sharing_de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks) {
    Engine eng(f, box, cfg, hooks);
    Population pop = eng.initialize();
    const std::size_t n = pop.size();
    std::vector<Individual> pool(2 * n);
    for (int g = 1; g <= cfg.max_iterations; ++g) {
        const auto& s = pop.individuals;
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = eng.pick_global_donors(n, i);
            eng.report(g, i, d);
            pool[n + i].position =
                eng.make_trial(s[i].position, s[d[0]].position, s[d[1]].position, s[d[2]].position);
        }
        for (std::size_t i = 0; i < n; ++i) {
            pool[i] = s[i];
            pool[n + i].fitness = eng.evaluate(pool[n + i].position);
        }

        const auto shared = shared_fitness(pool, cfg.share_radius);
        std::vector<std::size_t> order(2 * n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return shared[a] > shared[b]; });
        for (std::size_t k = 0; k < n; ++k) pop.individuals[k] = pool[order[k]];
        pop.generation = g;
        eng.notify(pop);
    }
    return pop;
}

Population species_de_run(const Objective& f, const SearchBox& box, const DEConfig& cfg, const RunHooks& hooks) {
    Engine eng(f, box, cfg, hooks);
    Population pop = eng.initialize();
    const std::size_t n = pop.size();
    std::vector<Point> trials(n);
    for (int g = 1; g <= cfg.max_iterations; ++g) {
        const Population snapshot = pop;
        const auto& s = snapshot.individuals;
        const auto part = partition_species(s, cfg.species_radius);

        for (const auto& members : part.members) {
            // Small species borrow random positions, appended after the real
            // population indices, as extra donors. They are never evaluated.
            std::vector<Point> positions;
            std::vector<std::size_t> pool = members;
            for (std::size_t k = members.size(); k < 4; ++k) {
                positions.push_back(eng.random_point());
                pool.push_back(n + positions.size() - 1);
            }
            auto at = [&](std::size_t idx) -> const Point& { return idx < n ? s[idx].position : positions[idx - n]; };
            for (std::size_t i : members) {
                const auto d = eng.pick_donors(pool, i);
                eng.report(g, i, d, pool);
                trials[i] = eng.make_trial(s[i].position, at(d[0]), at(d[1]), at(d[2]));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double ft = eng.evaluate(trials[i]);
            if (ft >= pop.individuals[i].fitness) pop.individuals[i] = {trials[i], ft};
        }
        pop.generation = g;
        eng.notify(pop);
    }
    return pop;
}

Population run_population_algorithm(Algorithm algo, const Objective& f, const SearchBox& box, const DEConfig& cfg,
                                    const RunHooks& hooks) {
    switch (algo) {
        case Algorithm::DE: return de_evolve(f, box, cfg, hooks);
        case Algorithm::DENM: return denm_run(f, box, cfg, hooks);
        case Algorithm::CrowdingDE: return crowding_de_run(f, box, cfg, hooks);
        case Algorithm::SharingDE: return sharing_de_run(f, box, cfg, hooks);
        case Algorithm::SpeciesDE: return species_de_run(f, box, cfg, hooks);
        case Algorithm::Grid: break;
    }
    throw std::invalid_argument("grid search is not a population algorithm");
}

}  // namespace doa
