#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace transopt::evolve {

enum class Sense { minimize, maximize };
using Orientation = std::vector<Sense>;

using Genome = std::vector<double>;

// Objectives are stored in natural orientation; every comparison goes through
// dominates(), which flips maximized coordinates, so the engine is effectively
// a pure minimizer without rewriting the reported values.
struct Individual {
    Genome genome;
    std::vector<double> objectives;
    double strength = 0.0;     // how many others this one dominates
    double raw_fitness = 0.0;  // sum of strengths of its dominators (0 <=> nondominated)
    double density = 0.0;      // 1 / (distance to k-th neighbour + 2), in (0, 0.5]
    double fitness = 0.0;      // raw_fitness + density, lower is better
};

struct SpeaParams {
    std::size_t population_size = 200;
    std::size_t archive_size = 100;
    std::size_t generations = 15;
    double crossover_rate = 0.85;
    double mutation_rate = 0.05;  // per gene
    double eta_crossover = 15.0;
    double eta_mutation = 20.0;
    double genome_lower = 0.0;
    double genome_upper = 400.0;
    std::size_t genome_length = 2;
    std::uint64_t seed = 1;
    // Re-evaluate archived individuals every generation. A no-op under common
    // random numbers; required when the evaluator resamples its scenarios.
    bool reevaluate_each_generation = false;
};

inline void validate_params(const SpeaParams& p) {
    if (p.population_size == 0 || p.archive_size == 0 || p.generations == 0)
        throw std::invalid_argument("spea2: population, archive and generations must all be >= 1");
    if (p.crossover_rate < 0.0 || p.crossover_rate > 1.0 || p.mutation_rate < 0.0 || p.mutation_rate > 1.0)
        throw std::invalid_argument("spea2: rates must lie in [0, 1]");
    if (!(p.genome_upper > p.genome_lower))
        throw std::invalid_argument("spea2: genome bounds must satisfy upper > lower");
    if (p.genome_length == 0) throw std::invalid_argument("spea2: genome_length must be >= 1");
}

// Pareto dominance under per-objective orientation: no worse everywhere,
// strictly better somewhere.
inline bool dominates(const std::vector<double>& a, const std::vector<double>& b, const Orientation& orient) {
    if (a.size() != b.size() || a.size() != orient.size())
        throw std::invalid_argument("dominates: objective dimension mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw std::invalid_argument("dominates: non-finite objective value");
        const double sign = orient[i] == Sense::maximize ? -1.0 : 1.0;
        const double x = sign * a[i];
        const double y = sign * b[i];
        if (x > y) return false;
        if (x < y) strict = true;
    }
    return strict;
}

namespace detail {

// Min-max normalized objective coordinates over the given set; a constant
// objective collapses to 0. Distances computed on these coordinates weigh all
// objectives equally regardless of their raw scales.
inline std::vector<std::vector<double>> normalized_objectives(const std::vector<Individual>& set) {
    const std::size_t count = set.size();
    const std::size_t dims = count > 0 ? set.front().objectives.size() : 0;
    std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
    for (const auto& ind : set)
        for (std::size_t d = 0; d < dims; ++d) {
            lo[d] = std::min(lo[d], ind.objectives[d]);
            hi[d] = std::max(hi[d], ind.objectives[d]);
        }
    std::vector<std::vector<double>> coords(count, std::vector<double>(dims, 0.0));
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t d = 0; d < dims; ++d) {
            const double width = hi[d] - lo[d];
            coords[i][d] = width > 0.0 ? (set[i].objectives[d] - lo[d]) / width : 0.0;
        }
    return coords;
}

// Ascending distances from member i to every other member.
inline std::vector<double> sorted_distances(const std::vector<std::vector<double>>& coords, std::size_t i) {
    std::vector<double> distances;
    distances.reserve(coords.size() - 1);
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (j == i) continue;
        double sq = 0.0;
        for (std::size_t d = 0; d < coords[i].size(); ++d) {
            const double diff = coords[i][d] - coords[j][d];
            sq += diff * diff;
        }
        distances.push_back(std::sqrt(sq));
    }
    std::sort(distances.begin(), distances.end());
    return distances;
}

inline double polynomial_mutate(double value, const SpeaParams& params, std::mt19937_64& gen) {
    const double lower = params.genome_lower;
    const double upper = params.genome_upper;
    const double range = upper - lower;
    const double u = rng::uniform01(gen);
    const double exponent = 1.0 / (params.eta_mutation + 1.0);
    double delta;
    if (u < 0.5) {
        const double toward_lower = (value - lower) / range;
        const double inner = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - toward_lower, params.eta_mutation + 1.0);
        delta = std::pow(inner, exponent) - 1.0;
    } else {
        const double toward_upper = (upper - value) / range;
        const double inner =
            2.0 * (1.0 - u) + (2.0 * u - 1.0) * std::pow(1.0 - toward_upper, params.eta_mutation + 1.0);
        delta = 1.0 - std::pow(inner, exponent);
    }
    return value + delta * range;
}

}  // namespace detail

// Strength / raw fitness / k-nearest-neighbour density. k defaults to
// floor(sqrt(set size)) and is clamped so at least one neighbour exists;
// raw fitness 0 (hence fitness < 1) characterizes the nondominated members.
inline void assign_fitness(std::vector<Individual>& set, const Orientation& orient, std::size_t k_nearest = 0) {
    const std::size_t count = set.size();
    if (count == 0) return;
    if (count == 1) {
        set[0].strength = 0.0;
        set[0].raw_fitness = 0.0;
        set[0].density = 0.5;  // no neighbour: distance 0
        set[0].fitness = 0.5;
        return;
    }

    std::vector<char> dom(count * count, 0);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j)
            if (i != j) dom[i * count + j] = dominates(set[i].objectives, set[j].objectives, orient);

    for (std::size_t i = 0; i < count; ++i) {
        double strength = 0.0;
        for (std::size_t j = 0; j < count; ++j) strength += dom[i * count + j];
        set[i].strength = strength;
    }
    for (std::size_t i = 0; i < count; ++i) {
        double raw = 0.0;
        for (std::size_t j = 0; j < count; ++j)
            if (dom[j * count + i]) raw += set[j].strength;
        set[i].raw_fitness = raw;
    }

    std::size_t k = k_nearest > 0 ? k_nearest : static_cast<std::size_t>(std::sqrt(static_cast<double>(count)));
    k = std::clamp<std::size_t>(k, 1, count - 1);
    const auto coords = detail::normalized_objectives(set);
    for (std::size_t i = 0; i < count; ++i) {
        const auto distances = detail::sorted_distances(coords, i);
        set[i].density = 1.0 / (distances[k - 1] + 2.0);
        set[i].fitness = set[i].raw_fitness + set[i].density;
    }
}

// Remove members one at a time until the archive fits. Each round drops the
// member with the lexicographically smallest sorted-distance vector (nearest
// neighbour first, ties broken by the next neighbour, then by index);
// normalization and distances are recomputed after every removal.
inline void truncate(std::vector<Individual>& archive, std::size_t capacity, const Orientation& /*orient*/) {
    while (archive.size() > capacity) {
        const auto coords = detail::normalized_objectives(archive);
        std::size_t victim = 0;
        std::vector<double> victim_distances = detail::sorted_distances(coords, 0);
        for (std::size_t i = 1; i < archive.size(); ++i) {
            auto distances = detail::sorted_distances(coords, i);
            if (std::lexicographical_compare(distances.begin(), distances.end(), victim_distances.begin(),
                                             victim_distances.end())) {
                victim = i;
                victim_distances = std::move(distances);
            }
        }
        archive.erase(archive.begin() + static_cast<std::ptrdiff_t>(victim));
    }
}

// Next archive: all nondominated members, truncated if too many, padded with
// the best-fitness dominated members if too few. Expects assign_fitness to
// have run on the pool.
inline std::vector<Individual> environmental_selection(const std::vector<Individual>& pool, std::size_t capacity,
                                                       const Orientation& orient) {
    std::vector<Individual> archive, dominated;
    for (const auto& ind : pool) {
        if (ind.raw_fitness == 0.0)
            archive.push_back(ind);
        else
            dominated.push_back(ind);
    }
    if (archive.size() > capacity) {
        truncate(archive, capacity, orient);
    } else if (archive.size() < capacity) {
        std::vector<std::size_t> order(dominated.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dominated[a].fitness < dominated[b].fitness; });
        for (std::size_t idx : order) {
            if (archive.size() == capacity) break;
            archive.push_back(dominated[idx]);
        }
    }
    return archive;
}

// Two uniform draws with replacement; the lower SPEA2 fitness wins, exact ties
// are settled by a fair coin.
inline const Individual& binary_tournament(const std::vector<Individual>& archive, std::mt19937_64& gen) {
    if (archive.empty()) throw std::invalid_argument("binary_tournament: empty archive");
    const Individual& a = archive[rng::uniform_index(gen, archive.size())];
    const Individual& b = archive[rng::uniform_index(gen, archive.size())];
    if (a.fitness < b.fitness) return a;
    if (b.fitness < a.fitness) return b;
    return rng::uniform01(gen) < 0.5 ? a : b;
}

// Simulated binary crossover (gene-wise, applied with probability 1/2 per
// gene when the pair recombines at all) followed by per-gene polynomial
// mutation. Offspring are clamped to the genome box.
inline std::pair<Genome, Genome> vary(const Genome& parent_a, const Genome& parent_b, const SpeaParams& params,
                                      std::mt19937_64& gen) {
    if (parent_a.size() != parent_b.size()) throw std::invalid_argument("vary: genome length mismatch");
    Genome child_a = parent_a;
    Genome child_b = parent_b;

    if (rng::uniform01(gen) < params.crossover_rate) {
        for (std::size_t g = 0; g < child_a.size(); ++g) {
            if (rng::uniform01(gen) > 0.5) continue;
            if (std::fabs(parent_a[g] - parent_b[g]) < 1e-14) continue;  // equal genes pass through exactly
            const double u = rng::uniform01(gen);
            const double spread = u <= 0.5
                                      ? std::pow(2.0 * u, 1.0 / (params.eta_crossover + 1.0))
                                      : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (params.eta_crossover + 1.0));
            const double x = parent_a[g];
            const double y = parent_b[g];
            child_a[g] = 0.5 * ((1.0 + spread) * x + (1.0 - spread) * y);
            child_b[g] = 0.5 * ((1.0 - spread) * x + (1.0 + spread) * y);
        }
    }
    for (Genome* child : {&child_a, &child_b})
        for (double& value : *child) {
            if (rng::uniform01(gen) < params.mutation_rate) value = detail::polynomial_mutate(value, params, gen);
            value = std::clamp(value, params.genome_lower, params.genome_upper);
        }
    return {std::move(child_a), std::move(child_b)};
}

// Fresh uniform population inside the genome box, drawn from the given
// stream. run_spea2 starts with exactly this call, so callers can reproduce
// its initial population.
inline std::vector<Genome> initial_population(const SpeaParams& params, std::mt19937_64& gen) {
    std::vector<Genome> population(params.population_size);
    for (auto& genome : population) {
        genome.resize(params.genome_length);
        for (double& value : genome) value = rng::uniform_real(gen, params.genome_lower, params.genome_upper);
    }
    return population;
}

struct GenerationRecord {
    std::size_t generation = 0;
    std::vector<Individual> archive;
};

struct SpeaResult {
    std::vector<Individual> archive;           // final archive
    std::vector<GenerationRecord> history;     // archive snapshot per generation
};

namespace detail {

template <typename Evaluator>
std::vector<double> call_evaluator(Evaluator&& evaluate, const Genome& genome, std::size_t generation) {
    if constexpr (std::is_invocable_v<Evaluator&, const Genome&, std::size_t>)
        return evaluate(genome, generation);
    else
        return evaluate(genome);
}

}  // namespace detail

// The SPEA2 main loop: evaluate, combine with the archive, assign fitness,
// select the next archive, then breed the next population from tournament
// winners. The evaluator may take (genome) or (genome, generation); selection
// and variation consume one seeded stream sequentially, so runs with the same
// seed are bit-identical.
template <typename Evaluator>
SpeaResult run_spea2(const SpeaParams& params, Evaluator&& evaluate, const Orientation& orient) {
    validate_params(params);
    std::mt19937_64 gen(params.seed);

    std::vector<Genome> pending = initial_population(params, gen);
    std::vector<Individual> archive;
    SpeaResult result;
    const auto k_nearest = static_cast<std::size_t>(
        std::sqrt(static_cast<double>(params.population_size + params.archive_size)));

    for (std::size_t t = 0; t < params.generations; ++t) {
        std::vector<Individual> combined;
        combined.reserve(pending.size() + archive.size());
        for (auto& genome : pending) {
            Individual ind;
            ind.objectives = detail::call_evaluator(evaluate, genome, t);
            ind.genome = std::move(genome);
            combined.push_back(std::move(ind));
        }
        for (auto& ind : archive) {
            if (params.reevaluate_each_generation)
                ind.objectives = detail::call_evaluator(evaluate, ind.genome, t);
            combined.push_back(std::move(ind));
        }

        assign_fitness(combined, orient, k_nearest);
        archive = environmental_selection(combined, params.archive_size, orient);
        result.history.push_back({t, archive});

        if (t + 1 < params.generations) {
            pending.clear();
            while (pending.size() < params.population_size) {
                const Genome& first = binary_tournament(archive, gen).genome;
                const Genome& second = binary_tournament(archive, gen).genome;
                auto [child_a, child_b] = vary(first, second, params, gen);
                pending.push_back(std::move(child_a));
                if (pending.size() < params.population_size) pending.push_back(std::move(child_b));
            }
        }
    }
    result.archive = archive;
    return result;
}

}  // namespace transopt::evolve
