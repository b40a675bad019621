#include "neatduel/speciation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace neatduel {

const Member& Species::champion() const {
    if (members.empty()) throw std::logic_error("champion of an empty species");
    const Member* best = &members.front();
    for (const auto& m : members) {
        if (m.raw_fitness > best->raw_fitness || (m.raw_fitness == best->raw_fitness && m.index < best->index))
            best = &m;
    }
    return *best;
}

double Species::best_raw_fitness() const { return champion().raw_fitness; }

double Species::adjusted_fitness_sum() const {
    double sum = 0.0;
    for (const auto& m : members) sum += m.adjusted_fitness;
    return sum;
}

SpeciesSet SpeciesSet::empty(const EvolutionParams& params) {
    SpeciesSet set;
    set.threshold = params.initial_threshold;
    return set;
}

std::size_t SpeciesSet::member_count() const {
    std::size_t n = 0;
    for (const auto& s : species) n += s.members.size();
    return n;
}

SpeciesSet assign_species(const std::vector<Genome>& genomes, const SpeciesSet& previous,
                          const CompatibilityCoeffs& coeffs, Rng& rng) {
    SpeciesSet next;
    next.threshold = previous.threshold;
    next.next_id = previous.next_id;
    for (const auto& old : previous.species) {
        Species carried;
        carried.id = old.id;
        carried.representative = old.representative;
        carried.age = old.age + 1;
        carried.best_fitness = old.best_fitness;
        carried.generations_without_improvement = old.generations_without_improvement;
        next.species.push_back(std::move(carried));
    }

    for (std::size_t i = 0; i < genomes.size(); ++i) {
        const auto& genome = genomes[i];
        auto home = std::ranges::find_if(next.species, [&](const Species& s) {
            return compatibility_distance(genome, s.representative, coeffs) < next.threshold;
        });
        if (home == next.species.end()) {
            Species founded;
            founded.id = next.next_id++;
            founded.representative = genome;
            next.species.push_back(std::move(founded));
            home = std::prev(next.species.end());
        }
        home->members.push_back({i, genome, 0.0, 0.0});
    }

    std::erase_if(next.species, [](const Species& s) { return s.members.empty(); });
    for (auto& s : next.species) s.representative = s.members[rng.index(s.members.size())].genome;
    return next;
}

void adjust_threshold(SpeciesSet& set, const EvolutionParams& params) {
    const auto count = static_cast<int>(set.species.size());
    if (count > params.target_species) {
        set.threshold += params.threshold_step;
    } else if (count < params.target_species) {
        set.threshold = std::max(set.threshold - params.threshold_step, params.threshold_floor);
    }
}

void set_raw_fitness(SpeciesSet& set, const std::vector<double>& raw) {
    for (auto& s : set.species) {
        for (auto& m : s.members) {
            if (m.index >= raw.size()) throw std::out_of_range("fitness vector shorter than population");
            m.raw_fitness = raw[m.index];
        }
    }
}

void share_fitness(SpeciesSet& set) {
    for (auto& s : set.species) {
        const auto size = static_cast<double>(s.members.size());
        for (auto& m : s.members) m.adjusted_fitness = m.raw_fitness / size;
    }
}

void update_improvement(SpeciesSet& set) {
    for (auto& s : set.species) {
        const double best = s.best_raw_fitness();
        if (best > s.best_fitness) {
            s.best_fitness = best;
            s.generations_without_improvement = 0;
        } else {
            ++s.generations_without_improvement;
        }
    }
}

std::vector<std::size_t> allocate_offspring(const SpeciesSet& set, std::size_t population_size,
                                            const EvolutionParams& params) {
    const auto n = set.species.size();
    if (n == 0) throw std::invalid_argument("cannot allocate offspring without species");

    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) weight[i] = std::max(0.0, set.species[i].adjusted_fitness_sum());

    std::vector<bool> eligible(n, true);
    if (n > 1) {
        std::optional<std::size_t> barred;
        for (std::size_t i = 0; i < n; ++i) {
            if (set.species[i].age <= params.stagnation_limit) continue;
            if (!barred || weight[i] < weight[*barred]) barred = i;
        }
        if (barred) eligible[*barred] = false;
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (eligible[i]) total += weight[i];
    if (total <= 0.0) {
        for (std::size_t i = 0; i < n; ++i) weight[i] = eligible[i] ? 1.0 : 0.0;
        total = static_cast<double>(std::ranges::count(eligible, true));
    }

    // Quotas in numerator form (scaled = pop * w, remainder = scaled - floor * total)
    // so equal remainders compare equal and the id tie-break is exact.
    const auto pop = static_cast<double>(population_size);
    std::vector<std::size_t> counts(n, 0);
    std::vector<double> remainder(n, -1.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!eligible[i]) continue;
        const double scaled = pop * weight[i];
        double whole = std::floor(scaled / total);
        double rest = scaled - whole * total;
        if (rest < 0.0) {
            whole -= 1.0;
            rest += total;
        } else if (rest >= total) {
            whole += 1.0;
            rest -= total;
        }
        counts[i] = static_cast<std::size_t>(whole);
        remainder[i] = rest;
        assigned += counts[i];
    }

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i)
        if (eligible[i]) order.push_back(i);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < population_size; k = (k + 1) % order.size(), ++assigned) ++counts[order[k]];
    return counts;
}

Offspring mutate_offspring(Genome genome, InnovationRegistry& registry, Rng& rng, const EvolutionParams& params,
                           StructuralPolicy policy) {
    Offspring result;
    result.genome = mutate_weights(genome, rng, params);
    switch (policy) {
        case StructuralPolicy::grow: {
            const double roll = rng.uniform();
            if (roll < params.add_node_prob) {
                if (auto grown = mutate_add_node(result.genome, registry, rng)) {
                    result.genome = std::move(*grown);
                    result.added_node = true;
                }
            } else if (roll < params.add_node_prob + params.add_link_prob) {
                if (auto grown = mutate_add_connection(result.genome, registry, rng, params.initial_weight_range)) {
                    result.genome = std::move(*grown);
                    result.added_connection = true;
                }
            }
            break;
        }
        case StructuralPolicy::shrink:
            if (rng.bernoulli(params.remove_link_prob)) {
                if (auto shrunk = mutate_remove_connection(result.genome, rng)) {
                    result.genome = std::move(*shrunk);
                    result.removed_connection = true;
                }
            }
            break;
        case StructuralPolicy::none:
            break;
    }
    return result;
}

std::vector<Offspring> reproduce(const SpeciesSet& set, const std::vector<std::size_t>& counts,
                                 InnovationRegistry& registry, Rng& rng, const EvolutionParams& params,
                                 const EvolutionMode& mode) {
    if (counts.size() != set.species.size()) throw std::invalid_argument("one offspring count per species expected");
    const auto policy = structural_policy(mode);

    std::vector<Offspring> next;
    next.reserve(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    for (std::size_t k = 0; k < set.species.size(); ++k) {
        const auto& species = set.species[k];
        const auto quota = counts[k];
        if (quota == 0) continue;

        std::vector<const Member*> ranked;
        for (const auto& m : species.members) ranked.push_back(&m);
        std::ranges::stable_sort(ranked, [](const Member* a, const Member* b) {
            if (a->raw_fitness != b->raw_fitness) return a->raw_fitness > b->raw_fitness;
            return a->index < b->index;
        });
        const auto survivors = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::ceil(params.survival_fraction * static_cast<double>(ranked.size()))), 1,
            ranked.size());

        std::size_t produced = 0;
        if (static_cast<int>(species.members.size()) >= params.elitism_min_size) {
            next.push_back({ranked.front()->genome, species.id, OffspringOrigin::champion});
            ++produced;
        }
        for (; produced < quota; ++produced) {
            Genome child;
            OffspringOrigin origin = OffspringOrigin::crossover;
            if (rng.bernoulli(params.mutation_only_rate)) {
                child = ranked[rng.index(survivors)]->genome;
                origin = OffspringOrigin::mutation_only;
            } else {
                const Member* mother = ranked[rng.index(survivors)];
                const Member* father = nullptr;
                if (set.species.size() > 1 && rng.bernoulli(params.interspecies_rate)) {
                    auto other = rng.index(set.species.size() - 1);
                    if (other >= k) ++other;
                    father = &set.species[other].champion();
                    origin = OffspringOrigin::interspecies;
                } else {
                    father = ranked[rng.index(survivors)];
                }
                child = crossover(mother->genome, mother->raw_fitness, father->genome, father->raw_fitness, rng, params);
            }
            auto offspring = mutate_offspring(std::move(child), registry, rng, params, policy);
            offspring.species_id = species.id;
            offspring.origin = origin;
            next.push_back(std::move(offspring));
        }
    }
    return next;
}

}  // namespace neatduel
