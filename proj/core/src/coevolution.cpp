#include "neatduel/coevolution.hpp"

#include <algorithm>
#include <numeric>
#include <ranges>
#include <stdexcept>

#include "neatduel/parallel.hpp"

namespace neatduel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

Genome expressed_topology(const Genome& seed) {
    std::vector<ConnectionGene> enabled;
    for (const auto& c : seed.connections())
        if (c.enabled) enabled.push_back(c);
    return Genome(seed.io(), {seed.nodes().begin(), seed.nodes().end()}, std::move(enabled));
}

std::vector<const Member*> ranked_members(const Species& species) {
    std::vector<const Member*> ranked;
    for (const auto& m : species.members) ranked.push_back(&m);
    std::ranges::stable_sort(ranked, [](const Member* a, const Member* b) {
        if (a->raw_fitness != b->raw_fitness) return a->raw_fitness > b->raw_fitness;
        return a->index < b->index;
    });
    return ranked;
}

PopulationStats population_stats(const std::vector<Genome>& population, const std::vector<double>& fitness,
                                 const SpeciesSet& species, double threshold,
                                 const std::vector<std::size_t>& offspring) {
    PopulationStats stats;
    stats.threshold = threshold;
    for (std::size_t k = 0; k < species.species.size(); ++k) {
        const auto& s = species.species[k];
        stats.species.push_back({s.id, s.members.size(), s.age, s.best_raw_fitness(), s.adjusted_fitness_sum(),
                                 k < offspring.size() ? offspring[k] : 0});
    }
    const auto best = std::ranges::max_element(fitness);  // first maximum = lowest index
    stats.champion_index = static_cast<std::size_t>(best - fitness.begin());
    stats.best_fitness = *best;
    stats.champion = population[stats.champion_index];
    const auto [min_c, max_c] = std::ranges::minmax(
        population | std::views::transform([](const Genome& g) { return g.connections().size(); }));
    const auto [min_h, max_h] =
        std::ranges::minmax(population | std::views::transform([](const Genome& g) { return g.hidden_count(); }));
    stats.min_connections = min_c;
    stats.max_connections = max_c;
    stats.min_hidden = min_h;
    stats.max_hidden = max_h;
    return stats;
}

}  // namespace

void HallOfFame::append(int generation, Genome genome) {
    if (generation != static_cast<int>(entries_.size()))
        throw std::invalid_argument("hall of fame entries must be appended once per generation, in order");
    entries_.push_back({generation, std::move(genome)});
}

std::vector<Genome> select_parasites(const SpeciesSet& parasite_species, const HallOfFame& hall,
                                     const std::vector<Genome>& fallback, Rng& rng, int champion_slots,
                                     int hall_draws) {
    std::vector<Genome> parasites;
    const auto slots = static_cast<std::size_t>(std::max(0, champion_slots));
    if (slots > 0 && !parasite_species.species.empty()) {
        std::vector<const Species*> order;
        for (const auto& s : parasite_species.species) order.push_back(&s);
        std::ranges::stable_sort(order, [](const Species* a, const Species* b) {
            return a->best_raw_fitness() > b->best_raw_fitness();
        });
        for (std::size_t k = 0; k < order.size() && parasites.size() < slots; ++k)
            parasites.push_back(order[k]->champion().genome);

        if (parasites.size() < slots) {
            const Species* largest = order.front();
            for (const auto& s : parasite_species.species)
                if (s.members.size() > largest->members.size()) largest = &s;
            const auto ranked = ranked_members(*largest);
            // Skip the champion, already taken; wrap around for tiny species.
            for (std::size_t r = 1; parasites.size() < slots; ++r) {
                const auto pick = ranked.size() == 1 ? 0 : 1 + (r - 1) % (ranked.size() - 1);
                parasites.push_back(ranked[pick]->genome);
            }
        }
    }

    const auto draws = static_cast<std::size_t>(std::max(0, hall_draws));
    if (hall.empty()) {
        if (fallback.empty()) throw std::invalid_argument("no hall of fame entries and no fallback population");
        for (std::size_t d = 0; d < draws; ++d) parasites.push_back(fallback[rng.index(fallback.size())]);
    } else if (hall.size() >= draws) {
        std::vector<std::size_t> pool(hall.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t d = 0; d < draws; ++d) {
            const auto j = d + rng.index(pool.size() - d);
            std::swap(pool[d], pool[j]);
            parasites.push_back(hall.entries()[pool[d]].genome);
        }
    } else {
        for (std::size_t d = 0; d < draws; ++d) parasites.push_back(hall.entries()[rng.index(hall.size())].genome);
    }
    return parasites;
}

std::vector<double> evaluate_host_population(const std::vector<Genome>& hosts, const std::vector<Genome>& parasites,
                                             const EvaluationOptions& options) {
    if (!options.random_fitness && options.duel == nullptr)
        throw std::invalid_argument("simulated evaluation needs a duel config");
    const auto games_per_host = parasites.size() * 2;
    std::vector<unsigned char> won(hosts.size() * games_per_host, 0);
    parallel_for(won.size(), options.workers, [&](std::size_t i) {
        const auto host = i / games_per_host;
        const auto game = i % games_per_host;
        const auto opponent = game / 2;
        const bool host_west = game % 2 == 0;
        if (options.random_fitness) {
            Rng coin(derive_seed(options.coin_seed, {host, game}));
            won[i] = coin.bernoulli(0.5) ? 1 : 0;
            return;
        }
        if (host_west) {
            won[i] = run_duel(hosts[host], parasites[opponent], *options.duel, false, options.sigmoid_slope).winner ==
                     Winner::robot_a;
        } else {
            won[i] = run_duel(parasites[opponent], hosts[host], *options.duel, false, options.sigmoid_slope).winner ==
                     Winner::robot_b;
        }
    });
    std::vector<double> fitness(hosts.size(), 0.0);
    for (std::size_t i = 0; i < won.size(); ++i) fitness[i / games_per_host] += won[i];
    return fitness;
}

ChampionResult generation_champion(const Genome& host_champion, const Genome& parasite_champion,
                                   const Comparator& comparator) {
    const auto result = comparator(host_champion, parasite_champion);
    if (result.superior() == Robot::b) return {parasite_champion, 1, result};
    return {host_champion, 0, result};
}

std::vector<Genome> initial_population(const EvolutionParams& params, const EvolutionMode& mode, Rng& rng) {
    const auto n = static_cast<std::size_t>(params.population_size);
    const double range = params.initial_weight_range;
    std::vector<Genome> population;
    population.reserve(n);
    std::visit(overloaded{
                   [&](const FixedTopology& fixed) {
                       if (fixed.seed) {
                           const auto topology = expressed_topology(*fixed.seed);
                           for (std::size_t i = 0; i < n; ++i)
                               population.push_back(with_random_weights(topology, rng, range));
                       } else {
                           for (std::size_t i = 0; i < n; ++i)
                               population.push_back(fully_connected_genome(kDuelIo, fixed.hidden_count, rng, range));
                       }
                   },
                   [&](const Simplifying& simplifying) {
                       for (std::size_t i = 0; i < n; ++i)
                           population.push_back(
                               fully_connected_genome(kDuelIo, simplifying.initial_hidden, rng, range));
                   },
                   [&](const auto&) {
                       for (std::size_t i = 0; i < n; ++i) population.push_back(minimal_genome(kDuelIo, rng, range));
                   },
               },
               mode);
    return population;
}

RunArchive run_coevolution(const RunSettings& settings, unsigned workers, const RunHooks& hooks) {
    if (settings.generations < 1) throw std::invalid_argument("generations must be at least 1");
    if (settings.params.population_size < 1) throw std::invalid_argument("population size must be at least 1");
    const auto& params = settings.params;
    const bool random_fitness = std::holds_alternative<RandomFitness>(settings.mode);
    const Comparator compare_fn =
        hooks.comparator ? hooks.comparator : DuelComparator(settings.duel, workers, params.sigmoid_slope).as_function();

    RunArchive archive;
    archive.settings = settings;

    std::array<std::vector<Genome>, 2> population;
    std::array<InnovationRegistry, 2> registry;
    std::array<SpeciesSet, 2> species{SpeciesSet::empty(params), SpeciesSet::empty(params)};
    std::array<SpeciesSet, 2> evaluated;
    for (std::size_t p = 0; p < 2; ++p) {
        Rng rng(derive_seed(settings.seed, {stream::kInitialPopulation, p}));
        population[p] = initial_population(params, settings.mode, rng);
        Innovation next_innovation = 1;
        NodeId next_node = kDuelIo.first_hidden();
        for (const auto& g : population[p]) {
            const auto after = InnovationRegistry::after(g);
            next_innovation = std::max(next_innovation, after.next_innovation());
            next_node = std::max(next_node, after.next_node_id());
        }
        registry[p] = InnovationRegistry(next_innovation, next_node);
    }

    for (int gen = 0; gen < settings.generations; ++gen) {
        const auto g = static_cast<std::uint64_t>(gen);
        if (hooks.on_population) hooks.on_population(gen, population);
        GenerationRecord record;
        record.generation = gen;

        std::array<std::vector<Genome>, 2> parasites;
        for (std::size_t p = 0; p < 2; ++p) {
            Rng rng(derive_seed(settings.seed, {stream::kParasites, g, p}));
            const auto& other = population[1 - p];
            if (gen == 0) {
                const auto total = params.parasite_species_champions + params.parasite_hall_draws;
                parasites[p] = select_parasites(SpeciesSet{}, HallOfFame{}, other, rng, 0, total);
            } else {
                parasites[p] = select_parasites(evaluated[1 - p], archive.hall, other, rng,
                                                params.parasite_species_champions, params.parasite_hall_draws);
            }
        }

        std::array<std::vector<double>, 2> fitness;
        for (std::size_t p = 0; p < 2; ++p) {
            EvaluationOptions options{&settings.duel, random_fitness,
                                      derive_seed(settings.seed, {stream::kCoinFlip, g, p}), workers,
                                      params.sigmoid_slope};
            fitness[p] = evaluate_host_population(population[p], parasites[p], options);
        }

        std::array<std::vector<std::size_t>, 2> offspring;
        for (std::size_t p = 0; p < 2; ++p) {
            Rng rng(derive_seed(settings.seed, {stream::kSpeciation, g, p}));
            species[p] = assign_species(population[p], species[p], params.compatibility, rng);
            set_raw_fitness(species[p], fitness[p]);
            share_fitness(species[p]);
            update_improvement(species[p]);
            if (gen + 1 < settings.generations)
                offspring[p] = allocate_offspring(species[p], static_cast<std::size_t>(params.population_size), params);
            record.populations[p] =
                population_stats(population[p], fitness[p], species[p], species[p].threshold, offspring[p]);
        }

        const auto champion =
            generation_champion(record.populations[0].champion, record.populations[1].champion, compare_fn);
        record.champion = champion.genome;
        record.champion_population = champion.population;
        record.champion_result = champion.result;
        archive.hall.append(gen, champion.genome);
        record.new_dominant = update_dominance(archive.hierarchy, champion.genome, gen, compare_fn);
        record.dominance_level = archive.hierarchy.size();
        archive.generations.push_back(std::move(record));
        if (hooks.on_generation) hooks.on_generation(archive);

        if (gen + 1 == settings.generations) break;
        for (std::size_t p = 0; p < 2; ++p) {
            evaluated[p] = species[p];
            Rng rng(derive_seed(settings.seed, {stream::kReproduction, g, p}));
            registry[p].new_generation();
            auto children = reproduce(species[p], offspring[p], registry[p], rng, params, settings.mode);
            population[p].clear();
            for (auto& child : children) population[p].push_back(std::move(child.genome));
            adjust_threshold(species[p], params);
        }
    }
    return archive;
}

}  // namespace neatduel
