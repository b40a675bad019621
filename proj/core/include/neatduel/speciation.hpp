#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "neatduel/genome.hpp"
#include "neatduel/mode.hpp"
#include "neatduel/params.hpp"
#include "neatduel/rng.hpp"

namespace neatduel {

struct Member {
    std::size_t index = 0;  // position in the population vector
    Genome genome;
    double raw_fitness = 0.0;
    double adjusted_fitness = 0.0;
};

struct Species {
    int id = 0;
    Genome representative;
    std::vector<Member> members;
    int age = 0;  // generations since creation
    double best_fitness = -std::numeric_limits<double>::infinity();
    int generations_without_improvement = 0;

    // Highest raw fitness; ties go to the lowest population index.
    const Member& champion() const;
    double best_raw_fitness() const;
    double adjusted_fitness_sum() const;
};

struct SpeciesSet {
    std::vector<Species> species;  // ascending id
    double threshold = 3.0;
    int next_id = 1;

    static SpeciesSet empty(const EvolutionParams& params);
    std::size_t member_count() const;
};

// Places each genome into the first species (previous-generation species
// first, then ones founded this call) whose representative is strictly
// closer than the threshold; unplaced genomes found a new species. Empty
// species are dropped and each survivor's representative for the next
// generation is drawn uniformly from its members. Raw fitness is left at 0.
SpeciesSet assign_species(const std::vector<Genome>& genomes, const SpeciesSet& previous,
                          const CompatibilityCoeffs& coeffs, Rng& rng);

// Raises the threshold by one step above target, lowers it below target
// (never under the floor).
void adjust_threshold(SpeciesSet& set, const EvolutionParams& params);

// Stores raw fitness per member (indexed by population position).
void set_raw_fitness(SpeciesSet& set, const std::vector<double>& raw);

// adjusted = raw / species size
void share_fitness(SpeciesSet& set);

// Tracks each species' best raw fitness and generations since it improved.
void update_improvement(SpeciesSet& set);

// Offspring counts aligned with set.species: proportional to each species'
// adjusted-fitness sum, largest-remainder rounding, remainder ties to the
// lowest species id. The lowest-performing species older than the
// stagnation limit gets nothing while another species can still breed.
std::vector<std::size_t> allocate_offspring(const SpeciesSet& set, std::size_t population_size,
                                            const EvolutionParams& params);

enum class OffspringOrigin { champion, mutation_only, crossover, interspecies };

struct Offspring {
    Genome genome;
    int species_id = 0;
    OffspringOrigin origin = OffspringOrigin::crossover;
    bool added_node = false;
    bool added_connection = false;
    bool removed_connection = false;
};

// Applies weight mutation and at most one structural mutation per the policy.
Offspring mutate_offspring(Genome genome, InnovationRegistry& registry, Rng& rng, const EvolutionParams& params,
                           StructuralPolicy policy);

std::vector<Offspring> reproduce(const SpeciesSet& set, const std::vector<std::size_t>& counts,
                                 InnovationRegistry& registry, Rng& rng, const EvolutionParams& params,
                                 const EvolutionMode& mode);

}  // namespace neatduel
