#pragma once

#include <cstddef>

namespace neatduel {

struct CompatibilityCoeffs {
    double excess = 1.0;       // c1
    double disjoint = 1.0;     // c2
    double weight_diff = 2.0;  // c3
    // When false the gene-count normalizer N is fixed at one.
    bool normalize = false;

    bool operator==(const CompatibilityCoeffs&) const = default;
};

// NEAT and coevolution parameters. Defaults are the values used for the robot
// duel experiments; the ones marked "chosen" fill gaps the method leaves open.
struct EvolutionParams {
    int population_size = 256;
    CompatibilityCoeffs compatibility{};

    double initial_threshold = 3.0;
    double threshold_step = 0.3;
    double threshold_floor = 0.1;  // chosen
    int target_species = 10;
    int stagnation_limit = 30;
    int elitism_min_size = 6;  // champion copied when species size > 5

    double weight_mutation_rate = 0.80;
    double weight_perturb_prob = 0.90;  // otherwise replaced
    double initial_weight_range = 1.0;  // chosen: weights drawn in [-1, 1]
    double weight_perturb_range = 0.5;  // chosen: delta drawn in [-0.5, 0.5]
    double weight_cap = 8.0;            // chosen

    double disable_inherit_prob = 0.75;
    double weight_average_rate = 0.40;
    double mutation_only_rate = 0.25;
    double interspecies_rate = 0.05;
    double add_node_prob = 0.01;
    double add_link_prob = 0.1;
    double remove_link_prob = 0.1;  // chosen: mirrors add_link_prob
    double survival_fraction = 0.20;  // chosen

    double sigmoid_slope = 4.9;

    int parasite_species_champions = 4;
    int parasite_hall_draws = 8;

    bool operator==(const EvolutionParams&) const = default;
};

}  // namespace neatduel
