#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "neatduel/genome.hpp"

namespace neatduel {

// Minimal start, structure only added.
struct Complexifying {
    bool operator==(const Complexifying&) const = default;
};

// No structural mutation. Either a fully recurrent net with `hidden_count`
// hidden nodes, or the expressed topology of `seed`.
struct FixedTopology {
    int hidden_count = 5;
    std::optional<Genome> seed;
    bool operator==(const FixedTopology&) const = default;
};

// Starts fully connected with `initial_hidden` hidden nodes; structure is
// only removed.
struct Simplifying {
    int initial_hidden = 12;
    bool operator==(const Simplifying&) const = default;
};

// Complexifying, but every game's winner is a fair coin flip.
struct RandomFitness {
    bool operator==(const RandomFitness&) const = default;
};

using EvolutionMode = std::variant<Complexifying, FixedTopology, Simplifying, RandomFitness>;

enum class StructuralPolicy { grow, none, shrink };

StructuralPolicy structural_policy(const EvolutionMode& mode);
std::string_view mode_name(const EvolutionMode& mode);

}  // namespace neatduel
