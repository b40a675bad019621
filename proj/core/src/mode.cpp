#include "neatduel/mode.hpp"

namespace neatduel {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
}  // namespace

StructuralPolicy structural_policy(const EvolutionMode& mode) {
    return std::visit(overloaded{
                          [](const Complexifying&) { return StructuralPolicy::grow; },
                          [](const RandomFitness&) { return StructuralPolicy::grow; },
                          [](const FixedTopology&) { return StructuralPolicy::none; },
                          [](const Simplifying&) { return StructuralPolicy::shrink; },
                      },
                      mode);
}

std::string_view mode_name(const EvolutionMode& mode) {
    return std::visit(overloaded{
                          [](const Complexifying&) { return std::string_view("complexifying"); },
                          [](const RandomFitness&) { return std::string_view("random_fitness"); },
                          [](const FixedTopology&) { return std::string_view("fixed_topology"); },
                          [](const Simplifying&) { return std::string_view("simplifying"); },
                      },
                      mode);
}

}  // namespace neatduel
