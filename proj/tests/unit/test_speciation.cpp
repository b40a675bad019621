#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "neatduel/speciation.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace neatduel;
using neatduel::testing::within_three_sigma;
using neatduel::testing::oracle_allocation;
using neatduel::testing::weighted_set;

namespace {

SpeciesSet population_set(std::size_t members_per_species, std::size_t species_count, Rng& rng) {
    SpeciesSet set;
    std::size_t index = 0;
    for (std::size_t s = 0; s < species_count; ++s) {
        Species sp;
        sp.id = static_cast<int>(s) + 1;
        for (std::size_t m = 0; m < members_per_species; ++m) {
            const auto g = minimal_genome(kDuelIo, rng);
            sp.members.push_back({index, g, static_cast<double>(index % 7), 0.0});
            ++index;
        }
        sp.representative = sp.members.front().genome;
        set.species.push_back(sp);
    }
    share_fitness(set);
    return set;
}

}  // namespace

TEST(Speciation, AllocationMatchesExhaustiveOracle) {
    Rng rng(1);
    EvolutionParams params;
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = 1 + rng.index(8);
        std::vector<long> w(n);
        std::vector<int> ages(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = trial % 10 == 0 ? 0 : static_cast<long>(rng.index(6));
            ages[i] = static_cast<int>(rng.index(40));
        }
        const long pop = 1 + static_cast<long>(rng.index(300));
        const auto set = weighted_set(w, ages);
        const auto got = allocate_offspring(set, static_cast<std::size_t>(pop), params);
        ASSERT_EQ(got, oracle_allocation(w, ages, pop, params.stagnation_limit)) << "trial " << trial;
        ASSERT_EQ(std::accumulate(got.begin(), got.end(), std::size_t{0}), static_cast<std::size_t>(pop));
    }
}

TEST(Speciation, AllocationWorkedExamples) {
    EvolutionParams params;
    // 1:1:1 of 10 seats -> remainders tie, lowest ids get the extra seat.
    EXPECT_EQ(allocate_offspring(weighted_set({1, 1, 1}, {0, 0, 0}), 10, params),
              (std::vector<std::size_t>{4, 3, 3}));
    // All zero fitness -> equal split.
    EXPECT_EQ(allocate_offspring(weighted_set({0, 0, 0, 0}, {0, 0, 0, 0}), 8, params),
              (std::vector<std::size_t>{2, 2, 2, 2}));
    // Weakest old species is barred.
    EXPECT_EQ(allocate_offspring(weighted_set({3, 1, 2}, {31, 31, 0}), 12, params),
              (std::vector<std::size_t>{7, 0, 5}));
    // A lone species is never barred.
    EXPECT_EQ(allocate_offspring(weighted_set({1}, {100}), 5, params), (std::vector<std::size_t>{5}));
}

TEST(Speciation, AllocationInvariantUnderFitnessScaling) {
    Rng rng(2);
    EvolutionParams params;
    for (int trial = 0; trial < 200; ++trial) {
        auto set = population_set(1 + rng.index(6), 1 + rng.index(6), rng);
        for (auto& s : set.species)
            for (auto& m : s.members) m.raw_fitness = static_cast<double>(rng.index(25));
        share_fitness(set);
        const auto base = allocate_offspring(set, 64, params);
        const double scale = std::ldexp(1.0, static_cast<int>(rng.index(20)) - 10);
        for (auto& s : set.species)
            for (auto& m : s.members) m.raw_fitness *= scale;
        share_fitness(set);
        ASSERT_EQ(allocate_offspring(set, 64, params), base);
    }
}

TEST(Speciation, SharingDividesBySpeciesSize) {
    Rng rng(3);
    auto set = population_set(4, 3, rng);
    share_fitness(set);
    for (const auto& s : set.species)
        for (const auto& m : s.members) EXPECT_EQ(m.adjusted_fitness, m.raw_fitness / 4.0);
}

TEST(Speciation, AssignmentFollowsFirstFitRule) {
    Rng rng(4);
    EvolutionParams params;
    const CompatibilityCoeffs coeffs{};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Genome> genomes;
        auto registry = InnovationRegistry::after(minimal_genome({3, 1, 2}, rng));
        for (int i = 0; i < 30; ++i)
            genomes.push_back(neatduel::testing::random_genome({3, 1, 2}, rng, registry, static_cast<int>(rng.index(6))));
        SpeciesSet previous = SpeciesSet::empty(params);
        if (trial % 2 == 1) {
            Rng r(trial);
            previous = assign_species(genomes, previous, coeffs, r);
        }
        Rng r1(99);
        const auto next = assign_species(genomes, previous, coeffs, r1);

        // Replay the rule with an independent list of representatives.
        std::vector<Genome> reps;
        std::vector<int> ids;
        for (const auto& s : previous.species) {
            reps.push_back(s.representative);
            ids.push_back(s.id);
        }
        int next_id = previous.next_id;
        std::map<int, std::vector<std::size_t>> expected;
        for (std::size_t i = 0; i < genomes.size(); ++i) {
            std::size_t k = 0;
            while (k < reps.size() && !(compatibility_distance(genomes[i], reps[k], coeffs) < previous.threshold)) ++k;
            if (k == reps.size()) {
                reps.push_back(genomes[i]);
                ids.push_back(next_id++);
            }
            expected[ids[k]].push_back(i);
        }
        ASSERT_EQ(next.species.size(), expected.size());
        ASSERT_EQ(next.member_count(), genomes.size());
        for (const auto& s : next.species) {
            std::vector<std::size_t> got;
            for (const auto& m : s.members) got.push_back(m.index);
            ASSERT_EQ(got, expected[s.id]);
            const bool rep_is_member =
                std::ranges::any_of(s.members, [&](const Member& m) { return m.genome == s.representative; });
            ASSERT_TRUE(rep_is_member);
        }
        ASSERT_EQ(next.next_id, next_id);
    }
}

TEST(Speciation, CarriedSpeciesAge) {
    Rng rng(5);
    EvolutionParams params;
    std::vector<Genome> genomes(5, minimal_genome(kDuelIo, rng));
    auto first = assign_species(genomes, SpeciesSet::empty(params), params.compatibility, rng);
    ASSERT_EQ(first.species.size(), 1u);
    EXPECT_EQ(first.species[0].age, 0);
    const auto second = assign_species(genomes, first, params.compatibility, rng);
    EXPECT_EQ(second.species[0].id, first.species[0].id);
    EXPECT_EQ(second.species[0].age, 1);
}

TEST(Speciation, ThresholdSteersTowardTarget) {
    EvolutionParams params;
    SpeciesSet set = weighted_set(std::vector<long>(12, 1), std::vector<int>(12, 0));
    set.threshold = 3.0;
    adjust_threshold(set, params);
    EXPECT_DOUBLE_EQ(set.threshold, 3.3);
    set = weighted_set(std::vector<long>(10, 1), std::vector<int>(10, 0));
    set.threshold = 3.0;
    adjust_threshold(set, params);
    EXPECT_DOUBLE_EQ(set.threshold, 3.0);
    set = weighted_set({1, 1}, {0, 0});
    set.threshold = 0.2;
    adjust_threshold(set, params);
    EXPECT_DOUBLE_EQ(set.threshold, params.threshold_floor);
    adjust_threshold(set, params);
    EXPECT_DOUBLE_EQ(set.threshold, params.threshold_floor);
}

TEST(Speciation, ImprovementTracking) {
    auto set = weighted_set({2}, {0});
    update_improvement(set);
    EXPECT_EQ(set.species[0].best_fitness, 2.0);
    EXPECT_EQ(set.species[0].generations_without_improvement, 0);
    update_improvement(set);
    EXPECT_EQ(set.species[0].generations_without_improvement, 1);
    set.species[0].members[0].raw_fitness = 3.0;
    update_improvement(set);
    EXPECT_EQ(set.species[0].generations_without_improvement, 0);
}

TEST(Speciation, ChampionTieGoesToLowestIndex) {
    Rng rng(6);
    auto set = population_set(4, 1, rng);
    for (auto& m : set.species[0].members) m.raw_fitness = 5.0;
    std::swap(set.species[0].members[0], set.species[0].members[2]);
    EXPECT_EQ(set.species[0].champion().index, 0u);
}

TEST(Reproduction, CountsSpeciesAndElitism) {
    Rng rng(7);
    EvolutionParams params;
    SpeciesSet set;
    auto big = population_set(6, 1, rng);
    auto small = population_set(5, 1, rng);
    big.species[0].id = 1;
    small.species[0].id = 2;
    for (auto& m : small.species[0].members) m.index += 6;
    set.species = {big.species[0], small.species[0]};
    auto registry = InnovationRegistry::after(set.species[0].members[0].genome);
    const auto kids = reproduce(set, {7, 4}, registry, rng, params, Complexifying{});
    ASSERT_EQ(kids.size(), 11u);
    EXPECT_EQ(std::ranges::count(kids, 1, &Offspring::species_id), 7);
    EXPECT_EQ(std::ranges::count(kids, 2, &Offspring::species_id), 4);
    EXPECT_EQ(kids[0].origin, OffspringOrigin::champion);
    EXPECT_EQ(kids[0].genome, set.species[0].champion().genome);
    EXPECT_EQ(std::ranges::count(kids, OffspringOrigin::champion, &Offspring::origin), 1);
}

TEST(Reproduction, OriginRates) {
    Rng rng(8);
    EvolutionParams params;
    auto set = population_set(10, 2, rng);
    auto registry = InnovationRegistry::after(set.species[0].members[0].genome);
    const auto kids = reproduce(set, {10001, 0}, registry, rng, params, Complexifying{});
    std::size_t mutation_only = 0;
    std::size_t interspecies = 0;
    std::size_t crossovers = 0;
    for (std::size_t i = 1; i < kids.size(); ++i) {
        mutation_only += kids[i].origin == OffspringOrigin::mutation_only;
        interspecies += kids[i].origin == OffspringOrigin::interspecies;
        crossovers += kids[i].origin != OffspringOrigin::mutation_only;
    }
    EXPECT_TRUE(within_three_sigma(mutation_only, 10000, 0.25)) << mutation_only;
    EXPECT_TRUE(within_three_sigma(interspecies, crossovers, 0.05)) << interspecies << "/" << crossovers;
}

TEST(Reproduction, StructuralMutationRates) {
    Rng rng(9);
    EvolutionParams params;
    const auto g = minimal_genome(kDuelIo, rng);
    auto registry = InnovationRegistry::after(g);
    std::size_t nodes = 0;
    std::size_t links = 0;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
        const auto o = mutate_offspring(g, registry, rng, params, StructuralPolicy::grow);
        nodes += o.added_node;
        links += o.added_connection;
        ASSERT_FALSE(o.added_node && o.added_connection);
    }
    EXPECT_TRUE(within_three_sigma(nodes, n, 0.01)) << nodes;
    EXPECT_TRUE(within_three_sigma(links, n, 0.10)) << links;
}

TEST(Reproduction, FixedPolicyKeepsTopology) {
    Rng rng(10);
    EvolutionParams params;
    const auto g = fully_connected_genome(kDuelIo, 5, rng);
    InnovationRegistry registry = InnovationRegistry::after(g);
    for (int i = 0; i < 500; ++i) {
        const auto o = mutate_offspring(g, registry, rng, params, StructuralPolicy::none);
        ASSERT_EQ(o.genome.nodes().size(), g.nodes().size());
        ASSERT_EQ(o.genome.connections().size(), 144u);
    }
}

TEST(Reproduction, ShrinkPolicyOnlyRemoves) {
    Rng rng(11);
    EvolutionParams params;
    auto g = fully_connected_genome({2, 1, 1}, 2, rng);
    const auto max_inn = g.max_innovation();
    InnovationRegistry registry = InnovationRegistry::after(g);
    std::size_t removals = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto before = g.connections().size();
        const auto o = mutate_offspring(g, registry, rng, params, StructuralPolicy::shrink);
        ASSERT_LE(o.genome.connections().size(), before);
        ASSERT_LE(o.genome.max_innovation(), max_inn);
        removals += o.removed_connection;
        if (o.genome.connections().size() > 2) g = o.genome;
    }
    EXPECT_TRUE(within_three_sigma(removals, 2000, 0.10)) << removals;
}
