#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "neatduel/dominance.hpp"
#include "neatduel/duel.hpp"
#include "neatduel/genome.hpp"
#include "neatduel/mode.hpp"
#include "neatduel/params.hpp"
#include "neatduel/rng.hpp"
#include "neatduel/speciation.hpp"

namespace neatduel {

struct HallEntry {
    int generation = 0;
    Genome genome;
    bool operator==(const HallEntry&) const = default;
};

// Append-only record of generation champions, one per completed generation.
class HallOfFame {
public:
    void append(int generation, Genome genome);
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<HallEntry>& entries() const { return entries_; }
    bool operator==(const HallOfFame&) const = default;

private:
    std::vector<HallEntry> entries_;
};

// Opponents for one host population: the champions of the parasite species
// with the highest best raw fitness, then draws from the hall (without
// replacement when it holds enough entries). Fewer species than champion
// slots are padded with the next-best members of the largest species. An
// empty hall is replaced by uniform draws from `fallback`.
std::vector<Genome> select_parasites(const SpeciesSet& parasite_species, const HallOfFame& hall,
                                     const std::vector<Genome>& fallback, Rng& rng, int champion_slots = 4,
                                     int hall_draws = 8);

// How host games are decided; coin flips replace simulation in random-fitness runs.
struct EvaluationOptions {
    const DuelConfig* duel = nullptr;
    bool random_fitness = false;
    std::uint64_t coin_seed = 0;
    unsigned workers = 1;
    double sigmoid_slope = 4.9;
};

// Raw fitness per host: wins over two games (west start, east start) against
// every parasite. Timeouts and draws score nothing.
std::vector<double> evaluate_host_population(const std::vector<Genome>& hosts, const std::vector<Genome>& parasites,
                                             const EvaluationOptions& options);

struct ChampionResult {
    Genome genome;
    int population = 0;  // 0 = host, 1 = parasite
    ComparisonResult result;  // host as a
};

// Winner of the full comparison; an exact tie goes to the host.
ChampionResult generation_champion(const Genome& host_champion, const Genome& parasite_champion,
                                   const Comparator& comparator);

struct RunSettings {
    EvolutionParams params;
    EvolutionMode mode = Complexifying{};
    DuelConfig duel = DuelConfig::standard();
    int generations = 1;
    std::uint64_t seed = 0;
    bool operator==(const RunSettings&) const = default;
};

struct SpeciesStats {
    int id = 0;
    std::size_t size = 0;
    int age = 0;
    double best_raw_fitness = 0.0;
    double adjusted_fitness_sum = 0.0;
    std::size_t offspring = 0;
    bool operator==(const SpeciesStats&) const = default;
};

struct PopulationStats {
    double threshold = 0.0;  // threshold used to speciate this generation
    std::vector<SpeciesStats> species;
    double best_fitness = 0.0;
    std::size_t champion_index = 0;
    Genome champion;
    std::size_t min_connections = 0;
    std::size_t max_connections = 0;
    std::size_t min_hidden = 0;
    std::size_t max_hidden = 0;
    bool operator==(const PopulationStats&) const = default;
};

struct GenerationRecord {
    int generation = 0;
    std::array<PopulationStats, 2> populations;
    Genome champion;  // generation champion
    int champion_population = 0;
    ComparisonResult champion_result;
    bool new_dominant = false;
    std::size_t dominance_level = 0;  // hierarchy size after this generation
    bool operator==(const GenerationRecord&) const = default;
};

struct RunArchive {
    RunSettings settings;
    std::vector<GenerationRecord> generations;
    HallOfFame hall;
    DominanceHierarchy hierarchy;
    bool operator==(const RunArchive&) const = default;
};

// Generation-0 population for one side.
std::vector<Genome> initial_population(const EvolutionParams& params, const EvolutionMode& mode, Rng& rng);

using GenerationCallback = std::function<void(const RunArchive&)>;
using PopulationCallback = std::function<void(int generation, const std::array<std::vector<Genome>, 2>&)>;

struct RunHooks {
    // Runs after each generation record is appended.
    GenerationCallback on_generation;
    // Sees both populations of each generation before they are evaluated.
    PopulationCallback on_population;
    // Replaces the 288-game comparison used for champions and dominance.
    Comparator comparator;
};

// Two coevolving populations. Each generation both are evaluated against
// parasites drawn from the other side's previous generation, speciated and
// reproduced; the generation champion joins the hall and is offered to the
// dominance hierarchy.
RunArchive run_coevolution(const RunSettings& settings, unsigned workers = 1, const RunHooks& hooks = {});

}  // namespace neatduel
