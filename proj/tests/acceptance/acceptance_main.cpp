// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "neatduel/archive.hpp"
#include "neatduel/coevolution.hpp"
#include "neatduel/commands.hpp"
#include "neatduel/dominance.hpp"
#include "neatduel/duel.hpp"
#include "neatduel/genome.hpp"
#include "neatduel/network.hpp"
#include "neatduel/speciation.hpp"
#include "oracles.hpp"
#include "scripted.hpp"
#include "test_support.hpp"

namespace {

using namespace neatduel;
using namespace neatduel::testing;
namespace fs = std::filesystem;

// Tolerances and sample sizes.
constexpr double kMotionTolerance = 1e-12;
constexpr double kNetworkTolerance = 1e-12;
constexpr double kMirrorTolerance = 1e-9;
constexpr double kScoreTolerance = 0.001;
constexpr int kMotionSamples = 1000;
constexpr int kOracleInstances = 250;
constexpr std::size_t kRateSamples = 10000;
constexpr int kSimulatorDuels = 300;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

unsigned hardware_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<Genome> random_genomes(std::size_t n, Rng& rng, int mutations) {
    InnovationRegistry registry(1000, 100);
    std::vector<Genome> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_genome(kDuelIo, rng, registry, mutations));
    return out;
}

bool orphan_free(const Genome& g) {
    for (const auto& n : g.nodes()) {
        if (n.kind != NodeKind::hidden) continue;
        if (std::ranges::none_of(g.connections(),
                                 [&](const ConnectionGene& c) { return c.in_node == n.id || c.out_node == n.id; }))
            return false;
    }
    return true;
}

std::map<std::string, std::string> file_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files[fs::relative(e.path(), root).string()] = s.str();
    }
    return files;
}

void criterion_parameters(Verdict& v) {
    const EvolutionParams p;
    v.require(p.population_size == 256, "population 256");
    v.require(p.compatibility.excess == 1.0 && p.compatibility.disjoint == 1.0 && p.compatibility.weight_diff == 2.0,
              "c1 c2 c3 = 1 1 2");
    v.require(!p.compatibility.normalize, "N = 1");
    v.require(p.initial_threshold == 3.0 && p.threshold_step == 0.3 && p.target_species == 10, "threshold 3.0/0.3/10");
    v.require(p.stagnation_limit == 30, "stagnation 30");
    v.require(p.elitism_min_size == 6, "champion copied above size 5");
    v.require(p.weight_mutation_rate == 0.8 && p.weight_perturb_prob == 0.9, "weight mutation 80/90/10");
    v.require(p.disable_inherit_prob == 0.75, "disable inheritance 0.75");
    v.require(p.weight_average_rate == 0.4, "averaging 0.40");
    v.require(p.mutation_only_rate == 0.25, "mutation-only 0.25");
    v.require(p.interspecies_rate == 0.05, "interspecies 0.05");
    v.require(p.add_node_prob == 0.01 && p.add_link_prob == 0.1, "add node 0.01, add link 0.1");
    v.require(p.sigmoid_slope == 4.9, "slope 4.9");
    v.require(kComparisonGames == 288, "288-game comparison");
    v.detail << "all default parameters exact";
}

void criterion_motion(Verdict& v) {
    Rng rng(2);
    DuelConfig cfg = DuelConfig::standard();
    cfg.food_layout.clear();
    double worst_turn = 0, worst_forward = 0, worst_energy = 0;
    for (int i = 0; i < kMotionSamples; ++i) {
        const MotorOutputs out{rng.uniform(), rng.uniform(), rng.uniform()};
        const auto m = motion_from_outputs(out, cfg);
        worst_turn = std::max(worst_turn, std::abs(std::abs(m.turn) - 0.24 * std::abs(out.left - out.right)));
        worst_forward = std::max(worst_forward, std::abs(m.forward - 1.33 * out.forward));

        auto world = init_duel(cfg);
        const double before = world.robots[0].energy;
        advance(world, cfg, out, MotorOutputs{0.5, 0.5, 0.0});
        const double spent = before - world.robots[0].energy;
        worst_energy = std::max(worst_energy, std::abs(spent - (0.24 * std::abs(out.left - out.right) + 1.33 * out.forward)));
    }
    v.require(worst_turn <= kMotionTolerance, "turn");
    v.require(worst_forward <= kMotionTolerance, "forward");
    v.require(worst_energy <= kMotionTolerance, "energy decrement");
    v.detail << kMotionSamples << " samples, max error turn " << worst_turn << " forward " << worst_forward
             << " energy " << worst_energy;
}

void criterion_counts(Verdict& v) {
    Rng rng(3);
    const auto minimal = minimal_genome(kDuelIo, rng);
    v.require(minimal.nodes().size() == 16 && minimal.connections().size() == 39, "minimal 16/39");
    const auto fixed = fully_connected_genome(kDuelIo, 5, rng);
    v.require(fixed.connections().size() == 144 && fixed.hidden_count() == 5, "5-hidden 144");

    int splits = 0;
    InnovationRegistry registry(1000, 100);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_genome(kDuelIo, rng, registry, static_cast<int>(rng.index(10)));
        auto grown = mutate_add_node(g, registry, rng);
        if (!grown) continue;
        ++splits;
        bool ok = grown->nodes().size() == g.nodes().size() + 1 &&
                  grown->connections().size() == g.connections().size() + 2;
        NodeId new_node = 0;
        for (const auto& n : grown->nodes())
            if (!g.has_node(n.id)) new_node = n.id;
        const ConnectionGene* in = nullptr;
        const ConnectionGene* out = nullptr;
        for (const auto& c : grown->connections()) {
            if (c.out_node == new_node) in = &c;
            if (c.in_node == new_node) out = &c;
        }
        const ConnectionGene* split = nullptr;
        for (const auto& c : g.connections()) {
            const auto* after = find_gene(*grown, c.innovation);
            if (c.enabled && after && !after->enabled) split = &c;
        }
        ok = ok && in && out && split && in->in_node == split->in_node && out->out_node == split->out_node &&
             in->weight == 1.0 && out->weight == split->weight;
        v.require(ok, "add-node split at trial " + std::to_string(trial));
        if (!ok) break;
    }
    v.detail << "16 nodes/39 connections, 144 connections, " << splits << " add-node splits (+1 node, +2 genes, "
             << "weights 1.0/old, split gene disabled)";
}

void criterion_oracles(Verdict& v) {
    Rng rng(4);
    int distance = 0, network = 0, allocation = 0, cross = 0;

    const std::vector<CompatibilityCoeffs> coeff_sets{{}, {1.5, 0.5, 0.4, false}, {1, 1, 2, true}};
    for (int t = 0; t < kOracleInstances; ++t) {
        const auto [a, b] =
            related_pair({3, 1, 2}, rng, static_cast<int>(rng.index(8)), static_cast<int>(rng.index(8)));
        bool ok = true;
        for (const auto& c : coeff_sets) ok = ok && compatibility_distance(a, b, c) == oracle_distance(a, b, c);
        distance += ok;
    }

    for (int t = 0; t < kOracleInstances; ++t) {
        auto registry = InnovationRegistry::after(minimal_genome(kDuelIo, rng));
        const auto g = random_genome(kDuelIo, rng, registry, static_cast<int>(rng.index(40)));
        Network net(g);
        DenseOracle oracle(g);
        bool ok = true;
        for (int step = 0; step < 10; ++step) {
            std::vector<double> sensors(12);
            for (auto& s : sensors) s = rng.uniform(-1.0, 1.0);
            const auto got = net.activate(sensors);
            const auto want = oracle.step(sensors);
            for (std::size_t o = 0; o < want.size(); ++o) ok = ok && std::abs(got[o] - want[o]) <= kNetworkTolerance;
        }
        network += ok;
    }

    const EvolutionParams params;
    for (int t = 0; t < kOracleInstances; ++t) {
        const auto n = 1 + rng.index(8);
        std::vector<long> w(n);
        std::vector<int> ages(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = t % 10 == 0 ? 0 : static_cast<long>(rng.index(6));
            ages[i] = static_cast<int>(rng.index(40));
        }
        const long pop = 1 + static_cast<long>(rng.index(300));
        allocation += allocate_offspring(weighted_set(w, ages), static_cast<std::size_t>(pop), params) ==
                      oracle_allocation(w, ages, pop, params.stagnation_limit);
    }

    int tried = 0;
    while (tried < kOracleInstances) {
        const auto [a, b] =
            related_pair({1, 1, 1}, rng, static_cast<int>(rng.index(4)), static_cast<int>(rng.index(4)));
        if (a.connections().size() > 8 || b.connections().size() > 8) continue;
        ++tried;
        const double fa = static_cast<double>(rng.index(3));
        const double fb = static_cast<double>(rng.index(3));
        cross += crossover_matches_oracle(a, fa, b, fb, crossover(a, fa, b, fb, rng, params));
    }

    v.require(distance == kOracleInstances, "distance");
    v.require(network == kOracleInstances, "network");
    v.require(allocation == kOracleInstances, "allocation");
    v.require(cross == kOracleInstances, "crossover");
    v.detail << "agreeing instances: distance " << distance << ", network " << network << ", allocation "
             << allocation << ", crossover " << cross << " (of " << kOracleInstances << " each)";
}

void criterion_rates(Verdict& v) {
    Rng rng(5);
    const EvolutionParams params;
    const IoSpec io{1, 0, 1};
    const std::vector<NodeGene> nodes{{1, NodeKind::sensor}, {2, NodeKind::output}};
    const std::size_t n = kRateSamples;

    std::size_t disabled = 0;
    {
        const Genome a(io, nodes, {{1, 1, 2, 0.3, false}});
        const Genome b(io, nodes, {{1, 1, 2, 0.7, true}});
        for (std::size_t i = 0; i < n; ++i) disabled += !crossover(a, 1, b, 0, rng, params).connections()[0].enabled;
    }
    std::size_t averaged = 0;
    {
        const Genome a(io, nodes, {{1, 1, 2, 0.25, true}});
        const Genome b(io, nodes, {{1, 1, 2, 0.75, true}});
        for (std::size_t i = 0; i < n; ++i) averaged += crossover(a, 1, b, 0, rng, params).connections()[0].weight == 0.5;
    }
    std::size_t added_nodes = 0;
    {
        const auto g = minimal_genome(kDuelIo, rng);
        for (std::size_t i = 0; i < n; ++i) {
            auto registry = InnovationRegistry::after(g);
            added_nodes += mutate_offspring(g, registry, rng, params, StructuralPolicy::grow).added_node;
        }
    }
    std::size_t mutation_only = 0;
    {
        SpeciesSet set;
        Species s;
        s.id = 1;
        for (std::size_t m = 0; m < 50; ++m)
            s.members.push_back({m, minimal_genome(kDuelIo, rng), static_cast<double>(m % 7), 0.0});
        s.representative = s.members.front().genome;
        set.species.push_back(s);
        auto registry = InnovationRegistry::after(s.representative);
        const auto kids = reproduce(set, {n + 1}, registry, rng, params, Complexifying{});
        for (const auto& k : kids) mutation_only += k.origin == OffspringOrigin::mutation_only;
    }
    std::size_t coin_wins = 0;
    {
        std::vector<Genome> hosts(n / 20, minimal_genome(kDuelIo, rng));
        std::vector<Genome> parasites(10, hosts.front());
        EvaluationOptions options;
        options.random_fitness = true;
        options.coin_seed = 5;
        for (double f : evaluate_host_population(hosts, parasites, options)) coin_wins += static_cast<std::size_t>(f);
    }

    auto check = [&](const char* name, std::size_t hits, double p) {
        const double rate = static_cast<double>(hits) / static_cast<double>(n);
        v.require(within_three_sigma(hits, n, p), name);
        v.detail << name << ' ' << rate << " (p " << p << ") ";
    };
    check("disable", disabled, 0.75);
    check("average", averaged, 0.40);
    check("add-node", added_nodes, 0.01);
    check("mutation-only", mutation_only, 0.25);
    check("coin", coin_wins, 0.5);
}

void criterion_simulator(Verdict& v) {
    Rng rng(6);
    const auto layouts = evaluation_configs();
    const auto genomes = random_genomes(2 * kSimulatorDuels, rng, 12);
    int identical = 0, mirrored = 0, terminated = 0, collisions = 0, collisions_ok = 0;
    double worst_mirror = 0.0;
    for (int d = 0; d < kSimulatorDuels; ++d) {
        const auto& a = genomes[2 * static_cast<std::size_t>(d)];
        const auto& b = genomes[2 * static_cast<std::size_t>(d) + 1];
        const auto& cfg = layouts[static_cast<std::size_t>(d) % layouts.size()];
        const auto first = run_duel(a, b, cfg, true);
        identical += run_duel(a, b, cfg, true) == first;
        terminated += first.steps >= 1 && first.steps <= 750 && first.replay.size() == static_cast<std::size_t>(first.steps);

        const auto reflected = run_duel(a, b, point_reflected(cfg), true);
        bool same = reflected.winner == first.winner && reflected.steps == first.steps;
        for (std::size_t s = 0; same && s < first.replay.size(); ++s) {
            for (std::size_t r = 0; r < 2; ++r) {
                const auto& p = first.replay[s].position[r];
                const auto& q = reflected.replay[s].position[r];
                const double dev = std::hypot(q.x - (kBoardSize - p.x), q.y - (kBoardSize - p.y));
                worst_mirror = std::max(worst_mirror, dev);
                same = same && dev <= kMirrorTolerance;
            }
        }
        mirrored += same;

        if (first.reason == EndReason::collision) {
            ++collisions;
            const auto& last = first.replay.back();
            const double dist = std::hypot(last.position[0].x - last.position[1].x,
                                           last.position[0].y - last.position[1].y);
            const double ea = last.energy[0], eb = last.energy[1];
            const bool winner_ok = first.winner == Winner::robot_a ? ea > eb
                                 : first.winner == Winner::robot_b ? eb > ea
                                                                   : ea == eb;
            collisions_ok += dist <= 20.0 && winner_ok;
        }
    }
    v.require(identical == kSimulatorDuels, "bit-identical reruns");
    v.require(mirrored == kSimulatorDuels, "mirror symmetry");
    v.require(terminated == kSimulatorDuels, "termination");
    v.require(collisions > 0, "at least one collision sampled");
    v.require(collisions_ok == collisions, "collision rule");
    v.detail << kSimulatorDuels << " duels: identical " << identical << ", mirrored " << mirrored
             << " (max deviation " << worst_mirror << "), terminated " << terminated << ", collisions " << collisions_ok
             << '/' << collisions << " valid";
}

void criterion_dominance(Verdict& v) {
    {
        Scripted script;
        DominanceHierarchy h;
        v.require(update_dominance(h, tagged(1), 0, std::ref(script)) && h.size() == 1 && script.calls == 0,
                  "first champion is d1");
        for (int k = 2; k <= 4; ++k) update_dominance(h, tagged(k), k - 1, std::ref(script));
        script.table[{10, 3}] = a_wins().swapped();
        const auto before = h;
        v.require(!update_dominance(h, tagged(10), 9, std::ref(script)) && h == before,
                  "beats d4, loses to d3 rejected");
    }
    {
        // Random scripted outcomes.
        Rng rng(7);
        Scripted script;
        for (int i = 1; i <= 40; ++i)
            for (int j = 1; j < i; ++j)
                script.table[{i, j}] = rng.bernoulli(0.6) ? a_wins() : a_wins().swapped();
        DominanceHierarchy incremental;
        for (int g = 0; g < 40; ++g) update_dominance(incremental, tagged(g + 1), g, std::ref(script));
        bool acyclic = true;
        for (std::size_t j = 0; j < incremental.size(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                acyclic = acyclic && script(incremental.levels[j].genome, incremental.levels[i].genome).superior() == Robot::a;
        v.require(acyclic, "every level superior to all below");
    }
    {
        RunSettings s;
        s.params.population_size = 24;
        s.params.parasite_species_champions = 2;
        s.params.parasite_hall_draws = 4;
        s.duel.max_steps = 300;
        s.generations = 6;
        s.seed = 8;
        const auto archive = run_coevolution(s, hardware_workers());
        const auto fn = DuelComparator(s.duel, hardware_workers()).as_function();
        DominanceHierarchy recomputed;
        for (const auto& e : archive.hall.entries()) update_dominance(recomputed, e.genome, e.generation, fn);
        v.require(recomputed == archive.hierarchy, "simulated recomputation");
        v.detail << "simulated run recomputed " << recomputed.size() << " levels; ";
    }
    {
        Scripted script;
        DominanceHierarchy h;
        for (int k = 1; k <= 15; ++k) update_dominance(h, tagged(k), k - 1, std::ref(script));
        // Tag 100 beats every level except d14.
        script.table[{100, 14}] = a_wins().swapped();
        const double score = performance_score(tagged(100), h, std::ref(script));
        v.require(std::abs(score - 13.0 / 15.0) <= kScoreTolerance, "13 of 15");
        v.detail << "score(13 of 15) " << score;
    }
}

RunSettings smoke_settings(EvolutionMode mode, int population, int generations, std::uint64_t seed) {
    RunSettings s;
    s.params.population_size = population;
    s.params.parasite_species_champions = 2;
    s.params.parasite_hall_draws = 4;
    s.duel.max_steps = 400;
    s.mode = std::move(mode);
    s.generations = generations;
    s.seed = seed;
    return s;
}

void criterion_smoke(Verdict& v) {
    int with_levels = 0, with_complexity = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto archive = run_coevolution(smoke_settings(Complexifying{}, 64, 25, seed), hardware_workers());
        const auto& top = archive.hierarchy.levels.back().genome;
        const auto initial = archive.generations.front().populations[0].min_connections;
        with_levels += archive.hierarchy.size() >= 2;
        with_complexity += top.hidden_count() >= 1 && top.connections().size() > initial;
        v.detail << "seed " << seed << ": levels " << archive.hierarchy.size() << ", top " << top.hidden_count()
                 << "h/" << top.connections().size() << "c; ";
    }
    v.require(with_levels >= 4, ">=2 levels in >=4/5 seeds");
    v.require(with_complexity >= 3, "complexified dominant in >=3/5 seeds");
    v.detail << "levels>=2 in " << with_levels << "/5, complexified in " << with_complexity << "/5";
}

void criterion_ablations(Verdict& v) {
    {
        bool exact = true;
        RunHooks hooks;
        hooks.on_population = [&](int, const std::array<std::vector<Genome>, 2>& pops) {
            for (const auto& pop : pops)
                for (const auto& g : pop)
                    exact = exact && g.nodes().size() == 21 && g.connections().size() == 144 && g.enabled_count() == 144;
        };
        run_coevolution(smoke_settings(FixedTopology{5, std::nullopt}, 32, 10, 9), hardware_workers(), hooks);
        v.require(exact, "fixed topology counts");
        v.detail << "fixed: 21 nodes/144 connections throughout; ";
    }
    {
        bool monotone = true, orphans = false;
        std::size_t removed = 0;
        std::array<std::vector<Genome>, 2> previous;
        RunHooks hooks;
        hooks.on_population = [&](int gen, const std::array<std::vector<Genome>, 2>& pops) {
            for (std::size_t p = 0; p < 2; ++p) {
                for (const auto& g : pops[p]) {
                    orphans = orphans || !orphan_free(g);
                    if (gen == 0) continue;
                    const auto mine = innovations(g);
                    monotone = monotone && std::ranges::any_of(previous[p], [&](const Genome& parent) {
                                   return std::ranges::includes(innovations(parent), mine);
                               });
                }
            }
            previous = pops;
            if (gen > 0)
                for (const auto& g : pops[0]) removed = std::max(removed, 375 - g.connections().size());
        };
        run_coevolution(smoke_settings(Simplifying{12}, 32, 10, 10), hardware_workers(), hooks);
        v.require(monotone, "simplifying gene sets shrink");
        v.require(!orphans, "no orphan hidden nodes");
        v.require(removed > 0, "simplifying removed something");
        v.detail << "simplifying: every genome's genes within a parent's, no orphans, up to " << removed
                 << " genes removed; ";
    }
    {
        const auto archive = run_coevolution(smoke_settings(RandomFitness{}, 256, 31, 11), hardware_workers());
        const auto& last = archive.generations.back();
        const auto lo = std::min(last.populations[0].min_connections, last.populations[1].min_connections);
        const auto hi = std::max(last.populations[0].max_connections, last.populations[1].max_connections);
        v.require(lo < 49 && hi > 49, "random-fitness spread");
        v.detail << "random fitness after 30 generations: connections " << lo << ".." << hi;
    }
}

void criterion_determinism(Verdict& v) {
    const auto root = scratch_dir("acceptance_determinism");
    {
        std::ofstream cfg(root / "run.cfg");
        cfg << "seed = 2024\ngenerations = 4\npopulation_size = 24\nparasite_species_champions = 2\n"
               "parasite_hall_draws = 4\nmax_steps = 300\n";
    }
    std::vector<std::map<std::string, std::string>> trees;
    for (const auto& [name, workers] : {std::pair{"w1a", 1u}, {"w1b", 1u}, {"w8a", 8u}, {"w8b", 8u}}) {
        cli::EvolveOptions options;
        options.config = root / "run.cfg";
        options.output_dir = root / name;
        options.workers = workers;
        options.quiet = true;
        std::ostringstream out, err;
        v.require(cli::cmd_evolve(options, out, err) == cli::kExitOk, std::string("evolve ") + name + ": " + err.str());
        trees.push_back(file_tree(root / name));
    }
    bool identical = true;
    for (const auto& t : trees) identical = identical && t == trees.front();
    v.require(identical, "byte-identical archives");
    v.detail << trees.front().size() << " files identical across 4 runs (workers 1, 1, 8, 8)";
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Verdict&)> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "exact parameters", criterion_parameters},
        {2, "motion math", criterion_motion},
        {3, "structural counts", criterion_counts},
        {4, "oracle equivalences", criterion_oracles},
        {5, "stochastic rates", criterion_rates},
        {6, "simulator properties", criterion_simulator},
        {7, "dominance semantics", criterion_dominance},
        {8, "smoke run", criterion_smoke},
        {9, "mode ablations", criterion_ablations},
        {10, "determinism", criterion_determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.contains(c.id)) continue;
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.check(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !v.pass;
        std::printf("criterion %2d %s  %s: %s (%.1fs)\n", c.id, v.pass ? "PASS" : "FAIL", c.name, v.detail.str().c_str(),
                    seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
