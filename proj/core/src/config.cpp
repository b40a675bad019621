#include "neatduel/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "neatduel/genome_io.hpp"

namespace neatduel {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty())
        throw ConfigError(std::string(key), "invalid number '" + std::string(value) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(value) + "'");
}

// Mode-related values gathered while parsing, combined at the end.
struct Draft {
    RunConfig config;
    std::string mode = "complexifying";
    int fixed_hidden = FixedTopology{}.hidden_count;
    int simplify_hidden = Simplifying{}.initial_hidden;
};

struct Entry {
    std::string_view name;
    std::string_view description;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(Draft&, std::string_view)> set;
};

template <class T>
Entry field(std::string_view name, std::string_view description, std::function<T&(RunSettings&)> ref) {
    Entry e{name, description, {}, {}};
    e.get = [ref](const RunConfig& c) {
        auto copy = c.settings;
        const T value = ref(copy);
        if constexpr (std::is_same_v<T, double>) return format_double(value);
        else if constexpr (std::is_same_v<T, bool>) return std::string(value ? "true" : "false");
        else return std::to_string(value);
    };
    e.set = [ref, name](Draft& d, std::string_view value) {
        if constexpr (std::is_same_v<T, bool>) ref(d.config.settings) = parse_bool(name, value);
        else ref(d.config.settings) = parse_number<T>(name, value);
    };
    return e;
}

#define PARAM(T, key, member, text) \
    field<T>(key, text, [](RunSettings& s) -> T& { return s.params.member; })
#define DUEL(T, key, member, text) field<T>(key, text, [](RunSettings& s) -> T& { return s.duel.member; })

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        t.push_back({"mode", "complexifying | fixed_topology | simplifying | random_fitness",
                     [](const RunConfig& c) { return std::string(mode_name(c.settings.mode)); },
                     [](Draft& d, std::string_view v) {
                         if (v != "complexifying" && v != "fixed_topology" && v != "simplifying" &&
                             v != "random_fitness")
                             throw ConfigError("mode", "unknown mode '" + std::string(v) + "'");
                         d.mode = v;
                     }});
        t.push_back({"fixed_hidden", "hidden nodes of the fully recurrent fixed topology",
                     [](const RunConfig& c) {
                         const auto* f = std::get_if<FixedTopology>(&c.settings.mode);
                         return std::to_string(f ? f->hidden_count : FixedTopology{}.hidden_count);
                     },
                     [](Draft& d, std::string_view v) { d.fixed_hidden = parse_number<int>("fixed_hidden", v); }});
        t.push_back({"seed_genome", "genome file whose enabled topology fixes the network (fixed_topology)",
                     [](const RunConfig& c) { return c.seed_genome_path; },
                     [](Draft& d, std::string_view v) { d.config.seed_genome_path = v; }});
        t.push_back({"simplify_hidden", "hidden nodes of the initial fully recurrent network (simplifying)",
                     [](const RunConfig& c) {
                         const auto* s = std::get_if<Simplifying>(&c.settings.mode);
                         return std::to_string(s ? s->initial_hidden : Simplifying{}.initial_hidden);
                     },
                     [](Draft& d, std::string_view v) {
                         d.simplify_hidden = parse_number<int>("simplify_hidden", v);
                     }});
        t.push_back(field<int>("generations", "number of generations",
                               [](RunSettings& s) -> int& { return s.generations; }));
        t.push_back({"seed", "master random seed (required)",
                     [](const RunConfig& c) { return std::to_string(c.settings.seed); },
                     [](Draft& d, std::string_view v) {
                         d.config.settings.seed = parse_number<std::uint64_t>("seed", v);
                         d.config.has_seed = true;
                     }});
        t.push_back({"output_dir", "archive directory written by evolve",
                     [](const RunConfig& c) { return c.output_dir.string(); },
                     [](Draft& d, std::string_view v) { d.config.output_dir = std::string(v); }});

        t.push_back(PARAM(int, "population_size", population_size, "genomes per population"));
        t.push_back(PARAM(double, "compat_excess", compatibility.excess, "distance coefficient for excess genes"));
        t.push_back(PARAM(double, "compat_disjoint", compatibility.disjoint, "distance coefficient for disjoint genes"));
        t.push_back(PARAM(double, "compat_weight", compatibility.weight_diff,
                          "distance coefficient for mean matching weight difference"));
        t.push_back(PARAM(bool, "compat_normalize", compatibility.normalize,
                          "divide gene counts by the larger genome size"));
        t.push_back(PARAM(double, "initial_threshold", initial_threshold, "initial compatibility threshold"));
        t.push_back(PARAM(double, "threshold_step", threshold_step, "threshold change per generation"));
        t.push_back(PARAM(double, "threshold_floor", threshold_floor, "lowest allowed threshold"));
        t.push_back(PARAM(int, "target_species", target_species, "species count the threshold steers toward"));
        t.push_back(PARAM(int, "stagnation_limit", stagnation_limit,
                          "age after which the weakest species stops reproducing"));
        t.push_back(PARAM(int, "elitism_min_size", elitism_min_size,
                          "species size from which the champion is copied unchanged"));
        t.push_back(PARAM(double, "weight_mutation_rate", weight_mutation_rate,
                          "probability an offspring's weights are mutated"));
        t.push_back(PARAM(double, "weight_perturb_prob", weight_perturb_prob,
                          "per-weight probability of perturbation instead of replacement"));
        t.push_back(PARAM(double, "initial_weight_range", initial_weight_range,
                          "initial and replacement weights are uniform in +-range"));
        t.push_back(PARAM(double, "weight_perturb_range", weight_perturb_range, "perturbations are uniform in +-range"));
        t.push_back(PARAM(double, "weight_cap", weight_cap, "absolute weight limit"));
        t.push_back(PARAM(double, "disable_inherit_prob", disable_inherit_prob,
                          "probability a gene disabled in either parent stays disabled"));
        t.push_back(PARAM(double, "weight_average_rate", weight_average_rate,
                          "probability a crossover averages matching weights"));
        t.push_back(PARAM(double, "mutation_only_rate", mutation_only_rate, "fraction of offspring without crossover"));
        t.push_back(PARAM(double, "interspecies_rate", interspecies_rate, "fraction of crossovers across species"));
        t.push_back(PARAM(double, "add_node_prob", add_node_prob, "add-node mutation probability"));
        t.push_back(PARAM(double, "add_link_prob", add_link_prob, "add-connection mutation probability"));
        t.push_back(PARAM(double, "remove_link_prob", remove_link_prob,
                          "remove-connection probability (simplifying mode)"));
        t.push_back(PARAM(double, "survival_fraction", survival_fraction, "fraction of each species allowed to breed"));
        t.push_back(PARAM(double, "sigmoid_slope", sigmoid_slope, "activation function slope"));
        t.push_back(PARAM(int, "parasite_species_champions", parasite_species_champions,
                          "species champions among each host's opponents"));
        t.push_back(PARAM(int, "parasite_hall_draws", parasite_hall_draws, "hall of fame opponents per host"));

        t.push_back(DUEL(int, "max_steps", max_steps, "steps before a duel times out"));
        t.push_back(DUEL(double, "initial_energy", initial_energy, "starting energy of each robot"));
        t.push_back(DUEL(double, "food_energy", food_energy, "energy gained per food item"));
        t.push_back(DUEL(double, "collision_radius", collision_radius, "center distance that ends the duel"));
        t.push_back(DUEL(double, "pickup_radius", pickup_radius, "center distance at which food is eaten"));
        t.push_back(DUEL(double, "sensor_range", sensor_range, "range of the food and robot sensors"));
        t.push_back(DUEL(double, "wall_range", wall_range, "range of the wall sensor"));
        t.push_back(DUEL(double, "turn_coefficient", turn_coefficient, "radians per unit of left-right difference"));
        t.push_back(DUEL(double, "forward_coefficient", forward_coefficient, "distance per unit forward output"));
        return t;
    }();
    return table;
}

#undef PARAM
#undef DUEL

void validate(const RunConfig& c) {
    const auto& p = c.settings.params;
    const auto& d = c.settings.duel;
    auto require = [](bool ok, const char* key, const char* message) {
        if (!ok) throw ConfigError(key, message);
    };
    require(c.settings.generations >= 1, "generations", "must be at least 1");
    require(p.population_size >= 1, "population_size", "must be at least 1");
    require(p.target_species >= 1, "target_species", "must be at least 1");
    require(p.threshold_floor > 0.0, "threshold_floor", "must be positive");
    require(p.initial_threshold > 0.0, "initial_threshold", "must be positive");
    require(p.parasite_species_champions >= 0, "parasite_species_champions", "must not be negative");
    require(p.parasite_hall_draws >= 0, "parasite_hall_draws", "must not be negative");
    require(p.parasite_species_champions + p.parasite_hall_draws >= 1, "parasite_hall_draws",
            "each host needs at least one opponent");
    for (const auto& [key, value] :
         {std::pair{"weight_mutation_rate", p.weight_mutation_rate}, {"weight_perturb_prob", p.weight_perturb_prob},
          {"disable_inherit_prob", p.disable_inherit_prob}, {"weight_average_rate", p.weight_average_rate},
          {"mutation_only_rate", p.mutation_only_rate}, {"interspecies_rate", p.interspecies_rate},
          {"add_node_prob", p.add_node_prob}, {"add_link_prob", p.add_link_prob},
          {"remove_link_prob", p.remove_link_prob}, {"survival_fraction", p.survival_fraction}})
        require(value >= 0.0 && value <= 1.0, key, "must be a probability in [0, 1]");
    require(p.add_node_prob + p.add_link_prob <= 1.0, "add_link_prob", "add_node_prob + add_link_prob exceeds 1");
    require(d.max_steps >= 1, "max_steps", "must be at least 1");
    require(d.initial_energy > 0.0, "initial_energy", "must be positive");
    require(d.sensor_range > 0.0, "sensor_range", "must be positive");
    require(d.wall_range > 0.0, "wall_range", "must be positive");
    if (const auto* f = std::get_if<FixedTopology>(&c.settings.mode); f && !f->seed)
        require(f->hidden_count >= 0, "fixed_hidden", "must not be negative");
    if (const auto* s = std::get_if<Simplifying>(&c.settings.mode))
        require(s->initial_hidden >= 0, "simplify_hidden", "must not be negative");
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

std::vector<ConfigKey> config_keys() {
    const RunConfig defaults;
    std::vector<ConfigKey> keys;
    for (const auto& e : entries()) keys.push_back({e.name, e.description, e.name == "seed" ? "" : e.get(defaults)});
    return keys;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    Draft draft;
    std::set<std::string, std::less<>> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(std::string(line), "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = std::ranges::find(entries(), key, &Entry::name);
        if (it == entries().end()) throw ConfigError(std::string(key), "unknown key");
        if (!seen.emplace(key).second) throw ConfigError(std::string(key), "key given more than once");
        it->set(draft, value);
    }
    if (!draft.config.has_seed) throw ConfigError("seed", "missing; every run needs an explicit seed");

    auto& config = draft.config;
    if (draft.mode == "fixed_topology") {
        FixedTopology fixed{draft.fixed_hidden, std::nullopt};
        if (!config.seed_genome_path.empty()) {
            std::filesystem::path path(config.seed_genome_path);
            if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
            try {
                fixed.seed = load_genome(path);
            } catch (const std::exception& e) {
                throw ConfigError("seed_genome", e.what());
            }
            if (fixed.seed->io() != kDuelIo) throw ConfigError("seed_genome", "genome does not use the duel IoSpec");
        }
        config.settings.mode = fixed;
    } else if (!config.seed_genome_path.empty()) {
        throw ConfigError("seed_genome", "only valid with mode = fixed_topology");
    } else if (draft.mode == "simplifying") {
        config.settings.mode = Simplifying{draft.simplify_hidden};
    } else if (draft.mode == "random_fitness") {
        config.settings.mode = RandomFitness{};
    } else {
        config.settings.mode = Complexifying{};
    }
    validate(config);
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.parent_path());
}

std::string serialize_run_config(const RunConfig& config, bool include_output_dir) {
    std::ostringstream out;
    for (const auto& e : entries()) {
        if (e.name == "output_dir" && !include_output_dir) continue;
        out << e.name << " = " << e.get(config) << '\n';
    }
    return out.str();
}

}  // namespace neatduel
