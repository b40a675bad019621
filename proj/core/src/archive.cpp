#include "neatduel/archive.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "neatduel/genome_io.hpp"

namespace neatduel {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArchiveError("cannot write " + path.string());
    out << text;
    if (!out) throw ArchiveError("write failed for " + path.string());
}

void append_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw ArchiveError("cannot write " + path.string());
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArchiveError("missing archive file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) lines.push_back(line);
    return lines;
}

template <class T>
T number(const std::string& text, const fs::path& file, const std::string& what) {
    T out{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ArchiveError(file.string() + ": bad value for " + what + ": '" + text + "'");
    return out;
}

std::string species_csv(const GenerationRecord& record) {
    std::ostringstream out;
    out << "population,id,size,age,best_raw_fitness,adjusted_fitness_sum,offspring\n";
    for (std::size_t p = 0; p < 2; ++p) {
        for (const auto& s : record.populations[p].species) {
            out << p << ',' << s.id << ',' << s.size << ',' << s.age << ',' << format_double(s.best_raw_fitness)
                << ',' << format_double(s.adjusted_fitness_sum) << ',' << s.offspring << '\n';
        }
    }
    return out.str();
}

std::string generation_text(const GenerationRecord& record) {
    std::ostringstream out;
    out << kGenerationMagic << '\n';
    out << "generation " << record.generation << '\n';
    for (std::size_t p = 0; p < 2; ++p) {
        const auto& s = record.populations[p];
        out << "population " << p << " threshold " << format_double(s.threshold) << " best_fitness "
            << format_double(s.best_fitness) << " champion_index " << s.champion_index << " min_connections "
            << s.min_connections << " max_connections " << s.max_connections << " min_hidden " << s.min_hidden
            << " max_hidden " << s.max_hidden << '\n';
    }
    out << "champion_population " << record.champion_population << '\n';
    out << "champion_result " << record.champion_result.wins_a << ' ' << record.champion_result.wins_b << ' '
        << record.champion_result.draws << '\n';
    out << "new_dominant " << (record.new_dominant ? 1 : 0) << '\n';
    out << "dominance_level " << record.dominance_level << '\n';
    return out.str();
}

void parse_generation_text(const fs::path& file, GenerationRecord& record) {
    const auto lines = lines_of(read_text(file));
    if (lines.empty() || lines.front() != kGenerationMagic) throw ArchiveError(file.string() + ": bad magic line");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ' ');
        const auto& key = f.front();
        auto need = [&](std::size_t n) {
            if (f.size() != n) throw ArchiveError(file.string() + ": malformed line '" + lines[i] + "'");
        };
        if (key == "generation") {
            need(2);
            if (number<int>(f[1], file, key) != record.generation)
                throw ArchiveError(file.string() + ": generation index mismatch");
        } else if (key == "population") {
            need(16);
            auto& s = record.populations.at(number<std::size_t>(f[1], file, key));
            s.threshold = number<double>(f[3], file, f[2]);
            s.best_fitness = number<double>(f[5], file, f[4]);
            s.champion_index = number<std::size_t>(f[7], file, f[6]);
            s.min_connections = number<std::size_t>(f[9], file, f[8]);
            s.max_connections = number<std::size_t>(f[11], file, f[10]);
            s.min_hidden = number<std::size_t>(f[13], file, f[12]);
            s.max_hidden = number<std::size_t>(f[15], file, f[14]);
        } else if (key == "champion_population") {
            need(2);
            record.champion_population = number<int>(f[1], file, key);
        } else if (key == "champion_result") {
            need(4);
            record.champion_result = {number<int>(f[1], file, key), number<int>(f[2], file, key),
                                      number<int>(f[3], file, key)};
        } else if (key == "new_dominant") {
            need(2);
            record.new_dominant = number<int>(f[1], file, key) != 0;
        } else if (key == "dominance_level") {
            need(2);
            record.dominance_level = number<std::size_t>(f[1], file, key);
        } else {
            throw ArchiveError(file.string() + ": unknown record '" + key + "'");
        }
    }
}

void parse_species_csv(const fs::path& file, GenerationRecord& record) {
    const auto lines = lines_of(read_text(file));
    if (lines.empty()) throw ArchiveError(file.string() + ": missing header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        if (f.size() != 7) throw ArchiveError(file.string() + ": malformed row " + std::to_string(i + 1));
        SpeciesStats s{number<int>(f[1], file, "id"),
                       number<std::size_t>(f[2], file, "size"),
                       number<int>(f[3], file, "age"),
                       number<double>(f[4], file, "best_raw_fitness"),
                       number<double>(f[5], file, "adjusted_fitness_sum"),
                       number<std::size_t>(f[6], file, "offspring")};
        record.populations.at(number<std::size_t>(f[0], file, "population")).species.push_back(s);
    }
}

}  // namespace

fs::path generation_dir(const fs::path& root, int generation) {
    char name[32];
    std::snprintf(name, sizeof name, "gen_%04d", generation);
    return root / name;
}

std::string stats_csv_header() {
    return "generation,dominance_level,champion_population,champion_hidden,champion_connections,"
           "pop_min_connections,pop_max_connections,threshold_a,species_a,best_fitness_a,"
           "threshold_b,species_b,best_fitness_b";
}

std::string stats_csv_row(const GenerationRecord& r) {
    const auto& a = r.populations[0];
    const auto& b = r.populations[1];
    std::ostringstream out;
    out << r.generation << ',' << r.dominance_level << ',' << r.champion_population << ','
        << r.champion.hidden_count() << ',' << r.champion.connections().size() << ','
        << std::min(a.min_connections, b.min_connections) << ',' << std::max(a.max_connections, b.max_connections)
        << ',' << format_double(a.threshold) << ',' << a.species.size() << ',' << format_double(a.best_fitness)
        << ',' << format_double(b.threshold) << ',' << b.species.size() << ',' << format_double(b.best_fitness);
    return out.str();
}

std::string encode_dominance(const DominanceHierarchy& hierarchy) {
    std::ostringstream out;
    out << kDominanceMagic << '\n';
    for (std::size_t j = 0; j < hierarchy.size(); ++j)
        out << "level " << j + 1 << " generation " << hierarchy.levels[j].generation << '\n';
    for (std::size_t j = 0; j < hierarchy.size(); ++j) {
        const auto& versus = hierarchy.levels[j].versus_prior;
        for (std::size_t i = 0; i < versus.size(); ++i)
            out << "result " << j + 1 << ' ' << i + 1 << ' ' << versus[i].wins_a << ' ' << versus[i].wins_b << ' '
                << versus[i].draws << '\n';
    }
    return out.str();
}

ArchiveWriter::ArchiveWriter(fs::path dir, const RunSettings& settings, bool overwrite) : dir_(std::move(dir)) {
    if (fs::exists(dir_)) {
        if (!fs::is_directory(dir_)) throw ArchiveError(dir_.string() + " exists and is not a directory");
        if (!fs::is_empty(dir_)) {
            if (!overwrite) throw ArchiveError(dir_.string() + " is not empty");
            for (const auto& entry : fs::directory_iterator(dir_)) fs::remove_all(entry.path());
        }
    }
    fs::create_directories(dir_);

    RunConfig config;
    config.settings = settings;
    config.has_seed = true;
    if (const auto* fixed = std::get_if<FixedTopology>(&settings.mode); fixed && fixed->seed) {
        save_genome(dir_ / "seed.genome", *fixed->seed);
        config.seed_genome_path = "seed.genome";
    }
    write_text(dir_ / "run.meta", std::string(kRunMetaMagic) + '\n' + serialize_run_config(config, false));
    write_text(dir_ / "stats.csv", stats_csv_header() + '\n');
    write_text(dir_ / "dominance.txt", encode_dominance({}));
}

void ArchiveWriter::write_latest(const RunArchive& archive) {
    if (archive.generations.empty()) return;
    const auto& record = archive.generations.back();
    const auto gen_dir = generation_dir(dir_, record.generation);
    fs::create_directories(gen_dir);
    save_genome(gen_dir / "host_champion.genome", record.populations[0].champion);
    save_genome(gen_dir / "parasite_champion.genome", record.populations[1].champion);
    save_genome(gen_dir / "generation_champion.genome", record.champion);
    write_text(gen_dir / "species.csv", species_csv(record));
    write_text(gen_dir / "generation.txt", generation_text(record));
    append_text(dir_ / "stats.csv", stats_csv_row(record) + '\n');
    write_text(dir_ / "dominance.txt", encode_dominance(archive.hierarchy));
}

void write_archive(const fs::path& dir, const RunArchive& archive, bool overwrite) {
    ArchiveWriter writer(dir, archive.settings, overwrite);
    RunArchive partial;
    partial.settings = archive.settings;
    for (const auto& record : archive.generations) {
        partial.generations.push_back(record);
        partial.hierarchy.levels.clear();
        for (const auto& level : archive.hierarchy.levels)
            if (level.generation <= record.generation) partial.hierarchy.levels.push_back(level);
        writer.write_latest(partial);
    }
}

RunArchive read_archive(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ArchiveError(dir.string() + " is not an archive directory");
    const auto meta = read_text(dir / "run.meta");
    const auto newline = meta.find('\n');
    if (meta.substr(0, newline) != kRunMetaMagic) throw ArchiveError((dir / "run.meta").string() + ": bad magic line");
    RunArchive archive;
    try {
        archive.settings = parse_run_config(meta.substr(newline == std::string::npos ? meta.size() : newline + 1), dir)
                               .settings;
    } catch (const ConfigError& e) {
        throw ArchiveError((dir / "run.meta").string() + ": " + e.what());
    }

    const auto stats_lines = lines_of(read_text(dir / "stats.csv"));
    if (stats_lines.empty() || stats_lines.front() != stats_csv_header())
        throw ArchiveError((dir / "stats.csv").string() + ": unexpected header");
    const auto generations = static_cast<int>(stats_lines.size() - 1);

    for (int g = 0; g < generations; ++g) {
        const auto gen_dir = generation_dir(dir, g);
        if (!fs::is_directory(gen_dir)) throw ArchiveError("missing " + gen_dir.string());
        GenerationRecord record;
        record.generation = g;
        parse_generation_text(gen_dir / "generation.txt", record);
        parse_species_csv(gen_dir / "species.csv", record);
        record.populations[0].champion = load_genome(gen_dir / "host_champion.genome");
        record.populations[1].champion = load_genome(gen_dir / "parasite_champion.genome");
        record.champion = load_genome(gen_dir / "generation_champion.genome");
        if (stats_csv_row(record) != stats_lines[static_cast<std::size_t>(g) + 1])
            throw ArchiveError((dir / "stats.csv").string() + ": row " + std::to_string(g) +
                               " disagrees with " + gen_dir.string());
        archive.hall.append(g, record.champion);
        archive.generations.push_back(std::move(record));
    }
    if (fs::exists(generation_dir(dir, generations)))
        throw ArchiveError("stats.csv is missing rows for existing generation directories");

    const auto dominance_file = dir / "dominance.txt";
    const auto lines = lines_of(read_text(dominance_file));
    if (lines.empty() || lines.front() != kDominanceMagic) throw ArchiveError(dominance_file.string() + ": bad magic");
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto f = split(lines[k], ' ');
        if (f.size() == 4 && f[0] == "level" && f[2] == "generation") {
            const auto level = number<std::size_t>(f[1], dominance_file, "level");
            const auto gen = number<int>(f[3], dominance_file, "generation");
            if (level != archive.hierarchy.size() + 1 || gen < 0 || gen >= generations)
                throw ArchiveError(dominance_file.string() + ": inconsistent level line '" + lines[k] + "'");
            const auto& record = archive.generations[static_cast<std::size_t>(gen)];
            archive.hierarchy.levels.push_back({gen, record.champion, {}});
        } else if (f.size() == 6 && f[0] == "result") {
            const auto j = number<std::size_t>(f[1], dominance_file, "level");
            const auto i = number<std::size_t>(f[2], dominance_file, "level");
            if (j < 1 || j > archive.hierarchy.size() || i != archive.hierarchy.levels[j - 1].versus_prior.size() + 1 ||
                i >= j)
                throw ArchiveError(dominance_file.string() + ": inconsistent result line '" + lines[k] + "'");
            archive.hierarchy.levels[j - 1].versus_prior.push_back({number<int>(f[3], dominance_file, "wins"),
                                                                    number<int>(f[4], dominance_file, "wins"),
                                                                    number<int>(f[5], dominance_file, "draws")});
        } else {
            throw ArchiveError(dominance_file.string() + ": unknown line '" + lines[k] + "'");
        }
    }
    for (std::size_t j = 0; j < archive.hierarchy.size(); ++j)
        if (archive.hierarchy.levels[j].versus_prior.size() != j)
            throw ArchiveError(dominance_file.string() + ": missing comparisons for level " + std::to_string(j + 1));
    return archive;
}

}  // namespace neatduel
