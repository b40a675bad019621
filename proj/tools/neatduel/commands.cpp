#include "neatduel/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "neatduel/archive.hpp"
#include "neatduel/coevolution.hpp"
#include "neatduel/config.hpp"
#include "neatduel/dominance.hpp"
#include "neatduel/duel.hpp"
#include "neatduel/genome_io.hpp"
#include "neatduel/report.hpp"

namespace neatduel::cli {

namespace fs = std::filesystem;

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const ArchiveError& e) {
        err << "error: archive: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

void print_generation(std::ostream& out, const GenerationRecord& r) {
    out << "gen " << r.generation << " best " << r.populations[0].best_fitness << '/' << r.populations[1].best_fitness
        << " species " << r.populations[0].species.size() << '/' << r.populations[1].species.size()
        << " threshold " << std::fixed << std::setprecision(2) << r.populations[0].threshold << '/'
        << r.populations[1].threshold << std::defaultfloat << " dominance " << r.dominance_level
        << (r.new_dominant ? " (new)" : "") << '\n';
}

}  // namespace

int cmd_evolve(const EvolveOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto config = load_run_config(options.config);
        const auto dir = options.output_dir.value_or(config.output_dir);
        ArchiveWriter writer(dir, config.settings, options.overwrite);
        RunHooks hooks;
        hooks.on_generation = [&](const RunArchive& a) {
            writer.write_latest(a);
            if (!options.quiet) print_generation(out, a.generations.back());
        };
        const auto archive = run_coevolution(config.settings, options.workers, hooks);
        out << "archive written to " << dir.string() << " (" << archive.generations.size() << " generations, "
            << archive.hierarchy.size() << " dominance levels)\n";
        return kExitOk;
    });
}

int cmd_duel(const DuelOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunSettings settings;
        if (options.config) settings = load_run_config(*options.config).settings;
        DuelConfig cfg = settings.duel;
        if (options.layout) {
            const auto layouts = evaluation_layouts();
            if (*options.layout < 0 || static_cast<std::size_t>(*options.layout) >= layouts.size())
                throw ConfigError("layout", "index must be in [0, " + std::to_string(layouts.size() - 1) + "]");
            cfg.food_layout = layouts[static_cast<std::size_t>(*options.layout)];
        }
        if (options.swap_sides) std::swap(cfg.start_poses[0], cfg.start_poses[1]);

        const auto a = load_genome(options.genome_a);
        const auto b = load_genome(options.genome_b);
        const auto outcome = run_duel(a, b, cfg, true, settings.params.sigmoid_slope);
        if (options.replay) {
            std::ofstream file(*options.replay, std::ios::binary | std::ios::trunc);
            if (!file) throw std::runtime_error("cannot write " + options.replay->string());
            file << encode_replay(outcome.replay);
        }
        const auto& last = outcome.replay.back();
        out << "winner " << winner_name(outcome.winner) << " reason " << reason_name(outcome.reason) << " steps "
            << outcome.steps << " energy_a " << format_double(last.energy[0]) << " energy_b "
            << format_double(last.energy[1]) << '\n';
        switch (outcome.winner) {
            case Winner::robot_a: return kExitOk;
            case Winner::robot_b: return kExitRobotBWins;
            case Winner::draw: return kExitDraw;
        }
        return kExitDraw;
    });
}

int cmd_tournament(const TournamentOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto archive = read_archive(options.archive);
        DuelComparator comparator(archive.settings.duel, options.workers, archive.settings.params.sigmoid_slope);
        const auto fn = comparator.as_function();
        DominanceHierarchy hierarchy;
        for (const auto& entry : archive.hall.entries()) update_dominance(hierarchy, entry.genome, entry.generation, fn);

        const auto path = options.output.value_or(options.archive / "tournament.csv");
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + path.string());
        file << dominance_table(hierarchy);

        out << dominance_table(hierarchy);
        out << "levels " << hierarchy.size() << " comparisons " << comparator.comparisons() << " generations "
            << archive.generations.size() << '\n';
        out << "matches archive " << (hierarchy == archive.hierarchy ? "yes" : "no") << '\n';
        return kExitOk;
    });
}

int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (options.archives.empty()) throw ConfigError("archive", "at least one archive is required");
        const auto champion = load_genome(options.champion);
        std::vector<double> scores;
        out << "archive,levels,score\n";
        for (const auto& dir : options.archives) {
            const auto archive = read_archive(dir);
            if (archive.hierarchy.empty()) throw ArchiveError(dir.string() + ": empty dominance hierarchy");
            DuelComparator comparator(archive.settings.duel, options.workers, archive.settings.params.sigmoid_slope);
            const double score = performance_score(champion, archive.hierarchy, comparator.as_function());
            scores.push_back(score);
            out << dir.string() << ',' << archive.hierarchy.size() << ',' << std::fixed << std::setprecision(4)
                << score << std::defaultfloat << '\n';
        }
        const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
        out << "mean,," << std::fixed << std::setprecision(4) << mean << std::defaultfloat << '\n';
        return kExitOk;
    });
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto archive = read_archive(options.archive);
        write_report(archive, options.out_dir);
        out << "report written to " << options.out_dir.string() << '\n';
        return kExitOk;
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Competitive coevolution of NEAT robot duel controllers"};
    app.require_subcommand(1);

    EvolveOptions evolve;
    auto* evolve_cmd = app.add_subcommand("evolve", "run a coevolution experiment from a config file");
    evolve_cmd->add_option("config", evolve.config, "run config (key = value)")->required();
    evolve_cmd->add_option("-o,--output", evolve.output_dir, "archive directory (overrides output_dir)");
    evolve_cmd->add_option("-w,--workers", evolve.workers, "game evaluation threads")->check(CLI::PositiveNumber);
    evolve_cmd->add_flag("-f,--force", evolve.overwrite, "replace an existing archive directory");
    evolve_cmd->add_flag("-q,--quiet", evolve.quiet, "suppress per-generation lines");

    DuelOptions duel;
    auto* duel_cmd = app.add_subcommand("duel", "play one duel and optionally write a replay");
    duel_cmd->add_option("genome_a", duel.genome_a, "robot a genome")->required();
    duel_cmd->add_option("genome_b", duel.genome_b, "robot b genome")->required();
    duel_cmd->add_option("-c,--config", duel.config, "run config supplying duel settings");
    duel_cmd->add_option("-l,--layout", duel.layout, "evaluation food layout index (0-143)");
    duel_cmd->add_flag("-s,--swap", duel.swap_sides, "robot a starts east");
    duel_cmd->add_option("-r,--replay", duel.replay, "replay output file");

    TournamentOptions tournament;
    auto* tournament_cmd = app.add_subcommand("tournament", "recompute the dominance hierarchy of an archive");
    tournament_cmd->add_option("archive", tournament.archive, "archive directory")->required();
    tournament_cmd->add_option("-o,--output", tournament.output, "table output (default <archive>/tournament.csv)");
    tournament_cmd->add_option("-w,--workers", tournament.workers, "game threads")->check(CLI::PositiveNumber);

    CompareOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "score a champion against archived dominance hierarchies");
    compare_cmd->add_option("champion", compare.champion, "champion genome")->required();
    compare_cmd->add_option("archives", compare.archives, "archive directories")->required();
    compare_cmd->add_option("-w,--workers", compare.workers, "game threads")->check(CLI::PositiveNumber);

    ReportOptions report;
    auto* report_cmd = app.add_subcommand("report", "write CSV tables and SVG charts for an archive");
    report_cmd->add_option("archive", report.archive, "archive directory")->required();
    report_cmd->add_option("out_dir", report.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (evolve_cmd->parsed()) return cmd_evolve(evolve, out, err);
    if (duel_cmd->parsed()) return cmd_duel(duel, out, err);
    if (tournament_cmd->parsed()) return cmd_tournament(tournament, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare, out, err);
    return cmd_report(report, out, err);
}

}  // namespace neatduel::cli
