#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace neatduel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
// duel only
inline constexpr int kExitRobotBWins = 3;
inline constexpr int kExitDraw = 4;

struct EvolveOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> output_dir;  // overrides output_dir in the config
    unsigned workers = 1;
    bool overwrite = false;
    bool quiet = false;
};

struct DuelOptions {
    std::filesystem::path genome_a;
    std::filesystem::path genome_b;
    std::optional<std::filesystem::path> config;
    std::optional<int> layout;  // evaluation layout index; standard layout when unset
    bool swap_sides = false;    // robot a starts east
    std::optional<std::filesystem::path> replay;
};

struct TournamentOptions {
    std::filesystem::path archive;
    std::optional<std::filesystem::path> output;  // defaults to <archive>/tournament.csv
    unsigned workers = 1;
};

struct CompareOptions {
    std::filesystem::path champion;
    std::vector<std::filesystem::path> archives;
    unsigned workers = 1;
};

struct ReportOptions {
    std::filesystem::path archive;
    std::filesystem::path out_dir;
};

int cmd_evolve(const EvolveOptions& options, std::ostream& out, std::ostream& err);
int cmd_duel(const DuelOptions& options, std::ostream& out, std::ostream& err);
int cmd_tournament(const TournamentOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace neatduel::cli
