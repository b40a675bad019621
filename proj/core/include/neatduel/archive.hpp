#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "neatduel/coevolution.hpp"
#include "neatduel/config.hpp"

namespace neatduel {

class ArchiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kRunMetaMagic = "#neatduel-run v1";
inline constexpr std::string_view kGenerationMagic = "#neatduel-generation v1";
inline constexpr std::string_view kDominanceMagic = "#neatduel-dominance v1";

// Column names of stats.csv, in order.
std::string stats_csv_header();
std::string stats_csv_row(const GenerationRecord& record);

// Archive layout:
//   run.meta            settings (config keys) and mode
//   seed.genome         fixed-topology seed, when one was used
//   stats.csv           one row per generation
//   dominance.txt       hierarchy levels and their stored comparisons
//   gen_NNNN/           champions, species.csv, generation.txt
class ArchiveWriter {
public:
    // Creates `dir`. An existing non-empty directory is an error unless
    // `overwrite` is set, in which case it is emptied first.
    ArchiveWriter(std::filesystem::path dir, const RunSettings& settings, bool overwrite = false);

    // Writes the newest generation of `archive` and refreshes dominance.txt.
    void write_latest(const RunArchive& archive);

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

void write_archive(const std::filesystem::path& dir, const RunArchive& archive, bool overwrite = false);

// Throws ArchiveError (or ParseError for malformed genomes) on a corrupt or
// incomplete archive.
RunArchive read_archive(const std::filesystem::path& dir);

// Text of dominance.txt for a hierarchy.
std::string encode_dominance(const DominanceHierarchy& hierarchy);

std::filesystem::path generation_dir(const std::filesystem::path& root, int generation);

}  // namespace neatduel
