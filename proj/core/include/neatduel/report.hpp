#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "neatduel/coevolution.hpp"
#include "neatduel/dominance.hpp"

namespace neatduel {

struct ComplexityPoint {
    int generation = 0;
    std::size_t dominant_hidden = 0;
    std::size_t dominant_connections = 0;
    std::size_t population_min_connections = 0;
    std::size_t population_max_connections = 0;
    bool operator==(const ComplexityPoint&) const = default;
};

// One row per generation in which a new dominant strategy arose.
std::vector<ComplexityPoint> complexity_series(const RunArchive& archive);

std::string complexity_csv(const std::vector<ComplexityPoint>& series);
std::string stats_csv(const RunArchive& archive);
// level,generation,hidden,connections,versus ("i:wins-losses-draws" per prior level)
std::string dominance_table(const DominanceHierarchy& hierarchy);
std::string gap_curve_csv(const std::vector<GapMargin>& curve);

// Champion and population connection counts per generation, dominant
// strategies marked.
std::string complexity_svg(const RunArchive& archive);
// Dominance level per generation with a tick at every transition.
std::string dominance_svg(const RunArchive& archive);

// Writes stats.csv, complexity.csv, dominance.csv, dominance_gaps.csv,
// complexity.svg and dominance.svg into `out_dir`.
void write_report(const RunArchive& archive, const std::filesystem::path& out_dir);

}  // namespace neatduel
