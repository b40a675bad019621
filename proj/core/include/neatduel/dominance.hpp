#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "neatduel/duel.hpp"
#include "neatduel/genome.hpp"

namespace neatduel {

inline constexpr int kComparisonGames = 288;

struct ComparisonResult {
    int wins_a = 0;
    int wins_b = 0;
    int draws = 0;

    // Robot::a when a won strictly more games, Robot::b likewise, else unset.
    std::optional<Robot> superior() const;
    ComparisonResult swapped() const { return {wins_b, wins_a, draws}; }
    int total() const { return wins_a + wins_b + draws; }
    bool operator==(const ComparisonResult&) const = default;
};

using Comparator = std::function<ComparisonResult(const Genome&, const Genome&)>;

// Plays every evaluation layout twice, once with `a` starting west and once
// with `a` starting east. Timeouts are draws.
ComparisonResult compare(const Genome& a, const Genome& b, const DuelConfig& base = DuelConfig::standard(),
                         unsigned workers = 1, double sigmoid_slope = 4.9);

// Comparator over compare() that counts how many comparisons it ran.
class DuelComparator {
public:
    explicit DuelComparator(DuelConfig base = DuelConfig::standard(), unsigned workers = 1,
                            double sigmoid_slope = 4.9);

    ComparisonResult operator()(const Genome& a, const Genome& b) const;
    std::size_t comparisons() const { return counter_->load(); }
    Comparator as_function() const;

private:
    DuelConfig base_;
    unsigned workers_;
    double slope_;
    std::shared_ptr<std::atomic<std::size_t>> counter_;
};

struct DominantStrategy {
    int generation = 0;
    Genome genome;
    // versus_prior[i] is this strategy (as a) against level i (as b).
    std::vector<ComparisonResult> versus_prior;
    bool operator==(const DominantStrategy&) const = default;
};

struct DominanceHierarchy {
    std::vector<DominantStrategy> levels;  // levels[0] is d_1
    std::size_t size() const { return levels.size(); }
    bool empty() const { return levels.empty(); }
    bool operator==(const DominanceHierarchy&) const = default;
};

// The first candidate is accepted unconditionally. Later candidates play the
// existing levels from the highest down and stop at the first comparison
// they do not win; a candidate that wins every comparison is appended.
// Returns true when the candidate was accepted.
bool update_dominance(DominanceHierarchy& hierarchy, const Genome& candidate, int generation,
                      const Comparator& comparator);

// Plays d_1, d_2, ... until the first comparison the champion does not win;
// returns the number of consecutive wins divided by the hierarchy size.
// Throws std::invalid_argument for an empty hierarchy.
double performance_score(const Genome& champion, const DominanceHierarchy& hierarchy,
                         const Comparator& comparator);

struct GapMargin {
    int gap = 0;
    double mean_margin = 0.0;
    bool operator==(const GapMargin&) const = default;
};

// Mean (wins_higher - wins_lower) over the stored comparisons at each level
// gap, for gaps 1 .. size-1. Gaps with no stored comparison are skipped.
std::vector<GapMargin> dominance_gap_curve(const DominanceHierarchy& hierarchy);

}  // namespace neatduel
