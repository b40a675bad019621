#include "neatduel/dominance.hpp"

#include <map>
#include <stdexcept>

#include "neatduel/parallel.hpp"

namespace neatduel {

std::optional<Robot> ComparisonResult::superior() const {
    if (wins_a > wins_b) return Robot::a;
    if (wins_b > wins_a) return Robot::b;
    return std::nullopt;
}

ComparisonResult compare(const Genome& a, const Genome& b, const DuelConfig& base, unsigned workers,
                         double sigmoid_slope) {
    const auto configs = evaluation_configs(base);
    std::vector<Winner> results(configs.size() * 2, Winner::draw);
    parallel_for(results.size(), workers, [&](std::size_t i) {
        const auto& cfg = configs[i / 2];
        // Even games: a takes the first start pose; odd games: b does.
        if (i % 2 == 0) {
            results[i] = run_duel(a, b, cfg, false, sigmoid_slope).winner;
        } else {
            const auto w = run_duel(b, a, cfg, false, sigmoid_slope).winner;
            results[i] = w == Winner::robot_a ? Winner::robot_b : (w == Winner::robot_b ? Winner::robot_a : w);
        }
    });
    ComparisonResult tally;
    for (const auto w : results) {
        if (w == Winner::robot_a) ++tally.wins_a;
        else if (w == Winner::robot_b) ++tally.wins_b;
        else ++tally.draws;
    }
    return tally;
}

DuelComparator::DuelComparator(DuelConfig base, unsigned workers, double sigmoid_slope)
    : base_(std::move(base)), workers_(workers), slope_(sigmoid_slope),
      counter_(std::make_shared<std::atomic<std::size_t>>(0)) {}

ComparisonResult DuelComparator::operator()(const Genome& a, const Genome& b) const {
    ++*counter_;
    return compare(a, b, base_, workers_, slope_);
}

Comparator DuelComparator::as_function() const {
    return [self = *this](const Genome& a, const Genome& b) { return self(a, b); };
}

bool update_dominance(DominanceHierarchy& hierarchy, const Genome& candidate, int generation,
                      const Comparator& comparator) {
    if (!hierarchy.empty() && generation <= hierarchy.levels.back().generation)
        throw std::invalid_argument("dominance generations must strictly increase");
    const auto n = hierarchy.size();
    std::vector<ComparisonResult> versus(n);
    for (std::size_t k = n; k-- > 0;) {
        versus[k] = comparator(candidate, hierarchy.levels[k].genome);
        if (versus[k].superior() != Robot::a) return false;
    }
    hierarchy.levels.push_back({generation, candidate, std::move(versus)});
    return true;
}

double performance_score(const Genome& champion, const DominanceHierarchy& hierarchy,
                         const Comparator& comparator) {
    if (hierarchy.empty()) throw std::invalid_argument("performance score needs a nonempty hierarchy");
    std::size_t wins = 0;
    for (const auto& level : hierarchy.levels) {
        if (comparator(champion, level.genome).superior() != Robot::a) break;
        ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(hierarchy.size());
}

std::vector<GapMargin> dominance_gap_curve(const DominanceHierarchy& hierarchy) {
    std::map<int, std::pair<double, int>> sums;
    for (std::size_t j = 0; j < hierarchy.size(); ++j) {
        const auto& versus = hierarchy.levels[j].versus_prior;
        for (std::size_t i = 0; i < versus.size() && i < j; ++i) {
            auto& [sum, count] = sums[static_cast<int>(j - i)];
            sum += versus[i].wins_a - versus[i].wins_b;
            ++count;
        }
    }
    std::vector<GapMargin> curve;
    for (const auto& [gap, entry] : sums) curve.push_back({gap, entry.first / entry.second});
    return curve;
}

}  // namespace neatduel
