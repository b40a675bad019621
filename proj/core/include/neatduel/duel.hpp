#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neatduel/genome.hpp"

namespace neatduel {

inline constexpr double kBoardSize = 600.0;
inline constexpr double kBoardHalf = kBoardSize / 2.0;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

// Unit heading vector for an angle; components within 1e-15 of zero are
// snapped to zero so the cardinal headings are exact.
Vec2 direction_from_heading(double radians);

struct Pose {
    Vec2 position;   // board coordinates
    Vec2 direction;  // unit heading vector
    double heading() const;
    bool operator==(const Pose&) const = default;
};

struct DuelConfig {
    std::vector<Vec2> food_layout;
    std::array<Pose, 2> start_poses;  // robot_a, robot_b
    int max_steps = 750;
    double initial_energy = 2000.0;
    double food_energy = 500.0;
    double collision_radius = 20.0;
    double pickup_radius = 20.0;
    double sensor_range = 300.0;
    double wall_range = 100.0;
    double turn_coefficient = 0.24;
    double forward_coefficient = 1.33;

    // Standard training layout, west/east start poses facing away.
    static DuelConfig standard();
    bool operator==(const DuelConfig&) const = default;
};

// 3x3 grid symmetric about the board center.
std::vector<Vec2> standard_food_layout();
// West-half extra food slots; the east slots are their mirror images.
std::vector<Vec2> west_extra_slots();
std::vector<Vec2> east_extra_slots();
// 144 layouts: the 9 standard items plus one west slot and one east slot,
// ordered west-slot major.
std::vector<std::vector<Vec2>> evaluation_layouts();
std::vector<DuelConfig> evaluation_configs(const DuelConfig& base = DuelConfig::standard());

// Reflection through the board center: (x, y, heading) -> (600-x, 600-y,
// heading+pi). Robots keep their handedness, so a robot's view of a
// reflected world is identical to its view of the original.
DuelConfig point_reflected(const DuelConfig& cfg);

enum class Robot : std::uint8_t { a = 0, b = 1 };
enum class Winner : std::uint8_t { robot_a, robot_b, draw };
enum class EndReason : std::uint8_t { collision, timeout };

std::string_view winner_name(Winner winner);
std::string_view reason_name(EndReason reason);

struct RobotState {
    Vec2 offset;     // position relative to the board center
    Vec2 direction;  // unit heading vector
    double energy = 0.0;

    Vec2 position() const { return {kBoardHalf + offset.x, kBoardHalf + offset.y}; }
    double heading() const;
    bool operator==(const RobotState&) const = default;
};

struct FoodItem {
    Vec2 offset;  // relative to the board center
    bool consumed = false;
    bool operator==(const FoodItem&) const = default;
};

struct ReplayRow {
    int step = 0;
    std::array<Vec2, 2> position;
    std::array<double, 2> heading{};
    std::array<double, 2> energy{};
    std::uint64_t food_mask = 0;  // bit i set while food item i remains
    bool operator==(const ReplayRow&) const = default;
};

struct DuelOutcome {
    Winner winner = Winner::draw;
    EndReason reason = EndReason::timeout;
    int steps = 0;
    std::vector<ReplayRow> replay;
    bool operator==(const DuelOutcome&) const = default;
};

struct WorldState {
    std::array<RobotState, 2> robots;
    std::vector<FoodItem> food;
    int step = 0;
    std::optional<DuelOutcome> outcome;

    std::uint64_t food_mask() const;
    std::size_t remaining_food() const;
    bool operator==(const WorldState&) const = default;
};

struct SensorFrame {
    std::array<double, 5> food{};   // sector 0 is rightmost, 2 dead ahead, 4 leftmost
    std::array<double, 5> robot{};
    double wall = 0.0;
    double energy_diff = 0.0;

    std::array<double, 12> inputs() const;
};

struct MotorOutputs {
    double left = 0.5;
    double right = 0.5;
    double forward = 0.0;
};

struct Motion {
    double turn = 0.0;     // signed radians, positive = counterclockwise
    double forward = 0.0;  // board units
    double cost() const;
};

// turn = turn_coefficient * (left - right), forward = forward_coefficient * f.
Motion motion_from_outputs(const MotorOutputs& outputs, const DuelConfig& cfg);

WorldState init_duel(const DuelConfig& cfg);
SensorFrame sense(const WorldState& world, const DuelConfig& cfg, Robot which);

// One world tick: both robots move from the same prior state (half turn,
// forward, half turn, clamped to the board), pay |turn| + forward energy,
// then food is picked up, then a collision is resolved, then the step
// counter advances; reaching max_steps without collision is a timeout draw.
// Throws std::logic_error when the duel is already over.
void advance(WorldState& world, const DuelConfig& cfg, const MotorOutputs& a, const MotorOutputs& b);
WorldState step(const WorldState& world, const DuelConfig& cfg, const MotorOutputs& a, const MotorOutputs& b);

ReplayRow snapshot(const WorldState& world);

// Robot a starts at cfg.start_poses[0]. Networks are fresh for every duel.
// Throws std::invalid_argument unless both genomes use the duel IoSpec.
DuelOutcome run_duel(const Genome& genome_a, const Genome& genome_b, const DuelConfig& cfg, bool record = false,
                     double sigmoid_slope = 4.9);

// Replay text: a magic/header line then one whitespace-separated line per
// step: step x_a y_a heading_a energy_a x_b y_b heading_b energy_b food_mask
inline constexpr std::string_view kReplayHeader =
    "#duel-replay-v1 step x_a y_a heading_a energy_a x_b y_b heading_b energy_b food_mask";
std::string encode_replay(std::span<const ReplayRow> rows);
std::vector<ReplayRow> decode_replay(std::string_view text);

}  // namespace neatduel
