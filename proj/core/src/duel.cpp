#include "neatduel/duel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "neatduel/genome_io.hpp"
#include "neatduel/network.hpp"

namespace neatduel {

namespace {

constexpr double kSectorWidth = std::numbers::pi / 5.0;

Vec2 rotated(const Vec2& v, double cos_a, double sin_a) {
    return {v.x * cos_a - v.y * sin_a, v.x * sin_a + v.y * cos_a};
}

Vec2 normalized(const Vec2& v) {
    const double n = std::hypot(v.x, v.y);
    return {v.x / n, v.y / n};
}

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 to_offset(const Vec2& board) { return {board.x - kBoardHalf, board.y - kBoardHalf}; }

// Value of the ring sensor that sees `target`, or nothing when it is out of
// range or behind the robot.
struct RingHit {
    std::size_t sector;
    double value;
};

std::optional<RingHit> ring_hit(const RobotState& self, const Vec2& target, double range) {
    const Vec2 rel{target.x - self.offset.x, target.y - self.offset.y};
    const double d = std::hypot(rel.x, rel.y);
    if (d >= range) return std::nullopt;
    const double ahead = rel.x * self.direction.x + rel.y * self.direction.y;
    const double leftward = self.direction.x * rel.y - self.direction.y * rel.x;
    const double angle = std::atan2(leftward, ahead);
    if (std::abs(angle) > std::numbers::pi / 2.0) return std::nullopt;
    const auto sector = std::min<std::size_t>(4, static_cast<std::size_t>((angle + std::numbers::pi / 2.0) / kSectorWidth));
    return RingHit{sector, 1.0 - d / range};
}

}  // namespace

Vec2 direction_from_heading(double radians) {
    Vec2 v{std::cos(radians), std::sin(radians)};
    if (std::abs(v.x) < 1e-15) v.x = 0.0;
    if (std::abs(v.y) < 1e-15) v.y = 0.0;
    return v;
}

double Pose::heading() const { return std::atan2(direction.y, direction.x); }

double RobotState::heading() const { return std::atan2(direction.y, direction.x); }

std::vector<Vec2> standard_food_layout() {
    std::vector<Vec2> layout;
    for (const double y : {150.0, 300.0, 450.0})
        for (const double x : {100.0, 300.0, 500.0}) layout.push_back({x, y});
    return layout;
}

std::vector<Vec2> west_extra_slots() {
    std::vector<Vec2> slots;
    for (const double y : {120.0, 240.0, 360.0, 480.0})
        for (const double x : {75.0, 150.0, 225.0}) slots.push_back({x, y});
    return slots;
}

std::vector<Vec2> east_extra_slots() {
    auto slots = west_extra_slots();
    for (auto& s : slots) s.x = kBoardSize - s.x;
    return slots;
}

std::vector<std::vector<Vec2>> evaluation_layouts() {
    const auto base = standard_food_layout();
    const auto west = west_extra_slots();
    const auto east = east_extra_slots();
    std::vector<std::vector<Vec2>> layouts;
    layouts.reserve(west.size() * east.size());
    for (const auto& w : west) {
        for (const auto& e : east) {
            auto layout = base;
            layout.push_back(w);
            layout.push_back(e);
            layouts.push_back(std::move(layout));
        }
    }
    return layouts;
}

DuelConfig DuelConfig::standard() {
    DuelConfig cfg;
    cfg.food_layout = standard_food_layout();
    cfg.start_poses = {Pose{{60.0, 300.0}, direction_from_heading(std::numbers::pi)},
                       Pose{{540.0, 300.0}, direction_from_heading(0.0)}};
    return cfg;
}

std::vector<DuelConfig> evaluation_configs(const DuelConfig& base) {
    std::vector<DuelConfig> configs;
    for (auto& layout : evaluation_layouts()) {
        DuelConfig cfg = base;
        cfg.food_layout = std::move(layout);
        configs.push_back(std::move(cfg));
    }
    return configs;
}

DuelConfig point_reflected(const DuelConfig& cfg) {
    DuelConfig out = cfg;
    for (auto& food : out.food_layout) food = {kBoardSize - food.x, kBoardSize - food.y};
    for (auto& pose : out.start_poses) {
        pose.position = {kBoardSize - pose.position.x, kBoardSize - pose.position.y};
        pose.direction = {-pose.direction.x, -pose.direction.y};
    }
    return out;
}

std::string_view winner_name(Winner winner) {
    switch (winner) {
        case Winner::robot_a: return "robot_a";
        case Winner::robot_b: return "robot_b";
        case Winner::draw: return "draw";
    }
    return "draw";
}

std::string_view reason_name(EndReason reason) { return reason == EndReason::collision ? "collision" : "timeout"; }

std::uint64_t WorldState::food_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < food.size() && i < 64; ++i)
        if (!food[i].consumed) mask |= std::uint64_t{1} << i;
    return mask;
}

std::size_t WorldState::remaining_food() const {
    return static_cast<std::size_t>(std::ranges::count(food, false, &FoodItem::consumed));
}

std::array<double, 12> SensorFrame::inputs() const {
    std::array<double, 12> in{};
    std::ranges::copy(food, in.begin());
    std::ranges::copy(robot, in.begin() + 5);
    in[10] = wall;
    in[11] = energy_diff;
    return in;
}

double Motion::cost() const { return std::abs(turn) + forward; }

Motion motion_from_outputs(const MotorOutputs& outputs, const DuelConfig& cfg) {
    return {cfg.turn_coefficient * (outputs.left - outputs.right), cfg.forward_coefficient * outputs.forward};
}

WorldState init_duel(const DuelConfig& cfg) {
    WorldState world;
    for (std::size_t r = 0; r < 2; ++r) {
        world.robots[r].offset = to_offset(cfg.start_poses[r].position);
        world.robots[r].direction = cfg.start_poses[r].direction;
        world.robots[r].energy = cfg.initial_energy;
    }
    for (const auto& p : cfg.food_layout) world.food.push_back({to_offset(p), false});
    return world;
}

SensorFrame sense(const WorldState& world, const DuelConfig& cfg, Robot which) {
    const auto self_index = static_cast<std::size_t>(which);
    const auto& self = world.robots[self_index];
    const auto& other = world.robots[1 - self_index];

    SensorFrame frame;
    for (const auto& item : world.food) {
        if (item.consumed) continue;
        if (const auto hit = ring_hit(self, item.offset, cfg.sensor_range))
            frame.food[hit->sector] = std::max(frame.food[hit->sector], hit->value);
    }
    if (const auto hit = ring_hit(self, other.offset, cfg.sensor_range)) frame.robot[hit->sector] = hit->value;

    const double nearest_wall = std::min(std::min(kBoardHalf - self.offset.x, kBoardHalf + self.offset.x),
                                         std::min(kBoardHalf - self.offset.y, kBoardHalf + self.offset.y));
    frame.wall = std::clamp(1.0 - nearest_wall / cfg.wall_range, 0.0, 1.0);
    frame.energy_diff = std::clamp((self.energy - other.energy) / cfg.initial_energy, -1.0, 1.0);
    return frame;
}

void advance(WorldState& world, const DuelConfig& cfg, const MotorOutputs& a, const MotorOutputs& b) {
    if (world.outcome) throw std::logic_error("cannot step a finished duel");

    const std::array<Motion, 2> motion{motion_from_outputs(a, cfg), motion_from_outputs(b, cfg)};
    for (std::size_t r = 0; r < 2; ++r) {
        auto& robot = world.robots[r];
        const double half = motion[r].turn / 2.0;
        const double c = std::cos(half);
        const double s = std::sin(half);
        robot.direction = normalized(rotated(robot.direction, c, s));
        robot.offset.x = std::clamp(robot.offset.x + motion[r].forward * robot.direction.x, -kBoardHalf, kBoardHalf);
        robot.offset.y = std::clamp(robot.offset.y + motion[r].forward * robot.direction.y, -kBoardHalf, kBoardHalf);
        robot.direction = normalized(rotated(robot.direction, c, s));
        robot.energy -= motion[r].cost();
    }

    for (auto& item : world.food) {
        if (item.consumed) continue;
        const bool reach_a = distance(world.robots[0].offset, item.offset) <= cfg.pickup_radius;
        const bool reach_b = distance(world.robots[1].offset, item.offset) <= cfg.pickup_radius;
        if (!reach_a && !reach_b) continue;
        item.consumed = true;
        if (reach_a) world.robots[0].energy += cfg.food_energy;
        if (reach_b) world.robots[1].energy += cfg.food_energy;
    }

    ++world.step;
    if (distance(world.robots[0].offset, world.robots[1].offset) <= cfg.collision_radius) {
        const double ea = world.robots[0].energy;
        const double eb = world.robots[1].energy;
        const Winner winner = ea > eb ? Winner::robot_a : (eb > ea ? Winner::robot_b : Winner::draw);
        world.outcome = DuelOutcome{winner, EndReason::collision, world.step, {}};
    } else if (world.step >= cfg.max_steps) {
        world.outcome = DuelOutcome{Winner::draw, EndReason::timeout, world.step, {}};
    }
}

WorldState step(const WorldState& world, const DuelConfig& cfg, const MotorOutputs& a, const MotorOutputs& b) {
    WorldState next = world;
    advance(next, cfg, a, b);
    return next;
}

ReplayRow snapshot(const WorldState& world) {
    ReplayRow row;
    row.step = world.step;
    for (std::size_t r = 0; r < 2; ++r) {
        row.position[r] = world.robots[r].position();
        row.heading[r] = world.robots[r].heading();
        row.energy[r] = world.robots[r].energy;
    }
    row.food_mask = world.food_mask();
    return row;
}

DuelOutcome run_duel(const Genome& genome_a, const Genome& genome_b, const DuelConfig& cfg, bool record,
                     double sigmoid_slope) {
    if (genome_a.io() != kDuelIo || genome_b.io() != kDuelIo)
        throw std::invalid_argument("run_duel requires genomes with the duel IoSpec (12, 1, 3)");
    Network net_a(genome_a, sigmoid_slope);
    Network net_b(genome_b, sigmoid_slope);
    auto world = init_duel(cfg);
    std::vector<ReplayRow> replay;

    auto motor = [](std::span<const double> out) { return MotorOutputs{out[0], out[1], out[2]}; };
    while (!world.outcome) {
        const auto in_a = sense(world, cfg, Robot::a).inputs();
        const auto in_b = sense(world, cfg, Robot::b).inputs();
        const auto out_a = motor(net_a.activate(in_a));
        const auto out_b = motor(net_b.activate(in_b));
        advance(world, cfg, out_a, out_b);
        if (record) replay.push_back(snapshot(world));
    }
    auto outcome = std::move(*world.outcome);
    outcome.replay = std::move(replay);
    return outcome;
}

std::string encode_replay(std::span<const ReplayRow> rows) {
    std::ostringstream out;
    out << kReplayHeader << '\n';
    for (const auto& row : rows) {
        out << row.step;
        for (std::size_t r = 0; r < 2; ++r) {
            out << ' ' << format_double(row.position[r].x) << ' ' << format_double(row.position[r].y) << ' '
                << format_double(row.heading[r]) << ' ' << format_double(row.energy[r]);
        }
        out << ' ' << row.food_mask << '\n';
    }
    return out.str();
}

std::vector<ReplayRow> decode_replay(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line != kReplayHeader) throw ParseError(1, "header", "not a duel replay file");
    ++line_no;

    std::vector<ReplayRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string token; fields >> token;) tokens.push_back(token);
        if (tokens.size() != 10) throw ParseError(line_no, "row", "expected 10 fields");

        auto number = [&](std::size_t i, auto& value) {
            const auto& t = tokens[i];
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
            if (ec != std::errc{} || ptr != t.data() + t.size())
                throw ParseError(line_no, "field " + std::to_string(i + 1), "bad number '" + t + "'");
        };
        ReplayRow row;
        number(0, row.step);
        for (std::size_t r = 0; r < 2; ++r) {
            number(1 + 4 * r, row.position[r].x);
            number(2 + 4 * r, row.position[r].y);
            number(3 + 4 * r, row.heading[r]);
            number(4 + 4 * r, row.energy[r]);
        }
        number(9, row.food_mask);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace neatduel
