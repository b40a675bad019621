#include "neatduel/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neatduel {

double steepened_sigmoid(double x, double slope) { return 1.0 / (1.0 + std::exp(-slope * x)); }

Network::Network(const Genome& genome, double slope) : io_(genome.io()), slope_(slope) {
    for (const auto& node : genome.nodes()) ids_.push_back(node.id);
    auto index_of = [&](NodeId id) {
        return static_cast<std::size_t>(std::ranges::lower_bound(ids_, id) - ids_.begin());
    };

    std::vector<std::vector<std::pair<std::size_t, double>>> incoming(ids_.size());
    for (const auto& gene : genome.connections()) {
        if (!gene.enabled) continue;
        incoming[index_of(gene.out_node)].emplace_back(index_of(gene.in_node), gene.weight);
    }
    offsets_.reserve(ids_.size() + 1);
    offsets_.push_back(0);
    for (const auto& edges : incoming) {
        for (const auto& [source, weight] : edges) {
            sources_.push_back(source);
            weights_.push_back(weight);
        }
        offsets_.push_back(sources_.size());
    }
    current_.assign(ids_.size(), 0.0);
    next_.assign(ids_.size(), 0.0);
    outputs_.assign(static_cast<std::size_t>(io_.outputs), 0.0);
    reset();
}

void Network::reset() {
    std::ranges::fill(current_, 0.0);
    std::ranges::fill(next_, 0.0);
    const auto first_bias = static_cast<std::size_t>(io_.sensors);
    for (std::size_t b = 0; b < static_cast<std::size_t>(io_.biases); ++b) current_[first_bias + b] = 1.0;
    std::ranges::fill(outputs_, 0.0);
}

std::span<const double> Network::activate(std::span<const double> sensors) {
    const auto sensor_count = static_cast<std::size_t>(io_.sensors);
    if (sensors.size() != sensor_count) throw std::invalid_argument("sensor vector has the wrong length");
    std::ranges::copy(sensors, current_.begin());
    const auto inputs = static_cast<std::size_t>(io_.inputs());
    for (std::size_t b = sensor_count; b < inputs; ++b) current_[b] = 1.0;

    std::copy_n(current_.begin(), inputs, next_.begin());
    for (std::size_t node = inputs; node < ids_.size(); ++node) {
        double sum = 0.0;
        for (std::size_t e = offsets_[node]; e < offsets_[node + 1]; ++e) sum += weights_[e] * current_[sources_[e]];
        next_[node] = steepened_sigmoid(sum, slope_);
    }
    std::swap(current_, next_);
    std::copy_n(current_.begin() + static_cast<std::ptrdiff_t>(inputs), outputs_.size(), outputs_.begin());
    return outputs_;
}

}  // namespace neatduel
