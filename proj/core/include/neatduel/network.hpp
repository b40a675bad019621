#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "neatduel/genome.hpp"

namespace neatduel {

inline constexpr double kDefaultSigmoidSlope = 4.9;

// phi(x) = 1 / (1 + exp(-slope * x))
double steepened_sigmoid(double x, double slope = kDefaultSigmoidSlope);

// Recurrent phenotype of a genome. Each activate() call is one synchronous
// propagation step: every non-input node reads the previous activations of
// its sources (sensor and bias nodes read the values supplied this step).
class Network {
public:
    explicit Network(const Genome& genome, double slope = kDefaultSigmoidSlope);

    // Returns the output activations; the span is valid until the next call.
    std::span<const double> activate(std::span<const double> sensors);

    // Zero every activation except the bias nodes (1.0).
    void reset();

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return sources_.size(); }
    std::span<const NodeId> node_ids() const { return ids_; }
    std::span<const double> activations() const { return current_; }
    std::span<const double> outputs() const { return outputs_; }

    bool operator==(const Network&) const = default;

private:
    IoSpec io_;
    double slope_;
    std::vector<NodeId> ids_;            // ascending; sensors, biases, outputs, hidden
    std::vector<std::size_t> offsets_;   // incoming edge range per node
    std::vector<std::size_t> sources_;
    std::vector<double> weights_;
    std::vector<double> current_;
    std::vector<double> next_;
    std::vector<double> outputs_;
};

}  // namespace neatduel
