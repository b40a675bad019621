#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "neatduel/params.hpp"
#include "neatduel/rng.hpp"

namespace neatduel {

using NodeId = std::int32_t;
using Innovation = std::int64_t;

enum class NodeKind { sensor, bias, hidden, output };

struct NodeGene {
    NodeId id = 0;
    NodeKind kind = NodeKind::hidden;

    bool operator==(const NodeGene&) const = default;
};

struct ConnectionGene {
    Innovation innovation = 0;
    NodeId in_node = 0;
    NodeId out_node = 0;
    double weight = 0.0;
    bool enabled = true;

    bool operator==(const ConnectionGene&) const = default;
};

// Input/output layout. Node ids are assigned in this order: sensors
// 1..sensors, then bias nodes, then outputs; hidden nodes come after.
struct IoSpec {
    int sensors = 0;
    int biases = 0;
    int outputs = 0;

    int inputs() const { return sensors + biases; }
    NodeId first_bias() const { return sensors + 1; }
    NodeId first_output() const { return sensors + biases + 1; }
    NodeId first_hidden() const { return sensors + biases + outputs + 1; }

    bool operator==(const IoSpec&) const = default;
};

// 5 food + 5 robot + wall + energy difference; one bias; left/right/forward.
inline constexpr IoSpec kDuelIo{12, 1, 3};

class Genome {
public:
    Genome() = default;
    // Sorts nodes by id and connections by innovation, then checks the
    // invariants. Throws std::invalid_argument on violation.
    Genome(IoSpec io, std::vector<NodeGene> nodes, std::vector<ConnectionGene> connections);

    const IoSpec& io() const { return io_; }
    std::span<const NodeGene> nodes() const { return nodes_; }
    std::span<const ConnectionGene> connections() const { return connections_; }

    std::size_t hidden_count() const;
    std::size_t enabled_count() const;
    Innovation max_innovation() const;
    NodeId max_node_id() const;
    bool has_node(NodeId id) const;
    bool has_connection(NodeId in, NodeId out) const;

    bool operator==(const Genome&) const = default;

private:
    void validate() const;

    IoSpec io_{};
    std::vector<NodeGene> nodes_;
    std::vector<ConnectionGene> connections_;
};

// Generation-scoped innovation bookkeeping. Identical structural mutations
// within one generation receive identical numbers; new_generation() forgets
// them, counters never go back.
class InnovationRegistry {
public:
    struct Split {
        NodeId node = 0;
        Innovation in_innovation = 0;   // old.in -> new node
        Innovation out_innovation = 0;  // new node -> old.out
    };

    InnovationRegistry() = default;
    InnovationRegistry(Innovation next_innovation, NodeId next_node_id);
    // Counters start just past the largest markings in `genome`.
    static InnovationRegistry after(const Genome& genome);

    Innovation connection(NodeId in, NodeId out);
    Split split(Innovation split_gene);
    void new_generation();

    Innovation next_innovation() const { return next_innovation_; }
    NodeId next_node_id() const { return next_node_id_; }

private:
    Innovation next_innovation_ = 1;
    NodeId next_node_id_ = 1;
    std::map<std::pair<NodeId, NodeId>, Innovation> connections_;
    std::map<Innovation, Split> splits_;
};

// Every input wired to every output, innovations 1..inputs*outputs in
// (in, out) order so all initial genomes share markings.
Genome minimal_genome(const IoSpec& io, Rng& rng, double weight_range = 1.0);

// Fully recurrent hidden layer with direct input->output connections:
// input->hidden, hidden->hidden (self loops included), hidden->output and
// input->output, numbered in (in, out) order. hidden_count == 0 reproduces
// minimal_genome.
Genome fully_connected_genome(const IoSpec& io, int hidden_count, Rng& rng, double weight_range = 1.0);

// Same nodes and genes as `topology`, fresh uniform weights.
Genome with_random_weights(const Genome& topology, Rng& rng, double weight_range);

Genome mutate_weights(const Genome& genome, Rng& rng, const EvolutionParams& params);

// Structural mutations return std::nullopt when no legal mutation exists.
std::optional<Genome> mutate_add_connection(const Genome& genome, InnovationRegistry& registry, Rng& rng,
                                            double weight_range = 1.0);
std::optional<Genome> mutate_add_node(const Genome& genome, InnovationRegistry& registry, Rng& rng);
std::optional<Genome> mutate_remove_connection(const Genome& genome, Rng& rng);

// Aligns genes by innovation number. Disjoint and excess genes come from the
// fitter parent; on a fitness tie a coin flip picks the parent that supplies
// them. Throws std::invalid_argument when the IoSpecs differ.
Genome crossover(const Genome& parent_a, double fitness_a, const Genome& parent_b, double fitness_b, Rng& rng,
                 const EvolutionParams& params);

struct GeneAlignment {
    std::size_t matching = 0;
    std::size_t disjoint = 0;
    std::size_t excess = 0;
    double mean_weight_diff = 0.0;
};

GeneAlignment align_genes(const Genome& a, const Genome& b);
double compatibility_distance(const Genome& a, const Genome& b, const CompatibilityCoeffs& coeffs);

}  // namespace neatduel
