#include "neatduel/genome.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace neatduel {

namespace {

NodeKind io_kind(const IoSpec& io, NodeId id) {
    if (id < io.first_bias()) return NodeKind::sensor;
    if (id < io.first_output()) return NodeKind::bias;
    if (id < io.first_hidden()) return NodeKind::output;
    return NodeKind::hidden;
}

std::vector<NodeGene> io_nodes(const IoSpec& io) {
    std::vector<NodeGene> nodes;
    for (NodeId id = 1; id < io.first_hidden(); ++id) nodes.push_back({id, io_kind(io, id)});
    return nodes;
}

bool is_input(NodeKind kind) { return kind == NodeKind::sensor || kind == NodeKind::bias; }

}  // namespace

Genome::Genome(IoSpec io, std::vector<NodeGene> nodes, std::vector<ConnectionGene> connections)
    : io_(io), nodes_(std::move(nodes)), connections_(std::move(connections)) {
    std::ranges::sort(nodes_, {}, &NodeGene::id);
    std::ranges::stable_sort(connections_, {}, &ConnectionGene::innovation);
    validate();
}

void Genome::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid genome: " + what); };
    if (io_.sensors < 0 || io_.biases < 0 || io_.outputs < 0) fail("negative IoSpec count");

    const auto io_count = static_cast<std::size_t>(io_.first_hidden() - 1);
    if (nodes_.size() < io_count) fail("missing IoSpec nodes");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& node = nodes_[i];
        if (node.id <= 0) fail("non-positive node id " + std::to_string(node.id));
        if (i > 0 && nodes_[i - 1].id == node.id) fail("duplicate node id " + std::to_string(node.id));
        if (i < io_count && node.id != static_cast<NodeId>(i + 1)) fail("missing IoSpec node " + std::to_string(i + 1));
        if (node.kind != io_kind(io_, node.id))
            fail("node " + std::to_string(node.id) + " has the wrong kind for its id");
    }

    std::set<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t i = 0; i < connections_.size(); ++i) {
        const auto& gene = connections_[i];
        const auto tag = "connection " + std::to_string(gene.innovation);
        if (gene.innovation <= 0) fail("non-positive innovation number");
        if (i > 0 && connections_[i - 1].innovation == gene.innovation) fail("duplicate innovation in " + tag);
        if (!has_node(gene.in_node) || !has_node(gene.out_node)) fail(tag + " references a missing node");
        if (is_input(io_kind(io_, gene.out_node))) fail(tag + " targets a sensor or bias node");
        if (!pairs.emplace(gene.in_node, gene.out_node).second) fail(tag + " duplicates a node pair");
    }
}

std::size_t Genome::hidden_count() const {
    return static_cast<std::size_t>(std::ranges::count(nodes_, NodeKind::hidden, &NodeGene::kind));
}

std::size_t Genome::enabled_count() const {
    return static_cast<std::size_t>(std::ranges::count(connections_, true, &ConnectionGene::enabled));
}

Innovation Genome::max_innovation() const { return connections_.empty() ? 0 : connections_.back().innovation; }

NodeId Genome::max_node_id() const { return nodes_.empty() ? 0 : nodes_.back().id; }

bool Genome::has_node(NodeId id) const {
    return std::ranges::binary_search(nodes_, id, {}, &NodeGene::id);
}

bool Genome::has_connection(NodeId in, NodeId out) const {
    return std::ranges::any_of(connections_, [&](const auto& g) { return g.in_node == in && g.out_node == out; });
}

InnovationRegistry::InnovationRegistry(Innovation next_innovation, NodeId next_node_id)
    : next_innovation_(next_innovation), next_node_id_(next_node_id) {}

InnovationRegistry InnovationRegistry::after(const Genome& genome) {
    return InnovationRegistry(genome.max_innovation() + 1, genome.max_node_id() + 1);
}

Innovation InnovationRegistry::connection(NodeId in, NodeId out) {
    auto [it, inserted] = connections_.try_emplace({in, out}, next_innovation_);
    if (inserted) ++next_innovation_;
    return it->second;
}

InnovationRegistry::Split InnovationRegistry::split(Innovation split_gene) {
    if (auto it = splits_.find(split_gene); it != splits_.end()) return it->second;
    const Split fresh{next_node_id_++, next_innovation_, next_innovation_ + 1};
    next_innovation_ += 2;
    splits_.emplace(split_gene, fresh);
    return fresh;
}

void InnovationRegistry::new_generation() {
    connections_.clear();
    splits_.clear();
}

Genome minimal_genome(const IoSpec& io, Rng& rng, double weight_range) {
    return fully_connected_genome(io, 0, rng, weight_range);
}

Genome fully_connected_genome(const IoSpec& io, int hidden_count, Rng& rng, double weight_range) {
    if (hidden_count < 0) throw std::invalid_argument("hidden_count must be >= 0");
    auto nodes = io_nodes(io);
    const NodeId first_hidden = io.first_hidden();
    for (int h = 0; h < hidden_count; ++h) nodes.push_back({first_hidden + h, NodeKind::hidden});

    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (const auto& from : nodes) {
        for (const auto& to : nodes) {
            const bool wired = (is_input(from.kind) && (to.kind == NodeKind::hidden || to.kind == NodeKind::output)) ||
                               (from.kind == NodeKind::hidden &&
                                (to.kind == NodeKind::hidden || to.kind == NodeKind::output));
            if (wired) pairs.emplace_back(from.id, to.id);
        }
    }
    std::ranges::sort(pairs);

    std::vector<ConnectionGene> genes;
    genes.reserve(pairs.size());
    Innovation innovation = 1;
    for (const auto& [in, out] : pairs)
        genes.push_back({innovation++, in, out, rng.uniform(-weight_range, weight_range), true});
    return Genome(io, std::move(nodes), std::move(genes));
}

Genome with_random_weights(const Genome& topology, Rng& rng, double weight_range) {
    std::vector<ConnectionGene> genes(topology.connections().begin(), topology.connections().end());
    for (auto& gene : genes) gene.weight = rng.uniform(-weight_range, weight_range);
    return Genome(topology.io(), {topology.nodes().begin(), topology.nodes().end()}, std::move(genes));
}

Genome mutate_weights(const Genome& genome, Rng& rng, const EvolutionParams& params) {
    if (!rng.bernoulli(params.weight_mutation_rate)) return genome;
    std::vector<ConnectionGene> genes(genome.connections().begin(), genome.connections().end());
    for (auto& gene : genes) {
        if (rng.bernoulli(params.weight_perturb_prob)) {
            gene.weight += rng.uniform(-params.weight_perturb_range, params.weight_perturb_range);
        } else {
            gene.weight = rng.uniform(-params.initial_weight_range, params.initial_weight_range);
        }
        gene.weight = std::clamp(gene.weight, -params.weight_cap, params.weight_cap);
    }
    return Genome(genome.io(), {genome.nodes().begin(), genome.nodes().end()}, std::move(genes));
}

std::optional<Genome> mutate_add_connection(const Genome& genome, InnovationRegistry& registry, Rng& rng,
                                            double weight_range) {
    std::set<std::pair<NodeId, NodeId>> existing;
    for (const auto& gene : genome.connections()) existing.emplace(gene.in_node, gene.out_node);

    std::vector<std::pair<NodeId, NodeId>> legal;
    for (const auto& from : genome.nodes()) {
        for (const auto& to : genome.nodes()) {
            if (is_input(to.kind)) continue;
            if (!existing.contains({from.id, to.id})) legal.emplace_back(from.id, to.id);
        }
    }
    if (legal.empty()) return std::nullopt;

    const auto [in, out] = legal[rng.index(legal.size())];
    std::vector<ConnectionGene> genes(genome.connections().begin(), genome.connections().end());
    genes.push_back({registry.connection(in, out), in, out, rng.uniform(-weight_range, weight_range), true});
    return Genome(genome.io(), {genome.nodes().begin(), genome.nodes().end()}, std::move(genes));
}

std::optional<Genome> mutate_add_node(const Genome& genome, InnovationRegistry& registry, Rng& rng) {
    std::vector<std::size_t> enabled;
    const auto connections = genome.connections();
    for (std::size_t i = 0; i < connections.size(); ++i)
        if (connections[i].enabled) enabled.push_back(i);
    if (enabled.empty()) return std::nullopt;

    std::vector<ConnectionGene> genes(connections.begin(), connections.end());
    auto& old = genes[enabled[rng.index(enabled.size())]];
    old.enabled = false;
    const auto split = registry.split(old.innovation);
    const ConnectionGene into{split.in_innovation, old.in_node, split.node, 1.0, true};
    const ConnectionGene out_of{split.out_innovation, split.node, old.out_node, old.weight, true};
    genes.push_back(into);
    genes.push_back(out_of);

    std::vector<NodeGene> nodes(genome.nodes().begin(), genome.nodes().end());
    nodes.push_back({split.node, NodeKind::hidden});
    return Genome(genome.io(), std::move(nodes), std::move(genes));
}

std::optional<Genome> mutate_remove_connection(const Genome& genome, Rng& rng) {
    const auto connections = genome.connections();
    if (connections.empty()) return std::nullopt;

    std::vector<ConnectionGene> genes(connections.begin(), connections.end());
    const auto removed = genes[rng.index(genes.size())];
    std::erase_if(genes, [&](const auto& g) { return g.innovation == removed.innovation; });

    auto attached = [&](NodeId id) {
        return std::ranges::any_of(genes, [&](const auto& g) { return g.in_node == id || g.out_node == id; });
    };
    std::vector<NodeGene> nodes(genome.nodes().begin(), genome.nodes().end());
    std::erase_if(nodes, [&](const NodeGene& n) {
        return n.kind == NodeKind::hidden && (n.id == removed.in_node || n.id == removed.out_node) && !attached(n.id);
    });
    return Genome(genome.io(), std::move(nodes), std::move(genes));
}

Genome crossover(const Genome& parent_a, double fitness_a, const Genome& parent_b, double fitness_b, Rng& rng,
                 const EvolutionParams& params) {
    if (parent_a.io() != parent_b.io()) throw std::invalid_argument("crossover of genomes with different IoSpecs");

    bool a_primary = fitness_a > fitness_b;
    if (fitness_a == fitness_b) a_primary = rng.bernoulli(0.5);
    const bool average = rng.bernoulli(params.weight_average_rate);

    auto inherit_enabled = [&](bool disabled_somewhere) {
        return disabled_somewhere ? !rng.bernoulli(params.disable_inherit_prob) : true;
    };

    const auto genes_a = parent_a.connections();
    const auto genes_b = parent_b.connections();
    std::vector<ConnectionGene> child;
    child.reserve(std::max(genes_a.size(), genes_b.size()));

    std::size_t i = 0;
    std::size_t j = 0;
    while (i < genes_a.size() || j < genes_b.size()) {
        if (i < genes_a.size() && j < genes_b.size() && genes_a[i].innovation == genes_b[j].innovation) {
            const auto& ga = genes_a[i++];
            const auto& gb = genes_b[j++];
            ConnectionGene gene = ga;
            if (average) {
                gene.weight = 0.5 * (ga.weight + gb.weight);
            } else if (!rng.bernoulli(0.5)) {
                gene.weight = gb.weight;
            }
            gene.enabled = inherit_enabled(!ga.enabled || !gb.enabled);
            child.push_back(gene);
        } else if (j >= genes_b.size() || (i < genes_a.size() && genes_a[i].innovation < genes_b[j].innovation)) {
            const auto& ga = genes_a[i++];
            if (!a_primary) continue;
            ConnectionGene gene = ga;
            gene.enabled = inherit_enabled(!ga.enabled);
            child.push_back(gene);
        } else {
            const auto& gb = genes_b[j++];
            if (a_primary) continue;
            ConnectionGene gene = gb;
            gene.enabled = inherit_enabled(!gb.enabled);
            child.push_back(gene);
        }
    }

    auto nodes = io_nodes(parent_a.io());
    std::set<NodeId> hidden;
    for (const auto& gene : child) {
        for (const NodeId id : {gene.in_node, gene.out_node})
            if (id >= parent_a.io().first_hidden()) hidden.insert(id);
    }
    for (const NodeId id : hidden) nodes.push_back({id, NodeKind::hidden});
    return Genome(parent_a.io(), std::move(nodes), std::move(child));
}

GeneAlignment align_genes(const Genome& a, const Genome& b) {
    const auto genes_a = a.connections();
    const auto genes_b = b.connections();
    const Innovation max_a = a.max_innovation();
    const Innovation max_b = b.max_innovation();

    GeneAlignment result;
    double weight_diff_sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < genes_a.size() || j < genes_b.size()) {
        if (i < genes_a.size() && j < genes_b.size() && genes_a[i].innovation == genes_b[j].innovation) {
            weight_diff_sum += std::abs(genes_a[i].weight - genes_b[j].weight);
            ++result.matching;
            ++i;
            ++j;
        } else if (j >= genes_b.size() || (i < genes_a.size() && genes_a[i].innovation < genes_b[j].innovation)) {
            ++(genes_a[i].innovation > max_b ? result.excess : result.disjoint);
            ++i;
        } else {
            ++(genes_b[j].innovation > max_a ? result.excess : result.disjoint);
            ++j;
        }
    }
    if (result.matching > 0) result.mean_weight_diff = weight_diff_sum / static_cast<double>(result.matching);
    return result;
}

double compatibility_distance(const Genome& a, const Genome& b, const CompatibilityCoeffs& coeffs) {
    const auto alignment = align_genes(a, b);
    double n = 1.0;
    if (coeffs.normalize) {
        n = static_cast<double>(std::max(a.connections().size(), b.connections().size()));
        if (n < 1.0) n = 1.0;
    }
    return coeffs.excess * static_cast<double>(alignment.excess) / n +
           coeffs.disjoint * static_cast<double>(alignment.disjoint) / n + coeffs.weight_diff * alignment.mean_weight_diff;
}

}  // namespace neatduel
