#include "neatduel/genome_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace neatduel {

ParseError::ParseError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + field + ": " + message),
      line_(line),
      field_(std::move(field)),
      message_(message) {}

std::string format_double(double value) {
    char buffer[32];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

namespace {

std::string_view kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::sensor: return "sensor";
        case NodeKind::bias: return "bias";
        case NodeKind::hidden: return "hidden";
        case NodeKind::output: return "output";
    }
    return "hidden";
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        if (pos >= line.size()) break;
        auto end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
        fields.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const char* field) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(line, field, "expected a number, got '" + std::string(text) + "'");
    return value;
}

void expect_arity(const std::vector<std::string_view>& fields, std::size_t n, std::size_t line) {
    if (fields.size() != n)
        throw ParseError(line, std::string(fields.front()),
                         "expected " + std::to_string(n - 1) + " values, got " + std::to_string(fields.size() - 1));
}

}  // namespace

std::string encode_genome(const Genome& genome) {
    std::ostringstream out;
    out << kGenomeMagic << ' ' << kGenomeFormatVersion << '\n';
    out << "io " << genome.io().sensors << ' ' << genome.io().biases << ' ' << genome.io().outputs << '\n';
    for (const auto& node : genome.nodes()) out << "node " << node.id << ' ' << kind_name(node.kind) << '\n';
    for (const auto& gene : genome.connections()) {
        out << "conn " << gene.innovation << ' ' << gene.in_node << ' ' << gene.out_node << ' '
            << format_double(gene.weight) << ' ' << (gene.enabled ? 1 : 0) << '\n';
    }
    return out.str();
}

Genome decode_genome(std::string_view text) {
    std::optional<IoSpec> io;
    std::vector<NodeGene> nodes;
    std::vector<ConnectionGene> genes;
    std::set<Innovation> innovations;
    std::set<NodeId> node_ids;
    std::size_t line_no = 0;
    bool saw_magic = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty() || fields.front().starts_with('#')) {
            if (end == text.size()) break;
            continue;
        }

        const auto tag = fields.front();
        if (!saw_magic) {
            if (tag != kGenomeMagic) throw ParseError(line_no, "magic", "expected '" + std::string(kGenomeMagic) + "'");
            expect_arity(fields, 2, line_no);
            const auto version = parse_number<int>(fields[1], line_no, "version");
            if (version != kGenomeFormatVersion)
                throw VersionError(line_no, "version", "unsupported genome format version " + std::to_string(version));
            saw_magic = true;
        } else if (tag == "io") {
            expect_arity(fields, 4, line_no);
            if (io) throw ParseError(line_no, "io", "duplicate io line");
            io = IoSpec{parse_number<int>(fields[1], line_no, "io.sensors"),
                        parse_number<int>(fields[2], line_no, "io.biases"),
                        parse_number<int>(fields[3], line_no, "io.outputs")};
        } else if (tag == "node") {
            expect_arity(fields, 3, line_no);
            NodeGene node{parse_number<NodeId>(fields[1], line_no, "node.id"), NodeKind::hidden};
            const auto kind = fields[2];
            if (kind == "sensor") node.kind = NodeKind::sensor;
            else if (kind == "bias") node.kind = NodeKind::bias;
            else if (kind == "hidden") node.kind = NodeKind::hidden;
            else if (kind == "output") node.kind = NodeKind::output;
            else throw ParseError(line_no, "node.kind", "unknown node kind '" + std::string(kind) + "'");
            if (!node_ids.insert(node.id).second)
                throw ParseError(line_no, "node.id", "duplicate node id " + std::to_string(node.id));
            nodes.push_back(node);
        } else if (tag == "conn") {
            expect_arity(fields, 6, line_no);
            ConnectionGene gene;
            gene.innovation = parse_number<Innovation>(fields[1], line_no, "conn.innovation");
            gene.in_node = parse_number<NodeId>(fields[2], line_no, "conn.in");
            gene.out_node = parse_number<NodeId>(fields[3], line_no, "conn.out");
            gene.weight = parse_number<double>(fields[4], line_no, "conn.weight");
            const auto enabled = parse_number<int>(fields[5], line_no, "conn.enabled");
            if (enabled != 0 && enabled != 1) throw ParseError(line_no, "conn.enabled", "expected 0 or 1");
            gene.enabled = enabled == 1;
            if (!innovations.insert(gene.innovation).second)
                throw ParseError(line_no, "conn.innovation",
                                 "duplicate innovation number " + std::to_string(gene.innovation));
            genes.push_back(gene);
        } else {
            throw ParseError(line_no, "record", "unknown record '" + std::string(tag) + "'");
        }
        if (end == text.size()) break;
    }

    if (!saw_magic) throw ParseError(line_no, "magic", "empty genome file");
    if (!io) throw ParseError(line_no, "io", "missing io line");
    try {
        return Genome(*io, std::move(nodes), std::move(genes));
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, "genome", e.what());
    }
}

Genome load_genome(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open genome file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return decode_genome(buffer.str());
    } catch (const VersionError& e) {
        throw VersionError(e.line(), path.string() + ": " + e.field(), e.message());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.field(), e.message());
    }
}

void save_genome(const std::filesystem::path& path, const Genome& genome) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write genome file " + path.string());
    out << encode_genome(genome);
}

}  // namespace neatduel
