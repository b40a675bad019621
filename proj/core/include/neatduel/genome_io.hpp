#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "neatduel/genome.hpp"

namespace neatduel {

// Malformed input. what() reads "line N: field: message".
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::string field, const std::string& message);

    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::string field_;
    std::string message_;
};

// Leading magic line carries an unsupported version.
class VersionError : public ParseError {
public:
    using ParseError::ParseError;
};

inline constexpr std::string_view kGenomeMagic = "neat-genome";
inline constexpr int kGenomeFormatVersion = 1;

// Line-oriented text:
//   neat-genome 1
//   io <sensors> <biases> <outputs>
//   node <id> <sensor|bias|hidden|output>          (one per node)
//   conn <innovation> <in> <out> <weight> <0|1>     (one per gene)
// Weights use the shortest decimal that reads back exactly, so
// decode(encode(g)) == g.
std::string encode_genome(const Genome& genome);
Genome decode_genome(std::string_view text);

Genome load_genome(const std::filesystem::path& path);
void save_genome(const std::filesystem::path& path, const Genome& genome);

// Shortest round-trippable decimal form used by every text format here.
std::string format_double(double value);

}  // namespace neatduel
