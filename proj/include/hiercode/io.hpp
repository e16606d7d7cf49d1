#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hiercode/codec.hpp"
#include "hiercode/dynamics.hpp"
#include "hiercode/sim.hpp"

namespace hiercode {

// Parsed topology config; ids are converted to 0-based on the way in.
struct Config {
    FieldPtr field;
    GraphPtr graph;
    std::vector<std::vector<int>> M;  // empty = neighbourhoods
    std::vector<CoopCycle> cycles;
    BuildOptions options;
    std::optional<Messages> messages;
    std::optional<SimConfig> simulation;
    SearchOptions search;  // "search": groups_per_clique, cycles_per_group, prefer_triangles

    HierCode build() const;
    CoopGraph coop() const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

// Topology config of an existing code, indicators included so a reload rebuilds it exactly.
std::string dump_config(const HierCode& code, int indent = 2);

NodeAdditionPlan parse_addition_plan(const std::string& text, const Field& field, Vec* message);
NodeSplitPlan parse_split_plan(const std::string& text);

// "id: hex hex ... ; erased: 4,5" per line, 1-based ids and positions; erased symbols print as "?".
std::string format_codewords(const Field& f, const std::vector<Received>& words);
std::string format_codewords(const Field& f, const Codewords& words);
std::vector<Received> parse_codewords(const Field& f, const std::string& text);
// Same line format without the erased clause.
std::string format_messages(const Field& f, const Messages& m);
Messages parse_messages(const Field& f, const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace hiercode
