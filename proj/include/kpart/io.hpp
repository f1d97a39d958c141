#pragma once

#include <string>

#include "kpart/graph.hpp"
#include "kpart/planted.hpp"
#include "kpart/rounding.hpp"
#include "kpart/sdp.hpp"

namespace kpart {

// Edge-list text: "n m" first, then one "u v" line per edge, 0-based with
// u < v, emitted in sorted order.
std::string write_edge_list(const Graph& g);
Graph read_edge_list(const std::string& text);

// Instance container: indented JSON with a fixed key layout so fixtures
// diff cleanly.
std::string instance_to_json(const PlantedInstance& inst);
PlantedInstance instance_from_json(const std::string& text);

// Embedding: one header field per line, then n rows of p coordinates at 17
// significant digits; doubles round-trip bit-stably.
std::string write_embedding(const EmbeddingSolution& sol);
EmbeddingSolution read_embedding(const std::string& text);

std::string result_to_json(const PartitionResult& res);
PartitionResult result_from_json(const std::string& text);

std::string diagnostics_to_text(const DiagnosticsReport& rep);
std::string diagnostics_to_json(const DiagnosticsReport& rep);

std::string validation_to_text(const InstanceValidation& rep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace kpart
