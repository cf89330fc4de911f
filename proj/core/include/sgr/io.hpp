#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgr/graph.hpp"
#include "sgr/nn.hpp"

namespace sgr {

// Plain-text graph format:
//
//   # comment
//   n 4
//   label 1          (optional)
//   0 1
//   1 2 0.5          (weight omitted when 1)
//   features 2       (optional, followed by n rows of 2 values)
//   0.1 0.2
//   ...
//
// save writes edges in canonical order and round-trips weights exactly;
// load reports the offending line on malformed input.
void save_edge_list(std::ostream& os, const Graph& g);
void save_edge_list_file(const std::string& path, const Graph& g);
Graph load_edge_list(std::istream& is, const std::string& name = "<stream>");
Graph load_edge_list_file(const std::string& path);

// Loader for the usual benchmark dataset layout: <dir>/<name>_A.txt with
// 1-indexed "u, v" pairs, <name>_graph_indicator.txt, <name>_graph_labels.txt
// and optionally <name>_node_attributes.txt. Labels are remapped to
// 0..C-1 in sorted order; features stay absent unless attributes exist.
std::vector<Graph> load_tu_dataset(const std::string& dir, const std::string& name);

// Binary checkpoint: magic, a kind tag, then named float64 matrices. Values
// round-trip bit-exactly; optimizer state is not persisted.
struct Checkpoint {
    std::string kind;
    ParameterSet params;
};
void save_checkpoint(const std::string& path, const std::string& kind,
                     const ParameterSet& params);
Checkpoint load_checkpoint(const std::string& path);
// Fails with a kind mismatch message unless the checkpoint matches.
Checkpoint load_checkpoint(const std::string& path, const std::string& expected_kind);

// Report envelope shared by every CLI command; insertion order is kept so
// the serialized bytes are stable for a given seed.
nlohmann::ordered_json make_report(const std::string& command, std::uint64_t seed,
                                   nlohmann::ordered_json config,
                                   nlohmann::ordered_json results);
nlohmann::ordered_json matrix_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::ordered_json& j);

}  // namespace sgr
